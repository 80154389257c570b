"""Pure-Python Dormand-Prince 5(4) integrator for the two driven amplitudes.

Mirror of ``_kernel.pyx``; used when the compiled extension is unavailable or
when ``QDAPULSE_KERNEL=python``. Keep the two in lockstep.

Error control uses the max norm over all components.

State: psi_plus, psi_minus (complex, rotating frame) plus nine running
quadratures that share the step-size controller:

    0 |p|^2          1 |m|^2          2 Re(p* m)      3 Im(p* m)
    4 |u- p - u+ m|^2                 5 Re(p* f)      6 Re(m* f)
    7 Im(p* f')      8 Im(m* f')

where f is the rotating-frame source amplitude and f' its time derivative.
"""
import math
from math import fabs

import numpy as np

# Dormand & Prince (1980) tableau
C2, C3, C4, C5 = 1 / 5, 3 / 10, 4 / 5, 8 / 9
A21 = 1 / 5
A31, A32 = 3 / 40, 9 / 40
A41, A42, A43 = 44 / 45, -56 / 15, 32 / 9
A51, A52, A53, A54 = 19372 / 6561, -25360 / 2187, 64448 / 6561, -212 / 729
A61, A62, A63, A64, A65 = 9017 / 3168, -355 / 33, 46732 / 5247, 49 / 176, -5103 / 18656
B1, B3, B4, B5, B6 = 35 / 384, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84
E1, E3, E4, E5, E6, E7 = (71 / 57600, -71 / 16695, 71 / 1920, -17253 / 339200,
                          22 / 525, -1 / 40)

NQ = 9
STATUS_OK, STATUS_TAIL, STATUS_STEP = 0, 1, 2
MAX_STEPS = 50_000_000


def integrate(gpp, gmm, det_p, det_m, drive_p, drive_m, u_p, u_m, half_cross,
              env_kind, env_rate, env_fn, env_dfn, t_end, t_cap,
              rtol, atol, eps_tail, record):
    """Integrate to ``t_end``, doubling the horizon until the tail test passes.

    Returns a dict with the integrals, final time, step counts, status and,
    when ``record`` is true, the accepted-step trajectory and its derivative.
    """
    ap = complex(0.5 * gpp, -det_p)
    am = complex(0.5 * gmm, -det_m)
    is_exp = env_kind == 1
    amp0 = math.sqrt(env_rate) if is_exp else 0.0
    half_rate = 0.5 * env_rate
    have_d = is_exp or env_dfn is not None

    def source(t):
        if is_exp:
            s = amp0 * math.exp(-half_rate * t)
            return s, -half_rate * s
        s = env_fn(t)
        return s, (env_dfn(t) if env_dfn is not None else 0.0)

    def rhs(t, p, m):
        s, ds = source(t)
        dp = -ap * p - drive_p * s - half_cross * m
        dm = -am * m - drive_m * s - half_cross * p
        pc = p.conjugate()
        mc = m.conjugate()
        pm = pc * m
        b = u_m * p - u_p * m
        ps = pc * s
        ms = mc * s
        q = (p.real * p.real + p.imag * p.imag,
             m.real * m.real + m.imag * m.imag,
             pm.real, pm.imag,
             b.real * b.real + b.imag * b.imag,
             ps.real, ms.real,
             (pc * ds).imag, (mc * ds).imag)
        return dp, dm, q

    t = 0.0
    p = 0j
    m = 0j
    Q = [0.0] * NQ
    k1p, k1m, q1 = rhs(t, p, m)

    rate = max(abs(ap), abs(am), env_rate if is_exp else 1.0 / t_end)
    h = min(1e-3 / rate, t_end)
    fac_old = 1e-4
    rejected = False
    n_acc = n_rej = 0
    max_p = max_m = 0.0

    ts, ps_, ms_, dps, dms = [], [], [], [], []
    if record:
        ts.append(t); ps_.append(p); ms_.append(m); dps.append(k1p); dms.append(k1m)

    status = STATUS_OK
    while True:
        while t < t_end:
            if n_acc + n_rej > MAX_STEPS:
                status = STATUS_STEP
                break
            if t + h > t_end:
                h = t_end - t
            if h <= 1e-14 * max(t, 1.0):
                status = STATUS_STEP
                break

            k2p, k2m, q2 = rhs(t + C2 * h, p + h * A21 * k1p, m + h * A21 * k1m)
            k3p, k3m, q3 = rhs(t + C3 * h, p + h * (A31 * k1p + A32 * k2p),
                               m + h * (A31 * k1m + A32 * k2m))
            k4p, k4m, q4 = rhs(t + C4 * h, p + h * (A41 * k1p + A42 * k2p + A43 * k3p),
                               m + h * (A41 * k1m + A42 * k2m + A43 * k3m))
            k5p, k5m, q5 = rhs(t + C5 * h,
                               p + h * (A51 * k1p + A52 * k2p + A53 * k3p + A54 * k4p),
                               m + h * (A51 * k1m + A52 * k2m + A53 * k3m + A54 * k4m))
            k6p, k6m, q6 = rhs(t + h,
                               p + h * (A61 * k1p + A62 * k2p + A63 * k3p + A64 * k4p + A65 * k5p),
                               m + h * (A61 * k1m + A62 * k2m + A63 * k3m + A64 * k4m + A65 * k5m))
            pn = p + h * (B1 * k1p + B3 * k3p + B4 * k4p + B5 * k5p + B6 * k6p)
            mn = m + h * (B1 * k1m + B3 * k3m + B4 * k4m + B5 * k5m + B6 * k6m)
            k7p, k7m, q7 = rhs(t + h, pn, mn)

            ep = h * (E1 * k1p + E3 * k3p + E4 * k4p + E5 * k5p + E6 * k6p + E7 * k7p)
            em = h * (E1 * k1m + E3 * k3m + E4 * k4m + E5 * k5m + E6 * k6m + E7 * k7m)

            sp_re = atol + rtol * max(abs(p.real), abs(pn.real))
            sp_im = atol + rtol * max(abs(p.imag), abs(pn.imag))
            sm_re = atol + rtol * max(abs(m.real), abs(mn.real))
            sm_im = atol + rtol * max(abs(m.imag), abs(mn.imag))
            acc = max(fabs(ep.real) / sp_re, fabs(ep.imag) / sp_im,
                      fabs(em.real) / sm_re, fabs(em.imag) / sm_im)
            Qn = [0.0] * NQ
            for i in range(NQ):
                inc = h * (B1 * q1[i] + B3 * q3[i] + B4 * q4[i] + B5 * q5[i] + B6 * q6[i])
                eq = h * (E1 * q1[i] + E3 * q3[i] + E4 * q4[i] + E5 * q5[i]
                          + E6 * q6[i] + E7 * q7[i])
                qn = Q[i] + inc
                Qn[i] = qn
                sq = atol + rtol * max(abs(Q[i]), abs(qn))
                acc = max(acc, fabs(eq) / sq)
            err = acc

            # Hairer's PI controller, beta = 0.04
            fac11 = err ** 0.17 if err > 0 else 0.0
            if err <= 1.0:
                fac = fac11 / fac_old ** 0.04
                fac = max(0.1, min(5.0, fac / 0.9))
                h_new = h / fac
                if rejected:
                    h_new = min(h_new, h)
                fac_old = max(err, 1e-4)
                t += h
                p, m, Q = pn, mn, Qn
                k1p, k1m, q1 = k7p, k7m, q7
                n_acc += 1
                rejected = False
                ap2 = p.real * p.real + p.imag * p.imag
                am2 = m.real * m.real + m.imag * m.imag
                if ap2 > max_p:
                    max_p = ap2
                if am2 > max_m:
                    max_m = am2
                if record:
                    ts.append(t); ps_.append(p); ms_.append(m)
                    dps.append(k1p); dms.append(k1m)
                h = h_new
            else:
                h = h / min(5.0, fac11 / 0.9)
                rejected = True
                n_rej += 1

        if status != STATUS_OK:
            break
        tail_p = p.real * p.real + p.imag * p.imag
        tail_m = m.real * m.real + m.imag * m.imag
        if tail_p <= eps_tail * max_p and tail_m <= eps_tail * max_m:
            break
        if t_end >= t_cap:
            status = STATUS_TAIL
            break
        t_end = min(2.0 * t_end, t_cap)

    out = {
        "integrals": np.array(Q),
        "t_end": t,
        "n_accepted": n_acc,
        "n_rejected": n_rej,
        "status": status,
        "max_abs2": (max_p, max_m),
        "tail_abs2": (p.real * p.real + p.imag * p.imag, m.real * m.real + m.imag * m.imag),
        "has_derivative": have_d,
    }
    if record:
        out["t"] = np.array(ts)
        out["psi"] = np.array([ps_, ms_], dtype=complex)
        out["dpsi"] = np.array([dps, dms], dtype=complex)
    return out
