# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled Dormand-Prince 5(4) kernel. Same algorithm and return contract as
``_kernel_py.integrate``; see that module for the state layout."""
import numpy as np

from libc.math cimport exp, sqrt, fabs

cdef double C2 = 1.0 / 5, C3 = 3.0 / 10, C4 = 4.0 / 5, C5 = 8.0 / 9
cdef double A21 = 1.0 / 5
cdef double A31 = 3.0 / 40, A32 = 9.0 / 40
cdef double A41 = 44.0 / 45, A42 = -56.0 / 15, A43 = 32.0 / 9
cdef double A51 = 19372.0 / 6561, A52 = -25360.0 / 2187, A53 = 64448.0 / 6561, A54 = -212.0 / 729
cdef double A61 = 9017.0 / 3168, A62 = -355.0 / 33, A63 = 46732.0 / 5247, A64 = 49.0 / 176
cdef double A65 = -5103.0 / 18656
cdef double B1 = 35.0 / 384, B3 = 500.0 / 1113, B4 = 125.0 / 192, B5 = -2187.0 / 6784
cdef double B6 = 11.0 / 84
cdef double E1 = 71.0 / 57600, E3 = -71.0 / 16695, E4 = 71.0 / 1920
cdef double E5 = -17253.0 / 339200, E6 = 22.0 / 525, E7 = -1.0 / 40

cdef enum:
    NQ = 9
cdef int STATUS_OK = 0, STATUS_TAIL = 1, STATUS_STEP = 2
cdef long MAX_STEPS = 50000000


cdef struct Params:
    double complex ap, am
    double drive_p, drive_m, u_p, u_m, half_cross
    int is_exp
    double amp0, half_rate


cdef inline double abs2(double complex z) nogil:
    return z.real * z.real + z.imag * z.imag


cdef class _Source:
    cdef object fn, dfn

    def __init__(self, fn, dfn):
        self.fn = fn
        self.dfn = dfn

    cdef inline void eval(self, Params* P, double t, double complex* s, double complex* ds):
        cdef double v
        if P.is_exp:
            v = P.amp0 * exp(-P.half_rate * t)
            s[0] = v
            ds[0] = -P.half_rate * v
        else:
            s[0] = <double complex> complex(self.fn(t))
            ds[0] = <double complex> complex(self.dfn(t)) if self.dfn is not None else 0


cdef inline void rhs(Params* P, _Source src, double t, double complex p, double complex m,
                     double complex* dp, double complex* dm, double* q):
    cdef double complex s, ds, pc, mc, pm, b
    src.eval(P, t, &s, &ds)
    dp[0] = -P.ap * p - P.drive_p * s - P.half_cross * m
    dm[0] = -P.am * m - P.drive_m * s - P.half_cross * p
    pc = p.conjugate()
    mc = m.conjugate()
    pm = pc * m
    b = P.u_m * p - P.u_p * m
    q[0] = abs2(p)
    q[1] = abs2(m)
    q[2] = pm.real
    q[3] = pm.imag
    q[4] = abs2(b)
    q[5] = (pc * s).real
    q[6] = (mc * s).real
    q[7] = (pc * ds).imag
    q[8] = (mc * ds).imag


cdef class _Recorder:
    cdef public object t, psi, dpsi
    cdef Py_ssize_t n, cap
    cdef double[::1] tv
    cdef double complex[:, ::1] pv, dv

    def __init__(self, Py_ssize_t cap):
        self.n = 0
        self.cap = cap
        self.t = np.empty(cap)
        self.psi = np.empty((2, cap), dtype=complex)
        self.dpsi = np.empty((2, cap), dtype=complex)
        self.tv = self.t
        self.pv = self.psi
        self.dv = self.dpsi

    cdef void push(self, double t, double complex p, double complex m,
                   double complex dp, double complex dm):
        if self.n == self.cap:
            self.cap *= 2
            self.t = np.resize(self.t, self.cap)
            self.psi = np.concatenate([self.psi, np.empty_like(self.psi)], axis=1)
            self.dpsi = np.concatenate([self.dpsi, np.empty_like(self.dpsi)], axis=1)
            self.tv = self.t
            self.pv = self.psi
            self.dv = self.dpsi
        self.tv[self.n] = t
        self.pv[0, self.n] = p
        self.pv[1, self.n] = m
        self.dv[0, self.n] = dp
        self.dv[1, self.n] = dm
        self.n += 1

    def finish(self):
        return self.t[:self.n].copy(), self.psi[:, :self.n].copy(), self.dpsi[:, :self.n].copy()


def integrate(double gpp, double gmm, double det_p, double det_m, double drive_p,
              double drive_m, double u_p, double u_m, double half_cross,
              int env_kind, double env_rate, env_fn, env_dfn, double t_end, double t_cap,
              double rtol, double atol, double eps_tail, bint record):
    cdef Params P
    P.ap = 0.5 * gpp - 1j * det_p
    P.am = 0.5 * gmm - 1j * det_m
    P.drive_p = drive_p
    P.drive_m = drive_m
    P.u_p = u_p
    P.u_m = u_m
    P.half_cross = half_cross
    P.is_exp = env_kind == 1
    P.amp0 = sqrt(env_rate) if P.is_exp else 0.0
    P.half_rate = 0.5 * env_rate
    cdef _Source src = _Source(env_fn, env_dfn)
    have_d = bool(P.is_exp or env_dfn is not None)

    cdef double t = 0.0, h, h_new, err, acc, fac, fac11, fac_old = 1e-4
    cdef double complex p = 0, m = 0, pn, mn, ep, em
    cdef double complex k1p, k1m, k2p, k2m, k3p, k3m, k4p, k4m, k5p, k5m, k6p, k6m, k7p, k7m
    cdef double Q[NQ]
    cdef double Qn[NQ]
    cdef double q1[NQ]
    cdef double q2[NQ]
    cdef double q3[NQ]
    cdef double q4[NQ]
    cdef double q5[NQ]
    cdef double q6[NQ]
    cdef double q7[NQ]
    cdef double inc, eq, sq, sp_re, sp_im, sm_re, sm_im, ap2, am2
    cdef double max_p = 0.0, max_m = 0.0, tail_p, tail_m, rate
    cdef long n_acc = 0, n_rej = 0
    cdef bint rejected = False
    cdef int i, status = STATUS_OK
    cdef _Recorder rec = _Recorder(1024) if record else None

    for i in range(NQ):
        Q[i] = 0.0
    rhs(&P, src, t, p, m, &k1p, &k1m, q1)
    rate = max(abs(P.ap), abs(P.am), env_rate if P.is_exp else 1.0 / t_end)
    h = min(1e-3 / rate, t_end)
    if record:
        rec.push(t, p, m, k1p, k1m)

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

            rhs(&P, src, t + C2 * h, p + h * A21 * k1p, m + h * A21 * k1m, &k2p, &k2m, q2)
            rhs(&P, src, t + C3 * h, p + h * (A31 * k1p + A32 * k2p),
                m + h * (A31 * k1m + A32 * k2m), &k3p, &k3m, q3)
            rhs(&P, src, t + C4 * h, p + h * (A41 * k1p + A42 * k2p + A43 * k3p),
                m + h * (A41 * k1m + A42 * k2m + A43 * k3m), &k4p, &k4m, q4)
            rhs(&P, src, t + C5 * h,
                p + h * (A51 * k1p + A52 * k2p + A53 * k3p + A54 * k4p),
                m + h * (A51 * k1m + A52 * k2m + A53 * k3m + A54 * k4m), &k5p, &k5m, q5)
            rhs(&P, src, t + h,
                p + h * (A61 * k1p + A62 * k2p + A63 * k3p + A64 * k4p + A65 * k5p),
                m + h * (A61 * k1m + A62 * k2m + A63 * k3m + A64 * k4m + A65 * k5m),
                &k6p, &k6m, q6)
            pn = p + h * (B1 * k1p + B3 * k3p + B4 * k4p + B5 * k5p + B6 * k6p)
            mn = m + h * (B1 * k1m + B3 * k3m + B4 * k4m + B5 * k5m + B6 * k6m)
            rhs(&P, src, t + h, pn, mn, &k7p, &k7m, q7)

            ep = h * (E1 * k1p + E3 * k3p + E4 * k4p + E5 * k5p + E6 * k6p + E7 * k7p)
            em = h * (E1 * k1m + E3 * k3m + E4 * k4m + E5 * k5m + E6 * k6m + E7 * k7m)
            sp_re = atol + rtol * max(fabs(p.real), fabs(pn.real))
            sp_im = atol + rtol * max(fabs(p.imag), fabs(pn.imag))
            sm_re = atol + rtol * max(fabs(m.real), fabs(mn.real))
            sm_im = atol + rtol * max(fabs(m.imag), fabs(mn.imag))
            acc = max(fabs(ep.real) / sp_re, fabs(ep.imag) / sp_im,
                      fabs(em.real) / sm_re, fabs(em.imag) / sm_im)
            for i in range(NQ):
                inc = h * (B1 * q1[i] + B3 * q3[i] + B4 * q4[i] + B5 * q5[i] + B6 * q6[i])
                eq = h * (E1 * q1[i] + E3 * q3[i] + E4 * q4[i] + E5 * q5[i]
                          + E6 * q6[i] + E7 * q7[i])
                Qn[i] = Q[i] + inc
                sq = atol + rtol * max(fabs(Q[i]), fabs(Qn[i]))
                acc = max(acc, fabs(eq) / sq)
            err = acc

            fac11 = err ** 0.17 if err > 0 else 0.0
            if err <= 1.0:
                fac = fac11 / fac_old ** 0.04
                fac = max(0.1, min(5.0, fac / 0.9))
                h_new = h / fac
                if rejected:
                    h_new = min(h_new, h)
                fac_old = max(err, 1e-4)
                t += h
                p = pn
                m = mn
                for i in range(NQ):
                    Q[i] = Qn[i]
                    q1[i] = q7[i]
                k1p = k7p
                k1m = k7m
                n_acc += 1
                rejected = False
                ap2 = abs2(p)
                am2 = abs2(m)
                if ap2 > max_p:
                    max_p = ap2
                if am2 > max_m:
                    max_m = am2
                if record:
                    rec.push(t, p, m, k1p, k1m)
                h = h_new
            else:
                h = h / min(5.0, fac11 / 0.9)
                rejected = True
                n_rej += 1

        if status != STATUS_OK:
            break
        tail_p = abs2(p)
        tail_m = abs2(m)
        if tail_p <= eps_tail * max_p and tail_m <= eps_tail * max_m:
            break
        if t_end >= t_cap:
            status = STATUS_TAIL
            break
        t_end = min(2.0 * t_end, t_cap)

    out = {
        "integrals": np.array([Q[i] for i in range(NQ)]),
        "t_end": t,
        "n_accepted": n_acc,
        "n_rejected": n_rej,
        "status": status,
        "max_abs2": (max_p, max_m),
        "tail_abs2": (abs2(p), abs2(m)),
        "has_derivative": have_d,
    }
    if record:
        out["t"], out["psi"], out["dpsi"] = rec.finish()
    return out
