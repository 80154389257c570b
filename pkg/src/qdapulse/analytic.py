"""Closed-form energetics for the exponential single-photon pulse.

Every finite-linewidth expression is written with the 1/Delta pieces already
cancelled against the Delta prefactor, so the same code is stable down to
Delta = 0, where it reduces to the monochromatic forms (also exposed
separately as ``*_mono`` for cross-checks).
"""
from __future__ import annotations

import cmath
import math
from dataclasses import asdict, dataclass
from typing import Optional

from .model import DressedFrame, laser_detunings
from .pulse import ExpPulse

MONO_THRESHOLD = 1e-9
SERIES_CUTOFF = 1e-4
P_CLIP_TOL = 1e-12
P_RANGE_TOL = 1e-9


class ProbabilityRangeError(ArithmeticError):
    pass


def lorentz(k: float, delta: float) -> complex:
    """L(k, delta) = 1 / (k/2 + i delta)."""
    return 1.0 / complex(0.5 * k, delta)


@dataclass
class EnergeticsReport:
    p_lambda_plus: float
    p_lambda_minus: float
    rho_pm: float
    p_total: float
    w_abs: float
    w_reac: Optional[float] = None
    w_so: Optional[float] = None
    w_coh: Optional[float] = None
    residual_qda: float = 0.0
    residual_sum: float = 0.0
    p_clipped: bool = False

    def as_dict(self) -> dict:
        return asdict(self)


def _detunings(frame: DressedFrame, pulse: ExpPulse):
    dm, dp = laser_detunings(frame, pulse.omega_l)
    return dp, dm


def _is_mono(frame: DressedFrame, pulse: ExpPulse) -> bool:
    return pulse.linewidth / min(frame.gamma_pp, frame.gamma_mm) <= MONO_THRESHOLD


def _driven_profile(gss: float, det: float, d: float, t: float) -> complex:
    """exp(-a t) (exp(x t) - 1) / x  with a = gss/2 - i det, x = a - d/2.

    Evaluated as (exp(-d t/2) - exp(-a t)) / x, switching to a series in x t
    near the removable singularity x = 0 (gss = d on resonance).
    """
    a = complex(0.5 * gss, -det)
    x = a - 0.5 * d
    z = x * t
    if abs(z) < SERIES_CUTOFF:
        return cmath.exp(-a * t) * t * (1.0 + z / 2.0 + z * z / 6.0 + z * z * z / 24.0)
    return (math.exp(-0.5 * d * t) - cmath.exp(-a * t)) / x


def psi_rotating(frame: DressedFrame, pulse: ExpPulse, branch: str, t: float) -> complex:
    """psi_(+/-)(t) * exp(i omega_l t): the amplitude the oracle integrates."""
    if t < 0:
        raise ValueError("t must be non-negative")
    u, _, gss = frame.branch(branch)
    dp, dm = _detunings(frame, pulse)
    det = dp if branch == "+" else dm
    d = pulse.linewidth
    return -math.sqrt(frame.gamma_a * d) * u * _driven_profile(gss, det, d, t)


def psi_amplitude(frame: DressedFrame, pulse: ExpPulse, branch: str, t: float) -> complex:
    """Excited-state amplitude psi_(+/-)(t) in the lab frame, carrier included."""
    return psi_rotating(frame, pulse, branch, t) * cmath.exp(complex(0.0, -pulse.omega_l * t))


def _w_abs(frame, pulse, d):
    dp, dm = _detunings(frame, pulse)
    total = (frame.u_plus ** 2 * lorentz(frame.gamma_pp + d, dp).real
             + frame.u_minus ** 2 * lorentz(frame.gamma_mm + d, dm).real)
    return 2.0 * frame.gamma_a * total


def _p_lambda(frame, pulse, branch, d):
    dp, dm = _detunings(frame, pulse)
    det = dp if branch == "+" else dm
    gss = frame.gamma_pp if branch == "+" else frame.gamma_mm
    pref = frame.gamma_a * frame.gamma_b * (frame.u_plus * frame.u_minus) ** 2
    return pref * 2.0 * lorentz(gss + d, det).real / gss


def _rho_pm(frame, pulse, d):
    dp, dm = _detunings(frame, pulse)
    l_gap = lorentz(frame.gamma_pp + frame.gamma_mm, frame.omega_gap)
    inner = lorentz(frame.gamma_pp + d, dp) + lorentz(frame.gamma_mm + d, dm).conjugate()
    pref = 2.0 * (frame.u_plus * frame.u_minus) ** 2 * frame.gamma_a * frame.gamma_b
    return pref * (l_gap.conjugate() * inner).real


# Term-by-term transcriptions of the published finite-linewidth expressions.
# Singular where Gamma_ss = Delta on resonance; kept only as a cross-check of the
# reduced forms above.

def w_abs_appendix(frame: DressedFrame, pulse: ExpPulse) -> float:
    dp, dm = _detunings(frame, pulse)
    d = pulse.linewidth
    total = 0.0
    for u, gss, det in ((frame.u_plus, frame.gamma_pp, dp), (frame.u_minus, frame.gamma_mm, dm)):
        total += u * u * (lorentz(gss - d, det) * (1.0 / d - lorentz(gss + d, det))).real
    return 2.0 * frame.gamma_a * d * total


def p_lambda_appendix(frame: DressedFrame, pulse: ExpPulse, branch: str) -> float:
    dp, dm = _detunings(frame, pulse)
    det = dp if branch == "+" else dm
    gss = frame.gamma_pp if branch == "+" else frame.gamma_mm
    d = pulse.linewidth
    pref = frame.gamma_a * frame.gamma_b * d * (frame.u_plus * frame.u_minus) ** 2
    return pref * abs(lorentz(gss - d, det)) ** 2 * (
        1.0 / d + 1.0 / gss - 2.0 * lorentz(gss + d, det).real)


def rho_pm_appendix(frame: DressedFrame, pulse: ExpPulse) -> float:
    dp, dm = _detunings(frame, pulse)
    gpp, gmm = frame.gamma_pp, frame.gamma_mm
    d = pulse.linewidth
    l_gap = lorentz(gpp + gmm, frame.omega_gap)
    bracket = (1.0 / d + l_gap.conjugate() - lorentz(gmm + d, dm).conjugate()
               - lorentz(gpp + d, dp))
    prod = lorentz(gpp - d, dp) * lorentz(gmm - d, dm).conjugate()
    pref = 2.0 * d * (frame.u_plus * frame.u_minus) ** 2 * frame.gamma_a * frame.gamma_b
    return pref * (prod * bracket).real


def _linewidth(frame, pulse):
    return 0.0 if _is_mono(frame, pulse) else pulse.linewidth


def w_abs_closed(frame: DressedFrame, pulse: ExpPulse) -> float:
    """Absorbed work in units of hbar * omega_l."""
    return _w_abs(frame, pulse, _linewidth(frame, pulse))


def w_abs_mono(frame: DressedFrame, pulse: ExpPulse) -> float:
    return _w_abs(frame, pulse, 0.0)


def p_lambda_closed(frame: DressedFrame, pulse: ExpPulse, branch: str) -> float:
    frame.branch(branch)
    return _p_lambda(frame, pulse, branch, _linewidth(frame, pulse))


def p_lambda_mono(frame: DressedFrame, pulse: ExpPulse, branch: str) -> float:
    frame.branch(branch)
    return _p_lambda(frame, pulse, branch, 0.0)


def rho_pm_closed(frame: DressedFrame, pulse: ExpPulse) -> float:
    return _rho_pm(frame, pulse, _linewidth(frame, pulse))


def rho_pm_mono(frame: DressedFrame, pulse: ExpPulse) -> float:
    return _rho_pm(frame, pulse, 0.0)


def p_total_closed(frame: DressedFrame, pulse: ExpPulse) -> float:
    """p(ga -> gb) as the two Lambda-branch probabilities minus the coherence term.

    Raises ProbabilityRangeError if the result leaves [-1e-9, 1 + 1e-9].
    """
    p = (p_lambda_closed(frame, pulse, "+") + p_lambda_closed(frame, pulse, "-")
         - rho_pm_closed(frame, pulse))
    if not (-P_RANGE_TOL <= p <= 1.0 + P_RANGE_TOL):
        raise ProbabilityRangeError(f"p_total = {p!r} outside [0, 1]")
    return p


def _gram(x: complex, y: complex, d: float) -> complex:
    """d * int_0^inf conj(g_x) g_y dt  with  g_x(t) = (e^{-d t/2} - e^{-(x + d/2) t}) / x.

    Regular at x = 0 or y = 0 and at d = 0.
    """
    sx, sy = d + x.conjugate(), d + y
    return (sx + sy) / (sx * sy * (d + x.conjugate() + y))


def p_total_direct(frame: DressedFrame, pulse: ExpPulse) -> float:
    """Gamma_b * int_0^inf |v+ psi+ + v- psi-|^2 dt from one generic overlap kernel.

    Coded independently of the Lambda/coherence split: both rotating-frame
    amplitudes have the form c * g_x(t), and the emitted b-channel amplitude is
    their difference, so the integral is a 2x2 Gram combination.
    """
    d = _linewidth(frame, pulse)
    dp, dm = _detunings(frame, pulse)
    xp = complex(0.5 * (frame.gamma_pp - d), -dp)
    xm = complex(0.5 * (frame.gamma_mm - d), -dm)
    g = _gram(xp, xp, d) + _gram(xm, xm, d) - 2.0 * _gram(xp, xm, d)
    scale = frame.gamma_b * frame.gamma_a * (frame.u_plus * frame.u_minus) ** 2
    return scale * g.real


def evaluate(frame: DressedFrame, pulse: ExpPulse) -> EnergeticsReport:
    """Every closed-form observable at one parameter point, plus identity residuals."""
    # imported here: adaptation builds on EnergeticsReport
    from .adaptation import generalized_qda_rhs, split_symmetric

    pp = p_lambda_closed(frame, pulse, "+")
    pm = p_lambda_closed(frame, pulse, "-")
    rho = rho_pm_closed(frame, pulse)
    p = p_total_closed(frame, pulse)
    w = w_abs_closed(frame, pulse)
    clipped = not (-P_CLIP_TOL <= p <= 1.0 + P_CLIP_TOL)
    report = EnergeticsReport(
        p_lambda_plus=pp,
        p_lambda_minus=pm,
        rho_pm=rho,
        p_total=min(max(p, 0.0), 1.0) if clipped else p,
        w_abs=w,
        residual_qda=w - generalized_qda_rhs(frame, pp, pm),
        residual_sum=p - p_total_direct(frame, pulse),
        p_clipped=clipped,
    )
    split = split_symmetric(frame, report)
    if split is not None:
        report.w_so, report.w_coh = split
    return report
