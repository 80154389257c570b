"""Dissipative-adaptation relations between absorbed work and transition
probabilities, and the bookkeeping for trains of independent photons.

Everything here is algebra on numbers produced by ``analytic`` or ``oracle``;
no dynamics are solved.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Optional

from .model import DressedFrame

SYMMETRY_TOL = 1e-12


class DomainError(ValueError):
    pass


def _is_symmetric(frame: DressedFrame) -> bool:
    scale = max(abs(frame.omega_gap), frame.gamma_a, frame.gamma_b)
    return abs(frame.delta_ab) <= SYMMETRY_TOL * scale


def _branch_ratio(gamma_a_s: float, gamma_b_s: float, p: float, sign: str) -> float:
    if gamma_b_s == 0.0:
        if p != 0.0:
            raise ZeroDivisionError(
                f"dressed Gamma_b^({sign}) vanishes but p^Lambda{sign} = {p!r}")
        return 0.0
    return (gamma_a_s + gamma_b_s) / gamma_b_s * p


def generalized_qda_rhs(frame: DressedFrame, p_plus: float, p_minus: float) -> float:
    """Absorbed work (units of hbar omega_l) predicted from the two Lambda-branch
    probabilities, each weighted by its total-to-b dressed rate ratio."""
    if p_plus < 0 or p_minus < 0:
        raise ValueError("branch probabilities must be non-negative")
    return (_branch_ratio(frame.gamma_a_plus, frame.gamma_b_plus, p_plus, "+")
            + _branch_ratio(frame.gamma_a_minus, frame.gamma_b_minus, p_minus, "-"))


def four_term(frame: DressedFrame, p_plus: float, p_minus: float,
              rho_pm: float, p_total: float) -> tuple[float, float, float, float]:
    """The addends  (Ga+/Gb+) p+,  (Ga-/Gb-) p-,  rho,  p  whose sum is the absorbed work."""
    t_plus = frame.gamma_a_plus / frame.gamma_b_plus * p_plus if p_plus else 0.0
    t_minus = frame.gamma_a_minus / frame.gamma_b_minus * p_minus if p_minus else 0.0
    return t_plus, t_minus, rho_pm, p_total


def standard_prefactor(frame: DressedFrame) -> float:
    return (frame.gamma_a + frame.gamma_b) / frame.gamma_b


def standard_qda_check(frame: DressedFrame, report) -> float:
    """w_abs minus the single-Lambda prediction (Ga+Gb)/Gb * p_total.

    For delta_ab = 0 this is exactly the coherence share of the work. Off that
    manifold the number is still returned but carries no such reading; use
    ``qda_breakdown(...).symmetric`` to tell the two apart.
    """
    return report.w_abs - standard_prefactor(frame) * report.p_total


def split_symmetric(frame: DressedFrame, report) -> Optional[tuple[float, float]]:
    if not _is_symmetric(frame):
        return None
    k = standard_prefactor(frame)
    return k * report.p_total, k * report.rho_pm


def work_decomposition(frame: DressedFrame, report) -> tuple[float, float]:
    """(w_so, w_coh): work spent on the ga -> gb transfer and on building
    coherence between the dressed states. Only defined for equal site frequencies."""
    split = split_symmetric(frame, report)
    if split is None:
        raise DomainError(f"work split needs delta_ab = 0, got {frame.delta_ab!r}")
    return split


@dataclass
class QdaBreakdown:
    generalized_rhs: float
    standard_rhs: float
    four_term: tuple[float, float, float, float]
    deviation: float
    symmetric: bool
    w_so: Optional[float] = None
    w_coh: Optional[float] = None

    def as_dict(self) -> dict:
        return {
            "generalized_rhs": self.generalized_rhs,
            "standard_rhs": self.standard_rhs,
            "four_term": list(self.four_term),
            "deviation": self.deviation,
            "symmetric": self.symmetric,
            "w_so": self.w_so,
            "w_coh": self.w_coh,
        }


def qda_breakdown(frame: DressedFrame, report) -> QdaBreakdown:
    split = split_symmetric(frame, report)
    return QdaBreakdown(
        generalized_rhs=generalized_qda_rhs(frame, report.p_lambda_plus, report.p_lambda_minus),
        standard_rhs=standard_prefactor(frame) * report.p_total,
        four_term=four_term(frame, report.p_lambda_plus, report.p_lambda_minus,
                            report.rho_pm, report.p_total),
        deviation=standard_qda_check(frame, report),
        symmetric=split is not None,
        w_so=split[0] if split else None,
        w_coh=split[1] if split else None,
    )


@dataclass(frozen=True)
class CascadeResult:
    n_photons: int
    p_n: float
    w_n: float


def _survival(p: float, n: int) -> tuple[float, float]:
    """((1-p)^n, 1-(1-p)^n) without cancellation near p = 0."""
    if p == 1.0:
        return 0.0, 1.0
    lg = n * math.log1p(-p)
    return math.exp(lg), -math.expm1(lg)


def cascade(p_single: float, w_single: float, n: int) -> CascadeResult:
    """Cumulative transfer probability and absorbed work after ``n`` identical,
    independent photons, the system being reset only by a successful transfer."""
    if not 0.0 <= p_single <= 1.0:
        raise ValueError("p_single must lie in [0, 1]")
    if n < 1 or int(n) != n:
        raise ValueError("n must be a positive integer")
    n = int(n)
    if p_single == 0.0:
        return CascadeResult(n, 0.0, n * w_single)
    _, p_n = _survival(p_single, n)
    x = n * p_single
    if x < 1e-4:
        # sum_k (1-p)^k by series; p_n / p loses digits for tiny (or subnormal) p
        m = n - 1
        expected_rounds = n * (1.0 - m * p_single / 2.0 + m * (m - 1) * p_single ** 2 / 6.0)
    else:
        expected_rounds = p_n / p_single
    return CascadeResult(n, p_n, w_single * expected_rounds)


def cascade_sequence(rounds: Iterable[tuple[float, float]]) -> CascadeResult:
    """Same bookkeeping for unequal photons given as (p_k, w_k) per round."""
    survive = 1.0
    p_n = 0.0
    w_n = 0.0
    n = 0
    for p, w in rounds:
        if not 0.0 <= p <= 1.0:
            raise ValueError("round probabilities must lie in [0, 1]")
        w_n += survive * w
        p_n += survive * p
        survive *= 1.0 - p
        n += 1
    if n == 0:
        raise ValueError("at least one round is required")
    return CascadeResult(n, p_n, w_n)
