"""Verification suites producing machine-readable pass/fail reports.

identities          closed-form identity residuals over random parameter points
oracle-equivalence  numerical reference against closed forms on a fixed grid
limits              large-coupling, monochromatic and symmetry limits
"""
from __future__ import annotations

import math
from dataclasses import asdict, dataclass

import numpy as np

from . import analytic, oracle
from .adaptation import four_term, generalized_qda_rhs
from .model import SiteSystem, diagonalize
from .pulse import ExpPulse, exp_envelope
from .sweep import AGREE_FLOOR, COMPARED

SUITES = ("identities", "oracle-equivalence", "limits")

# sampling box for the identity suite, in units of Gamma_a
J_RANGE = (0.05, 20.0)
DELTA_AB_RANGE = (-10.0, 10.0)
GAMMA_B_RANGE = (0.8, 1.25)
LINEWIDTH_RANGE = (1e-4, 5.0)
DETUNING_RANGE = (-20.0, 20.0)

GRID_J = (0.2, 0.5, 1.0, 3.0, 5.0)
GRID_LINEWIDTH = (0.001, 1.0)
GRID_DETUNINGS = 11


@dataclass
class PropertyResult:
    name: str
    samples: int
    max_residual: float
    tolerance: float
    passed: bool


def _result(name, residuals, tol) -> PropertyResult:
    worst = float(max(residuals)) if residuals else 0.0
    return PropertyResult(name, len(residuals), worst, float(tol),
                          bool(residuals and math.isfinite(worst) and worst <= tol))


def _frame(j, gamma_b=1.0, delta_ab=0.0):
    return diagonalize(SiteSystem.from_ratios(j, gamma_b, delta_ab))


def _rel(lhs: float, rhs: float, *terms: float) -> float:
    scale = max(abs(lhs), abs(rhs), *(abs(t) for t in terms))
    return abs(lhs - rhs) / scale if scale > 0 else 0.0


def identity_residuals(frame, pulse) -> dict:
    """Relative residuals of the three closed-form identities at one point,
    each scaled by the largest term entering it."""
    pp = analytic.p_lambda_closed(frame, pulse, "+")
    pm = analytic.p_lambda_closed(frame, pulse, "-")
    rho = analytic.rho_pm_closed(frame, pulse)
    w = analytic.w_abs_closed(frame, pulse)
    p_direct = analytic.p_total_direct(frame, pulse)
    p_sum = pp + pm - rho
    terms = four_term(frame, pp, pm, rho, p_direct)
    return {
        "generalized_qda": _rel(w, generalized_qda_rhs(frame, pp, pm), pp, pm),
        "probability_sum": _rel(p_direct, p_sum, pp, pm, rho),
        "four_term": _rel(w, sum(terms), *terms),
    }


def sample_points(n: int, seed: int):
    rng = np.random.default_rng(seed)
    for _ in range(n):
        j = rng.uniform(*J_RANGE)
        dab = rng.uniform(*DELTA_AB_RANGE)
        gb = rng.uniform(*GAMMA_B_RANGE)
        lw = rng.uniform(*LINEWIDTH_RANGE)
        dl = rng.uniform(*DETUNING_RANGE)
        frame = _frame(j, gb, dab)
        yield frame, ExpPulse.at_detuning(frame, dl, lw)


def suite_identities(samples: int = 1000, seed: int = 0, tol: float = 1e-10) -> list[PropertyResult]:
    res = {"generalized_qda": [], "probability_sum": [], "four_term": []}
    for frame, pulse in sample_points(samples, seed):
        for k, v in identity_residuals(frame, pulse).items():
            res[k].append(v)
    return [_result(k, v, tol) for k, v in res.items()]


def acceptance_grid():
    """(frame, pulse) over the coupling x linewidth x detuning grid."""
    for j in GRID_J:
        frame = _frame(j)
        for lw in GRID_LINEWIDTH:
            for dl in np.linspace(-2.0, frame.omega_gap + 2.0, GRID_DETUNINGS):
                yield frame, ExpPulse.at_detuning(frame, float(dl), lw)


def suite_oracle_equivalence(rel_tol: float = 1e-10, tol: float = 1e-6,
                             include_cross: bool = False) -> list[PropertyResult]:
    """Relative error with the denominator floored so that tol * floor is the
    absolute floor (1e-9 for the defaults)."""
    res = {q: [] for q in COMPARED}
    bound = []
    for frame, pulse in acceptance_grid():
        a = analytic.evaluate(frame, pulse)
        sol = oracle.integrate_amplitudes(frame, exp_envelope(pulse), rel_tol=rel_tol,
                                          include_cross=include_cross, record=False)
        o = oracle.report_from(sol)
        for q in COMPARED:
            x, y = getattr(a, q), getattr(o, q)
            res[q].append(abs(x - y) / max(abs(x), AGREE_FLOOR))
        bound.append(max(sol.max_abs2))
    out = [_result(f"agreement_{q}", v, tol) for q, v in res.items()]
    out.append(_result("single_excitation_bound", bound, 1.0))
    return out


def suite_limits() -> list[PropertyResult]:
    out = []
    # strong coupling: w_abs / (2 p) -> 1 at the lower resonance, monotonically
    ratios = []
    for j in (1.0, 2.0, 5.0, 10.0):
        frame = _frame(j)
        r = analytic.evaluate(frame, ExpPulse.at_detuning(frame, 0.0, 1e-3))
        ratios.append(r.w_abs / (2.0 * r.p_total))
    monotone = all(b <= a for a, b in zip(ratios, ratios[1:]))
    out.append(_result("strong_coupling_ratio_j10", [abs(ratios[-1] - 1.0)], 3e-3))
    out.append(PropertyResult("strong_coupling_monotone", len(ratios),
                              0.0 if monotone else 1.0, 0.0, monotone))

    # monochromatic limit: finite-linewidth forms approach the Delta -> 0 forms linearly
    mono = []
    for j in (0.2, 0.5, 1.0, 3.0):
        frame = _frame(j)
        for dl in np.linspace(-1.0, frame.omega_gap + 1.0, 7):
            for lw in (1e-3, 1e-4, 1e-5):
                pf = ExpPulse.at_detuning(frame, float(dl), lw)
                for closed, limit in ((analytic.w_abs_closed, analytic.w_abs_mono),
                                      (analytic.rho_pm_closed, analytic.rho_pm_mono)):
                    a, b = closed(frame, pf), limit(frame, pf)
                    mono.append(abs(a - b) / max(abs(b), 1.0) / (10.0 * lw))
    out.append(_result("monochromatic_convergence", mono, 1.0))

    # coherence vanishes halfway between the resonances at J = Gamma/2
    frame = _frame(0.5)
    rho = analytic.rho_pm_mono(frame, ExpPulse.at_detuning(frame, 0.5, 1e-3))
    out.append(_result("coherence_zero_j05", [abs(rho)], 1e-12))

    # mirror symmetry about the band centre for delta_ab = 0, Ga = Gb
    mirror = []
    for j in (0.2, 1.0, 3.0):
        frame = _frame(j)
        for dl in np.linspace(-2.0, frame.omega_gap + 2.0, 9):
            a = analytic.evaluate(frame, ExpPulse.at_detuning(frame, float(dl), 0.05))
            b = analytic.evaluate(frame, ExpPulse.at_detuning(frame, frame.omega_gap - float(dl), 0.05))
            mirror.append(_rel(a.p_total, b.p_total))
            mirror.append(_rel(a.w_abs, b.w_abs))
    out.append(_result("mirror_symmetry", mirror, 1e-12))
    return out


def run_suite(name: str, seed: int = 0, samples: int = 1000, rel_tol: float = 1e-10,
              tol: float | None = None) -> dict:
    if name == "identities":
        props = suite_identities(samples, seed, tol if tol is not None else 1e-10)
    elif name == "oracle-equivalence":
        props = suite_oracle_equivalence(rel_tol, tol if tol is not None else 1e-6)
    elif name == "limits":
        props = suite_limits()
    else:
        raise ValueError(f"unknown suite {name!r}; choose from {SUITES}")
    return {
        "suite": name,
        "seed": seed,
        "properties": [asdict(p) for p in props],
        "passed": all(p.passed for p in props),
    }
