"""Detuning sweeps in units of Gamma_a, the figure presets, and CSV output."""
from __future__ import annotations

import csv
import io
import logging
import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, fields, replace

import numpy as np

from . import analytic, oracle
from .adaptation import cascade, qda_breakdown
from .model import diagonalize, SiteSystem
from .pulse import ExpPulse, exp_envelope

log = logging.getLogger(__name__)

ENGINES = ("analytic", "oracle", "both")
QUANTITIES = ("p_total", "p_lambda_plus", "p_lambda_minus", "rho_pm", "w_abs", "w_reac",
              "w_so", "w_coh", "deviation", "p_cascade", "w_cascade")
COMPARED = ("p_total", "p_lambda_plus", "p_lambda_minus", "rho_pm", "w_abs")
AGREE_REL = 1e-6
AGREE_FLOOR = 1e-3  # relative error denominator floor: 1e-6 * 1e-3 = 1e-9 absolute


class ConfigError(ValueError):
    pass


@dataclass
class SweepSpec:
    engine: str = "analytic"
    j_ratio: float = 0.5
    gamma_b_ratio: float = 1.0
    delta_ab_ratio: float = 0.0
    linewidth_ratio: float = 1e-3
    lo: float = -2.0
    hi: float = 3.0
    n_points: int = 501
    quantities: tuple = ("p_total", "w_abs")
    photons: tuple = (1, 10, 100)
    rel_tol: float = 1e-10
    include_cross: bool = False
    omega_bar: float = 1000.0
    jobs: int = 1

    def validate(self) -> "SweepSpec":
        if self.engine not in ENGINES:
            raise ConfigError(f"engine must be one of {ENGINES}")
        for name in ("j_ratio", "gamma_b_ratio", "delta_ab_ratio", "linewidth_ratio",
                     "lo", "hi", "rel_tol", "omega_bar"):
            if not math.isfinite(getattr(self, name)):
                raise ConfigError(f"{name} must be finite")
        if self.linewidth_ratio <= 0:
            raise ConfigError("linewidth must be positive")
        if self.gamma_b_ratio <= 0:
            raise ConfigError("gamma_b must be positive")
        if self.j_ratio == 0 and self.delta_ab_ratio == 0:
            raise ConfigError("J = 0 with delta_ab = 0 is degenerate")
        if int(self.n_points) != self.n_points or self.n_points < 2:
            raise ConfigError("points must be an integer >= 2")
        if not self.lo < self.hi:
            raise ConfigError("sweep needs from < to")
        bad = [q for q in self.quantities if q not in QUANTITIES]
        if bad or not self.quantities:
            raise ConfigError(f"unknown quantities {bad}; choose from {QUANTITIES}")
        if any(int(n) != n or n < 1 for n in self.photons):
            raise ConfigError("photon counts must be positive integers")
        if not 1e-13 <= self.rel_tol <= 1e-3:
            raise ConfigError("rel-tol must lie in [1e-13, 1e-3]")
        if self.jobs < 1:
            raise ConfigError("jobs must be >= 1")
        return self

    @classmethod
    def from_mapping(cls, data: dict) -> "SweepSpec":
        known = {f.name for f in fields(cls)}
        unknown = set(data) - known
        if unknown:
            raise ConfigError(f"unknown config keys: {sorted(unknown)}")
        data = dict(data)
        for key in ("quantities", "photons"):
            if key in data and isinstance(data[key], str):
                data[key] = tuple(s.strip() for s in data[key].split(",") if s.strip())
            if key in data:
                data[key] = tuple(data[key])
        if "photons" in data:
            data["photons"] = tuple(int(n) for n in data["photons"])
        return cls(**data)

    def grid(self) -> np.ndarray:
        return np.linspace(self.lo, self.hi, int(self.n_points))

    def frame(self):
        system = SiteSystem.from_ratios(self.j_ratio, self.gamma_b_ratio, self.delta_ab_ratio,
                                        omega_bar=self.omega_bar)
        return diagonalize(system)


def _preset(j, linewidth, quantities, photons=(1, 10, 100)):
    lo, hi = -2.0, 2.0 * j + 2.0
    return dict(j_ratio=j, linewidth_ratio=linewidth, lo=lo, hi=hi,
                n_points=int(round((hi - lo) / 0.01)) + 1, quantities=tuple(quantities),
                photons=photons)


PRESETS = {
    "fig2": _preset(5.0, 1e-3, ("p_total", "w_abs")),
    "fig3": _preset(0.5, 1e-3, ("p_total", "w_abs")),
    "fig4": _preset(0.5, 1.0, ("p_total", "w_abs")),
    "fig5": _preset(5.0, 1.0, ("p_total", "w_abs")),
    "fig6": _preset(0.2, 1e-3, ("p_total", "w_abs", "rho_pm")),
    "fig7": _preset(0.5, 1e-3, ("p_total", "w_abs", "rho_pm")),
    "fig8": _preset(1.0, 1e-3, ("p_total", "w_abs", "rho_pm")),
    "fig9": _preset(3.0, 1e-3, ("p_total", "w_abs", "rho_pm")),
    "fig10": _preset(0.5, 1e-3, ("p_cascade",)),
    "fig11": _preset(1.0, 1e-3, ("p_cascade",)),
    "fig12": _preset(3.0, 1e-3, ("p_cascade",)),
}


def quantity_columns(spec: SweepSpec) -> list[str]:
    cols = []
    for q in spec.quantities:
        if q in ("p_cascade", "w_cascade"):
            cols.extend(f"{q}_{n}" for n in spec.photons)
        else:
            cols.append(q)
    return cols


def columns(spec: SweepSpec) -> list[str]:
    base = quantity_columns(spec) + ["residual_qda", "residual_sum"]
    if spec.engine != "both":
        return ["delta_l_minus_ratio"] + base
    cols = ["delta_l_minus_ratio"]
    for c in base:
        cols += [f"{c}_analytic", f"{c}_oracle"]
    return cols + ["engine_rel_diff"]


def _values(spec: SweepSpec, frame, report) -> dict:
    out = {}
    br = qda_breakdown(frame, report)
    for q in spec.quantities:
        if q == "deviation":
            out[q] = br.deviation
        elif q in ("p_cascade", "w_cascade"):
            for n in spec.photons:
                c = cascade(min(max(report.p_total, 0.0), 1.0), report.w_abs, n)
                out[f"{q}_{n}"] = c.p_n if q == "p_cascade" else c.w_n
        else:
            out[q] = getattr(report, q)
    out["residual_qda"] = report.residual_qda
    out["residual_sum"] = report.residual_sum
    return out


def engine_rel_diff(a, o) -> float:
    """Largest relative disagreement over the compared observables (floored denominator)."""
    worst = 0.0
    for q in COMPARED:
        x, y = getattr(a, q), getattr(o, q)
        worst = max(worst, abs(x - y) / max(abs(x), AGREE_FLOOR))
    return worst


def evaluate_point(spec: SweepSpec, delta_l: float, frame=None) -> dict:
    """Reports for one detuning, keyed by engine name."""
    frame = frame or spec.frame()
    pulse = ExpPulse.at_detuning(frame, delta_l, spec.linewidth_ratio)
    reports = {}
    if spec.engine in ("analytic", "both"):
        reports["analytic"] = analytic.evaluate(frame, pulse)
    if spec.engine in ("oracle", "both"):
        reports["oracle"] = oracle.evaluate(frame, exp_envelope(pulse), rel_tol=spec.rel_tol,
                                            include_cross=spec.include_cross)
    return reports


def _row(args):
    spec, delta_l = args
    frame = spec.frame()
    row = {"delta_l_minus_ratio": delta_l}
    try:
        reports = evaluate_point(spec, delta_l, frame)
    except (ArithmeticError, RuntimeError, ValueError) as exc:
        log.warning("point delta_l=%r failed: %s", delta_l, exc)
        return row, 1
    if spec.engine != "both":
        row.update(_values(spec, frame, next(iter(reports.values()))))
        return row, 0
    for eng, rep in reports.items():
        for k, v in _values(spec, frame, rep).items():
            row[f"{k}_{eng}"] = v
    row["engine_rel_diff"] = engine_rel_diff(reports["analytic"], reports["oracle"])
    return row, 0


def run_sweep(spec: SweepSpec) -> tuple[list[dict], int]:
    """Evaluate every grid point in ascending order; returns (rows, n_failed).

    Points are farmed out to worker processes when ``spec.jobs > 1``; rows come
    back in input order either way.
    """
    spec.validate()
    tasks = [(spec, float(x)) for x in spec.grid()]
    if spec.jobs > 1:
        with ProcessPoolExecutor(max_workers=spec.jobs) as pool:
            results = list(pool.map(_row, tasks, chunksize=max(1, len(tasks) // (4 * spec.jobs))))
    else:
        results = [_row(t) for t in tasks]
    return [r for r, _ in results], sum(f for _, f in results)


def format_value(v) -> str:
    if v is None:
        return ""
    if isinstance(v, bool):
        return "1" if v else "0"
    return format(float(v), ".17g")


def write_csv(rows: list[dict], cols: list[str], stream) -> None:
    w = csv.writer(stream, lineterminator="\n")
    w.writerow(cols)
    for row in rows:
        w.writerow([format_value(row.get(c)) for c in cols])


def csv_text(rows: list[dict], cols: list[str]) -> str:
    buf = io.StringIO()
    write_csv(rows, cols, buf)
    return buf.getvalue()


def default_jobs() -> int:
    return max(1, os.cpu_count() or 1)


def spec_dict(spec: SweepSpec) -> dict:
    d = asdict(spec)
    d["quantities"] = list(spec.quantities)
    d["photons"] = list(spec.photons)
    return d


def with_overrides(spec: SweepSpec, **kw) -> SweepSpec:
    return replace(spec, **{k: v for k, v in kw.items() if v is not None})


__all__ = ["SweepSpec", "PRESETS", "run_sweep", "write_csv", "columns", "evaluate_point",
           "ConfigError", "csv_text"]
