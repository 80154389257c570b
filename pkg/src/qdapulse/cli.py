"""Command-line front end.

    qdapulse point   --j 0.5 --linewidth 1e-4 --delta-l 0.5
    qdapulse sweep   --preset fig3 --out fig3.csv --svg fig3.svg
    qdapulse cascade --preset fig10 --photons 1,10,100 --out cascade.csv
    qdapulse verify  --suite identities

All parameters are in units of Gamma_a. Settings resolve as built-in defaults,
then --preset, then --config JSON, then explicit flags.

Exit codes: 0 ok, 1 verification failure, 2 config error, 3 numerical failure,
4 I/O error.
"""
from __future__ import annotations

import argparse
import json
import logging
import math
import sys

from .adaptation import qda_breakdown
from .sweep import (PRESETS, ConfigError, SweepSpec, columns, engine_rel_diff, evaluate_point,
                    quantity_columns, run_sweep, spec_dict, write_csv)
from .svg import chart_from_rows
from .verify import SUITES, run_suite

EXIT_OK, EXIT_VERIFY, EXIT_CONFIG, EXIT_NUMERIC, EXIT_IO = 0, 1, 2, 3, 4
DEFAULT_RESIDUAL_TOL = 1e-8

log = logging.getLogger("qdapulse")

# flag dest -> SweepSpec field
FLAG_FIELDS = {
    "engine": "engine", "gamma_b": "gamma_b_ratio", "j": "j_ratio",
    "delta_ab": "delta_ab_ratio", "linewidth": "linewidth_ratio", "lo": "lo", "hi": "hi",
    "points": "n_points", "quantities": "quantities", "photons": "photons",
    "rel_tol": "rel_tol", "include_cross": "include_cross", "omega_bar": "omega_bar",
    "jobs": "jobs",
}


class CliError(Exception):
    def __init__(self, code: int, msg: str):
        super().__init__(msg)
        self.code = code


def _csv_list(conv):
    def parse(text):
        try:
            out = tuple(conv(s.strip()) for s in text.split(",") if s.strip())
        except ValueError as exc:
            raise argparse.ArgumentTypeError(str(exc)) from None
        if not out:
            raise argparse.ArgumentTypeError("empty list")
        return out
    return parse


def _common(p: argparse.ArgumentParser) -> None:
    g = p.add_argument_group("model and pulse (units of Gamma_a)")
    g.add_argument("--engine", choices=("analytic", "oracle", "both"))
    g.add_argument("--gamma-b", type=float, help="Gamma_b / Gamma_a")
    g.add_argument("--j", type=float, help="coupling J / Gamma_a")
    g.add_argument("--delta-ab", type=float, help="site detuning omega_a - omega_b")
    g.add_argument("--linewidth", type=float, help="pulse linewidth Delta / Gamma_a")
    g.add_argument("--omega-bar", type=float,
                   help="mean site frequency; only sets the scale of w_reac (default 1000)")
    g = p.add_argument_group("sweep axis and output")
    g.add_argument("--from", dest="lo", type=float, help="first detuning delta_L^(-)")
    g.add_argument("--to", dest="hi", type=float, help="last detuning delta_L^(-)")
    g.add_argument("--points", type=int, help="number of grid points (inclusive)")
    g.add_argument("--quantities", type=_csv_list(str))
    g.add_argument("--photons", type=_csv_list(int), metavar="N[,N...]")
    g.add_argument("--rel-tol", type=float, help="oracle relative tolerance")
    g.add_argument("--include-cross", action="store_const", const=True,
                   help="keep the branch cross-coupling rate in the oracle")
    g.add_argument("--jobs", type=int, help="worker processes for sweeps")
    g.add_argument("--preset", choices=sorted(PRESETS, key=lambda k: int(k[3:])))
    g.add_argument("--config", help="JSON file with SweepSpec fields")
    g.add_argument("--out", help="output file (default stdout)")
    g.add_argument("--svg", help="also write an SVG line chart")
    g.add_argument("--strict", action="store_true",
                   help="exit 3 if any sweep point failed numerically")
    g.add_argument("--residual-tol", type=float, default=DEFAULT_RESIDUAL_TOL)
    g.add_argument("-v", "--verbose", action="store_true")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="qdapulse", description=__doc__.split("\n")[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("point", help="evaluate one detuning, JSON report")
    _common(p)
    p.add_argument("--delta-l", type=float, default=0.0, help="detuning delta_L^(-)")

    p = sub.add_parser("sweep", help="detuning sweep to CSV")
    _common(p)

    p = sub.add_parser("cascade", help="multi-photon cumulative transfer sweep")
    _common(p)

    p = sub.add_parser("verify", help="run a verification suite, JSON report")
    _common(p)
    p.add_argument("--suite", choices=SUITES + ("all",), default="all")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--samples", type=int, default=1000)
    return parser


def resolve_spec(args, base: dict | None = None) -> SweepSpec:
    data = dict(base or {})
    if args.preset:
        data.update(PRESETS[args.preset])
    if args.config:
        try:
            with open(args.config) as fh:
                cfg = json.load(fh)
        except OSError as exc:
            raise CliError(EXIT_IO, f"cannot read config: {exc}") from None
        except json.JSONDecodeError as exc:
            raise CliError(EXIT_CONFIG, f"bad config JSON: {exc}") from None
        if not isinstance(cfg, dict):
            raise CliError(EXIT_CONFIG, "config must be a JSON object")
        data.update(cfg)
    for dest, fld in FLAG_FIELDS.items():
        v = getattr(args, dest, None)
        if v is not None:
            data[fld] = v
    try:
        spec = SweepSpec.from_mapping(data).validate()
    except (TypeError, ValueError) as exc:
        raise CliError(EXIT_CONFIG, str(exc)) from None
    if not spec.frame().system.qda_regime():
        log.warning("|Gamma_a - Gamma_b| / (Gamma_a + Gamma_b) > 0.1: the closed forms drop "
                    "branch cross-coupling; compare with --engine oracle --include-cross")
    return spec


def _emit(text: str, path: str | None) -> None:
    if path is None:
        sys.stdout.write(text)
        return
    try:
        with open(path, "w", newline="") as fh:
            fh.write(text)
    except OSError as exc:
        raise CliError(EXIT_IO, f"cannot write {path}: {exc}") from None


def _json(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True, allow_nan=True) + "\n"


def cmd_point(args) -> int:
    spec = resolve_spec(args)
    if not math.isfinite(args.delta_l):
        raise CliError(EXIT_CONFIG, "delta-l must be finite")
    frame = spec.frame()
    try:
        reports = evaluate_point(spec, args.delta_l, frame)
    except (ArithmeticError, RuntimeError) as exc:
        raise CliError(EXIT_NUMERIC, f"numerical failure: {exc}") from None
    params = spec_dict(spec)
    for k in ("lo", "hi", "n_points", "quantities", "photons", "jobs"):
        params.pop(k)
    out = {"params": params, "delta_l_minus_ratio": args.delta_l, "reports": {}}
    residuals = []
    for eng, rep in reports.items():
        d = rep.as_dict()
        d["qda"] = qda_breakdown(frame, rep).as_dict()
        out["reports"][eng] = d
        residuals += [abs(rep.residual_qda), abs(rep.residual_sum)]
    if len(reports) == 2:
        diff = engine_rel_diff(reports["analytic"], reports["oracle"])
        out["engine_rel_diff"] = diff
        residuals.append(diff)
    worst = max(residuals)
    out["max_residual"] = worst
    out["residual_tol"] = args.residual_tol
    out["passed"] = bool(worst <= args.residual_tol)
    _emit(_json(out), args.out)
    return EXIT_OK if out["passed"] else EXIT_VERIFY


def _sweep(args, base=None) -> int:
    spec = resolve_spec(args, base)
    rows, failed = run_sweep(spec)
    cols = columns(spec)
    if args.out is None:
        write_csv(rows, cols, sys.stdout)
    else:
        try:
            with open(args.out, "w", newline="") as fh:
                write_csv(rows, cols, fh)
        except OSError as exc:
            raise CliError(EXIT_IO, f"cannot write {args.out}: {exc}") from None
    if args.svg:
        ys = [c for c in cols if c.split("_analytic")[0].split("_oracle")[0]
              in quantity_columns(spec)]
        title = (f"J={spec.j_ratio:g}, Gamma_b={spec.gamma_b_ratio:g}, "
                 f"delta_ab={spec.delta_ab_ratio:g}, Delta={spec.linewidth_ratio:g}")
        _emit(chart_from_rows(rows, cols[0], ys, x_label="delta_L^(-) / Gamma_a",
                              title=title), args.svg)
    if failed:
        log.warning("%d of %d points failed", failed, len(rows))
        if args.strict:
            return EXIT_NUMERIC
    return EXIT_OK


def cmd_sweep(args) -> int:
    return _sweep(args)


def cmd_cascade(args) -> int:
    return _sweep(args, base={"quantities": ("p_cascade",)})


def cmd_verify(args) -> int:
    suites = SUITES if args.suite == "all" else (args.suite,)
    if args.samples < 1:
        raise CliError(EXIT_CONFIG, "samples must be positive")
    rel_tol = args.rel_tol if args.rel_tol is not None else 1e-10
    try:
        reports = [run_suite(s, seed=args.seed, samples=args.samples, rel_tol=rel_tol)
                   for s in suites]
    except (ArithmeticError, RuntimeError) as exc:
        raise CliError(EXIT_NUMERIC, f"numerical failure: {exc}") from None
    out = {"suites": reports, "passed": all(r["passed"] for r in reports)}
    _emit(_json(out), args.out)
    return EXIT_OK if out["passed"] else EXIT_VERIFY


COMMANDS = {"point": cmd_point, "sweep": cmd_sweep, "cascade": cmd_cascade, "verify": cmd_verify}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s: %(message)s", stream=sys.stderr)
    try:
        return COMMANDS[args.command](args)
    except CliError as exc:
        print(f"qdapulse: {exc}", file=sys.stderr)
        return exc.code
    except ConfigError as exc:
        print(f"qdapulse: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
