"""Compare the compiled and pure-Python amplitude integrators.

    python3 benchmarks/bench_kernel.py [--repeat 3] [--rel-tol 1e-8]

Each case is integrated with both backends; the table reports wall time,
accepted steps, time per step and the largest relative difference between
the two sets of quadratures (they run the same algorithm, so it should sit
at rounding level).
"""
import argparse
import time

import numpy as np

from qdapulse import kernel, oracle
from qdapulse.model import SiteSystem, diagonalize
from qdapulse.pulse import ExpPulse, exp_envelope

CASES = (
    ("near resonance, narrow pulse", 0.5, 1e-3, 0.3),
    ("between resonances, broad pulse", 1.0, 1.0, 1.0),
    ("far detuned, narrow pulse", 5.0, 1e-3, 12.0),
)


def time_case(backend, frame, env, rel_tol, repeat):
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        sol = oracle.integrate_amplitudes(frame, env, rel_tol=rel_tol, record=False,
                                          backend=backend)
        best = min(best, time.perf_counter() - t0)
    return best, sol


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.split("\n")[0])
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--rel-tol", type=float, default=1e-8)
    args = ap.parse_args(argv)

    if "compiled" not in kernel.BACKENDS:
        print("compiled extension not built; only the python backend is available")
    names = [b for b in ("compiled", "python") if b in kernel.BACKENDS]
    print(f"{'case':34s} {'backend':9s} {'time [s]':>10s} {'steps':>8s} "
          f"{'us/step':>9s} {'max rel diff':>13s}")
    for label, j, d, dl in CASES:
        frame = diagonalize(SiteSystem.from_ratios(j, omega_bar=1000.0))
        env = exp_envelope(ExpPulse.at_detuning(frame, dl, d))
        results = {b: time_case(b, frame, env, args.rel_tol, args.repeat) for b in names}
        ref = results[names[0]][1].integrals
        for b, (t, sol) in results.items():
            diff = np.max(np.abs(sol.integrals - ref) / np.maximum(np.abs(ref), 1e-300))
            print(f"{label:34s} {b:9s} {t:10.4f} {sol.n_accepted:8d} "
                  f"{1e6 * t / max(sol.n_accepted, 1):9.2f} {diff:13.2g}")
        if len(results) == 2:
            print(f"{'':34s} speedup {results['python'][0] / results['compiled'][0]:.1f}x")


if __name__ == "__main__":
    main()
