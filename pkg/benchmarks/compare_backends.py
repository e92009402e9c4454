"""Compare the numba and numpy kernel backends on identical workloads.

The hot per-point kernels (potential jets, connection jets, metric jets,
curvature assembly) exist twice: jitted loops in _kernels_numba and
vectorized numpy in _kernels_numpy. This script times the same pipeline
stages under each backend and reports wall times plus speedups. The numba
kernels are warmed up before timing so JIT compilation is excluded.

Usage:
    python3 benchmarks/compare_backends.py [--points 4000] [--repeats 3]
"""

import argparse
import time

import numpy as np

from taubnut import backend
from taubnut.config import preset
from taubnut.geometry import curvature_batch, ricci_residual_batch
from taubnut.sampling import random_admissible_points
from taubnut.suite import run_suite


def time_best(fn, repeats):
    # best-of-n to suppress scheduler noise
    best = np.inf
    out = None
    for _ in range(repeats):
        t0 = time.perf_counter()
        out = fn()
        best = min(best, time.perf_counter() - t0)
    return best, out


def run_stages(cfg, suite_cfg, pts, repeats):
    times = {}
    # warmup: first call pays any JIT compilation cost
    curvature_batch(cfg, pts[:8])
    ricci_residual_batch(cfg, pts[:8])
    times["curvature"], data = time_best(lambda: curvature_batch(cfg, pts), repeats)
    times["ricci"], _ = time_best(lambda: ricci_residual_batch(cfg, pts), repeats)
    times["suite"], report = time_best(lambda: run_suite(suite_cfg), 1)
    return times, data, report


def main():
    ap = argparse.ArgumentParser(description="benchmark kernel backends")
    ap.add_argument("--points", type=int, default=4000,
                    help="batch size for the curvature stages")
    ap.add_argument("--repeats", type=int, default=3,
                    help="repetitions per timed stage (best is kept)")
    args = ap.parse_args()

    cfg = preset("two-center")
    suite_cfg = preset("taub-nut")
    rng = np.random.default_rng(7)
    pts = random_admissible_points(cfg, args.points, rng)

    print("=" * 64)
    print("BACKEND BENCHMARK: taubnut kernels")
    print("=" * 64)
    print(f"curvature config: two-center (k={cfg.k}), {args.points} points, "
          f"best of {args.repeats}")
    print("suite config:     taub-nut, 26 checks, default sample sizes")
    print()

    results = {}
    data = {}
    for name in ("numpy", "numba"):
        try:
            backend.use(name)
        except ImportError:
            print(f"backend {name!r} unavailable, skipping")
            continue
        times, curv, report = run_stages(cfg, suite_cfg, pts, args.repeats)
        results[name] = times
        data[name] = curv
        print(f"[{name}] curvature batch   {times['curvature']:8.4f} s")
        print(f"[{name}] ricci residual    {times['ricci']:8.4f} s")
        print(f"[{name}] verification suite{times['suite']:8.4f} s  "
              f"(verdict: {report.verdict})")
        print()

    if len(results) == 2:
        print("=" * 64)
        print(f"{'stage':<24}{'numpy':>10}{'numba':>10}{'speedup':>10}")
        print("-" * 64)
        for stage, label in (("curvature", "curvature batch"),
                             ("ricci", "ricci residual"),
                             ("suite", "verification suite")):
            tn = results["numpy"][stage]
            tb = results["numba"][stage]
            print(f"{label:<24}{tn:>9.4f}s{tb:>9.4f}s{tn / tb:>9.1f}x")
        # both backends must agree to roundoff on the same inputs
        a = data["numpy"]["riem_norm2"]
        b = data["numba"]["riem_norm2"]
        rel = np.max(np.abs(a - b) / (1.0 + np.abs(a)))
        print("-" * 64)
        print(f"cross-backend |riem|^2 rel diff: {rel:.3e}")
        assert rel < 1e-12


if __name__ == "__main__":
    main()
