"""Time the compiled kernels against the pure-Python fallback.

Run with ``python3 benchmarks/bench_kernels.py``.  Each workload is run
once per available backend and reported as best-of-``--repeat`` wall time.
"""
from __future__ import annotations

import argparse
import time
from fractions import Fraction

import numpy as np

from alphahurwitz import kernels
from alphahurwitz.cf_core import Alpha
from alphahurwitz.partition import boundary_orbit_oracle, cell_decomposition, closure, verify_markov
from alphahurwitz.partition.cells import circle_keys

ALPHA = (Fraction(2, 3), Fraction(1, 2))


def best_of(fn, repeat: int) -> float:
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return min(times)


def workloads(alpha: Alpha, grid: int, samples: int):
    cs, _ = closure(alpha)
    cells = {}
    circles = cs.as_array()
    keys = circle_keys(circles.shape[0])
    fcircles = circles.astype(np.float64)
    rng = np.random.default_rng(0)
    zr = rng.uniform(float(alpha.a1) - 1, float(alpha.a1), 10**5)
    zi = rng.uniform(float(alpha.a2) - 1, float(alpha.a2), 10**5)
    D = 2 * grid
    XX, YY = (m.ravel() for m in np.meshgrid(np.arange(-D, D, 2, dtype=np.int64) + 1, np.arange(-D, D, 2, dtype=np.int64) + 1))

    def grid_run(b):
        kernels.grid_hash(circles, XX, YY, D, keys, backend=b)

    def dist_run(b):
        kernels.float_hash_dist(fcircles, zr, zi, keys, backend=b)

    def closure_run(b):
        closure(alpha, backend=b)

    def cells_run(b):
        cells[b] = cell_decomposition(cs, alpha, grid, backend=b)

    def oracle_run(b):
        boundary_orbit_oracle(alpha, cs, samples, backend=b)

    def markov_run(b):
        verify_markov(cells[b], alpha, 200, backend=b)

    return [
        (f"grid_hash, {XX.size} lattice points", grid_run),
        (f"float_hash_dist, {zr.size} points", dist_run),
        ("closure (expand_node, meets_box)", closure_run),
        (f"cell decomposition, grid {grid} (grid_hash)", cells_run),
        (f"boundary oracle, {samples} samples (float_hash_dist)", oracle_run),
        ("markov check, 200 per cell (float_hash_dist)", markov_run),
    ]


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--grid", type=int, default=300)
    parser.add_argument("--samples", type=int, default=2000)
    parser.add_argument("--repeat", type=int, default=3)
    args = parser.parse_args(argv)

    backends = kernels.available_backends()
    if "cython" not in backends:
        print("compiled extension not built; timing the Python fallback only")
    rows = []
    for name, fn in workloads(Alpha(*ALPHA), args.grid, args.samples):
        rows.append((name, {b: best_of(lambda: fn(b), args.repeat) for b in backends}))

    width = max(len(name) for name, _ in rows)
    print(f"{'workload':<{width}}  " + "  ".join(f"{b:>9}" for b in backends) + ("    speedup" if len(backends) > 1 else ""))
    for name, t in rows:
        line = f"{name:<{width}}  " + "  ".join(f"{t[b]:8.3f}s" for b in backends)
        if len(backends) > 1:
            line += f"  {t['python'] / t['cython']:8.1f}x"
        print(line)
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
