"""Time the compiled and pure-Python ball-scan kernels on the same workload.

    python benchmarks/bench_ballscan.py [--prime 11] [--radius 5] [--repeat 3]

Each run counts the vertices of a ball fixed by the generators of a steered
blueprint, so the whole ball is visited.  Both kernels must return the same
count; the script exits nonzero otherwise.
"""

from __future__ import annotations

import argparse
import sys
import time

from fuchsq import _ballscan_py, ballscan
from fuchsq.btree import ball_size, prepare
from fuchsq.construct import ConstructionInput, construct_group


def workload(p: int, radius: int):
    """Generators of a fixed blueprint that have even determinant valuation at p."""
    b = construct_group(ConstructionInput.make([0, 1, 2], 3))
    prepared = (prepare(g.proj, p, radius) for g in b.generators)
    return [g for g in prepared if g is not None]


def best_of(fn, repeat: int) -> tuple[float, int]:
    times, result = [], None
    for _ in range(repeat):
        t0 = time.perf_counter()
        result = fn()
        times.append(time.perf_counter() - t0)
    return min(times), result


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--prime", type=int, default=11)
    ap.add_argument("--radius", type=int, default=5)
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args(argv)
    p, r = args.prime, args.radius

    gens = workload(p, r)
    print(f"ball of radius {r} at p={p}: {ball_size(p, r)} vertices, {len(gens)} element(s)")
    t_py, n_py = best_of(lambda: _ballscan_py.count_fixed(gens, p, r), args.repeat)
    print(f"python    {t_py:9.4f} s   fixed={n_py}")
    if ballscan.compiled_backend is None:
        print("compiled  unavailable (extension not built)")
        return 0
    t_c, n_c = best_of(lambda: ballscan.compiled_backend.count_fixed(gens, p, r), args.repeat)
    print(f"compiled  {t_c:9.4f} s   fixed={n_c}   speedup x{t_py / t_c:.1f}")
    if n_c != n_py:
        print("kernels disagree", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
