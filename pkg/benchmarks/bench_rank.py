"""Compare the compiled and pure-Python rank kernels.

    python3 benchmarks/bench_rank.py [--repeat N]

Workloads: coboundary blocks of real sheaves (sparse, small entries) and
random dense integer matrices.  The compiled column times the dispatching
entry point, which retries in Python when int64 elimination overflows; the
last column counts those fallbacks.  Both paths must agree on every rank.
"""

from __future__ import annotations

import argparse
import random
import time
from fractions import Fraction
from math import lcm

from orbhodge import _kernels, _rankpy
from orbhodge.clarke import ClarkePair, build_sheaf
from orbhodge.constructions import LatticePolytope, NefPartition, cayley_pair
from orbhodge.fans import StackyFan
from orbhodge.sheaf import _all_chains, _coboundaries

try:
    from orbhodge import _rankcore
except ImportError:
    _rankcore = None


def sheaf_blocks():
    """Coboundary blocks (rows cleared of denominators) from the cubic-curve pair and the F3 pair."""
    np_ = NefPartition(LatticePolytope(((1, 0), (0, 1), (-1, -1))), ((0, 1, 2), ()))
    f3 = StackyFan(2, ((1, 0), (0, 1), (-1, 0), (3, -1)), (2, 1, 1, 1), ((0, 1), (1, 2), (2, 3), (0, 3)))
    out = []
    for pair in (cayley_pair(np_), ClarkePair(f3, StackyFan.trivial(2))):
        for side in ("space", "mirror"):
            F = build_sheaf(pair, side)
            chains = _all_chains(F.poset)
            for b in F.bidegrees():
                sizes, diffs = _coboundaries(F, chains, b)
                for n, entries in enumerate(diffs):
                    if not entries:
                        continue
                    by_row: dict[int, dict[int, Fraction]] = {}
                    for (i, j), v in entries.items():
                        by_row.setdefault(i, {})[j] = Fraction(v)
                    rows = []
                    for r in by_row.values():
                        den = lcm(*(x.denominator for x in r.values()))
                        rows.append({j: int(x * den) for j, x in r.items()})
                    out.append((rows, sizes[n]))
    return out


def dense_random(n, m, count, seed=0):
    rng = random.Random(seed)
    out = []
    for _ in range(count):
        rows = [{j: rng.randint(-3, 3) for j in range(m)} for _ in range(n)]
        out.append(([{j: v for j, v in r.items() if v} for r in rows], m))
    return out


def overflows(work) -> int:
    n = 0
    for rows, ncols in work:
        try:
            _rankcore.rank_sparse(rows, ncols)
        except OverflowError:
            n += 1
    return n


def timed(fn, work, repeat):
    best = float("inf")
    ranks = None
    for _ in range(repeat):
        t0 = time.perf_counter()
        ranks = [fn(rows, ncols) for rows, ncols in work]
        best = min(best, time.perf_counter() - t0)
    return best, ranks


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()
    workloads = [
        ("sheaf coboundaries", sheaf_blocks()),
        ("dense 40x40", dense_random(40, 40, 20)),
        ("dense 12x12", dense_random(12, 12, 200)),
        ("dense 120x120", dense_random(120, 120, 3)),
    ]
    print(f"{'workload':<22}{'matrices':>9}{'python s':>11}{'cython s':>11}{'speedup':>9}{'fallback':>10}")
    for name, work in workloads:
        tp, rp = timed(_rankpy.rank_sparse, work, args.repeat)
        if _rankcore is None:
            print(f"{name:<22}{len(work):>9}{tp:>11.4f}{'n/a':>11}{'':>9}")
            continue
        tc, rc = timed(_kernels.rank_sparse, work, args.repeat)
        assert rp == rc, "kernels disagree"
        print(f"{name:<22}{len(work):>9}{tp:>11.4f}{tc:>11.4f}{tp / tc:>8.1f}x{overflows(work):>10}")


if __name__ == "__main__":
    main()
