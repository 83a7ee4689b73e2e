"""Compare the compiled and pure-Python search kernels.

    python benchmarks/bench_kernels.py [--quick] [--repeat N]

Both kernels must report identical node counts; the script exits non-zero
if they ever disagree.
"""
import argparse
import random
import statistics
import sys
import time

from rookcolor import _backend
from rookcolor.core import ColorMatrix
from rookcolor.search import SearchConfig, find_coloring
from rookcolor.symmetry import canonical_form

# (p, q, k, node budget); a budget of 0 means run to completion
SEARCHES = [
    (3, 4, 6, 0),
    (4, 4, 7, 0),
    (4, 5, 9, 0),
    (5, 5, 11, 300_000),
    (6, 6, 18, 300_000),
]
QUICK = SEARCHES[:3]


def _random_proper(p, q, rng):
    k = max(p, q) + rng.randrange(4)
    rows = [[(i + j) % k + 1 for j in range(q)] for i in range(p)]
    perm = list(range(1, k + 1))
    rng.shuffle(perm)
    return ColorMatrix.from_rows([[perm[x - 1] for x in r] for r in rows], k)


def time_search(p, q, k, budget, backend, repeat):
    times = []
    for _ in range(repeat):
        out = find_coloring(p, q, k, SearchConfig(node_budget=budget, backend=backend))
        times.append(out.wall_time)
    return out, statistics.median(times)


def time_canonical(backend, n, seed=1):
    rng = random.Random(seed)
    mats = [_random_proper(4, 5, rng) for _ in range(n)]
    t = time.perf_counter()
    for m in mats:
        canonical_form(m, backend=backend)
    return time.perf_counter() - t


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--quick", action="store_true")
    ap.add_argument("--repeat", type=int, default=1)
    args = ap.parse_args(argv)
    if not _backend.COMPILED:
        print("compiled kernel not available; rebuild with `pip install -e .`")
        return 1

    print(f"{'instance':<14}{'status':<17}{'nodes':>10}{'cython s':>10}{'python s':>10}"
          f"{'speedup':>9}")
    bad = False
    for p, q, k, budget in (QUICK if args.quick else SEARCHES):
        c_out, c_t = time_search(p, q, k, budget, "cython", args.repeat)
        p_out, p_t = time_search(p, q, k, budget, "python", args.repeat)
        same = (c_out.status, c_out.nodes_expanded) == (p_out.status, p_out.nodes_expanded)
        bad |= not same
        flag = "" if same else "  MISMATCH"
        print(f"({p},{q},{k})".ljust(14) + f"{c_out.status.value:<17}{c_out.nodes_expanded:>10}"
              f"{c_t:>10.3f}{p_t:>10.3f}{p_t / max(c_t, 1e-9):>8.1f}x{flag}")

    n = 50 if args.quick else 500
    c_t, p_t = time_canonical("cython", n), time_canonical("python", n)
    print(f"canonical 4x5 x{n}".ljust(31) + f"{c_t:>10.3f}{p_t:>10.3f}{p_t / c_t:>8.1f}x")
    return 1 if bad else 0


if __name__ == "__main__":
    sys.exit(main())
