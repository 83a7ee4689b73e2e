"""Acceptance suite: ten criteria, one PASS/FAIL line each.

Run with ``pytest tests/test_acceptance.py`` (lines appear in the terminal
summary) or ``python tests/test_acceptance.py``.  Criterion 7 runs the
18-colour K_6 x K_6 search (about 40 s compiled).  Criterion 9 is sized by
ROOKCOLOR_AUDIT_CUTS (default 10000) and ROOKCOLOR_AUDIT_DEPTH (default 2).
"""
import os
import random
import sys
import time
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from oracles import LAYOUTS, feasible_palettes, neighbourhood_counts, plant  # noqa: E402
from rookcolor.bounds import (excess_closed, feasible_frequency_profiles,  # noqa: E402
                              neighborhood_size, upper_bound)
from rookcolor.core import ColorMatrix, in_family, read_matrix, type_of  # noqa: E402
from rookcolor.lemmas import (FORBIDDEN_TYPES, forbidden_type_violations,  # noqa: E402
                              qset_generate, verify_claim2_universally)
from rookcolor.refutation import audit_cuts, refute, run_lemma_search  # noqa: E402
from rookcolor.search import (SearchConfig, Status, achromatic, extend_coloring,  # noqa: E402
                              find_coloring)
from rookcolor.symmetry import apply, canonical_form  # noqa: E402

RESULTS: dict[int, tuple[bool, str]] = {}
AUDIT_CUTS = int(os.environ.get("ROOKCOLOR_AUDIT_CUTS", "10000"))
AUDIT_DEPTH = int(os.environ.get("ROOKCOLOR_AUDIT_DEPTH", "2"))
WITNESS_FILE = os.environ.get("ROOKCOLOR_WITNESS66")
SMALL = [(p, q) for p in range(1, 13) for q in range(1, 13) if p * q <= 12]


def record(n, ok, detail):
    RESULTS[n] = (ok, detail)
    return ok


def crit1():
    closed = all(excess_closed(l, 6, 7, 19) == -l * l + 12 * l - 18 for l in range(1, 7))
    bad = []
    for p in range(1, 8):
        for q in range(1, 8):
            for l, seen in neighbourhood_counts(p, q).items():
                if seen != {neighborhood_size(l, p, q)}:
                    bad.append((p, q, l))
    return record(1, closed and not bad,
                  f"excess polynomial {'ok' if closed else 'MISMATCH'}, "
                  f"{len(bad)} neighbourhood mismatches over p,q<=7")


def crit2():
    ok = verify_claim2_universally()
    return record(2, ok, "all scoped profiles satisfy the ten statements")


PAPER_QSETS = {
    (7, 5): set(),
    (7, 4): {(3, 2, 1), (2, 2, 2)},
    (6, 5): {(0,)},
    (6, 4): {(2, 2, 0), (2, 1, 1), (1, 1, 2)},
    (6, 3): {(3, 3, 1, 1, 0), (3, 2, 2, 1, 0), (3, 2, 1, 1, 1), (3, 1, 1, 1, 2),
             (2, 2, 2, 2, 0), (2, 2, 2, 1, 1), (2, 2, 1, 1, 2), (2, 1, 1, 1, 3)},
    (5, 4): {(1, 1, 0)},
    (5, 3): {(3, 2, 1, 0, 0), (3, 1, 1, 1, 0), (2, 2, 2, 0, 0), (2, 2, 1, 1, 0),
             (2, 1, 1, 2, 0), (2, 1, 1, 1, 1), (1, 1, 1, 3, 0), (1, 1, 1, 2, 1)},
}


def crit3():
    wrong = []
    for key, expect in PAPER_QSETS.items():
        got = [s.values for s in qset_generate(*key)]
        if set(got) != expect or len(got) != len(expect):
            wrong.append(key)
    return record(3, not wrong, f"{len(PAPER_QSETS) - len(wrong)}/7 listed sets reproduced")


def crit4():
    ok = (feasible_frequency_profiles(6, 6, 19) == [] and upper_bound(6, 6) == 18
          and len(feasible_frequency_profiles(6, 7, 19)) > 0)
    return record(4, ok, f"|P(6,6,19)|=0, ub(6,6)={upper_bound(6, 6)}, "
                         f"|P(6,7,19)|={len(feasible_frequency_profiles(6, 7, 19))}")


_ORACLE = {}


def oracle(p, q):
    key = (min(p, q), max(p, q))
    if key not in _ORACLE:
        _ORACLE[key] = feasible_palettes(*key)
    return _ORACLE[key]


def crit5():
    start = time.monotonic()
    mismatches = []
    runs = 0
    for p, q in SMALL:
        for k in range(1, p * q + 1):
            out = find_coloring(p, q, k)
            runs += 1
            if (out.status is Status.FOUND) != (k in oracle(p, q)) or \
                    out.status is Status.BUDGET_EXCEEDED:
                mismatches.append((p, q, k))
    pins = [(1, n) for n in range(1, 13)] + [(2, 2), (2, 3), (3, 3), (2, 4)]
    wrong = [pq for pq in pins if achromatic(*pq).value != oracle(*pq)[-1]]
    elapsed = time.monotonic() - start
    return record(5, not mismatches and not wrong and elapsed < 300,
                  f"{runs} instances, {len(mismatches)} status mismatches, "
                  f"{len(wrong)} achromatic mismatches, {elapsed:.1f}s")


def crit6():
    gaps = []
    for p, q in SMALL:
        found = [k for k in range(1, p * q + 1) if find_coloring(p, q, k).found]
        if found != list(range(max(p, q), found[-1] + 1)):
            gaps.append((p, q))
    return record(6, not gaps, f"{len(SMALL)} shapes, {len(gaps)} non-interval feasibility sets")


def crit7():
    if WITNESS_FILE:
        m66 = read_matrix(WITNESS_FILE)
        source = f"supplied file {WITNESS_FILE}"
    else:
        out = find_coloring(6, 6, 18, SearchConfig(time_budget=3600))
        if out.status is not Status.FOUND:
            return record(7, False, f"search ended {out.status.value} "
                                    f"after {out.wall_time:.0f}s; supply ROOKCOLOR_WITNESS66")
        m66 = out.witness
        source = f"search, {out.nodes_expanded} nodes, {out.wall_time:.1f}s"
    m67 = extend_coloring(m66)
    ok = in_family(m66, 6, 6, 18) and in_family(m67, 6, 7, 18)
    return record(7, ok, f"18-colouring of K6xK6 ({source}) extended to K6xK7")


def crit8():
    rng = random.Random(2024)
    misses = bad_replays = trials = 0
    for name, layout in LAYOUTS.items():
        colours = tuple(sorted(layout))
        for _ in range(1000):
            m = ColorMatrix(6, 7, 19, tuple(map(tuple, plant(layout, rng))))
            found = forbidden_type_violations(m)
            trials += 1
            if not any(v.lemma_id == name and v.colours == colours for v in found):
                misses += 1
            bad_replays += sum(type_of(m, v.colours) != FORBIDDEN_TYPES[v.lemma_id]
                               for v in found)
    return record(8, misses == 0 and bad_replays == 0,
                  f"{trials} planted trials, {misses} false negatives, "
                  f"{bad_replays} failed replays")


def crit9():
    statuses = set()
    for seed in range(3):
        statuses.add(refute(SearchConfig(node_budget=200_000, seed=seed)).status)
        statuses.add(refute(SearchConfig(node_budget=20_000, seed=seed,
                                         use_lemma_pruning=True)).status)
    statuses.add(refute(SearchConfig(time_budget=1.0, use_lemma_pruning=True)).status)
    honest = statuses <= {Status.BUDGET_EXCEEDED, Status.EXHAUSTED}
    out = run_lemma_search(SearchConfig(use_lemma_pruning=True), 0.0,
                           sample_cuts=AUDIT_CUTS, cut_limit=AUDIT_CUTS)
    honest &= out.status is not Status.FOUND
    report = audit_cuts(out.cuts, depth=AUDIT_DEPTH)
    enough = report.cuts >= AUDIT_CUTS
    return record(9, honest and enough and report.passed,
                  f"statuses {sorted(s.value for s in statuses)}; audit depth {AUDIT_DEPTH}: "
                  f"{report.replayed}/{report.cuts} cuts replayed, {report.nodes} nodes, "
                  f"{len(report.failures)} failures")


def crit10():
    rng = random.Random(99)
    failures = 0
    n = 10_000
    for _ in range(n):
        p, q = rng.randint(1, 4), rng.randint(1, 5)
        k = p + q - 1 + rng.randrange(3)
        rows = [[0] * q for _ in range(p)]
        for i in range(p):
            for j in range(q):
                banned = set(rows[i]) | {rows[ii][j] for ii in range(p)}
                rows[i][j] = rng.choice([c for c in range(1, k + 1) if c not in banned])
        m = ColorMatrix(p, q, k, tuple(map(tuple, rows)))
        rho, sigma = rng.sample(range(p), p), rng.sample(range(q), q)
        pi = [0] + rng.sample(range(1, k + 1), k)
        cf = canonical_form(m)
        if canonical_form(apply(m, rho, sigma, pi)).matrix != cf.matrix:
            failures += 1
        elif canonical_form(cf.matrix).matrix != cf.matrix:
            failures += 1
        elif cf.certificate.apply(m) != cf.matrix:
            failures += 1
    return record(10, failures == 0, f"{n} random matrices up to 4x5, {failures} failures")


CRITERIA = [crit1, crit2, crit3, crit4, crit5, crit6, crit7, crit8, crit9, crit10]


@pytest.mark.parametrize("number", range(1, 11))
def test_criterion(number):
    ok = CRITERIA[number - 1]()
    assert ok, RESULTS[number][1]


def line(n):
    ok, detail = RESULTS[n]
    return f"criterion {n:2d}: {'PASS' if ok else 'FAIL'}  {detail}"


def summary_lines():
    return [line(n) for n in sorted(RESULTS)]


if __name__ == "__main__":
    for n, fn in enumerate(CRITERIA, start=1):
        fn()
        print(line(n), flush=True)
    sys.exit(0 if all(ok for ok, _ in RESULTS.values()) else 1)
