import random
from dataclasses import replace

import pytest

from oracles import LAYOUTS, feasible_palettes, plant
from rookcolor import refutation
from rookcolor._engine import Engine
from rookcolor.bounds import frequency_envelope
from rookcolor.core import ColorMatrix, colour_frequencies
from rookcolor.lemmas import LemmaViolation, cap_violations, forbidden_type_violations
from rookcolor.refutation import (LemmaEngine, RefutationAlarm, audit_cut, audit_cuts,
                                  closed_violations, lemma_vectors, refute,
                                  run_lemma_search, violation_holds)
from rookcolor.search import SearchConfig, SearchOutcome, Status


@pytest.fixture(scope="module")
def sampled():
    cfg = SearchConfig(node_budget=60_000, use_lemma_pruning=True)
    return run_lemma_search(cfg, 0.0, sample_cuts=400)


def test_lemmas_off_reports_budget():
    out = refute(SearchConfig(node_budget=10**6))
    assert out.status is Status.BUDGET_EXCEEDED


def test_lemmas_on_reports_budget(sampled):
    assert sampled.status is Status.BUDGET_EXCEEDED
    assert sampled.witness is None
    lemma_rules = [r for r in sampled.prunes if r.startswith("(") or "share" in r]
    assert sum(sampled.prunes[r] for r in lemma_rules) > 0
    assert sampled.cut_events >= len(sampled.cuts) > 0


def test_time_budget():
    out = refute(SearchConfig(time_budget=0.5, use_lemma_pruning=True))
    assert out.status is Status.BUDGET_EXCEEDED


def test_claim2_filters_profiles():
    env, vectors = lemma_vectors()
    assert vectors and set(vectors) <= set(env.vectors)


@pytest.mark.parametrize("p,q", [(1, 4), (2, 3), (2, 4), (2, 5), (2, 6), (3, 3), (3, 4)])
def test_closure_branching_is_exact(p, q):
    """Without the instance-specific pruners the engine must agree with the oracle."""
    feasible = feasible_palettes(p, q)
    for k in range(q, p * q + 1):
        env = frequency_envelope(p, q, k)
        if env.empty:
            assert k not in feasible
            continue
        eng = LemmaEngine(p, q, k, env.min_freq, env.max_freq, env.max_at_least,
                          list(range(k + 1)), vectors=env.vectors, lemmas=False,
                          min_row_twos=0, max_solutions=0)
        code, sols, _, _ = eng.run()
        assert bool(sols) == (k in feasible), k


@pytest.mark.parametrize("p,q,k", [(4, 4, 6), (4, 4, 8)])
def test_closure_branching_enumerates_same_solutions(p, q, k):
    env = frequency_envelope(p, q, k)
    args = (p, q, k, env.min_freq, env.max_freq, env.max_at_least, list(range(k + 1)))
    lemma = LemmaEngine(*args, vectors=env.vectors, lemmas=False, min_row_twos=0,
                        max_solutions=0)
    plain = Engine(*args, max_solutions=0)
    lemma.run()
    plain.run()
    assert plain.solutions and sorted(lemma.solutions) == sorted(plain.solutions)


class TestAudit:
    def test_sampled_cuts_replay(self, sampled):
        report = audit_cuts(sampled.cuts, depth=2)
        assert report.passed and report.replayed == len(sampled.cuts)
        assert report.nodes >= len(sampled.cuts)

    def test_deeper_audit(self, sampled):
        report = audit_cuts(sampled.cuts[:40], depth=4)
        assert report.passed

    def test_audit_catches_a_bogus_cut(self, sampled):
        cut = sampled.cuts[0]
        others = [c for c in range(1, 20) if c not in cut.closed][:2]
        bogus = replace(cut, violation=LemmaViolation("(1^4, 2^2)", tuple(others)))
        ok, _, _ = audit_cut(bogus)
        assert not ok
        assert audit_cuts([bogus]).failures == [0]

    def test_cut_violations_hold(self, sampled):
        for cut in sampled.cuts:
            assert violation_holds(cut.grid, 7, cut.closed, cut.violation)


def test_closed_scan_matches_matrix_scan():
    rng = random.Random(12)
    for name, layout in LAYOUTS.items():
        for _ in range(10):
            m = ColorMatrix(6, 7, 19, tuple(map(tuple, plant(layout, rng))))
            twos = sorted(c for c, n in colour_frequencies(m).items() if n == 2)
            grid = [x for row in m.cells for x in row]
            fast = {(v.lemma_id, tuple(sorted(v.colours))) for v in closed_violations(grid, 7, twos)}
            slow = {(v.lemma_id, v.colours) for v in forbidden_type_violations(m)}
            slow |= {(v.lemma_id, v.colours) for v in cap_violations(m)
                     if v.lemma_id != "row-pair-share<=3"}
            assert fast == slow


def test_found_raises_alarm(monkeypatch, tmp_path):
    fake = ColorMatrix(6, 7, 19, tuple(tuple(range(1 + i, 8 + i)) for i in range(6)))

    def bogus(config, deadline, sample_cuts=0):
        return SearchOutcome(Status.FOUND, fake, 1, 0.0, (6, 7, 19))

    monkeypatch.setattr(refutation, "run_lemma_search", bogus)
    path = tmp_path / "alarm.mat"
    with pytest.raises(RefutationAlarm):
        refute(SearchConfig(use_lemma_pruning=True), alarm_path=str(path))
    assert path.exists() and "audit" in path.read_text()
