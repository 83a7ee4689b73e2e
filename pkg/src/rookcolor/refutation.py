"""Lemma-guided search for a complete 19-colouring of K_6 x K_7.

No such colouring exists, so the only honest outcomes are EXHAUSTED and
BUDGET_EXCEEDED.  The structural predicates in ``lemmas`` are proven only for
that hypothetical matrix and only for colours that end with frequency exactly
two.  The search therefore branches whenever a colour reaches two copies:
either it is *closed* (never used again) or it must reach a third copy.
Lemma predicates only look at closed colours, whose cells can no longer change.
"""
from __future__ import annotations

import random
import time
from dataclasses import dataclass, field
from itertools import combinations
from typing import Optional

from . import _engine
from .bounds import frequency_envelope
from .core import ColorMatrix, check_family
from .lemmas import (CAPS, FORBIDDEN_TYPES, LEMMA_SCOPE, LemmaViolation,
                     claim2_holds)
from .core import FrequencyProfile

_FORBIDDEN = {(sig.row_part, sig.col_part): name for name, sig in FORBIDDEN_TYPES.items()}
ROW_CAP, COL_CAP = "row-pair-share<=2", "col-pair-share<=2"
ENVELOPE, MAX_ROW = "frequency-envelope", "some-row-has-5-two-colours"


class RefutationAlarm(RuntimeError):
    """A complete 19-colouring of K_6 x K_7 was reported; this is a bug."""

    def __init__(self, witness: ColorMatrix, path: Optional[str]):
        self.witness = witness
        self.path = path
        super().__init__(f"search reported a witness (dumped to {path})")


@dataclass
class Cut:
    grid: tuple[int, ...]       # row-major, 0 = empty
    depth: int                  # number of assigned cells (column-major prefix)
    closed: tuple[int, ...]
    violation: LemmaViolation


def _signature(cells):
    rows, cols = {}, {}
    for i, j in cells:
        rows[i] = rows.get(i, 0) + 1
        cols[j] = cols.get(j, 0) + 1
    return (tuple(sorted(rows.values(), reverse=True)),
            tuple(sorted(cols.values(), reverse=True)))


def closed_violations(grid, q, closed, colour=None):
    """Lemma violations among closed colours (only those involving ``colour`` if given)."""
    where: dict[int, list[tuple[int, int]]] = {c: [] for c in closed}
    for idx, x in enumerate(grid):
        if x in where:
            where[x].append(divmod(idx, q))
    out = []
    focus = [colour] if colour is not None else sorted(where)
    others = sorted(where)
    seen = set()
    for c in focus:
        rows_c = sorted({i for i, _ in where[c]})
        cols_c = sorted({j for _, j in where[c]})
        same_rows = [d for d in others if sorted({i for i, _ in where[d]}) == rows_c]
        same_cols = [d for d in others if sorted({j for _, j in where[d]}) == cols_c]
        if len(same_rows) > CAPS[ROW_CAP][1]:
            out.append(LemmaViolation(ROW_CAP, tuple(same_rows), tuple(rows_c), "row"))
        if len(same_cols) > CAPS[COL_CAP][1]:
            out.append(LemmaViolation(COL_CAP, tuple(same_cols), tuple(cols_c), "col"))
        rest = [d for d in others if d != c]
        for d in rest:
            key = tuple(sorted((c, d)))
            if key in seen:
                continue
            seen.add(key)
            name = _FORBIDDEN.get(_signature(where[c] + where[d]))
            if name:
                out.append(LemmaViolation(name, key))
        for d, e in combinations(rest, 2):
            key = tuple(sorted((c, d, e)))
            if key in seen:
                continue
            seen.add(key)
            name = _FORBIDDEN.get(_signature(where[c] + where[d] + where[e]))
            if name:
                out.append(LemmaViolation(name, key))
    return out


def violation_holds(grid, q, closed, v: LemmaViolation) -> bool:
    """Replay one violation on a (partial) grid with the given closed colours."""
    if not set(v.colours) <= set(closed):
        return False
    cells = [divmod(idx, q) for idx, x in enumerate(grid) if x in v.colours]
    if len(cells) != 2 * len(v.colours):
        return False
    if v.lemma_id in _FORBIDDEN.values():
        sig = FORBIDDEN_TYPES[v.lemma_id]
        return _signature(cells) == (sig.row_part, sig.col_part)
    axis, limit = CAPS[v.lemma_id]
    pos = {}
    for i, j in cells:
        pos.setdefault(grid[i * q + j], []).append(i if axis == "row" else j)
    lines = {tuple(sorted(ls)) for ls in pos.values()}
    return len(lines) == 1 and tuple(lines.pop()) == tuple(v.lines) and len(pos) > limit


class LemmaEngine(_engine.Engine):
    """Generic engine plus frequency closure and the lemma pruners.

    ``lemmas=False`` and ``min_row_twos=0`` leave only the closure branching
    and the profile-dominance test, which are valid on every instance; the
    tests use that mode to compare against the brute-force oracle.
    """

    def __init__(self, *args, vectors=(), sample_cuts=0, seed=0, lemmas=True,
                 min_row_twos=5, cut_limit=0, **kw):
        super().__init__(*args, **kw)
        self.cut_limit = cut_limit
        self.lemmas = lemmas
        self.min_row_twos = min_row_twos
        self.vectors = [v for v in vectors]
        self.closed = [False] * (self.k + 1)
        self.nclosed = 0
        self.lemma_prunes = {name: 0 for name in
                             list(FORBIDDEN_TYPES) + [ROW_CAP, COL_CAP, ENVELOPE, MAX_ROW]}
        self.sample_cuts = sample_cuts
        self.cuts: list[Cut] = []
        self.cut_events = 0
        self.rng = random.Random(seed)
        self.depth = 0

    def envelope_ok(self):
        lbs = sorted((max(self.cnt[c], self.need[c]) for c in range(1, self.k + 1)
                      if not self.closed[c]), reverse=True)
        for v in self.vectors:
            if (v[1] if len(v) > 1 else 0) < self.nclosed:
                continue
            slots = []
            for l in range(len(v), 0, -1):
                n = v[l - 1] - (self.nclosed if l == 2 else 0)
                slots.extend([l] * n)
            if all(s >= b for s, b in zip(slots, lbs)):
                return True
        return False

    def max_row_ok(self):
        if not self.min_row_twos:
            return True
        q = self.q
        for i in range(self.p):
            room = 0
            for j in range(q):
                d = self.grid[i * q + j]
                if d == 0 or self.closed[d] or self.cnt[d] == 1:
                    room += 1
            if room >= self.min_row_twos:
                return True
        return False

    def _record(self, t, colour, violations):
        for v in violations:
            self.lemma_prunes[v.lemma_id] += 1
        self.cut_events += 1
        if self.cut_limit and self.cut_events > self.cut_limit:
            raise _engine._Budget
        if not self.sample_cuts:
            return
        closed = tuple(c for c in range(1, self.k + 1) if self.closed[c])
        cut = Cut(tuple(self.grid), t + 1, closed, violations[0])
        if len(self.cuts) < self.sample_cuts:
            self.cuts.append(cut)
        else:
            slot = self.rng.randrange(self.cut_events)
            if slot < self.sample_cuts:
                self.cuts[slot] = cut

    def _descend(self, t):
        if not self.envelope_ok():
            self.lemma_prunes[ENVELOPE] += 1
            return
        if not self.max_row_ok():
            self.lemma_prunes[MAX_ROW] += 1
            return
        self.dfs(t + 1)

    def branch(self, t, i, j, c):
        if self.cnt[c] != 2:
            self._descend(t)
            return
        # closed: c keeps exactly two copies
        self.closed[c] = True
        self.nclosed += 1
        old_cap = self.cap[c]
        self.cap[c] = 2
        if not self.colour_ok(c):
            # the tighter cap alone already starves c of partners
            self.prunes[_engine.R_COLOUR] += 1
        else:
            bad = []
            if self.lemmas:
                closed = [d for d in range(1, self.k + 1) if self.closed[d]]
                bad = closed_violations(self.grid, self.q, closed, c)
            if bad:
                self._record(t, c, bad)
            else:
                self._descend(t)
        self.cap[c] = old_cap
        self.nclosed -= 1
        self.closed[c] = False
        # open: c needs a third copy
        old_need = self.need[c]
        new_need = max(old_need, 3)
        # deficit is the sum of max(0, need - cnt), and cnt is 2 here
        delta = (new_need - 2) - max(0, old_need - 2)
        self.need[c] = new_need
        self.deficit += delta
        if self.deficit <= self.n - t - 1:
            self._descend(t)
        else:
            self.prunes[_engine.R_MINF] += 1
        self.deficit -= delta
        self.need[c] = old_need


def lemma_vectors():
    p, q, k = LEMMA_SCOPE
    env = frequency_envelope(p, q, k)
    vectors = [v for v in env.vectors
               if claim2_holds(FrequencyProfile.from_vector(LEMMA_SCOPE, v))]
    return env, vectors


def run_lemma_search(config, deadline, sample_cuts: int = 0, cut_limit: int = 0):
    """Lemma-pruned search; ``cut_limit`` stops (as BUDGET_EXCEEDED) after that many cuts."""
    from .search import SearchOutcome, Status, _STATUS, colour_priority
    p, q, k = LEMMA_SCOPE
    start = time.monotonic()
    env, vectors = lemma_vectors()
    eng = LemmaEngine(p, q, k, env.min_freq, env.max_freq, env.max_at_least,
                      colour_priority(k, config.seed), symmetry=config.symmetry_breaking,
                      node_budget=config.node_budget, deadline=deadline, max_solutions=1,
                      vectors=vectors, sample_cuts=sample_cuts, seed=config.seed,
                      cut_limit=cut_limit)
    code, sols, nodes, counts = eng.run()
    prunes = dict(zip(_engine.RULES, counts))
    prunes.update({k_: v for k_, v in eng.lemma_prunes.items() if v})
    status = _STATUS[code]
    witness = None
    if sols:
        witness = ColorMatrix(p, q, k, tuple(tuple(sols[0][i * q:(i + 1) * q]) for i in range(p)))
    out = SearchOutcome(status, witness, nodes, time.monotonic() - start, LEMMA_SCOPE,
                        prunes, "python")
    out.cuts = eng.cuts
    out.cut_events = eng.cut_events
    return out


def refute(config=None, sample_cuts: int = 0, alarm_path: Optional[str] = "refute_alarm.mat"):
    """Search for a complete 19-colouring of K_6 x K_7; FOUND raises RefutationAlarm."""
    from .search import SearchConfig, Status, find_coloring
    from .core import write_matrix
    config = config or SearchConfig()
    p, q, k = LEMMA_SCOPE
    if config.use_lemma_pruning:
        start = time.monotonic()
        deadline = start + config.time_budget if config.time_budget else 0.0
        out = run_lemma_search(config, deadline, sample_cuts)
    else:
        out = find_coloring(p, q, k, config)
    if out.status is Status.FOUND:
        if alarm_path:
            write_matrix(alarm_path, out.witness, ["refutation alarm: audit this matrix",
                                                   f"valid={check_family(out.witness)}"])
        raise RefutationAlarm(out.witness, alarm_path)
    return out


# --- pruning-soundness audit ----------------------------------------------------

@dataclass
class AuditReport:
    cuts: int = 0
    replayed: int = 0
    nodes: int = 0
    completions: int = 0
    failures: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.failures and self.replayed == self.cuts


def audit_cut(cut: Cut, depth: int = 2, node_limit: int = 20000) -> tuple[bool, int, int]:
    """Re-search the subtree under a lemma cut with only the generic pruner.

    Every node reached within ``depth`` further cells must still carry the
    violation (closed colours cannot move), and no total matrix reached may be
    a complete colouring.  Returns (ok, nodes visited, total leaves).
    """
    p, q, k = LEMMA_SCOPE
    env = frequency_envelope(p, q, k)
    eng = _engine.Engine(p, q, k, env.min_freq, env.max_freq, env.max_at_least,
                         list(range(k + 1)), symmetry=True)
    order = eng.order
    prefix = [cut.grid[i * q + j] for i, j in order[:cut.depth]]
    if not eng.replay(prefix):
        return False, 0, 0
    for c in cut.closed:
        eng.cap[c] = 2
    if not violation_holds(eng.grid, q, cut.closed, cut.violation):
        return False, 0, 0
    stats = [0, 0]

    def rec(t, left):
        stats[0] += 1
        if not violation_holds(eng.grid, q, cut.closed, cut.violation):
            return False
        if t == eng.n:
            stats[1] += 1
            m = ColorMatrix(p, q, k, tuple(tuple(eng.grid[i * q:(i + 1) * q]) for i in range(p)))
            return not check_family(m)
        if left == 0 or stats[0] > node_limit:
            return True
        i, j = order[t]
        for c in eng.candidates(i, j):
            if not eng.symmetry_ok(i, j, c):
                continue
            was_new = c > eng.nused
            eng.assign(i, j, c)
            ok = True
            if eng.check(t, i, j, c) < 0:
                ok = rec(t + 1, left - 1)
            eng.unassign(i, j, c, was_new)
            if not ok:
                return False
        return True

    ok = rec(cut.depth, depth)
    return ok, stats[0], stats[1]


def audit_cuts(cuts, depth: int = 2) -> AuditReport:
    report = AuditReport(cuts=len(cuts))
    for n, cut in enumerate(cuts):
        ok, nodes, complete = audit_cut(cut, depth)
        report.nodes += nodes
        report.completions += complete
        if ok:
            report.replayed += 1
        else:
            report.failures.append(n)
    return report
