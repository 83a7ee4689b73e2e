"""Exact decision search for complete proper colourings of K_p x K_q."""
from __future__ import annotations

import enum
import random
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Optional

import numpy as np
from scipy.optimize import linear_sum_assignment

from . import _backend, _engine
from .bounds import frequency_envelope, upper_bound
from .core import (ColorMatrix, MatrixError, check_family, in_family, is_proper)
from .lemmas import LEMMA_SCOPE


class Status(str, enum.Enum):
    FOUND = "FOUND"
    EXHAUSTED = "EXHAUSTED"
    BUDGET_EXCEEDED = "BUDGET_EXCEEDED"


_STATUS = {_engine.FOUND: Status.FOUND, _engine.EXHAUSTED: Status.EXHAUSTED,
           _engine.BUDGET: Status.BUDGET_EXCEEDED}


class ConfigError(ValueError):
    pass


class ExtensionError(MatrixError):
    pass


@dataclass
class SearchConfig:
    time_budget: float = 0.0      # seconds, 0 = unlimited
    node_budget: int = 0          # 0 = unlimited
    use_lemma_pruning: bool = False
    parallel_width: int = 1
    seed: int = 0
    symmetry_breaking: bool = True
    backend: str = "auto"         # auto | cython | python

    def check(self, p: int, q: int, k: int):
        if self.use_lemma_pruning and (min(p, q), max(p, q), k) != LEMMA_SCOPE:
            raise ConfigError(f"lemma pruning is only valid for instance {LEMMA_SCOPE}")
        if self.parallel_width < 1:
            raise ConfigError("parallel_width must be >= 1")
        if self.backend not in ("auto", "cython", "python"):
            raise ConfigError(f"unknown backend {self.backend!r}")


@dataclass
class SearchOutcome:
    status: Status
    witness: Optional[ColorMatrix]
    nodes_expanded: int
    wall_time: float
    instance: tuple[int, int, int] = (0, 0, 0)
    prunes: dict[str, int] = field(default_factory=dict)
    backend: str = ""
    solutions: list[ColorMatrix] = field(default_factory=list)

    @property
    def found(self) -> bool:
        return self.status is Status.FOUND


def colour_priority(k: int, seed: int) -> list[int]:
    """Tie-break rank per colour id; seed 0 keeps the natural order."""
    ranks = list(range(k + 1))
    if seed:
        tail = ranks[1:]
        random.Random(seed).shuffle(tail)
        ranks = [0] + tail
    return ranks


def _to_matrix(flat, p, q, k, transposed) -> ColorMatrix:
    m = ColorMatrix(p, q, k, tuple(tuple(flat[i * q:(i + 1) * q]) for i in range(p)))
    return m.transpose() if transposed else m


def _make_engine(p, q, k, env, config: SearchConfig, deadline, max_solutions, node_budget=None):
    cls = _backend.engine_class(p, q, k, config.backend)
    return cls(p, q, k, env.min_freq, env.max_freq, env.max_at_least,
               colour_priority(k, config.seed), symmetry=config.symmetry_breaking,
               node_budget=config.node_budget if node_budget is None else node_budget,
               deadline=deadline, max_solutions=max_solutions)


def _run_task(args):
    p, q, k, config, deadline, prefix, node_budget = args
    env = frequency_envelope(p, q, k)
    eng = _make_engine(p, q, k, env, config, deadline, 1, node_budget)
    return eng.run(prefix)


def _merge_prunes(total, counts):
    for name, v in zip(_engine.RULES, counts):
        total[name] = total.get(name, 0) + int(v)


def find_coloring(p: int, q: int, k: int, config: SearchConfig | None = None,
                  max_solutions: int = 1) -> SearchOutcome:
    """Search for a proper complete k-colouring of K_p x K_q.

    ``max_solutions=0`` enumerates every witness the (symmetry-reduced) tree
    contains; they are returned in ``solutions``.
    """
    config = config or SearchConfig()
    if min(p, q, k) < 1:
        raise ValueError("p, q, k must be positive")
    config.check(p, q, k)
    transposed = p > q
    if transposed:
        p, q = q, p
    start = time.monotonic()
    deadline = start + config.time_budget if config.time_budget else 0.0
    env = frequency_envelope(p, q, k)
    kind = _backend.engine_class(p, q, k, config.backend)
    backend = "cython" if kind is _backend.c_engine else "python"
    instance = (q, p, k) if transposed else (p, q, k)
    if env.empty:
        return SearchOutcome(Status.EXHAUSTED, None, 0, time.monotonic() - start,
                             instance, {"profiles": 1}, backend)

    if config.use_lemma_pruning:
        from .refutation import run_lemma_search
        return run_lemma_search(config, deadline)

    prunes: dict[str, int] = {}
    if config.parallel_width > 1 and max_solutions == 1:
        status, sols, nodes = _parallel(p, q, k, env, config, deadline, prunes)
    else:
        eng = _make_engine(p, q, k, env, config, deadline, max_solutions)
        code, sols, nodes, counts = eng.run()
        status = _STATUS[code]
        _merge_prunes(prunes, counts)
    if status is Status.EXHAUSTED and sols:
        status = Status.FOUND
    matrices = [_to_matrix(s, p, q, k, transposed) for s in sols]
    for m in matrices:
        if not check_family(m):
            raise AssertionError(f"search returned an invalid witness:\n{m}")
    witness = matrices[0] if matrices else None
    return SearchOutcome(status, witness, int(nodes), time.monotonic() - start,
                         instance, prunes, backend, matrices)


def _parallel(p, q, k, env, config, deadline, prunes):
    """Subtree-parallel search over prefixes of the first few cells."""
    splitter = _engine.Engine(p, q, k, env.min_freq, env.max_freq, env.max_at_least,
                              colour_priority(k, config.seed), symmetry=config.symmetry_breaking)
    depth, prefixes = 0, [()]
    while len(prefixes) < 4 * config.parallel_width and depth < p * q:
        depth += 1
        prefixes = _engine.split_prefixes(splitter, depth)
        if not prefixes:
            return Status.EXHAUSTED, [], 0
    budget = config.node_budget
    tasks = [(p, q, k, config, deadline, pre, budget) for pre in prefixes]
    nodes, status = 0, Status.EXHAUSTED
    with ProcessPoolExecutor(max_workers=config.parallel_width) as pool:
        # results are consumed in prefix order so the reported witness is schedule-independent
        for code, sols, n, counts in pool.map(_run_task, tasks):
            nodes += n
            _merge_prunes(prunes, counts)
            if code == _engine.FOUND or sols:
                pool.shutdown(wait=False, cancel_futures=True)
                return Status.FOUND, sols[:1], nodes
            if code == _engine.BUDGET:
                status = Status.BUDGET_EXCEEDED
            if budget and nodes > budget:
                status = Status.BUDGET_EXCEEDED
                pool.shutdown(wait=False, cancel_futures=True)
                break
    return status, [], nodes


# --- achromatic number ---------------------------------------------------------

@dataclass
class AchromaticResult:
    p: int
    q: int
    lower: int
    upper: int
    witness: Optional[ColorMatrix]
    probes: list[tuple[int, Status, int]]

    @property
    def exact(self) -> bool:
        return self.lower == self.upper

    @property
    def value(self) -> Optional[int]:
        return self.lower if self.exact else None

    def __str__(self) -> str:
        return str(self.lower) if self.exact else f"[{self.lower},{self.upper}]"


def achromatic(p: int, q: int, config: SearchConfig | None = None) -> AchromaticResult:
    """Largest k admitting a complete proper colouring, by ascending probes.

    Feasible palette sizes form an interval starting at the chromatic number
    max(p, q), so the first exhausted probe fixes the value.  Probes that run
    out of budget only widen the reported bracket.
    """
    config = config or SearchConfig()
    if min(p, q) < 1:
        raise ValueError("p, q must be positive")
    lo_k = max(p, q)
    ub = upper_bound(p, q)
    best, witness, probes = 0, None, []
    upper = ub
    for k in range(lo_k, ub + 1):
        out = find_coloring(p, q, k, config)
        probes.append((k, out.status, out.nodes_expanded))
        if out.status is Status.FOUND:
            best, witness = k, out.witness
        elif out.status is Status.EXHAUSTED:
            upper = k - 1
            break
    if best == 0:
        # the first probe ran out of budget; a Latin rectangle still certifies max(p, q)
        best, witness = lo_k, latin_rectangle(p, q)
    return AchromaticResult(p, q, best, max(upper, best), witness, probes)


def latin_rectangle(p: int, q: int) -> ColorMatrix:
    """Cyclic colouring with max(p, q) colours; every colour pair shares the longest line."""
    k = max(p, q)
    return ColorMatrix.from_rows([[(i + j) % k + 1 for j in range(q)] for i in range(p)], k)


# --- column extension ----------------------------------------------------------

def extend_coloring(m: ColorMatrix) -> ColorMatrix:
    """Append one column to a total proper matrix, keeping it proper and complete.

    The new column is a system of distinct representatives: row i may take
    any colour absent from row i.  When the input is already complete any
    such column works and one is found by bipartite matching; otherwise the
    columns are searched for one that completes the colouring.
    """
    if not m.is_total or not is_proper(m):
        raise ExtensionError("extension needs a total proper matrix")
    p, q, k = m.rows, m.cols, m.palette_size
    allowed = [[c for c in range(1, k + 1) if c not in m.cells[i]] for i in range(p)]
    if any(len(a) < 1 for a in allowed) or k < p:
        raise ExtensionError("no colour is available for some cell of the new column")
    if check_family(m):
        cost = np.ones((p, k))
        for i, opts in enumerate(allowed):
            cost[i, [c - 1 for c in opts]] = 0
        rows, cols = linear_sum_assignment(cost)
        if cost[rows, cols].sum() > 0:
            raise ExtensionError("no proper new column exists")
        column = [0] * p
        for i, c in zip(rows, cols):
            column[i] = int(c) + 1
        out = _append_column(m, column)
        if check_family(out):
            return out
        raise ExtensionError("extended matrix failed verification")
    for column in _transversals(allowed):
        out = _append_column(m, column)
        if check_family(out):
            return out
    raise ExtensionError("no new column yields a complete colouring")


def _append_column(m: ColorMatrix, column) -> ColorMatrix:
    cells = tuple(row + (column[i],) for i, row in enumerate(m.cells))
    return ColorMatrix(m.rows, m.cols + 1, m.palette_size, cells)


def _transversals(allowed):
    chosen: list[int] = []

    def rec(i):
        if i == len(allowed):
            yield list(chosen)
            return
        for c in allowed[i]:
            if c not in chosen:
                chosen.append(c)
                yield from rec(i + 1)
                chosen.pop()

    yield from rec(0)


def verify_witness(m: ColorMatrix, p: int, q: int, k: int) -> bool:
    return in_family(m, p, q, k)
