"""Executable structural facts about a hypothetical complete 19-colouring of K_6 x K_7.

Everything here is only valid under that hypothesis; the search engine
refuses to use these predicates on any other instance (see ``LEMMA_SCOPE``).
"""
from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from typing import Iterable

from .bounds import excess_closed
from .core import (ColorMatrix, FrequencyProfile, MatrixError, TypeSignature,
                   colour_frequencies, signature_of_cells)

LEMMA_SCOPE = (6, 7, 19)


class ScopeError(ValueError):
    pass


@dataclass(frozen=True)
class LemmaViolation:
    lemma_id: str
    colours: tuple[int, ...] = ()
    lines: tuple[int, ...] = ()
    axis: str = ""
    detail: str = ""

    def replays(self, m: ColorMatrix) -> bool:
        """Re-check this violation against ``m`` from scratch."""
        if self.lemma_id in FORBIDDEN_TYPES:
            try:
                sig = signature_of_cells(
                    (i, j) for i, row in enumerate(m.cells)
                    for j, x in enumerate(row) if x in self.colours)
            except ValueError:
                return False
            freq = colour_frequencies(m)
            return (all(freq.get(c) == 2 for c in self.colours)
                    and sig == FORBIDDEN_TYPES[self.lemma_id])
        if self.lemma_id in CAPS:
            axis, limit = CAPS[self.lemma_id]
            a, b = self.lines
            shared = _shared_two_colours(m, axis, a, b, colour_frequencies(m))
            return len(shared) > limit
        return False


# --- frequency arithmetic --------------------------------------------------

def _check_scope(profile: FrequencyProfile):
    if tuple(profile.instance) != LEMMA_SCOPE:
        raise ScopeError(f"profile instance {profile.instance} is not {LEMMA_SCOPE}")


def claim2_statements(profile: FrequencyProfile) -> dict[str, bool]:
    _check_scope(profile)
    c = profile.__getitem__
    c3p, c4p, c5p = (profile.at_least(l) for l in (3, 4, 5))
    c2 = c(2)
    sigma = sum(i * c(i) for i in range(3, 7))
    return {
        "no 1-colours": c(1) == 0,
        "no 7+colours": profile.at_least(7) == 0,
        "c2 in [15,18]": 15 <= c2 <= 18,
        "c3+ in [1,4]": 1 <= c3p <= 4,
        "c4+ <= c2-15": c4p <= c2 - 15,
        "c4+=0 => c3=4": c4p != 0 or (c3p == c(3) == 4),
        "c4+>=1 => c3+<=3": c4p < 1 or c3p <= 3,
        "c3+ + c4+ <= 4": c3p + c4p <= 4,
        "c5+>=1 => c3+ + c4+ <= 3": c5p < 1 or c3p + c4p <= 3,
        "sigma in [6,12]": 6 <= sigma <= 12,
    }


def claim2_holds(profile: FrequencyProfile) -> bool:
    return all(claim2_statements(profile).values())


def scoped_profiles(c2: int | None = None) -> list[FrequencyProfile]:
    """Every (c_1..c_6) with 19 colours on 42 cells and non-negative excess.

    Enumerated directly from the three constraints, independently of
    ``bounds.feasible_frequency_profiles``.
    """
    p, q, k = LEMMA_SCOPE
    ok = [l for l in range(1, 7) if excess_closed(l, p, q, k) >= 0]
    found = []

    def rec(l, vec, colours, cells):
        if l == 7:
            if colours == k and cells == p * q:
                found.append(tuple(vec))
            return
        for n in range(0, k - colours + 1):
            if n and l not in ok:
                break
            if cells + l * n > p * q:
                break
            if l == 2 and c2 is not None and n != c2:
                continue
            rec(l + 1, vec + [n], colours + n, cells + l * n)

    rec(1, [], 0, 0)
    return [FrequencyProfile.from_vector(LEMMA_SCOPE, v) for v in found]


def verify_claim2_universally() -> bool:
    return all(claim2_holds(pr) for pr in scoped_profiles())


# --- forbidden types and caps ----------------------------------------------

FORBIDDEN_TYPES: dict[str, TypeSignature] = {
    s: TypeSignature.parse(s) for s in (
        "(1^4, 2^2)",
        "(2^1 1^2, 2^2)",
        "(2^2, 1^4)",
        "(2^2, 2^1 1^2)",
        "(3^1 2^1 1^1, 3^1 2^1 1^1)",
    )
}

# (axis, largest permitted number of 2-colours shared by two lines)
CAPS: dict[str, tuple[str, int]] = {
    "col-pair-share<=2": ("col", 2),
    "row-pair-share<=2": ("row", 2),
    "row-pair-share<=3": ("row", 3),
}


def _shared_two_colours(m: ColorMatrix, axis: str, a: int, b: int, freq) -> set[int]:
    if axis == "row":
        la, lb = m.cells[a], m.cells[b]
    else:
        la, lb = m.column(a), m.column(b)
    return {x for x in set(la) & set(lb) if x and freq.get(x) == 2}


def _require_scoped(m: ColorMatrix):
    if (m.rows, m.cols, m.palette_size) != LEMMA_SCOPE:
        raise ScopeError(f"lemmas hold only for instance {LEMMA_SCOPE}")


def forbidden_type_violations(m: ColorMatrix, two_colours: Iterable[int] | None = None,
                              check_scope: bool = True) -> list[LemmaViolation]:
    """Report every 2- or 3-subset of 2-colours whose type is forbidden.

    ``two_colours`` overrides the set of colours treated as 2-colours, which
    lets the search apply the scan to partial matrices.
    """
    if check_scope:
        _require_scoped(m)
    if two_colours is None:
        two_colours = [c for c, n in colour_frequencies(m).items() if n == 2]
    where: dict[int, list[tuple[int, int]]] = {c: [] for c in two_colours}
    for i, row in enumerate(m.cells):
        for j, x in enumerate(row):
            if x in where:
                where[x].append((i, j))
    colours = sorted(c for c, cells in where.items() if len(cells) == 2)
    by_sig = {sig: name for name, sig in FORBIDDEN_TYPES.items()}
    out = []
    for size in (2, 3):
        for subset in combinations(colours, size):
            sig = signature_of_cells(cell for c in subset for cell in where[c])
            name = by_sig.get(sig)
            if name is not None:
                out.append(LemmaViolation(name, subset, detail=str(sig)))
    return out


def cap_violations(m: ColorMatrix, two_colours: Iterable[int] | None = None,
                   check_scope: bool = True) -> list[LemmaViolation]:
    if check_scope:
        _require_scoped(m)
    freq = colour_frequencies(m)
    if two_colours is not None:
        freq = {c: 2 for c in two_colours}
    out = []
    for name, (axis, limit) in CAPS.items():
        n = m.rows if axis == "row" else m.cols
        for a, b in combinations(range(n), 2):
            shared = _shared_two_colours(m, axis, a, b, freq)
            if len(shared) > limit:
                out.append(LemmaViolation(name, tuple(sorted(shared)), (a, b), axis,
                                          f"{len(shared)} shared 2-colours"))
    return out


# --- Q-sequences -----------------------------------------------------------

@dataclass(frozen=True)
class QSequence:
    """Per-column counts of the first row's 2-colours, from column 2p-3 to 7.

    ``r2_1`` is the number of 2-colours in the distinguished first row and
    ``p_param`` the pivot row index (not the row count).
    """
    r2_1: int
    p_param: int
    values: tuple[int, ...]

    @property
    def first_index(self) -> int:
        return 2 * self.p_param - 3

    @property
    def head(self) -> tuple[int, ...]:
        return self.values[: self.r2_1 - self.first_index + 1]

    @property
    def tail(self) -> tuple[int, ...]:
        return self.values[self.r2_1 - self.first_index + 1:]

    def violations(self) -> list[str]:
        bad = []
        if len(self.values) != 7 - self.first_index + 1:
            bad.append("length")
        if sum(self.values) != 2 * self.r2_1 + 8 - 4 * self.p_param:
            bad.append("sum")
        if any(not 0 <= v <= 3 for v in self.values):
            bad.append("range")
        cap = min(3, self.r2_1 + 4 - 2 * self.p_param)
        if any(not 1 <= v <= cap for v in self.head):
            bad.append("head bound")
        for seg, name in ((self.head, "head"), (self.tail, "tail")):
            if any(a < b for a, b in zip(seg, seg[1:])):
                bad.append(f"{name} order")
        return bad


def p_range(r2_1: int) -> tuple[int, int]:
    if not 5 <= r2_1 <= 7:
        raise ValueError(f"r2_1={r2_1} outside [5, 7]")
    return max(2, r2_1 - 3), min(5, (r2_1 + 4) // 2)


def _nonincreasing(length: int, total: int, lo: int, hi: int):
    if length == 0:
        if total == 0:
            yield ()
        return
    for first in range(min(hi, total), lo - 1, -1):
        if first * length < total:
            break
        for rest in _nonincreasing(length - 1, total - first, lo, first):
            yield (first,) + rest


def qset_generate(r2_1: int, p_param: int) -> list[QSequence]:
    """All admissible sequences, in lexicographically decreasing order."""
    lo_p, hi_p = p_range(r2_1)
    if not lo_p <= p_param <= hi_p:
        raise ValueError(f"p_param={p_param} outside [{lo_p}, {hi_p}]")
    start = 2 * p_param - 3
    total = 2 * r2_1 + 8 - 4 * p_param
    head_len = r2_1 - start + 1
    tail_len = 7 - r2_1
    cap = min(3, r2_1 + 4 - 2 * p_param)
    out = []
    for head_sum in range(total + 1):
        for head in _nonincreasing(head_len, head_sum, 1, cap):
            for tail in _nonincreasing(tail_len, total - head_sum, 0, 3):
                out.append(QSequence(r2_1, p_param, head + tail))
    out.sort(key=lambda s: s.values, reverse=True)
    return out


def all_qsets() -> dict[tuple[int, int], list[QSequence]]:
    out = {}
    for r in (7, 6, 5):
        lo, hi = p_range(r)
        for pp in range(hi, lo - 1, -1):
            out[(r, pp)] = qset_generate(r, pp)
    return out
