"""Counting bounds for complete colourings of K_p x K_q.

Every colour class of a complete k-colouring must see the other k - 1 colours
in its neighbourhood.  A class of l cells in distinct rows and columns has a
neighbourhood of fixed size, so the excess ``size - (k - 1)`` must be
non-negative.  Together with the two conservation laws (k colours, p*q cells)
this yields the admissible frequency profiles and a sound upper bound.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

from .core import FrequencyProfile


@dataclass(frozen=True)
class InstanceParams:
    p: int
    q: int
    k: int

    def __post_init__(self):
        if min(self.p, self.q, self.k) < 1:
            raise ValueError("p, q, k must be positive")

    def normalized(self) -> InstanceParams:
        return self if self.p <= self.q else InstanceParams(self.q, self.p, self.k)


def neighborhood_size(l: int, p: int, q: int) -> int:
    """Size of N(V) for l cells in pairwise distinct rows and columns."""
    if not 1 <= l <= min(p, q):
        raise ValueError(f"l={l} outside [1, {min(p, q)}]")
    return l * (p + q - 2) - l * (l - 1)


def excess_closed(l: int, p: int, q: int, k: int) -> int:
    if k < 2:
        raise ValueError("excess needs at least two colours")
    return neighborhood_size(l, p, q) - (k - 1)


def _allowed_frequencies(p: int, q: int, k: int) -> list[int]:
    top = min(p, q)
    if k == 1:
        return list(range(1, top + 1))
    return [l for l in range(1, top + 1) if excess_closed(l, p, q, k) >= 0]


@lru_cache(maxsize=None)
def _profiles(p: int, q: int, k: int) -> tuple[tuple[int, ...], ...]:
    top = min(p, q)
    allowed = set(_allowed_frequencies(p, q, k))
    out: list[tuple[int, ...]] = []
    vec = [0] * top

    def rec(l: int, colours_left: int, cells_left: int):
        if l > top:
            if colours_left == 0 and cells_left == 0:
                out.append(tuple(vec))
            return
        if l not in allowed:
            rec(l + 1, colours_left, cells_left)
            return
        # remaining colours must fit between frequencies l and top
        for c in range(0, colours_left + 1):
            rest_c, rest_cells = colours_left - c, cells_left - l * c
            if rest_cells < 0:
                break
            if rest_cells < (l + 1) * rest_c and rest_c:
                continue
            if rest_cells > top * rest_c:
                continue
            vec[l - 1] = c
            rec(l + 1, rest_c, rest_cells)
            vec[l - 1] = 0

    rec(1, k, p * q)
    out.sort()
    return tuple(out)


def feasible_frequency_profiles(p: int, q: int, k: int) -> list[FrequencyProfile]:
    """All frequency vectors surviving conservation and excess non-negativity,
    in lexicographic order of (c_1, c_2, ...)."""
    if p > q:
        p, q = q, p
    return [FrequencyProfile.from_vector((p, q, k), v) for v in _profiles(p, q, k)]


def profile_vectors(p: int, q: int, k: int) -> tuple[tuple[int, ...], ...]:
    if p > q:
        p, q = q, p
    return _profiles(p, q, k)


def pair_capacity_bound(p: int, q: int) -> int:
    slots = p * q * (q - 1) // 2 + q * p * (p - 1) // 2
    k = 1
    while (k + 1) * k // 2 <= slots:
        k += 1
    return k


def upper_bound(p: int, q: int) -> int:
    if p > q:
        p, q = q, p
    cap = pair_capacity_bound(p, q)
    best = 0
    for k in range(min(cap, p * q), 0, -1):
        if _profiles(p, q, k):
            best = k
            break
    return max(best, q)


@dataclass(frozen=True)
class FrequencyEnvelope:
    """Per-instance frequency limits distilled from the admissible profiles.

    ``min_freq``/``max_freq`` bound every colour's final frequency, and
    ``max_at_least[l]`` bounds how many colours may reach frequency l.
    """
    min_freq: int
    max_freq: int
    max_at_least: tuple[int, ...]  # index l, entry 0 unused
    vectors: tuple[tuple[int, ...], ...]

    @property
    def empty(self) -> bool:
        return not self.vectors


def frequency_envelope(p: int, q: int, k: int, vectors=None) -> FrequencyEnvelope:
    if vectors is None:
        vectors = profile_vectors(p, q, k)
    top = min(p, q)
    if not vectors:
        return FrequencyEnvelope(1, top, (0,) * (top + 2), ())
    used = [l for l in range(1, top + 1) if any(v[l - 1] for v in vectors)]
    at_least = [0] * (top + 2)
    for l in range(1, top + 1):
        at_least[l] = max(sum(v[l - 1:]) for v in vectors)
    return FrequencyEnvelope(min(used), max(used), tuple(at_least), tuple(vectors))
