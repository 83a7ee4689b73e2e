"""Matrix model of vertex colourings of the rook's graph K_p x K_q.

A colouring is a p x q grid of colour ids.  Two cells are adjacent when they
share a row or a column, so a colouring is proper when every line holds
pairwise distinct colours, and complete when every pair of colours meets on
some line.
"""
from __future__ import annotations

import io
import re
from collections import Counter
from dataclasses import dataclass, field
from itertools import combinations
from typing import Iterable, Sequence

UNASSIGNED = 0


class MatrixError(ValueError):
    """Raised for malformed matrices or violated operation preconditions."""


class DimensionMismatch(MatrixError):
    pass


class MatrixParseError(MatrixError):
    def __init__(self, message: str, line: int, column: int = 0):
        self.line = line
        self.column = column
        where = f"line {line}" + (f", column {column}" if column else "")
        super().__init__(f"{where}: {message}")


@dataclass(frozen=True)
class ColorMatrix:
    rows: int
    cols: int
    palette_size: int
    cells: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        if self.rows < 1 or self.cols < 1 or self.palette_size < 1:
            raise MatrixError("rows, cols and palette_size must be positive")
        cells = tuple(tuple(int(x) for x in row) for row in self.cells)
        if len(cells) != self.rows or any(len(r) != self.cols for r in cells):
            raise DimensionMismatch(
                f"cells do not form a {self.rows}x{self.cols} grid")
        for row in cells:
            for x in row:
                if x != UNASSIGNED and not 1 <= x <= self.palette_size:
                    raise MatrixError(
                        f"colour {x} outside [1, {self.palette_size}]")
        object.__setattr__(self, "cells", cells)

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[int]], k: int | None = None) -> ColorMatrix:
        rows = [list(r) for r in rows]
        if not rows or not rows[0]:
            raise MatrixError("empty matrix")
        if k is None:
            k = max([x for r in rows for x in r] + [1])
        return cls(len(rows), len(rows[0]), k, tuple(tuple(r) for r in rows))

    @classmethod
    def empty(cls, p: int, q: int, k: int) -> ColorMatrix:
        return cls(p, q, k, tuple((UNASSIGNED,) * q for _ in range(p)))

    def __getitem__(self, ij: tuple[int, int]) -> int:
        i, j = ij
        return self.cells[i][j]

    @property
    def shape(self) -> tuple[int, int]:
        return self.rows, self.cols

    @property
    def is_total(self) -> bool:
        return all(x != UNASSIGNED for row in self.cells for x in row)

    def column(self, j: int) -> tuple[int, ...]:
        return tuple(row[j] for row in self.cells)

    def lines(self) -> Iterable[tuple[int, ...]]:
        yield from self.cells
        for j in range(self.cols):
            yield self.column(j)

    def positions(self, colour: int) -> list[tuple[int, int]]:
        return [(i, j) for i, row in enumerate(self.cells)
                for j, x in enumerate(row) if x == colour]

    def transpose(self) -> ColorMatrix:
        return ColorMatrix(self.cols, self.rows, self.palette_size,
                           tuple(zip(*self.cells)))

    def permuted(self, rho: Sequence[int], sigma: Sequence[int],
                 pi: dict[int, int] | Sequence[int] | None = None) -> ColorMatrix:
        """Return the matrix with entry (i, j) = pi(M[rho[i], sigma[j]]).

        Indices are 0-based; ``pi`` maps colour ids (a sequence is indexed by
        colour id, so position 0 is ignored).
        """
        def relabel(x):
            if x == UNASSIGNED or pi is None:
                return x
            return pi[x]
        cells = tuple(tuple(relabel(self.cells[rho[i]][sigma[j]])
                            for j in range(self.cols))
                      for i in range(self.rows))
        return ColorMatrix(self.rows, self.cols, self.palette_size, cells)

    def with_palette(self, k: int) -> ColorMatrix:
        return ColorMatrix(self.rows, self.cols, k, self.cells)

    def to_text(self) -> str:
        return format_matrix(self)

    def __str__(self) -> str:
        return "\n".join(" ".join(_token(x) for x in row) for row in self.cells)


def _token(x: int) -> str:
    return "*" if x == UNASSIGNED else str(x)


# --- text format -----------------------------------------------------------

def format_matrix(m: ColorMatrix, comments: Sequence[str] = ()) -> str:
    out = io.StringIO()
    for c in comments:
        out.write(f"# {c}\n")
    out.write(f"{m.rows} {m.cols} {m.palette_size}\n")
    for row in m.cells:
        out.write(" ".join(_token(x) for x in row) + "\n")
    return out.getvalue()


def parse_matrix(text: str) -> ColorMatrix:
    """Parse the ``p q k`` header followed by p rows of q tokens.

    Lines starting with ``#`` are comments; ``*`` marks an unassigned cell.
    """
    header = None
    rows: list[list[int]] = []
    last_line = 0
    for lineno, raw in enumerate(text.splitlines(), start=1):
        last_line = lineno
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        tokens = line.split()
        if header is None:
            if len(tokens) != 3:
                raise MatrixParseError("header must be 'p q k'", lineno)
            try:
                header = tuple(int(t) for t in tokens)
            except ValueError:
                raise MatrixParseError("header values must be integers", lineno) from None
            if min(header) < 1:
                raise MatrixParseError("header values must be positive", lineno)
            continue
        p, q, k = header
        if len(rows) == p:
            raise MatrixParseError(f"more than {p} matrix rows", lineno)
        if len(tokens) != q:
            raise MatrixParseError(f"expected {q} entries, found {len(tokens)}", lineno)
        row = []
        for tok in re.finditer(r"\S+", raw):
            t, col = tok.group(), tok.start() + 1
            if t == "*":
                row.append(UNASSIGNED)
                continue
            try:
                x = int(t)
            except ValueError:
                raise MatrixParseError(f"bad token {t!r}", lineno, col) from None
            if not 1 <= x <= k:
                raise MatrixParseError(f"colour {x} outside [1, {k}]", lineno, col)
            row.append(x)
        rows.append(row)
    if header is None:
        raise MatrixParseError("missing header", last_line or 1)
    if len(rows) != header[0]:
        raise MatrixParseError(f"expected {header[0]} rows, found {len(rows)}", last_line or 1)
    p, q, k = header
    return ColorMatrix(p, q, k, tuple(tuple(r) for r in rows))


def read_matrix(path) -> ColorMatrix:
    with open(path) as f:
        return parse_matrix(f.read())


def write_matrix(path, m: ColorMatrix, comments: Sequence[str] = ()) -> None:
    with open(path, "w") as f:
        f.write(format_matrix(m, comments))


# --- predicates ------------------------------------------------------------

def is_proper(m: ColorMatrix) -> bool:
    for line in m.lines():
        seen = [x for x in line if x != UNASSIGNED]
        if len(seen) != len(set(seen)):
            return False
    return True


def _pair(a: int, b: int) -> tuple[int, int]:
    return (a, b) if a < b else (b, a)


@dataclass
class PairLedger:
    """Witness counts for unordered colour pairs, split by axis.

    ``row_counts[{a, b}]`` is the number of rows holding both a and b, and
    likewise for columns.  A pair is good when its total count is positive.
    """
    palette_size: int
    row_counts: Counter = field(default_factory=Counter)
    col_counts: Counter = field(default_factory=Counter)

    @property
    def counts(self) -> Counter:
        return self.row_counts + self.col_counts

    def count(self, a: int, b: int) -> int:
        key = _pair(a, b)
        return self.row_counts[key] + self.col_counts[key]

    def is_good(self, a: int, b: int) -> bool:
        return self.count(a, b) > 0

    def good_pairs(self) -> set[tuple[int, int]]:
        return {k for k, v in self.counts.items() if v > 0}

    def uncovered_pairs(self) -> list[tuple[int, int]]:
        good = self.good_pairs()
        return [pr for pr in combinations(range(1, self.palette_size + 1), 2)
                if pr not in good]

    def total_witnesses(self) -> int:
        return sum(self.row_counts.values()) + sum(self.col_counts.values())

    def good_at(self, m: ColorMatrix, i: int, j: int, others: Iterable[int]) -> int:
        """Number of good pairs {M[i,j], g}, g in ``others``, witnessed by cell (i, j).

        Debug helper: counts the colours of ``others`` that share row i or
        column j with the copy of M[i, j] at that cell.
        """
        here = m[i, j]
        near = set(m.cells[i]) | set(m.column(j))
        return sum(1 for g in set(others) if g != here and g in near)


def build_ledger(m: ColorMatrix) -> PairLedger:
    if not is_proper(m):
        raise MatrixError("ledger requires a proper matrix")
    ledger = PairLedger(m.palette_size)
    for row in m.cells:
        vals = [x for x in row if x != UNASSIGNED]
        for a, b in combinations(vals, 2):
            ledger.row_counts[_pair(a, b)] += 1
    for j in range(m.cols):
        vals = [x for x in m.column(j) if x != UNASSIGNED]
        for a, b in combinations(vals, 2):
            ledger.col_counts[_pair(a, b)] += 1
    return ledger


def is_complete(m: ColorMatrix) -> bool:
    present = {x for row in m.cells for x in row if x != UNASSIGNED}
    if len(present) != m.palette_size:
        return False
    ledger = build_ledger(m)
    k = m.palette_size
    return len(ledger.good_pairs()) == k * (k - 1) // 2


def in_family(m: ColorMatrix, p: int, q: int, k: int) -> bool:
    """Membership of ``m`` in the family of proper complete p x q matrices over [1, k].

    A wrong shape raises DimensionMismatch; colouring failures return False.
    """
    if m.shape != (p, q):
        raise DimensionMismatch(f"matrix is {m.rows}x{m.cols}, expected {p}x{q}")
    if m.palette_size != k:
        return False
    return m.is_total and is_proper(m) and is_complete(m)


def check_family(m: ColorMatrix) -> bool:
    return in_family(m, m.rows, m.cols, m.palette_size)


# --- frequency statistics --------------------------------------------------

@dataclass(frozen=True)
class FrequencyProfile:
    """Number of colours of each frequency for a (p, q, k) instance."""
    instance: tuple[int, int, int]
    counts: tuple[tuple[int, int], ...]  # sorted (l, c_l) with c_l > 0

    @classmethod
    def from_mapping(cls, instance, mapping: dict[int, int]) -> FrequencyProfile:
        items = tuple(sorted((int(l), int(c)) for l, c in mapping.items() if c))
        if any(c < 0 for _, c in items):
            raise ValueError("negative colour count")
        return cls(tuple(instance), items)

    @classmethod
    def from_vector(cls, instance, vector: Sequence[int]) -> FrequencyProfile:
        return cls.from_mapping(instance, {l: c for l, c in enumerate(vector, start=1)})

    def __getitem__(self, l: int) -> int:
        return dict(self.counts).get(l, 0)

    def as_dict(self) -> dict[int, int]:
        return dict(self.counts)

    def vector(self, length: int | None = None) -> tuple[int, ...]:
        p, q, _ = self.instance
        n = length or max([min(p, q)] + [l for l, _ in self.counts])
        return tuple(self[l] for l in range(1, n + 1))

    def at_least(self, l: int) -> int:
        return sum(c for m, c in self.counts if m >= l)

    @property
    def colours(self) -> int:
        return sum(c for _, c in self.counts)

    @property
    def cells(self) -> int:
        return sum(l * c for l, c in self.counts)

    @property
    def heavy_weight(self) -> int:
        """Cells taken by colours of frequency at least 3."""
        return sum(l * c for l, c in self.counts if l >= 3)

    def __str__(self) -> str:
        return " ".join(f"c{l}={c}" for l, c in self.counts) or "(empty)"


def colour_frequencies(m: ColorMatrix) -> Counter:
    return Counter(x for row in m.cells for x in row if x != UNASSIGNED)


def frequency_profile(m: ColorMatrix) -> FrequencyProfile:
    if not m.is_total or not is_proper(m):
        raise MatrixError("frequency profile requires a total proper matrix")
    freq = colour_frequencies(m)
    hist = Counter(freq.values())
    return FrequencyProfile.from_mapping((m.rows, m.cols, m.palette_size), hist)


def colours_of_frequency(m: ColorMatrix, l: int) -> set[int]:
    return {c for c, n in colour_frequencies(m).items() if n == l}


def row_stats(m: ColorMatrix, i1: int, i2: int) -> int:
    """How many 2-colours have one copy in row i1 and the other in row i2."""
    if i1 == i2:
        raise MatrixError("row indices must differ")
    two = colours_of_frequency(m, 2)
    return len(two & set(m.cells[i1]) & set(m.cells[i2]))


def col_stats(m: ColorMatrix, j1: int, j2: int) -> int:
    if j1 == j2:
        raise MatrixError("column indices must differ")
    two = colours_of_frequency(m, 2)
    return len(two & set(m.column(j1)) & set(m.column(j2)))


# --- type signatures -------------------------------------------------------

@dataclass(frozen=True)
class TypeSignature:
    row_part: tuple[int, ...]
    col_part: tuple[int, ...]

    def __post_init__(self):
        rp = tuple(sorted(self.row_part, reverse=True))
        cp = tuple(sorted(self.col_part, reverse=True))
        if any(x < 1 for x in rp + cp):
            raise ValueError("type entries must be positive")
        if sum(rp) != sum(cp):
            raise ValueError("row and column parts must have equal sums")
        object.__setattr__(self, "row_part", rp)
        object.__setattr__(self, "col_part", cp)

    @classmethod
    def parse(cls, text: str) -> TypeSignature:
        """Parse exponent notation such as ``(2^1 1^2, 2^2)``."""
        body = text.strip().strip("()")
        halves = body.split(",")
        if len(halves) != 2:
            raise ValueError(f"bad type {text!r}")
        parts = []
        for half in halves:
            vals: list[int] = []
            for tok in half.split():
                base, _, exp = tok.partition("^")
                vals.extend([int(base)] * int(exp or 1))
            parts.append(tuple(vals))
        return cls(parts[0], parts[1])

    def __str__(self) -> str:
        def fmt(part):
            return " ".join(f"{v}^{n}" for v, n in
                            sorted(Counter(part).items(), reverse=True))
        return f"({fmt(self.row_part)}, {fmt(self.col_part)})"


def signature_of_cells(cells: Iterable[tuple[int, int]]) -> TypeSignature:
    cells = list(cells)
    rows = Counter(i for i, _ in cells)
    cols = Counter(j for _, j in cells)
    return TypeSignature(tuple(rows.values()), tuple(cols.values()))


def type_of(m: ColorMatrix, colours: Iterable[int]) -> TypeSignature:
    colours = set(colours)
    freq = colour_frequencies(m)
    bad = sorted(c for c in colours if freq.get(c, 0) != 2)
    if bad:
        raise MatrixError(f"colours {bad} are not 2-colours")
    cells = [(i, j) for i, row in enumerate(m.cells)
             for j, x in enumerate(row) if x in colours]
    return signature_of_cells(cells)
