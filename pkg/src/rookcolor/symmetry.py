"""Canonical forms under row, column and colour permutations."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from . import _backend
from .core import ColorMatrix, DimensionMismatch, MatrixError, is_proper

DEFAULT_CELL_CAP = 64


class CanonicalizationTooLarge(MatrixError):
    pass


@dataclass(frozen=True)
class Certificate:
    rho: tuple[int, ...]        # canonical row i comes from input row rho[i]
    sigma: tuple[int, ...]      # canonical column j comes from input column sigma[j]
    pi: dict[int, int]          # input colour -> canonical colour

    def apply(self, m: ColorMatrix) -> ColorMatrix:
        return apply(m, self.rho, self.sigma, self.pi)


@dataclass(frozen=True)
class CanonicalForm:
    matrix: ColorMatrix
    certificate: Certificate


def apply(m: ColorMatrix, rho: Sequence[int], sigma: Sequence[int],
          pi: dict[int, int] | Sequence[int] | None = None) -> ColorMatrix:
    """Group action: entry (i, j) of the result is pi(m[rho[i], sigma[j]])."""
    if sorted(rho) != list(range(m.rows)) or sorted(sigma) != list(range(m.cols)):
        raise ValueError("rho and sigma must be permutations of the row and column indices")
    return m.permuted(rho, sigma, pi)


def canonical_form(m: ColorMatrix, cell_cap: int = DEFAULT_CELL_CAP,
                   backend: str = "auto") -> CanonicalForm:
    if m.rows * m.cols > cell_cap:
        raise CanonicalizationTooLarge(
            f"{m.rows}x{m.cols} is too large for exact canonicalization (cap {cell_cap} cells)")
    if not m.is_total or not is_proper(m):
        raise MatrixError("canonical_form needs a total proper matrix")
    flat = [x for row in m.cells for x in row]
    cells, rho, sigma, pi = _backend.canonical(flat, m.rows, m.cols, backend)
    q = m.cols
    out = ColorMatrix(m.rows, q, m.palette_size,
                      tuple(tuple(cells[i * q:(i + 1) * q]) for i in range(m.rows)))
    cert = Certificate(tuple(rho), tuple(sigma), dict(pi))
    return CanonicalForm(out, cert)


def are_equivalent(a: ColorMatrix, b: ColorMatrix, cell_cap: int = DEFAULT_CELL_CAP) -> bool:
    if a.shape != b.shape or a.palette_size != b.palette_size:
        raise DimensionMismatch(f"cannot compare {a.shape}/{a.palette_size} "
                                f"with {b.shape}/{b.palette_size}")
    return canonical_form(a, cell_cap).matrix == canonical_form(b, cell_cap).matrix
