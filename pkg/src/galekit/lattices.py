"""Discrete subgroups of Q^m: canonical bases, duality, intersections,
quotient structures.

A lattice is stored by its canonical basis: the (rational) Hermite form of
any generating set with zero rows dropped.  Equal lattices therefore have
identical representations, so equality is plain structural equality.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from .matrix import (
    DomainError,
    Mat,
    _norm_entry,
    vstack,
)
from .normal_forms import hnf, left_kernel_rows, snf


@dataclass(frozen=True)
class QuotientStructure:
    """Isomorphism type of a finitely generated abelian group:
    Z^free_rank (+) Z/c_1 (+) ... with c_i | c_{i+1}, all c_i > 1."""

    free_rank: int
    torsion_factors: tuple[int, ...] = ()

    def __post_init__(self):
        if self.free_rank < 0:
            raise DomainError("negative free rank")
        for a, b in zip(self.torsion_factors, self.torsion_factors[1:]):
            if b % a:
                raise DomainError("torsion factors must form a divisibility chain")
        if any(c <= 1 for c in self.torsion_factors):
            raise DomainError("torsion factors must exceed 1")

    @property
    def torsion_order(self) -> int:
        return math.prod(self.torsion_factors)

    @property
    def is_free(self) -> bool:
        return not self.torsion_factors

    @property
    def is_trivial(self) -> bool:
        return self.free_rank == 0 and not self.torsion_factors


class Lattice:
    """A discrete subgroup of Q^m, held in canonical (Hermite) form."""

    __slots__ = ("_ambient", "_basis", "_pivots")

    def __init__(self, ambient_dim: int, canonical_rows: tuple, pivots: tuple):
        self._ambient = ambient_dim
        self._basis = canonical_rows
        self._pivots = pivots

    @classmethod
    def from_rows(cls, rows: Iterable[Sequence], ambient_dim: "int | None" = None) -> "Lattice":
        rows = [tuple(_norm_entry(x) for x in r) for r in rows]
        if rows:
            width = len(rows[0])
            if any(len(r) != width for r in rows):
                raise DomainError("ragged generator rows")
            if ambient_dim is None:
                ambient_dim = width
            elif ambient_dim != width:
                raise DomainError("generator width does not match ambient dimension")
        elif ambient_dim is None:
            raise DomainError("ambient dimension required for an empty generator set")
        if ambient_dim < 1:
            raise DomainError("ambient dimension must be positive")
        nonzero = [r for r in rows if any(r)]
        if not nonzero:
            return cls(ambient_dim, (), ())
        res = hnf(Mat(nonzero))
        basis = tuple(res.H.row(i) for i in range(res.rank))
        return cls(ambient_dim, basis, tuple(p - 1 for p in res.pivot_map))

    @classmethod
    def from_matrix(cls, A: Mat) -> "Lattice":
        return cls.from_rows(A.row_tuples(), A.cols)

    @classmethod
    def zero(cls, ambient_dim: int) -> "Lattice":
        return cls.from_rows([], ambient_dim)

    @classmethod
    def standard(cls, ambient_dim: int) -> "Lattice":
        return cls.from_matrix(Mat.identity(ambient_dim))

    @property
    def ambient_dim(self) -> int:
        return self._ambient

    @property
    def rank(self) -> int:
        return len(self._basis)

    @property
    def basis(self) -> tuple:
        return self._basis

    def basis_matrix(self) -> "Mat | None":
        return Mat(self._basis) if self._basis else None

    @property
    def is_integral(self) -> bool:
        return all(isinstance(x, int) for row in self._basis for x in row)

    def coordinates(self, vec: Sequence) -> "tuple | None":
        """Integer coefficients of vec in the canonical basis, or None."""
        if len(vec) != self._ambient:
            raise DomainError("vector length does not match ambient dimension")
        x = [Fraction(v) for v in vec]
        coeffs = []
        for row, p in zip(self._basis, self._pivots):
            q = x[p] / row[p]
            if q.denominator != 1:
                return None
            q = q.numerator
            coeffs.append(q)
            if q:
                x = [a - q * b for a, b in zip(x, row)]
        if any(x):
            return None
        return tuple(coeffs)

    def __contains__(self, vec) -> bool:
        return self.coordinates(vec) is not None

    def __eq__(self, other):
        return (isinstance(other, Lattice)
                and self._ambient == other._ambient
                and self._basis == other._basis)

    def __hash__(self):
        return hash((self._ambient, self._basis))

    def __repr__(self):
        return f"Lattice(ambient={self._ambient}, basis={[list(r) for r in self._basis]})"


# ---------------------------------------------------------------------------

def transverse(A: Mat) -> Mat:
    """(A A^T)^(-1) A; defined for full row rank; its rows span the dual of
    the row lattice of A."""
    gram = A @ A.transpose()
    try:
        inv = gram.inverse()
    except DomainError:
        raise DomainError("transverse requires full row rank") from None
    return inv @ A


def dual_lattice(L: Lattice) -> Lattice:
    """Dual subgroup inside the rational span of L."""
    if L.rank == 0:
        return L
    return Lattice.from_matrix(transverse(L.basis_matrix()))


def _span_intersection(rows1: Sequence, rows2: Sequence, ambient: int) -> list[tuple]:
    """Basis rows of span(rows1) ∩ span(rows2) over Q."""
    stacked = Mat(list(rows1) + [tuple(-x for x in r) for r in rows2])
    kern = left_kernel_rows(stacked)
    k1 = len(rows1)
    b1 = Mat(rows1)
    out = []
    for krow in kern:
        vec = tuple(sum(krow[i] * b1[i, j] for i in range(k1))
                    for j in range(ambient))
        if any(vec):
            out.append(vec)
    return out


def _restrict_to_span(L: Lattice, span_rows: Sequence) -> Lattice:
    """L ∩ span(span_rows) (the span must sit inside the span of L)."""
    comp = left_kernel_rows(Mat(span_rows).transpose())
    if not comp:
        return L
    basis = L.basis_matrix()
    prod = basis @ Mat(comp).transpose()
    kern = left_kernel_rows(prod)
    take = [tuple(sum(k[i] * basis[i, j] for i in range(L.rank))
                  for j in range(L.ambient_dim)) for k in kern]
    return Lattice.from_rows(take, L.ambient_dim)


def lattice_intersection(lattices: Sequence[Lattice]) -> Lattice:
    """Intersection of finitely many lattices with a common ambient space.

    Works by restriction to the common rational span followed by the
    dual-of-sum-of-duals construction (stack all duals, Hermite-reduce once,
    dualize back).
    """
    lattices = list(lattices)
    if not lattices:
        raise DomainError("lattice_intersection of an empty collection")
    ambient = lattices[0].ambient_dim
    if any(L.ambient_dim != ambient for L in lattices):
        raise DomainError("mismatched ambient dimensions")
    if len(lattices) == 1:
        return lattices[0]
    if any(L.rank == 0 for L in lattices):
        return Lattice.zero(ambient)

    span = list(lattices[0].basis)
    for L in lattices[1:]:
        span = _span_intersection(span, L.basis, ambient)
        if not span:
            return Lattice.zero(ambient)
    dim = len(span)

    duals = []
    for L in lattices:
        if L.rank != dim:
            L = _restrict_to_span(L, span)
        duals.append(transverse(L.basis_matrix()))
    stacked = vstack(duals)
    res = hnf(stacked)
    sum_basis = Mat([res.H.row(i) for i in range(res.rank)])
    return Lattice.from_matrix(transverse(sum_basis))


def quotient_structure(ambient_dim: int, L: Lattice) -> QuotientStructure:
    """Isomorphism type of Z^m / L for an integer lattice L in Z^m."""
    if L.ambient_dim != ambient_dim:
        raise DomainError("ambient dimension mismatch")
    if not L.is_integral:
        raise DomainError("quotient_structure requires an integer lattice")
    if L.rank == 0:
        return QuotientStructure(ambient_dim, ())
    res = snf(L.basis_matrix())
    torsion = tuple(c for c in res.factors if c > 1)
    return QuotientStructure(ambient_dim - len(res.factors), torsion)


def _gcd_maximal_minors(B: Mat) -> int:
    """gcd of all maximal minors of a full-row-rank matrix, via the upper
    block of the Hermite form of the transpose."""
    k = B.rows
    res = hnf(B.transpose())
    if res.rank < k:
        raise DomainError("rank-deficient input")
    top = Mat([res.H.row(i) for i in range(k)])
    return abs(top.det())


def gcd_max_minors(A: Mat) -> int:
    """gcd of the n x n minors of an integer n x (n+r) matrix of rank n."""
    if not A.is_integral:
        raise DomainError("gcd_max_minors requires an integer matrix")
    if A.rank() < A.rows:
        raise DomainError("rank-deficient input")
    return _gcd_maximal_minors(A)


def has_cotorsion(ambient_dim: int, L: Lattice) -> bool:
    """True iff Z^m / L has nontrivial torsion."""
    if L.ambient_dim != ambient_dim:
        raise DomainError("ambient dimension mismatch")
    if not L.is_integral:
        raise DomainError("has_cotorsion requires an integer lattice")
    if L.rank == 0:
        return False
    return _gcd_maximal_minors(L.basis_matrix()) != 1
