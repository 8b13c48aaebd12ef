"""Exact cone geometry, fan validity, and enumeration of all simplicial fans
with a prescribed ray set and support.

Cones are index sets (1-based) into the columns of an ambient matrix V.  A
collection of maximal simplicial cones is a fan when every pairwise
intersection is a common face; for simplicial cones with pairwise distinct
ray directions this is equivalent to "the intersection equals the cone on
the shared generators", which we decide exactly by enumerating the extreme
rays of the intersection (a pointed cone) and testing membership.

Enumeration strategy: candidate maximal cones are the full-dimensional
index sets containing no further ray strictly inside; a depth-first search
grows partial fans through unmatched interior facets.  Support coverage is
certified combinatorially: every facet of the final collection is either
shared by exactly two maximal cones or spans a supporting hyperplane of the
whole configuration.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Iterable, Sequence

from .matrix import (
    DomainError,
    Mat,
    check_index_set,
    dot,
    solve,
    vec_gcd,
)
from .normal_forms import left_kernel_rows
from .fw import _nonneg_combination


@dataclass(frozen=True, order=True)
class Cone:
    """A simplicial cone given by 1-based column indices of V."""

    gens: tuple[int, ...]

    def __post_init__(self):
        if any(a >= b for a, b in zip(self.gens, self.gens[1:])):
            raise DomainError("cone generators must be strictly increasing")


@dataclass(frozen=True)
class Fan:
    V: Mat
    maximal_cones: tuple[Cone, ...]

    def cone_sets(self) -> tuple[tuple[int, ...], ...]:
        return tuple(c.gens for c in self.maximal_cones)


def fan_from_cones(V: Mat, cones: Iterable[Sequence[int]]) -> Fan:
    parsed = tuple(sorted(Cone(gens=tuple(sorted(c))) for c in cones))
    for c in parsed:
        check_index_set(c.gens, V.cols, allow_empty=False)
    return Fan(V=V, maximal_cones=parsed)


# ---------------------------------------------------------------------------
# membership

def _coeffs_in_cone(V: Mat, gens: Sequence[int], x: Sequence) -> "list | None":
    """Coefficients of x on a simplicial generator set, or None if x is
    outside the linear span or the system is inconsistent."""
    sub = V.take_cols([g - 1 for g in gens])
    sol = solve(sub, Mat([[v] for v in x]))
    if sol is None:
        return None
    return [sol[i, 0] for i in range(len(gens))]


def cone_contains(V: Mat, cone: "Cone | Sequence[int]", x: Sequence,
                  interior: bool = False) -> bool:
    """Exact membership of x in the cone on the given columns of V.

    With interior=True the cone must be simplicial and the test is for the
    relative interior (all coefficients strictly positive).
    """
    gens = cone.gens if isinstance(cone, Cone) else tuple(cone)
    gens = check_index_set(sorted(gens), V.cols)
    if len(x) != V.rows:
        raise DomainError("point dimension mismatch")
    if not gens:
        return not any(x)  # the zero cone; it is its own relative interior
    simplicial = V.take_cols([g - 1 for g in gens]).rank() == len(gens)
    if interior:
        if not simplicial:
            raise DomainError("interior test requires a simplicial cone")
        coeffs = _coeffs_in_cone(V, gens, x)
        return coeffs is not None and all(c > 0 for c in coeffs)
    if simplicial:
        coeffs = _coeffs_in_cone(V, gens, x)
        return coeffs is not None and all(c >= 0 for c in coeffs)
    cols = [V.col(g - 1) for g in gens]
    return _nonneg_combination(cols, tuple(x)) is not None


# ---------------------------------------------------------------------------
# exact pairwise face test

def _primitive(vec: Sequence) -> tuple[int, ...]:
    denom = 1
    for v in vec:
        if isinstance(v, Fraction):
            denom = math.lcm(denom, v.denominator)
    ints = [int(v * denom) for v in vec]
    g = vec_gcd(ints)
    if g:
        ints = [v // g for v in ints]
    return tuple(ints)


class _ConeGeom:
    """Cached exact H-description of a simplicial cone."""

    def __init__(self, V: Mat, gens: tuple[int, ...]):
        self.gens = gens
        sub = V.take_cols([g - 1 for g in gens])
        # coefficient functionals: rows w with w . v_gen = delta
        gram = sub.transpose() @ sub
        self.coeff = gram.inverse() @ sub.transpose()
        # equalities cutting out the linear span
        self.span_eq = left_kernel_rows(sub)

    def contains(self, x: Sequence) -> bool:
        return (all(dot(e, x) == 0 for e in self.span_eq)
                and all(dot(w, x) >= 0 for w in self.coeff.row_tuples()))


def _proper_intersection(V: Mat, ca: _ConeGeom, cb: _ConeGeom) -> bool:
    """Whether cone(A) ∩ cone(B) equals the cone on the shared generators."""
    shared = tuple(sorted(set(ca.gens) & set(cb.gens)))
    n = V.rows
    eqs = [tuple(e) for e in ca.span_eq] + [tuple(e) for e in cb.span_eq]
    ineqs = ([_primitive(w) for w in ca.coeff.row_tuples()]
             + [_primitive(w) for w in cb.coeff.row_tuples()])
    eq_rank = Mat(eqs).rank() if eqs else 0
    need = n - 1 - eq_rank
    if need < 0:
        return True
    shared_geom = _ConeGeom(V, shared) if shared else None

    def ray_ok(z: tuple) -> bool:
        if shared_geom is None:
            return False
        return shared_geom.contains(z)

    seen = set()
    for pick in combinations(range(len(ineqs)), need):
        rows = eqs + [ineqs[t] for t in pick]
        if rows:
            mat = Mat(rows)
            kern = left_kernel_rows(mat.transpose())
        else:
            kern = [tuple(int(i == j) for j in range(n)) for i in range(n)]
        if len(kern) != 1:
            continue
        z = _primitive(kern[0])
        for cand in (z, tuple(-v for v in z)):
            if cand in seen:
                continue
            seen.add(cand)
            if ca.contains(cand) and cb.contains(cand) and not ray_ok(cand):
                return False
    return True


def is_fan(V: Mat, maximal_cones: Iterable["Cone | Sequence[int]"]) -> bool:
    """Do the given simplicial cones pairwise intersect in common faces?"""
    cones = []
    for c in maximal_cones:
        gens = c.gens if isinstance(c, Cone) else tuple(sorted(c))
        check_index_set(gens, V.cols, allow_empty=False)
        if V.take_cols([g - 1 for g in gens]).rank() != len(gens):
            raise DomainError(f"cone {gens} is not simplicial")
        cones.append(gens)
    geoms = {g: _ConeGeom(V, g) for g in set(cones)}
    for a, b in combinations(sorted(set(cones)), 2):
        if not _proper_intersection(V, geoms[a], geoms[b]):
            return False
    return True


# ---------------------------------------------------------------------------
# facets and support

def _facet_normal(V: Mat, facet: tuple[int, ...]) -> tuple[int, ...]:
    """Primitive normal of the hyperplane spanned by an (n-1)-subset."""
    if not facet:
        if V.rows == 1:
            return (1,)
        raise DomainError("empty facet in dimension > 1")
    sub = V.take_cols([g - 1 for g in facet])
    kern = left_kernel_rows(sub)
    if len(kern) != 1:
        raise DomainError(f"facet {facet} does not span a hyperplane")
    return _primitive(kern[0])


def _facet_info(V: Mat, facet: tuple[int, ...]):
    """(normal, side_of_each_column, boundary_flag); boundary means every
    column sits weakly on one side."""
    u = _facet_normal(V, facet)
    sides = tuple(dot(u, V.col(j)) for j in range(V.cols))
    pos = any(s > 0 for s in sides)
    neg = any(s < 0 for s in sides)
    return u, sides, not (pos and neg)


def is_support_complete(V: Mat, fan: Fan) -> bool:
    """Does the union of the maximal cones equal the cone on all columns?

    Certified combinatorially: every facet of a maximal cone is either
    shared by exactly two cones or lies on a supporting hyperplane of the
    whole column configuration.
    """
    cones = fan.cone_sets()
    if not cones:
        return False
    if not is_fan(V, cones):
        raise DomainError("invalid fan")
    n = V.rows
    rho = V.rank()
    if rho < n:
        # change coordinates to the span of the columns and retry there
        from .normal_forms import hnf as _hnf
        res = _hnf(V.transpose())
        basis = Mat([res.H.row(i) for i in range(res.rank)])
        coords = solve(basis.transpose(), V)
        reduced = Fan(V=coords, maximal_cones=fan.maximal_cones)
        return is_support_complete(coords, reduced)
    if any(len(c) != n for c in cones):
        return False
    counts: dict[tuple[int, ...], int] = {}
    for c in cones:
        for drop in c:
            facet = tuple(g for g in c if g != drop)
            counts[facet] = counts.get(facet, 0) + 1
    for facet, cnt in counts.items():
        if cnt == 2:
            continue
        if cnt > 2:
            return False
        _, _, boundary = _facet_info(V, facet)
        if not boundary:
            return False
    return True


# ---------------------------------------------------------------------------
# enumeration

def enumerate_SF(V: Mat, cap: int = 10) -> list[Fan]:
    """All simplicial fans whose rays are exactly the columns of V and whose
    support is the cone spanned by all columns, in a deterministic order.

    Refuses configurations with more than ``cap`` rays, zero columns,
    repeated ray directions, or rank-deficient V.
    """
    if not V.is_integral:
        raise DomainError("enumerate_SF requires an integer matrix")
    n, s = V.shape
    if s > cap:
        raise DomainError(f"ray count {s} exceeds cap {cap}")
    for j in range(s):
        if not any(V.col(j)):
            raise DomainError(f"degenerate configuration: column {j + 1} is zero")
    cols = list(V.col_tuples())
    for i in range(s):
        for j in range(i + 1, s):
            u, w = cols[i], cols[j]
            if Mat([u, w]).rank() == 1 and dot(u, w) > 0:
                raise DomainError("degenerate configuration: columns "
                                  f"{i + 1} and {j + 1} span the same ray")
    if V.rank() < n:
        raise DomainError("degenerate configuration: rank-deficient matrix")

    candidates: list[tuple[int, ...]] = []
    for pick in combinations(range(1, s + 1), n):
        sub = V.take_cols([g - 1 for g in pick])
        if sub.det() == 0:
            continue
        inv = sub.inverse()
        interior_blocked = False
        for k in range(1, s + 1):
            if k in pick:
                continue
            coeffs = [dot(row, V.col(k - 1)) for row in inv.row_tuples()]
            if all(c > 0 for c in coeffs):
                interior_blocked = True
                break
        if not interior_blocked:
            candidates.append(pick)

    geoms = {c: _ConeGeom(V, c) for c in candidates}
    facet_cache: dict[tuple[int, ...], tuple] = {}

    def facet_data(facet):
        if facet not in facet_cache:
            facet_cache[facet] = _facet_info(V, facet)
        return facet_cache[facet]

    def cone_side(facet, cone):
        # sign of the off-facet generator against the facet normal
        _, sides, _ = facet_data(facet)
        extra = next(g for g in cone if g not in facet)
        return 1 if sides[extra - 1] > 0 else -1 if sides[extra - 1] < 0 else 0

    by_facet: dict[tuple[int, ...], list[tuple[int, ...]]] = {}
    for c in candidates:
        for drop in c:
            facet = tuple(g for g in c if g != drop)
            by_facet.setdefault(facet, []).append(c)

    pair_ok_cache: dict[tuple, bool] = {}

    def pair_ok(a, b):
        key = (a, b) if a <= b else (b, a)
        if key not in pair_ok_cache:
            pair_ok_cache[key] = _proper_intersection(V, geoms[key[0]], geoms[key[1]])
        return pair_ok_cache[key]

    results: list[tuple[tuple[int, ...], ...]] = []

    def open_facets(chosen):
        counts: dict[tuple[int, ...], int] = {}
        for c in chosen:
            for drop in c:
                facet = tuple(g for g in c if g != drop)
                counts[facet] = counts.get(facet, 0) + 1
        out = []
        for facet, cnt in sorted(counts.items()):
            if cnt > 2:
                return None
            if cnt == 1 and not facet_data(facet)[2]:
                out.append(facet)
        return out

    def dfs(chosen: list[tuple[int, ...]], root):
        open_list = open_facets(chosen)
        if open_list is None:
            return
        if not open_list:
            used = {g for c in chosen for g in c}
            if len(used) == s:
                results.append(tuple(sorted(chosen)))
            return
        facet = open_list[0]
        owner = next(c for c in chosen if set(facet) <= set(c))
        side = cone_side(facet, owner)
        for cand in by_facet.get(facet, ()):
            if cand <= root or cand in chosen:
                continue
            if cone_side(facet, cand) != -side:
                continue
            if all(pair_ok(cand, c) for c in chosen):
                dfs(chosen + [cand], root)

    for c in candidates:
        dfs([c], c)

    fans = sorted(set(results))
    return [Fan(V=V, maximal_cones=tuple(Cone(gens=c) for c in fset))
            for fset in fans]


def is_divisorially_detected(V: Mat, cap: int = 10) -> bool:
    """Whether the configuration admits exactly one simplicial fan."""
    return len(enumerate_SF(V, cap=cap)) == 1
