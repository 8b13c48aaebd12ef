"""Divisor-level invariants of a Q-factorial complete toric variety given by
a fan matrix V, a weight matrix Q and a choice of simplicial fan.

The class group is the quotient of the ray-divisor lattice by the row
lattice of V; its free part is identified with Z^r through the generators
read off the Hermite transform of Q^T.  In that identification the Picard
subgroup is the intersection of the column lattices of the complementary
weight submatrices over all maximal cones, Cartier divisors are spanned by
an explicit block product, and Cartier indices come from per-cone linear
systems.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .matrix import (
    DomainError,
    GaleKitError,
    Mat,
    block_diag,
    det_exact,
    mat_vec,
    solve,
    submatrix_cols,
)
from .normal_forms import hnf
from .lattices import (
    Lattice,
    QuotientStructure,
    gcd_max_minors,
    lattice_intersection,
    quotient_structure,
)
from .gale import gale_dual
from .fw import classify_f, classify_w, is_w_reduced
from .fans import Fan, enumerate_SF, fan_from_cones, is_fan, is_support_complete


@dataclass(frozen=True)
class ToricReport:
    n: int
    r: int
    cl: QuotientStructure
    is_pws: bool
    cl_generators: Mat
    picard_basis: Mat
    cartier_basis: Mat
    delta_sigma: int
    cartier_indices: tuple[int, ...]


def class_group(V: Mat) -> QuotientStructure:
    """Isomorphism type of Z^(n+r) / (row lattice of V)."""
    if V.rank() < V.rows:
        raise DomainError("class_group requires full row rank")
    return quotient_structure(V.cols, Lattice.from_matrix(V))


def torsion_via_Tn(V: Mat) -> QuotientStructure:
    """Torsion of the class group through the upper block of HNF(V^T)."""
    n = V.rows
    if V.rank() < n:
        raise DomainError("torsion_via_Tn requires full row rank")
    res = hnf(V.transpose())
    top = Mat([res.H.row(i) for i in range(n)])
    q = quotient_structure(n, Lattice.from_matrix(top))
    if q.free_rank:
        raise GaleKitError("upper HNF block of V^T is singular (unreachable)")
    return q


def is_pws(V: Mat) -> tuple[bool, dict[str, bool]]:
    """Evaluate the four torsion-freeness conditions independently and require
    agreement: trivial torsion, identity HNF block, full column lattice,
    coprime maximal minors."""
    rep = classify_f(V)
    if not rep.is_f_matrix:
        raise DomainError("is_pws requires an F-matrix "
                          f"(violated clauses: {','.join(rep.violated)})")
    n = V.rows
    cond = {}
    cond["torsion_trivial"] = torsion_via_Tn(V).is_trivial
    res = hnf(V.transpose())
    expected = [[int(i == j) for j in range(n)] for i in range(V.cols)]
    cond["hnf_identity_block"] = res.H == Mat(expected)
    cond["column_lattice_full"] = (
        Lattice.from_rows(V.col_tuples(), n) == Lattice.standard(n))
    cond["coprime_minors"] = gcd_max_minors(V) == 1
    values = set(cond.values())
    if len(values) > 1:
        raise GaleKitError(f"PWS conditions disagree: {cond} (internal invariant)")
    return values.pop(), cond


def cl_generators_full(Q: Mat) -> Mat:
    """The whole Hermite transform U_Q (class-group generators on top, a fan
    matrix below)."""
    r = Q.rows
    res = hnf(Q.transpose())
    expected = Mat([[int(i == j) for j in range(r)] for i in range(Q.cols)])
    if res.H != expected:
        raise DomainError("weight matrix is not of PWS type: "
                          "HNF(Q^T) is not (I | 0)")
    return res.U


def cl_generators(Q: Mat) -> Mat:
    """Rows expressing free generators of the class group in ray divisors:
    the upper r rows of the transform U with U @ Q^T in Hermite form."""
    full = cl_generators_full(Q)
    return Mat([full.row(i) for i in range(Q.rows)])


def weil_class(Q: Mat, a: Sequence[int]) -> tuple:
    """Class of the divisor with ray coefficients a, in the fixed basis."""
    return mat_vec(Q, a)


def _index_sets(fan: Fan) -> list[tuple[int, ...]]:
    m = fan.V.cols
    out = []
    for cone in fan.maximal_cones:
        chosen = set(cone.gens)
        out.append(tuple(j for j in range(1, m + 1) if j not in chosen))
    return out


def _check_fan(V: Mat, fan: Fan) -> None:
    if fan.V != V:
        raise DomainError("fan does not belong to the given matrix")
    if not fan.maximal_cones:
        raise DomainError("fan has no maximal cones")
    if any(len(c.gens) != V.rows for c in fan.maximal_cones):
        raise DomainError("maximal cones must have exactly n generators")
    used = {g for c in fan.maximal_cones for g in c.gens}
    if used != set(range(1, V.cols + 1)):
        raise DomainError("invalid fan: not every ray is used by a maximal cone")
    if not is_fan(V, fan.maximal_cones):
        raise DomainError("invalid fan: cones do not meet along faces")
    if not is_support_complete(V, fan):
        raise DomainError("invalid fan: support does not cover the column cone")


def picard_basis(Q: Mat, fan: Fan, validate: bool = True) -> Mat:
    """Basis (rows) of the Picard subgroup inside Z^r: intersection of the
    column lattices of the complementary weight submatrices."""
    V = gale_dual(Q)
    if validate:
        _check_fan(V, fan)
    lattices = []
    for idx in _index_sets(fan):
        qi = submatrix_cols(Q, idx)
        lattices.append(Lattice.from_rows(qi.col_tuples(), Q.rows))
    inter = lattice_intersection(lattices)
    basis = inter.basis_matrix()
    if basis is None or inter.rank != Q.rows:
        raise GaleKitError("Picard lattice is not of full rank (unreachable "
                           "for simplicial complete fans)")
    if not basis.is_integral:
        raise GaleKitError("Picard basis is not integral (internal invariant)")
    return basis


def cartier_basis(B: Mat, U_Q: Mat) -> Mat:
    """Rows spanning the Cartier subgroup inside the ray-divisor lattice:
    blockdiag(B, I_n) @ U_Q."""
    r = B.rows
    if B.cols != r:
        raise DomainError("Picard basis must be square")
    total = U_Q.rows
    if U_Q.cols != total or total <= r:
        raise DomainError("transform must be square of size n + r with n >= 1")
    return block_diag(B, Mat.identity(total - r)) @ U_Q


def delta_sigma(Q: Mat, fan: Fan, validate: bool = True) -> int:
    """lcm of |det| of the complementary weight submatrices over all maximal
    cones; multiplies every ray divisor into a Cartier divisor."""
    V = gale_dual(Q)
    if validate:
        _check_fan(V, fan)
    value = 1
    for idx in _index_sets(fan):
        d = abs(det_exact(submatrix_cols(Q, idx)))
        if d == 0:
            raise DomainError("degenerate maximal cone: complementary "
                              "weight submatrix is singular")
        value = value * d // math.gcd(value, d)
    cb = cartier_basis(picard_basis(Q, fan, validate=False), cl_generators_full(Q))
    lat = Lattice.from_matrix(cb)
    for j in range(Q.cols):
        vec = tuple(value * int(t == j) for t in range(Q.cols))
        if vec not in lat:
            raise GaleKitError("delta_sigma multiple is not Cartier "
                               "(internal invariant)")
    return value


def cartier_index(V: Mat, fan: Fan, a: Sequence[int], validate: bool = True) -> int:
    """Least k >= 1 such that k*a gives integral per-cone linear data.

    For each maximal cone the square system m . v_j = a_j (j in the cone)
    has a unique rational solution; the answer is the lcm over cones of the
    denominators appearing in those solutions.
    """
    if len(a) != V.cols:
        raise DomainError("divisor coefficient length mismatch")
    if validate:
        _check_fan(V, fan)
    k = 1
    for cone in fan.maximal_cones:
        sub = V.take_cols([g - 1 for g in cone.gens])
        rhs = Mat([[a[g - 1]] for g in cone.gens])
        sol = solve(sub.transpose(), rhs)
        if sol is None:
            raise DomainError("degenerate cone in cartier_index")
        for i in range(sol.rows):
            x = sol[i, 0]
            if isinstance(x, Fraction):
                k = k * x.denominator // math.gcd(k, x.denominator)
    return k


def full_report(Q: "Mat | None" = None, V: "Mat | None" = None,
                fan: "Fan | Sequence[Sequence[int]] | None" = None,
                fan_index: "int | None" = None, cap: int = 10) -> ToricReport:
    """Aggregate report for a poly weighted space given either a reduced
    weight matrix Q or a torsion-free fan matrix V, plus a fan choice.

    The fan may be passed explicitly (Fan or cone index sets) or selected by
    1-based ``fan_index`` among the enumerated fans; when the configuration
    admits a single fan it is chosen automatically.
    """
    if (Q is None) == (V is None):
        raise DomainError("provide exactly one of Q or V")
    if Q is not None:
        wrep = classify_w(Q)
        if not wrep.is_w_matrix:
            raise DomainError("input is not a W-matrix "
                              f"(violated clauses: {','.join(wrep.violated)})")
        if not is_w_reduced(Q):
            raise DomainError("weight matrix is not reduced; "
                              "run reduce-w and retry")
        V = gale_dual(Q)
    else:
        pws_flag, _ = is_pws(V)
        if not pws_flag:
            raise DomainError("fan matrix has class-group torsion: only "
                              "torsion-free (CF) fan matrices are supported here")
        Q = gale_dual(V)
        if not is_w_reduced(Q):
            raise DomainError("derived weight matrix is not reduced; "
                              "run reduce-w and retry")

    if fan is None:
        fans = enumerate_SF(V, cap=cap)
        if fan_index is None:
            if len(fans) != 1:
                raise DomainError(f"{len(fans)} fans available; select one "
                                  "with a 1-based fan index")
            chosen = fans[0]
        else:
            if not 1 <= fan_index <= len(fans):
                raise DomainError(f"fan index {fan_index} out of range "
                                  f"1..{len(fans)}")
            chosen = fans[fan_index - 1]
    elif isinstance(fan, Fan):
        chosen = fan
    else:
        chosen = fan_from_cones(V, fan)
    _check_fan(V, chosen)

    n, r = V.rows, Q.rows
    cl = class_group(V)
    pws_flag, _ = is_pws(V)
    u_full = cl_generators_full(Q)
    gens = Mat([u_full.row(i) for i in range(r)])
    b = picard_basis(Q, chosen, validate=False)
    c = cartier_basis(b, u_full)
    delta = delta_sigma(Q, chosen, validate=False)
    indices = tuple(
        cartier_index(V, chosen,
                      tuple(int(t == j) for t in range(n + r)), validate=False)
        for j in range(n + r))

    _assert_report_invariants(Q, V, gens, b, c, delta)
    return ToricReport(n=n, r=r, cl=cl, is_pws=pws_flag, cl_generators=gens,
                       picard_basis=b, cartier_basis=c, delta_sigma=delta,
                       cartier_indices=indices)


def _assert_report_invariants(Q: Mat, V: Mat, gens: Mat, b: Mat, c: Mat,
                              delta: int) -> None:
    r, n = Q.rows, V.rows
    ident = Mat.identity(r)
    if Q @ gens.transpose() != ident:
        raise GaleKitError("class-group generators do not invert Q "
                           "(internal invariant)")
    prod = Q @ c.transpose()
    expect = [[0] * (n + r) for _ in range(r)]
    bt = b.transpose()
    for i in range(r):
        for j in range(r):
            expect[i][j] = bt[i, j]
    if prod != Mat(expect):
        raise GaleKitError("Cartier rows do not map onto the Picard basis "
                           "(internal invariant)")
    index = abs(det_exact(b))
    if abs(det_exact(c)) != index:
        raise GaleKitError("Cartier index does not match Picard index "
                           "(internal invariant)")
    if index % delta:
        raise GaleKitError("delta does not divide the Picard index "
                           "(internal invariant)")
