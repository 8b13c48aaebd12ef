"""Classification and reduction of candidate fan matrices (F) and weight
matrices (W).

F-side clauses: full rank, columns positively spanning the ambient space,
no zero columns, no repeated ray directions; the C refinement asks the
column lattice to be all of Z^n.  W-side clauses: full rank, no cotorsion,
a nonnegative row-lattice basis, no zero columns, no unit vectors and no
mixed-sign 2-sparse vectors in the row lattice.

All feasibility questions (cone membership, strictly positive lattice
vectors) are decided exactly over the rationals by enumerating square
subsystems; no floating point and no tolerance anywhere.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations

from .matrix import (
    DomainError,
    GaleKitError,
    Mat,
    dot,
    solve,
    submatrix_cols,
    vec_gcd,
)
from .normal_forms import (
    basis_with_positive_first_row,
    left_kernel_rows,
    snf,
    strictly_positive_row_vector,
)
from .lattices import Lattice, has_cotorsion
from .gale import gale_dual


@dataclass(frozen=True)
class WMatrixReport:
    is_w_matrix: bool
    violated: tuple[str, ...]
    positive_witness: "tuple[int, ...] | None"


@dataclass(frozen=True)
class FMatrixReport:
    is_f_matrix: bool
    is_cf_matrix: bool
    violated: tuple[str, ...]


def _nonneg_combination(cols: list[tuple], target: tuple) -> "list | None":
    """Exact coefficients c >= 0 with sum(c_i * cols_i) = target, or None.

    By Caratheodory it is enough to scan subsets of size rank(cols): any
    feasible point is feasible on an independent subset, extendable to a
    maximal one.
    """
    if not any(target):
        return [0] * len(cols)
    if not cols:
        return None
    mat = Mat.from_cols(cols)
    rho = mat.rank()
    if rho == 0:
        return None
    tgt = Mat([[x] for x in target])
    for pick in combinations(range(len(cols)), rho):
        sub = mat.take_cols(pick)
        if sub.rank() < rho:
            continue
        sol = solve(sub, tgt)
        if sol is None:
            continue
        vals = [sol[i, 0] for i in range(rho)]
        if any(v < 0 for v in vals):
            continue
        out = [0] * len(cols)
        for slot, v in zip(pick, vals):
            out[slot] = v
        return out
    return None


def is_f_complete(A: Mat) -> bool:
    """Do the columns of A positively span the whole ambient space?

    Criterion: full rank and, for each column v, -v is a nonnegative
    rational combination of the remaining columns.
    """
    if not A.is_integral:
        raise DomainError("is_f_complete requires an integer matrix")
    if A.rank() < A.rows:
        return False
    cols = list(A.col_tuples())
    for i, v in enumerate(cols):
        others = cols[:i] + cols[i + 1:]
        neg = tuple(-x for x in v)
        if _nonneg_combination(others, neg) is None:
            return False
    return True


def is_w_positive(A: Mat) -> tuple[bool, "tuple[int, ...] | None"]:
    """Whether the row lattice of A has a nonnegative basis, with a strictly
    positive witness vector when it does.

    Requires every column nonzero (the strict-positivity criterion breaks
    down otherwise).
    """
    if not A.is_integral:
        raise DomainError("is_w_positive requires an integer matrix")
    for j in range(A.cols):
        if not any(A.col(j)):
            raise DomainError(f"column {j + 1} is zero: criterion inapplicable")
    lat = Lattice.from_matrix(A)
    found = strictly_positive_row_vector([list(r) for r in lat.basis],
                                         list(range(A.cols)))
    if found is None:
        return False, None
    return True, found[0]


def classify_f(V: Mat) -> FMatrixReport:
    """Clause-by-clause candidate-fan-matrix check (a: rank, b: positive
    spanning, c: nonzero columns, d: distinct ray directions, e: full
    column lattice)."""
    if not V.is_integral:
        raise DomainError("classify_f requires an integer matrix")
    n = V.rows
    violated = []
    if V.rank() != n:
        violated.append("a")
    if not is_f_complete(V):
        violated.append("b")
    cols = list(V.col_tuples())
    if any(not any(c) for c in cols):
        violated.append("c")
    prop = False
    for i in range(len(cols)):
        for j in range(i + 1, len(cols)):
            u, w = cols[i], cols[j]
            if any(u) and any(w) and Mat([u, w]).rank() == 1 and dot(u, w) > 0:
                prop = True
    if prop:
        violated.append("d")
    if Lattice.from_rows(cols, n) != Lattice.standard(n):
        violated.append("e")
    is_f = all(c not in violated for c in "abcd")
    return FMatrixReport(is_f_matrix=is_f,
                         is_cf_matrix=is_f and "e" not in violated,
                         violated=tuple(violated))


def classify_w(Q: Mat) -> WMatrixReport:
    """Clause-by-clause candidate-weight-matrix check (a: rank, b: no
    cotorsion, c: W-positive, d: nonzero columns, e: no unit vectors,
    f: no mixed-sign 2-sparse vectors in the row lattice)."""
    if not Q.is_integral:
        raise DomainError("classify_w requires an integer matrix")
    r, m = Q.shape
    violated = []
    lat = Lattice.from_matrix(Q)
    if Q.rank() != r:
        violated.append("a")
    if has_cotorsion(m, lat):
        violated.append("b")

    witness = None
    if lat.rank:
        support = [j for j in range(m) if any(row[j] for row in lat.basis)]
        found = strictly_positive_row_vector([list(row) for row in lat.basis], support)
        if found is None:
            violated.append("c")
        else:
            witness = found[0]
    # rank 0: the empty basis is vacuously positive, clause c passes

    if any(not any(Q.col(j)) for j in range(m)):
        violated.append("d")

    unit = False
    for j in range(m):
        e = tuple(int(t == j) for t in range(m))
        if e in lat:
            unit = True
    if unit:
        violated.append("e")

    if _has_mixed_sign_plane_vector(lat):
        violated.append("f")

    is_w = not violated
    return WMatrixReport(is_w_matrix=is_w, violated=tuple(violated),
                         positive_witness=witness)


def _has_mixed_sign_plane_vector(lat: Lattice) -> bool:
    # clause f: look at L ∩ span(e_i, e_j) for every coordinate plane
    m = lat.ambient_dim
    if lat.rank == 0:
        return False
    basis = lat.basis_matrix()
    for i in range(m):
        for j in range(i + 1, m):
            rest = [c for c in range(m) if c not in (i, j)]
            if rest:
                reduced = basis.take_cols(rest)
                kern = left_kernel_rows(reduced)
                plane_rows = [tuple(sum(k[t] * basis[t, c] for t in range(lat.rank))
                                    for c in range(m)) for k in kern]
            else:
                plane_rows = [tuple(row) for row in lat.basis]
            plane_rows = [p for p in plane_rows if any(p)]
            if not plane_rows:
                continue
            rk = Mat(plane_rows).rank() if plane_rows else 0
            if rk >= 2:
                return True
            gen = plane_rows[0]
            if gen[i] * gen[j] < 0:
                return True
    return False


def _positive_relation(V: Mat, i: int) -> list[int]:
    """Integer relation sum_j c_j v_j = 0 with c >= 0 and c_i > 0 (0-based i)."""
    cols = list(V.col_tuples())
    v = cols[i]
    others = cols[:i] + cols[i + 1:]
    neg = tuple(-x for x in v)
    comb = _nonneg_combination(others, neg)
    if comb is None:
        raise GaleKitError("no positive relation found; Gale dual of a "
                           "W-matrix must positively span (theorem violation)")
    denom = 1
    for x in comb:
        if isinstance(x, Fraction):
            denom = denom * x.denominator // math.gcd(denom, x.denominator)
    rel = [0] * len(cols)
    rel[i] = denom
    slots = [j for j in range(len(cols)) if j != i]
    for slot, x in zip(slots, comb):
        rel[slot] = int(x * denom)
    return rel


def positivize(Q: Mat) -> Mat:
    """An entrywise nonnegative matrix with the same row lattice as the
    W-matrix Q and a strictly positive first row.

    Procedure: sum exact positive column relations of the Gale dual into a
    strictly positive primitive vector c, lift c into the row lattice, move
    it to the first row by a unimodular change of basis, then add multiples
    of it to the remaining rows.
    """
    rep = classify_w(Q)
    if not rep.is_w_matrix:
        raise DomainError("positivize requires a W-matrix "
                          f"(violated clauses: {','.join(rep.violated)})")
    V = gale_dual(Q)
    m = Q.cols
    total = [0] * m
    for i in range(m):
        rel = _positive_relation(V, i)
        total = [a + b for a, b in zip(total, rel)]
    g = vec_gcd(total)
    c = [x // g for x in total]
    lam = solve(Q.transpose(), Mat([[x] for x in c]))
    if lam is None or not lam.is_integral:
        raise GaleKitError("positive relation vector does not lift into the "
                           "row lattice (no-cotorsion violation)")
    lam_row = tuple(lam.col(0))
    rows, _ = basis_with_positive_first_row(Q.to_lists(), c, lam_row,
                                            list(range(m)))
    return Mat(rows)


# ---------------------------------------------------------------------------
# reduction

def f_reduce(V: Mat) -> tuple[Mat, tuple[int, ...]]:
    """Divide each column by its gcd; returns the reduced matrix and the gcds."""
    rep = classify_f(V)
    if not rep.is_f_matrix:
        raise DomainError("f_reduce requires an F-matrix "
                          f"(violated clauses: {','.join(rep.violated)})")
    gcds = tuple(vec_gcd(V.col(j)) for j in range(V.cols))
    reduced = Mat([[row[j] // gcds[j] for j in range(V.cols)]
                   for row in V.row_tuples()])
    return reduced, gcds


def i_reduce(Q: Mat, i: int) -> Mat:
    """One reduction step at 1-based column i of a W-matrix.

    Removes the column-i gcd of the Gale dual: diagonalize Q with the i-th
    column deleted, then rescale the i-th column up and the last row down by
    that gcd.  A no-op when the gcd is already 1.
    """
    if not 1 <= i <= Q.cols:
        raise DomainError(f"column index {i} out of range")
    rep = classify_w(Q)
    if not rep.is_w_matrix:
        raise DomainError("i_reduce requires a W-matrix "
                          f"(violated clauses: {','.join(rep.violated)})")
    V = gale_dual(Q)
    d = vec_gcd(V.col(i - 1))
    if d == 1:
        return Q
    qi = submatrix_cols(Q, (i,), complement=True)
    alpha = snf(qi).alpha
    moved = alpha @ Q
    r = Q.rows
    rows = moved.to_lists()
    out = []
    for ri, row in enumerate(rows):
        new = []
        for j, x in enumerate(row):
            if j == i - 1:
                x = x * d
            if ri == r - 1:
                if x % d:
                    raise GaleKitError("last row not divisible in i-reduction "
                                       "(cyclic-quotient theorem violation)")
                x //= d
            new.append(x)
        out.append(new)
    return Mat(out)


def w_reduce(Q: Mat) -> Mat:
    """Full weight-matrix reduction: i-reductions for i = 1..n+r in order,
    recomputing the Gale dual's column gcds after each step."""
    rep = classify_w(Q)
    if not rep.is_w_matrix:
        raise DomainError("w_reduce requires a W-matrix "
                          f"(violated clauses: {','.join(rep.violated)})")
    cur = Q
    for i in range(1, Q.cols + 1):
        cur = i_reduce(cur, i)
    return cur


def is_w_reduced(Q: Mat) -> bool:
    """True iff every column-deleted row lattice of Q is saturated.

    Computed both directly (cotorsion of each L_r(Q^i)) and through the
    Gale dual's column gcds; the two must agree.
    """
    rep = classify_w(Q)
    if not rep.is_w_matrix:
        raise DomainError("is_w_reduced requires a W-matrix "
                          f"(violated clauses: {','.join(rep.violated)})")
    m = Q.cols
    direct = all(
        not has_cotorsion(m - 1, Lattice.from_matrix(
            submatrix_cols(Q, (i,), complement=True)))
        for i in range(1, m + 1))
    V = gale_dual(Q)
    via_dual = all(vec_gcd(V.col(j)) == 1 for j in range(m))
    if direct != via_dual:
        raise GaleKitError("reducedness criteria disagree (internal invariant)")
    return direct
