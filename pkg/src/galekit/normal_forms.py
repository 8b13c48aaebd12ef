"""Hermite and Smith normal forms with transforms, and positive row echelon.

``hnf`` works on integer or rational matrices (rational input is cleared by
the lcm of denominators, reduced, and scaled back; the transform stays
integral).  ``snf`` is integer-only.  ``positive_row_echelon`` turns any
matrix whose row lattice admits a nonnegative basis into an entrywise
nonnegative row echelon form, via unimodular row operations and a column
permutation.
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
    _as_int,
    block_diag,
    solve,
    xgcd,
)


@dataclass(frozen=True)
class HnfResult:
    """H = U @ A with U unimodular; pivot_map is the 1-based pivot column of
    each nonzero row of H."""

    H: Mat
    U: Mat
    pivot_map: tuple[int, ...]

    @property
    def rank(self) -> int:
        return len(self.pivot_map)


@dataclass(frozen=True)
class SnfResult:
    """alpha @ A @ beta = S diagonal with positive invariant factors in a
    divisibility chain."""

    S: Mat
    alpha: Mat
    beta: Mat
    factors: tuple[int, ...]


def _row_sub(m: list[list[int]], i: int, k: int, q: int) -> None:
    if q:
        mi, mk = m[i], m[k]
        m[i] = [x - q * y for x, y in zip(mi, mk)]


def _hnf_int(mat: list[list[int]]) -> tuple[list[list[int]], list[list[int]], list[int]]:
    """Row HNF of an integer matrix with transform.

    Scan order is fixed (leftmost column first, smallest nonzero pivot,
    smallest nonnegative remainders above), and the rows of the transform
    that span the left kernel are themselves put in Hermite form, which
    makes the whole transform deterministic even when A has a nontrivial
    left kernel.
    """
    m = len(mat)
    u = [[int(i == j) for j in range(m)] for i in range(m)]
    n = len(mat[0])
    p = 0
    pivots: list[int] = []
    for j in range(n):
        if p == m:
            break
        while True:
            nz = [i for i in range(p, m) if mat[i][j]]
            if not nz:
                break
            i0 = min(nz, key=lambda i: (abs(mat[i][j]), i))
            if i0 != p:
                mat[p], mat[i0] = mat[i0], mat[p]
                u[p], u[i0] = u[i0], u[p]
            if mat[p][j] < 0:
                mat[p] = [-x for x in mat[p]]
                u[p] = [-x for x in u[p]]
            a = mat[p][j]
            clean = True
            for i in range(p + 1, m):
                b = mat[i][j]
                if b:
                    q = b // a
                    _row_sub(mat, i, p, q)
                    _row_sub(u, i, p, q)
                    if mat[i][j]:
                        clean = False
            if clean:
                break
        if mat[p][j]:
            a = mat[p][j]
            for i in range(p):
                q = mat[i][j] // a
                _row_sub(mat, i, p, q)
                _row_sub(u, i, p, q)
            pivots.append(j)
            p += 1
    if p < m:
        kern = [u[i][:] for i in range(p, m)]
        kern_h, _, _ = _hnf_int(kern)
        for i in range(p, m):
            u[i] = kern_h[i - p]
    return mat, u, pivots


def hnf(A: Mat) -> HnfResult:
    """Hermite normal form H = U @ A (row style, pivots top-left)."""
    d, work = A.int_scaled()
    h_int, u, piv0 = _hnf_int(work)
    if d == 1:
        h = Mat(h_int)
    else:
        h = Mat([[Fraction(x, d) for x in row] for row in h_int])
    return HnfResult(H=h, U=Mat(u), pivot_map=tuple(j + 1 for j in piv0))


def left_kernel_rows(A: Mat) -> list[tuple]:
    """Canonical basis rows of {x : x @ A = 0}; empty list if A has full
    row rank."""
    res = hnf(A)
    return [res.U.row(i) for i in range(res.rank, A.rows)]


# ---------------------------------------------------------------------------
# Smith normal form

def _swap_rows(m, i, j):
    m[i], m[j] = m[j], m[i]


def _swap_cols(m, i, j):
    for row in m:
        row[i], row[j] = row[j], row[i]


def _col_sub(m, j, k, q):
    # column j -= q * column k
    if q:
        for row in m:
            row[j] -= q * row[k]


def snf(A: Mat) -> SnfResult:
    if not A.is_integral:
        raise DomainError("snf requires an integer matrix")
    mat = A.to_lists()
    d, m = A.shape
    left = [[int(i == j) for j in range(d)] for i in range(d)]
    right = [[int(i == j) for j in range(m)] for i in range(m)]

    def clear_at(t: int) -> None:
        # assumes mat[t][t] != 0; clears row t and column t
        while True:
            if mat[t][t] < 0:
                mat[t] = [-x for x in mat[t]]
                left[t] = [-x for x in left[t]]
            a = mat[t][t]
            restart = False
            for i in range(d):
                if i != t and mat[i][t]:
                    q = mat[i][t] // a
                    _row_sub(mat, i, t, q)
                    _row_sub(left, i, t, q)
                    if mat[i][t]:
                        _swap_rows(mat, i, t)
                        _swap_rows(left, i, t)
                        restart = True
                        break
            if restart:
                continue
            for j in range(m):
                if j != t and mat[t][j]:
                    q = mat[t][j] // a
                    _col_sub(mat, j, t, q)
                    _col_sub(right, j, t, q)
                    if mat[t][j]:
                        _swap_cols(mat, j, t)
                        _swap_cols(right, j, t)
                        restart = True
                        break
            if not restart:
                break

    t = 0
    limit = min(d, m)
    while t < limit:
        best = None
        for i in range(t, d):
            for j in range(t, m):
                v = mat[i][j]
                if v and (best is None or abs(v) < abs(mat[best[0]][best[1]])):
                    best = (i, j)
        if best is None:
            break
        if best[0] != t:
            _swap_rows(mat, best[0], t)
            _swap_rows(left, best[0], t)
        if best[1] != t:
            _swap_cols(mat, best[1], t)
            _swap_cols(right, best[1], t)
        clear_at(t)
        t += 1

    k = t

    def fix_sign(i: int) -> None:
        if mat[i][i] < 0:
            mat[i] = [-x for x in mat[i]]
            left[i] = [-x for x in left[i]]

    for i in range(k):
        fix_sign(i)
    # enforce the divisibility chain c_i | c_{i+1}
    i = 0
    while i + 1 < k:
        a, b = mat[i][i], mat[i + 1][i + 1]
        if b % a:
            for row in mat:
                row[i] += row[i + 1]
            for row in right:
                row[i] += row[i + 1]
            clear_at(i)
            fix_sign(i)
            fix_sign(i + 1)
            i = max(i - 1, 0)
        else:
            i += 1

    factors = tuple(mat[i][i] for i in range(k))
    return SnfResult(S=Mat(mat), alpha=Mat(left), beta=Mat(right), factors=factors)


# ---------------------------------------------------------------------------
# positivity helpers on row lattices

def strictly_positive_row_vector(basis: Sequence[Sequence[int]],
                                 support: Sequence[int],
                                 ) -> "tuple[tuple[int, ...], tuple[int, ...]] | None":
    """An integer combination of the basis rows that is > 0 on every support
    column, together with its coefficient vector, or None.

    Feasibility of ``lam @ B >= 1`` is decided exactly by enumerating basic
    solutions: the constraint normals span, so the polyhedron is pointed and
    nonempty iff some square subsystem solved at equality is feasible.
    """
    k = len(basis)
    cols = list(support)
    if k == 0 or not cols:
        return None
    bmat = Mat(basis)
    sub = bmat.take_cols(cols)
    from itertools import combinations
    ones = Mat([[1]] * k)
    for pick in combinations(range(len(cols)), k):
        square = sub.take_cols(pick)
        if square.rank() < k:
            continue
        lam = solve(square.transpose(), ones)
        if lam is None:
            continue
        lam_row = tuple(lam.col(0))
        ok = True
        for j in range(len(cols)):
            if sum(l * sub[i, j] for i, l in enumerate(lam_row)) < 1:
                ok = False
                break
        if not ok:
            continue
        denom = 1
        for x in lam_row:
            if isinstance(x, Fraction):
                denom = denom * x.denominator // math.gcd(denom, x.denominator)
        lam_int = tuple(_as_int(x * denom) for x in lam_row)
        vec = tuple(sum(l * basis[i][j] for i, l in enumerate(lam_int))
                    for j in range(bmat.cols))
        return vec, lam_int
    return None


def basis_with_positive_first_row(basis: Sequence[Sequence[int]],
                                  c: Sequence[int],
                                  lam: Sequence[int],
                                  support: Sequence[int],
                                  ) -> tuple[list[list[int]], Mat]:
    """Rebase so that the first row is c/gcd(lam) and all rows are >= 0.

    c = lam @ basis must hold.  Returns (new_rows, T) with new_rows = T @ basis
    and T unimodular.
    """
    k = len(basis)
    lam_col = Mat([[x] for x in lam])
    res = hnf(lam_col)
    alpha = res.U
    t_mat = alpha.inverse().transpose()
    if not t_mat.is_integral:
        raise GaleKitError("unimodular inverse produced non-integer entries")
    rows = (t_mat @ Mat(basis)).to_lists()
    first = rows[0]
    if any(first[j] <= 0 for j in support):
        raise GaleKitError("rebased first row is not strictly positive on support")
    t_rows = t_mat.to_lists()
    for i in range(1, k):
        # smallest integer multiple of the first row making this row >= 0
        mult = math.ceil(max((Fraction(-rows[i][j], first[j]) for j in support),
                             default=Fraction(0)))
        if mult:
            rows[i] = [x + mult * y for x, y in zip(rows[i], first)]
            t_rows[i] = [x + mult * y for x, y in zip(t_rows[i], t_rows[0])]
    return rows, Mat(t_rows)


def positive_row_basis(basis: Sequence[Sequence[int]]) -> tuple[list[list[int]], Mat]:
    """A nonnegative basis of the row lattice of ``basis`` plus its transform.

    Raises DomainError when the lattice admits no such basis (i.e. the input
    is not W-positive).
    """
    cols = len(basis[0])
    support = [j for j in range(cols) if any(row[j] for row in basis)]
    found = strictly_positive_row_vector(basis, support)
    if found is None:
        raise DomainError("row lattice has no strictly positive vector: "
                          "matrix is not W-positive")
    c, lam = found
    return basis_with_positive_first_row(basis, c, lam, support)


# ---------------------------------------------------------------------------
# positive row echelon form

def _perm_cols(mat, perm_target, order):
    # reorder columns order -> positions perm_target..; applied to all rows
    for row in mat:
        seg = [row[j] for j in order]
        for off, val in enumerate(seg):
            row[perm_target + off] = val


def _apply_col_order(mat: list[list], right: list[list[int]],
                     c0: int, order: list[int]) -> None:
    if order == list(range(c0, c0 + len(order))):
        return
    _perm_cols(mat, c0, order)
    _perm_cols(right, c0, order)


def _clear_first_column(mat, left, right, r0, c0, d, m) -> None:
    """Zero out window column c0 below its first row, keeping entries >= 0."""
    if d <= 1:
        return
    last = r0 + d - 1

    def sort_key(j):
        den = mat[last][j]
        if den == 0:
            return (0, Fraction(0), j)
        return (1, -Fraction(mat[last - 1][j], den), j)

    order = sorted(range(c0, c0 + m), key=sort_key)
    _apply_col_order(mat, right, c0, order)

    if mat[last][c0] != 0:
        a, b = mat[last - 1][c0], mat[last][c0]
        g, x, y = xgcd(a, b)
        row_hi = [x * u + y * v for u, v in zip(mat[last - 1], mat[last])]
        row_lo = [(-b // g) * u + (a // g) * v
                  for u, v in zip(mat[last - 1], mat[last])]
        mat[last - 1], mat[last] = row_hi, row_lo
        lhi = [x * u + y * v for u, v in zip(left[last - 1], left[last])]
        llo = [(-b // g) * u + (a // g) * v
               for u, v in zip(left[last - 1], left[last])]
        left[last - 1], left[last] = lhi, llo
        mult = 0
        for j in range(c0, c0 + m):
            if mat[last][j] > 0 and mat[last - 1][j] < 0:
                mult = max(mult, math.ceil(Fraction(-mat[last - 1][j], mat[last][j])))
        if mult:
            mat[last - 1] = [u + mult * v for u, v in zip(mat[last - 1], mat[last])]
            left[last - 1] = [u + mult * v for u, v in zip(left[last - 1], left[last])]

    j0 = 0
    while j0 < m and mat[last][c0 + j0] == 0:
        j0 += 1
    assert all(mat[last][c0 + t] > 0 for t in range(j0, m))

    _clear_first_column(mat, left, right, r0, c0, d - 1, j0)

    # recursion may have left negatives right of the truncation; the last row
    # is zero there-left and positive there-right, so it can repair them
    for i in range(r0, last):
        mult = 0
        for j in range(c0 + j0, c0 + m):
            if mat[i][j] < 0:
                mult = max(mult, math.ceil(Fraction(-mat[i][j], mat[last][j])))
        if mult:
            mat[i] = [u + mult * v for u, v in zip(mat[i], mat[last])]
            left[i] = [u + mult * v for u, v in zip(left[i], left[last])]


def positive_row_echelon(A: Mat) -> tuple[Mat, Mat, Mat]:
    """(E, alpha, beta) with E = alpha @ A @ beta, E >= 0 in row echelon form,
    alpha unimodular and beta a permutation matrix.

    Raises DomainError when the row lattice of A is not W-positive.
    """
    if not A.is_integral:
        raise DomainError("positive_row_echelon requires an integer matrix")
    d, m = A.shape
    mat = A.to_lists()
    left = [[int(i == j) for j in range(d)] for i in range(d)]
    right = [[int(i == j) for j in range(m)] for i in range(m)]

    if any(x < 0 for row in mat for x in row):
        res = hnf(A)
        r = res.rank
        basis = [list(res.H.row(i)) for i in range(r)]
        pos_rows, t_mat = positive_row_basis(basis)
        trans = block_diag(t_mat, Mat.identity(d - r)) if r < d else t_mat
        full = trans @ res.U
        mat = pos_rows + [[0] * m for _ in range(d - r)]
        left = full.to_lists()

    r0 = c0 = 0
    rows_left, cols_left = d, m
    while rows_left > 0 and cols_left > 0:
        _clear_first_column(mat, left, right, r0, c0, rows_left, cols_left)
        if mat[r0][c0] > 0:
            r0 += 1
            rows_left -= 1
        c0 += 1
        cols_left -= 1

    return Mat(mat), Mat(left), Mat(right)


def is_row_echelon(A: Mat) -> bool:
    """Echelon predicate: zero rows at the bottom, leading entries strictly
    moving right."""
    lead = -1
    seen_zero = False
    for i in range(A.rows):
        row = A.row(i)
        j = next((c for c, x in enumerate(row) if x != 0), None)
        if j is None:
            seen_zero = True
            continue
        if seen_zero or j <= lead:
            return False
        lead = j
    return True
