"""Shared generators and independent oracles for the test suite.

Oracles here deliberately avoid the library's own fast paths: determinants
by cofactor expansion, ranks by naive rational elimination, minor gcds by
direct enumeration.  They are the reference implementations the production
code is checked against.
"""

from fractions import Fraction
from itertools import combinations
import math
import random

from galekit import Mat


def pytest_terminal_summary(terminalreporter):
    """Echo the acceptance criterion PASS/FAIL lines in the run summary."""
    try:
        from test_acceptance import CRITERION_LINES
    except ImportError:
        return
    if CRITERION_LINES:
        terminalreporter.write_sep("-", "acceptance criteria")
        for line in CRITERION_LINES:
            terminalreporter.write_line(line)


def rand_mat(rng: random.Random, m: int, n: int, lo: int = -5, hi: int = 5) -> Mat:
    return Mat([[rng.randint(lo, hi) for _ in range(n)] for _ in range(m)])


def rand_full_row_rank(rng: random.Random, m: int, n: int,
                       lo: int = -5, hi: int = 5) -> Mat:
    while True:
        A = rand_mat(rng, m, n, lo, hi)
        if A.rank() == m:
            return A


def rand_unimodular(rng: random.Random, n: int, steps: int = 12) -> Mat:
    rows = [[int(i == j) for j in range(n)] for i in range(n)]
    for _ in range(steps):
        op = rng.randrange(3)
        i, j = rng.sample(range(n), 2) if n > 1 else (0, 0)
        if op == 0 and i != j:
            rows[i], rows[j] = rows[j], rows[i]
        elif op == 1:
            rows[i] = [-x for x in rows[i]]
        elif i != j:
            q = rng.randint(-3, 3)
            rows[i] = [x + q * y for x, y in zip(rows[i], rows[j])]
    return Mat(rows)


def cofactor_det(A: Mat):
    """Reference determinant by first-row cofactor expansion."""
    n = A.rows
    if n == 1:
        return A[0, 0]
    total = 0
    cols = list(range(n))
    for j in range(n):
        minor = Mat([[A[i, c] for c in cols if c != j] for i in range(1, n)])
        total += (-1) ** j * A[0, j] * cofactor_det(minor)
    return total


def gauss_rank(A: Mat) -> int:
    """Reference rank by plain rational Gaussian elimination."""
    rows = [[Fraction(x) for x in A.row(i)] for i in range(A.rows)]
    rank = 0
    for j in range(A.cols):
        piv = next((i for i in range(rank, len(rows)) if rows[i][j]), None)
        if piv is None:
            continue
        rows[rank], rows[piv] = rows[piv], rows[rank]
        for i in range(len(rows)):
            if i != rank and rows[i][j]:
                c = rows[i][j] / rows[rank][j]
                rows[i] = [x - c * y for x, y in zip(rows[i], rows[rank])]
        rank += 1
    return rank


def minors_gcd_oracle(A: Mat, k: int) -> int:
    """gcd of all k x k minors by direct enumeration (0 when all vanish)."""
    g = 0
    for rsel in combinations(range(A.rows), k):
        for csel in combinations(range(A.cols), k):
            sub = Mat([[A[i, j] for j in csel] for i in rsel])
            g = math.gcd(g, abs(cofactor_det(sub)))
    return g


def hnf_clauses_hold(H: Mat, pivot_map) -> bool:
    """The row-style Hermite conditions on H with the given pivot columns."""
    r = len(pivot_map)
    pivots0 = [p - 1 for p in pivot_map]
    if any(a >= b for a, b in zip(pivots0, pivots0[1:])):
        return False
    for i in range(r):
        p = pivots0[i]
        # integer pivots are >= 1; rational ones only need positivity
        if H[i, p] <= 0:
            return False
        if isinstance(H[i, p], int) and H.is_integral and H[i, p] < 1:
            return False
        if any(H[i, j] != 0 for j in range(p)):
            return False
    for i in range(r):
        for k in range(i + 1, r):
            pk = pivots0[k]
            if not (0 <= H[i, pk] < H[k, pk]):
                return False
    for i in range(r, H.rows):
        if any(H.row(i)):
            return False
    return True


def check_hnf_result(A: Mat, res) -> bool:
    from galekit import det_exact
    if res.U @ A != res.H:
        return False
    if abs(det_exact(res.U)) != 1:
        return False
    return hnf_clauses_hold(res.H, res.pivot_map)


def box_vectors(dim: int, bound: int):
    """All integer vectors with coordinates in [-bound, bound]."""
    def rec(prefix):
        if len(prefix) == dim:
            yield tuple(prefix)
            return
        for v in range(-bound, bound + 1):
            yield from rec(prefix + [v])
    yield from rec([])


def rand_f_matrix(rng: random.Random, n: int, s: int, tries: int = 400,
                  lo: int = -3, hi: int = 3):
    """Rejection-sample an F-matrix (full rank, positively spanning, nonzero
    pairwise non-proportional columns); None when unlucky."""
    from galekit import classify_f
    for _ in range(tries):
        A = rand_mat(rng, n, s, lo, hi)
        if A.rank() != n:
            continue
        if classify_f(A).is_f_matrix:
            return A
    return None
