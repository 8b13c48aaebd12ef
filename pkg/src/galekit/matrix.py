"""Exact dense matrices over the integers and rationals.

Entries are Python ints or ``fractions.Fraction`` values (lowest terms,
positive denominator), so arithmetic never overflows and no floating point
appears anywhere.  Matrices are immutable values: every transform returns a
new matrix.

Text format shared by the CLI and tests: one row per line, entries
whitespace-separated, rationals written ``p/q``, integers plain; blank lines
and ``#`` comments are ignored.  All externally visible column/row indices
are 1-based; in-memory access is 0-based.
"""

from __future__ import annotations

import math
import re
from fractions import Fraction
from typing import Iterable, Sequence

Number = "int | Fraction"


class GaleKitError(Exception):
    """Base class for all galekit errors."""


class DomainError(GaleKitError):
    """A documented precondition was violated."""


class ParseError(GaleKitError):
    """Malformed matrix or vector text."""


def _norm_entry(x):
    if isinstance(x, bool):
        raise TypeError("bool is not a valid matrix entry")
    if isinstance(x, int):
        return x
    if isinstance(x, Fraction):
        return int(x) if x.denominator == 1 else x
    raise TypeError(f"matrix entries must be int or Fraction, got {type(x).__name__}")


def _as_int(x):
    # exact conversion; x must have denominator 1
    if isinstance(x, int):
        return x
    if x.denominator != 1:
        raise ValueError(f"{x} is not an integer")
    return x.numerator


def xgcd(a: int, b: int) -> tuple[int, int, int]:
    """Return (g, x, y) with g = gcd(a, b) >= 0 and g == a*x + b*y."""
    x0, x1, y0, y1 = 1, 0, 0, 1
    while b:
        q = a // b
        a, b = b, a - q * b
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    if a < 0:
        a, x0, y0 = -a, -x0, -y0
    return a, x0, y0


class Mat:
    """Immutable dense matrix with exact entries."""

    __slots__ = ("_rows",)

    def __init__(self, rows: Iterable[Iterable]):
        data = tuple(tuple(_norm_entry(x) for x in row) for row in rows)
        if not data or not data[0]:
            raise DomainError("matrix must have at least one row and one column")
        width = len(data[0])
        if any(len(r) != width for r in data):
            raise DomainError("ragged rows in matrix")
        self._rows = data

    @classmethod
    def identity(cls, n: int) -> "Mat":
        return cls([[int(i == j) for j in range(n)] for i in range(n)])

    @classmethod
    def from_cols(cls, cols: Sequence[Sequence]) -> "Mat":
        return cls(list(zip(*cols)))

    @property
    def rows(self) -> int:
        return len(self._rows)

    @property
    def cols(self) -> int:
        return len(self._rows[0])

    @property
    def shape(self) -> tuple[int, int]:
        return len(self._rows), len(self._rows[0])

    def __getitem__(self, ij):
        i, j = ij
        return self._rows[i][j]

    def row(self, i: int) -> tuple:
        return self._rows[i]

    def col(self, j: int) -> tuple:
        return tuple(r[j] for r in self._rows)

    def row_tuples(self) -> tuple:
        return self._rows

    def col_tuples(self) -> tuple:
        return tuple(zip(*self._rows))

    def to_lists(self) -> list[list]:
        return [list(r) for r in self._rows]

    def transpose(self) -> "Mat":
        return Mat(zip(*self._rows))

    def __matmul__(self, other: "Mat") -> "Mat":
        if self.cols != other.rows:
            raise DomainError(
                f"shape mismatch in product: {self.shape} @ {other.shape}")
        bt = other.col_tuples()
        return Mat([[sum(a * b for a, b in zip(row, col)) for col in bt]
                    for row in self._rows])

    def scale(self, k) -> "Mat":
        return Mat([[k * x for x in row] for row in self._rows])

    def __neg__(self) -> "Mat":
        return self.scale(-1)

    def __eq__(self, other):
        return isinstance(other, Mat) and self._rows == other._rows

    def __hash__(self):
        return hash(self._rows)

    def __repr__(self):
        return f"Mat({[list(r) for r in self._rows]!r})"

    def __str__(self):
        return format_matrix(self)

    @property
    def is_integral(self) -> bool:
        return all(isinstance(x, int) for row in self._rows for x in row)

    def denominator_lcm(self) -> int:
        d = 1
        for row in self._rows:
            for x in row:
                if isinstance(x, Fraction):
                    d = d * x.denominator // math.gcd(d, x.denominator)
        return d

    def int_scaled(self) -> tuple[int, list[list[int]]]:
        """(D, D*self as int lists); D is the lcm of all denominators."""
        d = self.denominator_lcm()
        if d == 1:
            return 1, [list(r) for r in self._rows]
        return d, [[_as_int(x * d) for x in row] for row in self._rows]

    def take_rows(self, idx0: Sequence[int]) -> "Mat":
        return Mat([self._rows[i] for i in idx0])

    def take_cols(self, idx0: Sequence[int]) -> "Mat":
        return Mat([[row[j] for j in idx0] for row in self._rows])

    def det(self):
        if self.rows != self.cols:
            raise DomainError("determinant requires a square matrix")
        d, m = self.int_scaled()
        value = _bareiss_det(m)
        if d == 1:
            return value
        return _norm_entry(Fraction(value, d ** self.rows))

    def rank(self) -> int:
        # fraction-free elimination; row count of the pivot set
        _, m = self.int_scaled()
        nrows, ncols = len(m), len(m[0])
        r = 0
        for j in range(ncols):
            piv = next((i for i in range(r, nrows) if m[i][j]), None)
            if piv is None:
                continue
            m[r], m[piv] = m[piv], m[r]
            a = m[r][j]
            for i in range(r + 1, nrows):
                b = m[i][j]
                if b:
                    m[i] = [a * x - b * y for x, y in zip(m[i], m[r])]
            r += 1
            if r == nrows:
                break
        return r

    def inverse(self) -> "Mat":
        if self.rows != self.cols:
            raise DomainError("inverse requires a square matrix")
        sol = solve(self, Mat.identity(self.rows))
        if sol is None or self.rank() < self.rows:
            raise DomainError("matrix is singular")
        return sol


def _bareiss_det(m: list[list[int]]) -> int:
    """Fraction-free determinant of an integer matrix (consumes its input)."""
    n = len(m)
    sign = 1
    prev = 1
    for k in range(n - 1):
        if m[k][k] == 0:
            piv = next((i for i in range(k + 1, n) if m[i][k]), None)
            if piv is None:
                return 0
            m[k], m[piv] = m[piv], m[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) // prev
            m[i][k] = 0
        prev = m[k][k]
    return sign * m[n - 1][n - 1]


def solve(A: Mat, B: Mat) -> "Mat | None":
    """A particular exact solution X of A @ X = B, or None if inconsistent.

    Free variables are set to zero, which makes the answer deterministic.
    """
    if A.rows != B.rows:
        raise DomainError("solve: row mismatch")
    m, n = A.shape
    k = B.cols
    aug = [[Fraction(x) for x in A.row(i)] + [Fraction(x) for x in B.row(i)]
           for i in range(m)]
    piv_cols = []
    r = 0
    for j in range(n):
        piv = next((i for i in range(r, m) if aug[i][j]), None)
        if piv is None:
            continue
        aug[r], aug[piv] = aug[piv], aug[r]
        a = aug[r][j]
        aug[r] = [x / a for x in aug[r]]
        for i in range(m):
            if i != r and aug[i][j]:
                c = aug[i][j]
                aug[i] = [x - c * y for x, y in zip(aug[i], aug[r])]
        piv_cols.append(j)
        r += 1
        if r == m:
            break
    for i in range(r, m):
        if any(aug[i][n:]):
            return None
    sol = [[0] * k for _ in range(n)]
    for idx, j in enumerate(piv_cols):
        sol[j] = [_norm_entry(x) for x in aug[idx][n:]]
    return Mat(sol)


def vstack(mats: Sequence[Mat]) -> Mat:
    rows = []
    for m in mats:
        rows.extend(m.row_tuples())
    return Mat(rows)


def block_diag(*mats: Mat) -> Mat:
    total_r = sum(m.rows for m in mats)
    total_c = sum(m.cols for m in mats)
    out = [[0] * total_c for _ in range(total_r)]
    r0 = c0 = 0
    for m in mats:
        for i in range(m.rows):
            for j in range(m.cols):
                out[r0 + i][c0 + j] = m[i, j]
        r0 += m.rows
        c0 += m.cols
    return Mat(out)


def dot(u: Sequence, v: Sequence):
    return sum(a * b for a, b in zip(u, v))


def mat_vec(A: Mat, v: Sequence) -> tuple:
    """A applied to a column vector."""
    if len(v) != A.cols:
        raise DomainError("vector length mismatch")
    return tuple(dot(row, v) for row in A.row_tuples())


def vec_mat(v: Sequence, A: Mat) -> tuple:
    """Row vector times A."""
    if len(v) != A.rows:
        raise DomainError("vector length mismatch")
    return tuple(dot(v, col) for col in A.col_tuples())


def vec_gcd(v: Sequence[int]) -> int:
    g = 0
    for x in v:
        g = math.gcd(g, x)
    return g


# ---------------------------------------------------------------------------
# module-level operations

def det_exact(A: Mat):
    """Exact determinant of a square matrix (fraction-free on integers)."""
    return A.det()


def rank_exact(A: Mat) -> int:
    """Rank over the rationals."""
    return A.rank()


def check_index_set(I: Iterable[int], ncols: int, allow_empty: bool = True) -> tuple[int, ...]:
    """Validate a 1-based strictly increasing column index set."""
    t = tuple(I)
    if not allow_empty and not t:
        raise DomainError("index set must not be empty")
    for x in t:
        if not isinstance(x, int) or isinstance(x, bool):
            raise DomainError(f"index {x!r} is not an integer")
        if not 1 <= x <= ncols:
            raise DomainError(f"index {x} out of range 1..{ncols}")
    if any(a >= b for a, b in zip(t, t[1:])):
        raise DomainError("index set must be strictly increasing")
    return t


def submatrix_cols(A: Mat, I: Iterable[int], complement: bool = False) -> Mat:
    """Columns of A selected by the 1-based index set I (or its complement)."""
    t = check_index_set(I, A.cols)
    chosen = set(t)
    if complement:
        idx0 = [j for j in range(A.cols) if j + 1 not in chosen]
    else:
        idx0 = [x - 1 for x in t]
    if not idx0:
        raise DomainError("column selection is empty")
    return A.take_cols(idx0)


# ---------------------------------------------------------------------------
# text format

_ENTRY_RE = re.compile(r"[+-]?\d+(?:/\d+)?$")


def parse_entry(tok: str):
    if not _ENTRY_RE.match(tok):
        raise ParseError(f"bad matrix entry {tok!r}")
    f = Fraction(tok)
    return _norm_entry(f)


def parse_matrix(text: str) -> Mat:
    rows = []
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        rows.append([parse_entry(tok) for tok in line.split()])
    if not rows:
        raise ParseError("no matrix rows in input")
    try:
        return Mat(rows)
    except DomainError as exc:
        raise ParseError(str(exc)) from None


def format_matrix(A: Mat) -> str:
    return "\n".join(" ".join(str(x) for x in row) for row in A.row_tuples())
