"""Exact integer and rational matrices.

Everything here is exact: entries are Python ints or ``fractions.Fraction``.
Zero/non-zero decisions about minors are the whole point, so floating point
never appears in this module.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from .errors import ValidationError


@dataclass(frozen=True)
class _Matrix:
    rows: int
    cols: int
    entries: tuple

    def __post_init__(self):
        if self.rows < 0 or self.cols < 0:
            raise ValueError("negative dimension")
        if len(self.entries) != self.rows * self.cols:
            raise ValueError(
                f"{len(self.entries)} entries do not fill a {self.rows}x{self.cols} matrix"
            )

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence], cols: int | None = None):
        rows = [list(r) for r in rows]
        if cols is None:
            cols = len(rows[0]) if rows else 0
        if any(len(r) != cols for r in rows):
            raise ValueError("ragged rows")
        return cls(len(rows), cols, tuple(cls._coerce(x) for r in rows for x in r))

    @classmethod
    def from_columns(cls, columns: Sequence[Sequence], rows: int | None = None):
        columns = [list(c) for c in columns]
        if rows is None:
            rows = len(columns[0]) if columns else 0
        if any(len(c) != rows for c in columns):
            raise ValueError("ragged columns")
        return cls.from_rows([[c[i] for c in columns] for i in range(rows)], len(columns))

    @classmethod
    def zeros(cls, rows: int, cols: int):
        return cls(rows, cols, tuple(cls._coerce(0) for _ in range(rows * cols)))

    @classmethod
    def identity(cls, n: int):
        return cls.from_rows([[1 if i == j else 0 for j in range(n)] for i in range(n)], n)

    @staticmethod
    def _coerce(x):
        return x

    @property
    def shape(self) -> tuple[int, int]:
        return (self.rows, self.cols)

    @property
    def is_square(self) -> bool:
        return self.rows == self.cols

    def __getitem__(self, ij):
        i, j = ij
        return self.entries[i * self.cols + j]

    def row(self, i: int) -> tuple:
        return self.entries[i * self.cols:(i + 1) * self.cols]

    def col(self, j: int) -> tuple:
        return self.entries[j::self.cols] if self.cols else ()

    def tolist(self) -> list[list]:
        return [list(self.row(i)) for i in range(self.rows)]

    def columns(self) -> list[tuple]:
        return [self.col(j) for j in range(self.cols)]

    def transpose(self):
        return type(self).from_columns([self.row(i) for i in range(self.rows)], self.cols)

    @property
    def T(self):
        return self.transpose()

    def submatrix(self, rows: Iterable[int], cols: Iterable[int]):
        rows, cols = list(rows), list(cols)
        return type(self).from_rows([[self[i, j] for j in cols] for i in rows], len(cols))

    def delete(self, rows: Iterable[int] = (), cols: Iterable[int] = ()):
        rows, cols = set(rows), set(cols)
        return self.submatrix(
            [i for i in range(self.rows) if i not in rows],
            [j for j in range(self.cols) if j not in cols],
        )

    def select_columns(self, cols: Iterable[int]):
        return self.submatrix(range(self.rows), cols)

    def hstack(self, other):
        if self.rows != other.rows:
            raise ValueError("row counts differ")
        return type(self).from_rows(
            [list(self.row(i)) + list(other.row(i)) for i in range(self.rows)],
            self.cols + other.cols,
        )

    def __matmul__(self, other):
        if self.cols != other.rows:
            raise ValueError(f"cannot multiply {self.shape} by {other.shape}")
        cls = RationalMatrix if RationalMatrix in (type(self), type(other)) else type(self)
        ocols = other.columns()
        return cls.from_rows(
            [[sum(a * b for a, b in zip(self.row(i), c)) for c in ocols] for i in range(self.rows)],
            other.cols,
        )

    def scale(self, k):
        return type(self)(self.rows, self.cols, tuple(k * x for x in self.entries))

    def __neg__(self):
        return self.scale(-1)

    def __str__(self):
        width = max((len(str(x)) for x in self.entries), default=1)
        return "\n".join(" ".join(str(x).rjust(width) for x in self.row(i)) for i in range(self.rows))


class IntMatrix(_Matrix):
    """Integer matrix stored row-major as a tuple of Python ints."""

    @staticmethod
    def _coerce(x):
        if isinstance(x, Fraction):
            if x.denominator != 1:
                raise ValueError(f"non-integral entry {x}")
            return int(x.numerator)
        if isinstance(x, bool) or int(x) != x:
            raise ValueError(f"non-integral entry {x!r}")
        return int(x)


class RationalMatrix(_Matrix):
    """Rational matrix; entries are canonical (reduced) ``Fraction`` objects."""

    @staticmethod
    def _coerce(x):
        return Fraction(x)

    def to_int(self) -> IntMatrix:
        return IntMatrix.from_rows(self.tolist(), self.cols)

    def is_integral(self) -> bool:
        return all(x.denominator == 1 for x in self.entries)

    def common_denominator(self) -> int:
        return math.lcm(*(x.denominator for x in self.entries)) if self.entries else 1


def as_rational(M: _Matrix) -> RationalMatrix:
    return M if isinstance(M, RationalMatrix) else RationalMatrix(M.rows, M.cols, tuple(Fraction(x) for x in M.entries))


# --------------------------------------------------------------------------
# determinants and minors


def _det_rows(a: list[list]):
    n = len(a)
    if n == 0:
        return 1
    if n == 1:
        return a[0][0]
    if n == 2:
        return a[0][0] * a[1][1] - a[0][1] * a[1][0]
    if any(isinstance(x, Fraction) for r in a for x in r):
        return _det_gauss(a)
    return _det_bareiss(a)


def _det_bareiss(a: list[list[int]]) -> int:
    # fraction-free elimination; every division below is exact
    a = [list(r) for r in a]
    n = len(a)
    sign, prev = 1, 1
    for k in range(n - 1):
        if a[k][k] == 0:
            for i in range(k + 1, n):
                if a[i][k] != 0:
                    a[k], a[i] = a[i], a[k]
                    sign = -sign
                    break
            else:
                return 0
        akk = a[k][k]
        for i in range(k + 1, n):
            aik = a[i][k]
            row_i, row_k = a[i], a[k]
            for j in range(k + 1, n):
                row_i[j] = (row_i[j] * akk - aik * row_k[j]) // prev
        prev = akk
    return sign * a[n - 1][n - 1]


def _det_gauss(a: list[list]) -> Fraction:
    a = [[Fraction(x) for x in r] for r in a]
    n = len(a)
    det = Fraction(1)
    for k in range(n):
        piv = next((i for i in range(k, n) if a[i][k] != 0), None)
        if piv is None:
            return Fraction(0)
        if piv != k:
            a[k], a[piv] = a[piv], a[k]
            det = -det
        det *= a[k][k]
        for i in range(k + 1, n):
            f = a[i][k] / a[k][k]
            if f:
                for j in range(k, n):
                    a[i][j] -= f * a[k][j]
    return det


def determinant(M: _Matrix):
    """Exact determinant (Bareiss for integers, Gaussian elimination for rationals)."""
    if not M.is_square:
        raise ValidationError(f"determinant of non-square {M.rows}x{M.cols} matrix")
    return _det_rows(M.tolist())


def inverse(M: _Matrix) -> RationalMatrix:
    """Exact inverse via Gauss-Jordan over the rationals."""
    if not M.is_square:
        raise ValidationError("inverse of non-square matrix")
    n = M.rows
    a = [[Fraction(x) for x in M.row(i)] + [Fraction(int(i == j)) for j in range(n)] for i in range(n)]
    for k in range(n):
        piv = next((i for i in range(k, n) if a[i][k] != 0), None)
        if piv is None:
            raise ValidationError("matrix is singular")
        a[k], a[piv] = a[piv], a[k]
        p = a[k][k]
        a[k] = [x / p for x in a[k]]
        for i in range(n):
            if i != k and a[i][k] != 0:
                f = a[i][k]
                a[i] = [x - f * y for x, y in zip(a[i], a[k])]
    return RationalMatrix.from_rows([r[n:] for r in a], n)


def iter_square_minors(M: _Matrix, k: int | None = None):
    """Yield ``(row_idx, col_idx, det)`` for all k x k minors (all k when None)."""
    sizes = [k] if k is not None else range(1, min(M.rows, M.cols) + 1)
    rows = M.tolist()
    for size in sizes:
        for ri in itertools.combinations(range(M.rows), size):
            sub_rows = [rows[i] for i in ri]
            for ci in itertools.combinations(range(M.cols), size):
                yield ri, ci, _det_rows([[r[j] for j in ci] for r in sub_rows])


def first_singular_minor(M: _Matrix):
    """Index sets of the first vanishing square minor, or None."""
    for ri, ci, d in iter_square_minors(M):
        if d == 0:
            return ri, ci
    return None


def all_square_minors_nonsingular(M: _Matrix) -> bool:
    return first_singular_minor(M) is None


def rank(M: _Matrix) -> int:
    a = [[Fraction(x) for x in M.row(i)] for i in range(M.rows)]
    r = 0
    for c in range(M.cols):
        piv = next((i for i in range(r, M.rows) if a[i][c] != 0), None)
        if piv is None:
            continue
        a[r], a[piv] = a[piv], a[r]
        for i in range(r + 1, M.rows):
            f = a[i][c] / a[r][c]
            if f:
                a[i] = [x - f * y for x, y in zip(a[i], a[r])]
        r += 1
    return r


# --------------------------------------------------------------------------
# highly non-singular matrices


def is_highly_nonsingular(A: _Matrix) -> bool:
    """Every set of at most ``rows`` columns is linearly independent.

    Only the maximal r x r minors are tested: a dependent set of fewer columns
    extends to a singular r-subset.
    """
    r, s = A.shape
    if s < r:
        raise ValidationError(f"need s >= r, got {r}x{s}")
    rows = A.tolist()
    for ci in itertools.combinations(range(s), r):
        if _det_rows([[row[j] for j in ci] for row in rows]) == 0:
            return False
    return True


def hns_block_equivalence(A: _Matrix) -> tuple[bool, bool]:
    """Both sides of the block criterion for an r x 2r matrix A = (A1, A2).

    lhs: A is highly non-singular.
    rhs: A1, A2 non-singular and every square minor of A1^{-1} A2 non-singular.
    """
    r, s = A.shape
    if s != 2 * r:
        raise ValidationError(f"expected an r x 2r matrix, got {r}x{s}")
    lhs = is_highly_nonsingular(A)
    A1 = A.submatrix(range(r), range(r))
    A2 = A.submatrix(range(r), range(r, s))
    if determinant(A1) == 0 or determinant(A2) == 0:
        return lhs, False
    rhs = all_square_minors_nonsingular(inverse(A1) @ as_rational(A2))
    return lhs, rhs


# --------------------------------------------------------------------------
# flips


def flip_columns(M: _Matrix):
    """Reverse every column (turn the matrix upside down)."""
    return type(M).from_rows([M.row(i) for i in reversed(range(M.rows))], M.cols)


def rotate180(M: _Matrix):
    return type(M).from_rows([tuple(reversed(M.row(i))) for i in reversed(range(M.rows))], M.cols)


# --------------------------------------------------------------------------
# text format:  "rows cols" then one line of integers per row


def format_matrix(M: IntMatrix) -> str:
    lines = [f"{M.rows} {M.cols}"]
    lines += [" ".join(str(x) for x in M.row(i)) for i in range(M.rows)]
    return "\n".join(lines) + "\n"


def parse_matrix(text: str) -> IntMatrix:
    lines = [ln.split() for ln in text.strip().splitlines() if ln.strip()]
    if not lines or len(lines[0]) != 2:
        raise ValueError("first line must be 'rows cols'")
    rows, cols = int(lines[0][0]), int(lines[0][1])
    body = lines[1:]
    if len(body) != rows:
        raise ValueError(f"expected {rows} rows, found {len(body)}")
    return IntMatrix.from_rows([[int(x) for x in ln] for ln in body], cols)


def parse_inline(text: str) -> IntMatrix:
    """Parse ``"1,0,1;0,1,1"`` (rows separated by ';')."""
    rows = [[int(x) for x in part.replace(" ", "").split(",") if x] for part in text.split(";") if part.strip()]
    return IntMatrix.from_rows(rows)


def read_matrix(path) -> IntMatrix:
    with open(path) as fh:
        return parse_matrix(fh.read())


def write_matrix(M: IntMatrix, path) -> None:
    with open(path, "w") as fh:
        fh.write(format_matrix(M))
