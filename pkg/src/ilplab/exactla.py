"""Exact rational vectors, matrices, determinants, and determinant bounds.

Everything is built on ``fractions.Fraction``: arithmetic is exact, values
are always in lowest terms, and there is no rounding anywhere.  Vectors are
plain tuples of Fractions; matrices are a thin immutable wrapper around a
tuple of row tuples.  Determinants use fraction-free (Bareiss) elimination,
so integer inputs stay integer throughout the elimination.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Iterable, Sequence

from .errors import BudgetExceededError

Vec = tuple[Fraction, ...]

#: Serialized rationals look like "3/4", or just "3" for integers.
#: ``str(Fraction)`` already produces exactly this form.


def rat(x: int | str | Fraction) -> Fraction:
    """Coerce ints, 'p/q' strings, or Fractions to an exact Fraction."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int) or isinstance(x, str):
        return Fraction(x)
    raise TypeError(f"cannot build an exact rational from {type(x).__name__}")


def rat_str(x: Fraction) -> str:
    return str(x)


def vec(entries: Iterable[int | str | Fraction]) -> Vec:
    return tuple(rat(x) for x in entries)


def vec_str(v: Sequence[Fraction]) -> list[str]:
    return [str(x) for x in v]


def dot(u: Sequence[Fraction], v: Sequence[Fraction]) -> Fraction:
    if len(u) != len(v):
        raise ValueError(f"dot of length {len(u)} vs {len(v)}")
    return sum((a * b for a, b in zip(u, v)), Fraction(0))


@dataclass(frozen=True)
class Matrix:
    """Dense rectangular matrix of exact rationals."""

    rows: tuple[tuple[Fraction, ...], ...]

    def __post_init__(self):
        if self.rows:
            w = len(self.rows[0])
            if any(len(r) != w for r in self.rows):
                raise ValueError("matrix rows have inconsistent lengths")

    @classmethod
    def from_rows(cls, rows: Iterable[Iterable[int | str | Fraction]]) -> "Matrix":
        return cls(tuple(vec(r) for r in rows))

    @classmethod
    def from_cols(cls, cols: Sequence[Sequence[int | str | Fraction]]) -> "Matrix":
        cols = [vec(c) for c in cols]
        if not cols:
            raise ValueError("need at least one column")
        n = len(cols[0])
        if any(len(c) != n for c in cols):
            raise ValueError("columns have inconsistent lengths")
        return cls(tuple(tuple(c[i] for c in cols) for i in range(n)))

    @classmethod
    def identity(cls, n: int) -> "Matrix":
        one, zero = Fraction(1), Fraction(0)
        return cls(tuple(tuple(one if i == j else zero for j in range(n)) for i in range(n)))

    @property
    def nrows(self) -> int:
        return len(self.rows)

    @property
    def ncols(self) -> int:
        return len(self.rows[0]) if self.rows else 0

    @property
    def is_square(self) -> bool:
        return self.nrows == self.ncols

    def row(self, i: int) -> Vec:
        return self.rows[i]

    def col(self, j: int) -> Vec:
        return tuple(r[j] for r in self.rows)

    def cols(self) -> list[Vec]:
        return [self.col(j) for j in range(self.ncols)]

    def transpose(self) -> "Matrix":
        return Matrix(tuple(self.col(j) for j in range(self.ncols)))

    def submatrix(self, row_idx: Sequence[int], col_idx: Sequence[int]) -> "Matrix":
        return Matrix(tuple(tuple(self.rows[i][j] for j in col_idx) for i in row_idx))

    def mul_vec(self, v: Sequence[Fraction]) -> Vec:
        if len(v) != self.ncols:
            raise ValueError(f"matrix has {self.ncols} columns, vector has {len(v)}")
        return tuple(dot(r, v) for r in self.rows)

    def max_abs(self) -> Fraction:
        """Largest absolute entry (infinity norm of the coefficient grid)."""
        return max((abs(x) for r in self.rows for x in r), default=Fraction(0))

    def to_json(self) -> list[list[str]]:
        return [[str(x) for x in r] for r in self.rows]

    @classmethod
    def from_json(cls, data: Sequence[Sequence[str]]) -> "Matrix":
        return cls.from_rows(data)


def _bareiss_int(a: list[list[int]]) -> int:
    """Determinant of an integer matrix by fraction-free elimination.

    All intermediate divisions are exact, so values never leave the
    integers and never blow up the way naive rational elimination does.
    """
    n = len(a)
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            for i in range(k + 1, n):
                if a[i][k] != 0:
                    a[k], a[i] = a[i], a[k]
                    sign = -sign
                    break
            else:
                return 0
        pivot = a[k][k]
        for i in range(k + 1, n):
            aik = a[i][k]
            ri, rk = a[i], a[k]
            for j in range(k + 1, n):
                ri[j] = (ri[j] * pivot - aik * rk[j]) // prev
            ri[k] = 0
        prev = pivot
    return sign * a[-1][-1]


def det(m: Matrix) -> Fraction:
    """Exact determinant of a square matrix (fraction-free elimination).

    Rational entries are handled by clearing each row's denominators first
    and dividing the integer determinant by the product of the scalers.
    """
    if not m.is_square:
        raise ValueError(f"determinant needs a square matrix, got {m.nrows}x{m.ncols}")
    n = m.nrows
    if n == 0:
        return Fraction(1)
    scale = 1
    grid: list[list[int]] = []
    for row in m.rows:
        mult = math.lcm(*(x.denominator for x in row))
        scale *= mult
        grid.append([int(x * mult) for x in row])
    return Fraction(_bareiss_int(grid), scale)


@dataclass(frozen=True)
class SubdetResult:
    """Maximum |det| over all square submatrices, with a maximizing witness."""

    value: Fraction
    row_indices: tuple[int, ...]
    col_indices: tuple[int, ...]
    submatrices_scanned: int


def subdet_enumeration_count(nrows: int, ncols: int) -> int:
    """Number of square submatrices of every size k >= 1."""
    return sum(math.comb(nrows, k) * math.comb(ncols, k) for k in range(1, min(nrows, ncols) + 1))


def max_subdet_all(m: Matrix, budget: int = 10_000_000, force: bool = False) -> SubdetResult:
    """Max |det| over every square submatrix of every size k >= 1.

    The enumeration count is checked up front against ``budget``; oversize
    inputs are refused unless ``force`` is set (then a cost warning is
    emitted and the enumeration runs anyway).  The witness is the first
    maximizer in (size ascending, rows lex, cols lex) order.
    """
    if m.nrows == 0 or m.ncols == 0:
        raise ValueError("max_subdet_all needs a non-empty matrix")
    total = subdet_enumeration_count(m.nrows, m.ncols)
    if total > budget:
        if not force:
            raise BudgetExceededError(
                f"subdeterminant enumeration needs {total} determinants, budget is {budget}"
            )
        warnings.warn(
            f"subdeterminant enumeration over budget ({total} > {budget}); forced anyway",
            stacklevel=2,
        )
    best = Fraction(-1)
    best_rows: tuple[int, ...] = ()
    best_cols: tuple[int, ...] = ()
    scanned = 0
    for k in range(1, min(m.nrows, m.ncols) + 1):
        for ri in combinations(range(m.nrows), k):
            for ci in combinations(range(m.ncols), k):
                scanned += 1
                d = abs(det(m.submatrix(ri, ci)))
                if d > best:
                    best, best_rows, best_cols = d, ri, ci
    return SubdetResult(best, best_rows, best_cols, scanned)


def isqrt_ceil(n: int) -> int:
    """Smallest integer s with s*s >= n."""
    if n < 0:
        raise ValueError("isqrt_ceil of a negative number")
    s = math.isqrt(n)
    return s if s * s == n else s + 1


def sqrt_upper(q: Fraction) -> Fraction:
    """An exact rational upper bound on sqrt(q); exact when q is a perfect square."""
    if q < 0:
        raise ValueError("sqrt_upper of a negative number")
    # sqrt(p/q) = sqrt(p*q)/q
    return Fraction(isqrt_ceil(q.numerator * q.denominator), q.denominator)


@dataclass(frozen=True)
class HadamardBound:
    """Hadamard-style determinant bounds.

    ``column_norm`` is the product of column Euclidean norms (square input
    only; None otherwise), rounded up to an exact rational.  ``closed_form``
    is delta**d * d**(d/2) with delta the largest absolute entry; for odd d
    the square root of d is rounded up to the next integer, so the value is
    always a valid upper bound.
    """

    column_norm: Fraction | None
    closed_form: Fraction


def hadamard_bound(m: Matrix, d: int) -> HadamardBound:
    if d < 1:
        raise ValueError("hadamard_bound needs d >= 1")
    column_norm = None
    if m.is_square and m.nrows > 0:
        prod_sq = Fraction(1)
        for j in range(m.ncols):
            prod_sq *= sum((x * x for x in m.col(j)), Fraction(0))
        column_norm = sqrt_upper(prod_sq)
    delta = m.max_abs()
    closed = delta**d
    if d % 2 == 0:
        closed *= Fraction(d) ** (d // 2)
    else:
        closed *= Fraction(d) ** ((d - 1) // 2) * isqrt_ceil(d)
    return HadamardBound(column_norm, closed)
