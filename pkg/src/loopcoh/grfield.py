"""Exact arithmetic over F_p (p prime) and Q (encoded as p = 0).

Field elements are plain Python values: least nonnegative residues for
``p > 0`` and :class:`fractions.Fraction` for ``p = 0``.  Dense elimination
over F_p runs on int64 numpy arrays, which is exact while ``p < 2**31``.
Large sparse differentials use :class:`SparseMatrix` and a column reduction
that never densifies.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Sequence, Union

import numpy as np

Scalar = Union[int, Fraction]

_MAX_PRIME = 2 ** 31


def is_prime(p: int) -> bool:
    if p < 2:
        return False
    i = 2
    while i * i <= p:
        if p % i == 0:
            return False
        i += 1
    return True


class Field:
    """The prime field F_p, or Q when ``p == 0``."""

    def __init__(self, p: int):
        if p != 0 and not is_prime(p):
            raise ValueError(f"characteristic must be 0 or a prime, got {p}")
        if p >= _MAX_PRIME:
            raise ValueError(f"prime {p} too large for exact int64 elimination")
        self.p = p
        self.zero: Scalar = Fraction(0) if p == 0 else 0
        self.one: Scalar = Fraction(1) if p == 0 else 1

    def __repr__(self):
        return "Field(Q)" if self.p == 0 else f"Field(F_{self.p})"

    def __eq__(self, other):
        return isinstance(other, Field) and other.p == self.p

    def __hash__(self):
        return hash(("Field", self.p))

    def __call__(self, x) -> Scalar:
        if self.p == 0:
            return Fraction(x)
        if isinstance(x, Fraction):
            if x.denominator % self.p == 0:
                raise ZeroDivisionError(f"{x} has no reduction mod {self.p}")
            return x.numerator * pow(x.denominator, -1, self.p) % self.p
        return int(x) % self.p

    def add(self, a: Scalar, b: Scalar) -> Scalar:
        return a + b if self.p == 0 else (a + b) % self.p

    def sub(self, a: Scalar, b: Scalar) -> Scalar:
        return a - b if self.p == 0 else (a - b) % self.p

    def neg(self, a: Scalar) -> Scalar:
        return -a if self.p == 0 else (-a) % self.p

    def mul(self, a: Scalar, b: Scalar) -> Scalar:
        return a * b if self.p == 0 else (a * b) % self.p

    def inv(self, a: Scalar) -> Scalar:
        if not a:
            raise ZeroDivisionError("inverse of zero")
        return 1 / Fraction(a) if self.p == 0 else pow(int(a), -1, self.p)

    def sign(self, exponent: int) -> Scalar:
        """``(-1) ** exponent`` as a field element."""
        return self.one if exponent % 2 == 0 else self.neg(self.one)


@lru_cache(maxsize=None)
def field(p: int) -> Field:
    return Field(p)


@dataclass(frozen=True)
class Matrix:
    """Dense matrix acting on column vectors: ``rows x cols`` entries."""

    field: Field
    rows: int
    cols: int
    entries: tuple[tuple[Scalar, ...], ...]

    def __post_init__(self):
        if len(self.entries) != self.rows or any(len(r) != self.cols for r in self.entries):
            raise ValueError("matrix entries do not match the stated shape")

    @classmethod
    def from_rows(cls, f: Field, rows: Sequence[Sequence], cols: int | None = None) -> Matrix:
        rows = [tuple(f(x) for x in r) for r in rows]
        if cols is None:
            cols = len(rows[0]) if rows else 0
        return cls(f, len(rows), cols, tuple(rows))

    @classmethod
    def zeros(cls, f: Field, rows: int, cols: int) -> Matrix:
        return cls(f, rows, cols, tuple((f.zero,) * cols for _ in range(rows)))

    @classmethod
    def identity(cls, f: Field, n: int) -> Matrix:
        return cls(f, n, n, tuple(tuple(f.one if i == j else f.zero for j in range(n))
                                  for i in range(n)))

    def transpose(self) -> Matrix:
        return Matrix(self.field, self.cols, self.rows,
                      tuple(zip(*self.entries)) if self.rows else
                      tuple(() for _ in range(self.cols)))

    def __matmul__(self, other: Matrix) -> Matrix:
        if self.cols != other.rows:
            raise ValueError(f"cannot compose {self.rows}x{self.cols} with "
                             f"{other.rows}x{other.cols}")
        f = self.field
        if f.p and f.p < 2 ** 20 and self.rows and other.cols and self.cols:
            a = np.array(self.entries, dtype=np.int64)
            b = np.array(other.entries, dtype=np.int64)
            prod = (a @ b) % f.p
            return Matrix(f, self.rows, other.cols,
                          tuple(tuple(int(x) for x in r) for r in prod))
        out = []
        for r in self.entries:
            row = []
            for j in range(other.cols):
                acc = f.zero
                for k, x in enumerate(r):
                    if x:
                        acc = f.add(acc, f.mul(x, other.entries[k][j]))
                row.append(acc)
            out.append(tuple(row))
        return Matrix(f, self.rows, other.cols, tuple(out))

    def apply(self, vector: Sequence[Scalar]) -> tuple[Scalar, ...]:
        f = self.field
        out = []
        for r in self.entries:
            acc = f.zero
            for x, y in zip(r, vector):
                if x and y:
                    acc = f.add(acc, f.mul(x, y))
            out.append(acc)
        return tuple(out)

    def is_zero(self) -> bool:
        return all(not x for r in self.entries for x in r)


@dataclass(frozen=True)
class RowReduction:
    rank: int
    pivots: tuple[int, ...]
    kernel_basis: tuple[tuple[Scalar, ...], ...]
    image_basis: tuple[tuple[Scalar, ...], ...]


def _rref_modp(m: Matrix) -> tuple[list[list[int]], list[int]]:
    p = m.field.p
    a = np.array(m.entries, dtype=np.int64).reshape(m.rows, m.cols) % p
    pivots: list[int] = []
    r = 0
    for c in range(m.cols):
        if r == m.rows:
            break
        nz = np.flatnonzero(a[r:, c])
        if nz.size == 0:
            continue
        k = r + int(nz[0])
        if k != r:
            a[[r, k]] = a[[k, r]]
        a[r] = a[r] * pow(int(a[r, c]), -1, p) % p
        col = a[:, c].copy()
        col[r] = 0
        hit = np.flatnonzero(col)
        if hit.size:
            a[hit] = (a[hit] - np.outer(col[hit], a[r])) % p
        pivots.append(c)
        r += 1
    return a[:r].tolist(), pivots


def _rref_rational(m: Matrix) -> tuple[list[list[Fraction]], list[int]]:
    a = [[Fraction(x) for x in row] for row in m.entries]
    pivots: list[int] = []
    r = 0
    for c in range(m.cols):
        if r == m.rows:
            break
        k = next((i for i in range(r, m.rows) if a[i][c]), None)
        if k is None:
            continue
        a[r], a[k] = a[k], a[r]
        piv = a[r][c]
        a[r] = [x / piv for x in a[r]]
        for i in range(m.rows):
            if i != r and a[i][c]:
                factor = a[i][c]
                a[i] = [x - factor * y for x, y in zip(a[i], a[r])]
        pivots.append(c)
        r += 1
    return a[:r], pivots


def row_reduce(m: Matrix) -> RowReduction:
    """Rank, a kernel basis and a column-space basis of ``m``."""
    f = m.field
    if m.rows == 0 or m.cols == 0:
        kernel = tuple(tuple(f.one if i == j else f.zero for i in range(m.cols))
                       for j in range(m.cols))
        return RowReduction(0, (), kernel, ())
    reduced, pivots = _rref_modp(m) if f.p else _rref_rational(m)
    pivot_set = set(pivots)
    kernel = []
    for free in range(m.cols):
        if free in pivot_set:
            continue
        v = [f.zero] * m.cols
        v[free] = f.one
        for row, pc in zip(reduced, pivots):
            if row[free]:
                v[pc] = f.neg(f(row[free]))
        kernel.append(tuple(v))
    image = tuple(tuple(m.entries[i][c] for i in range(m.rows)) for c in pivots)
    return RowReduction(len(pivots), tuple(pivots), tuple(kernel), image)


@dataclass(frozen=True, eq=False)
class SparseMatrix:
    """Matrix stored by columns, each a ``{row: nonzero entry}`` mapping."""

    field: Field
    rows: int
    cols: int
    columns: tuple[dict[int, Scalar], ...]

    def __post_init__(self):
        if len(self.columns) != self.cols:
            raise ValueError("column count does not match the stated shape")
        if any(not 0 <= i < self.rows for c in self.columns for i in c):
            raise ValueError("row index out of range")

    @classmethod
    def from_dense(cls, m: Matrix) -> SparseMatrix:
        cols = tuple({i: m.entries[i][j] for i in range(m.rows) if m.entries[i][j]}
                     for j in range(m.cols))
        return cls(m.field, m.rows, m.cols, cols)

    def to_dense(self) -> Matrix:
        f = self.field
        rows = [[f.zero] * self.cols for _ in range(self.rows)]
        for j, col in enumerate(self.columns):
            for i, x in col.items():
                rows[i][j] = x
        return Matrix(f, self.rows, self.cols, tuple(tuple(r) for r in rows))

    def __eq__(self, other):
        if not isinstance(other, SparseMatrix):
            return NotImplemented
        return (self.rows, self.cols, self.columns) == (other.rows, other.cols, other.columns)

    def __matmul__(self, other: SparseMatrix) -> SparseMatrix:
        if self.cols != other.rows:
            raise ValueError(f"cannot compose {self.rows}x{self.cols} with "
                             f"{other.rows}x{other.cols}")
        f = self.field
        out = []
        for col in other.columns:
            acc: dict[int, Scalar] = {}
            for k, x in col.items():
                for i, y in self.columns[k].items():
                    acc[i] = acc.get(i, 0) + x * y
            if f.p:
                out.append({i: v % f.p for i, v in acc.items() if v % f.p})
            else:
                out.append({i: v for i, v in acc.items() if v})
        return SparseMatrix(f, self.rows, other.cols, tuple(out))

    def is_zero(self) -> bool:
        return not any(self.columns)


def _sparse_rank(m: SparseMatrix) -> int:
    # column reduction keyed by the lowest nonzero row of each reduced column
    f = m.field
    p = f.p
    reduced: dict[int, dict[int, Scalar]] = {}
    for col in m.columns:
        col = dict(col)
        while col:
            low = max(col)
            piv = reduced.get(low)
            if piv is None:
                inv = f.inv(col[low])
                reduced[low] = {i: f.mul(inv, x) for i, x in col.items()}
                break
            factor = col[low]
            for i, x in piv.items():
                v = (col.get(i, 0) - factor * x) % p if p else col.get(i, 0) - factor * x
                if v:
                    col[i] = v
                else:
                    col.pop(i, None)
    return len(reduced)


AnyMatrix = Union[Matrix, SparseMatrix]


def rank(m: AnyMatrix) -> int:
    if isinstance(m, SparseMatrix):
        # sparse matrices are immutable, so the rank is computed once
        hit = m.__dict__.get("_rank")
        if hit is None:
            hit = _sparse_rank(m)
            object.__setattr__(m, "_rank", hit)
        return hit
    return row_reduce(m).rank


class DifferentialError(ArithmeticError):
    """A composite of consecutive differentials is nonzero."""

    def __init__(self, message: str, where=None):
        super().__init__(message)
        self.where = where


def homology_dim(d_in: AnyMatrix, d_out: AnyMatrix, where=None) -> int:
    """``dim ker(d_out) - rank(d_in)`` at the middle term of a 3-term complex."""
    if d_in.rows != d_out.cols:
        raise ValueError(f"d_in lands in dimension {d_in.rows}, "
                         f"d_out starts from {d_out.cols}")
    if type(d_in) is not type(d_out):
        d_in, d_out = _as_sparse(d_in), _as_sparse(d_out)
    if d_in.cols and d_out.rows and not (d_out @ d_in).is_zero():
        raise DifferentialError(f"d o d != 0 at {where}", where)
    return d_out.cols - rank(d_out) - rank(d_in)


def _as_sparse(m: AnyMatrix) -> SparseMatrix:
    return m if isinstance(m, SparseMatrix) else SparseMatrix.from_dense(m)
