"""Truncated integer power series and generator-count inversion.

A :class:`PoincareSeries` records the dimensions of a finite-type graded
vector space in degrees ``0..N``.  Inversion recovers the degrees of free
generators of a graded-commutative algebra of a given shape from its series.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import Iterable, Mapping

DEFAULT_TRUNCATION = 24


@dataclass(frozen=True)
class PoincareSeries:
    """Coefficients ``coeffs[d]`` for ``d = 0..truncation``."""

    coeffs: tuple[int, ...]

    def __post_init__(self):
        if not self.coeffs:
            raise ValueError("a series needs at least the degree-0 coefficient")
        object.__setattr__(self, "coeffs", tuple(int(c) for c in self.coeffs))

    @property
    def truncation(self) -> int:
        return len(self.coeffs) - 1

    @classmethod
    def zero(cls, truncation: int = DEFAULT_TRUNCATION) -> PoincareSeries:
        return cls((0,) * (truncation + 1))

    @classmethod
    def one(cls, truncation: int = DEFAULT_TRUNCATION) -> PoincareSeries:
        return cls.monomial(0, truncation)

    @classmethod
    def monomial(cls, degree: int, truncation: int = DEFAULT_TRUNCATION,
                 coeff: int = 1) -> PoincareSeries:
        c = [0] * (truncation + 1)
        if degree <= truncation:
            c[degree] = coeff
        return cls(tuple(c))

    @classmethod
    def from_dims(cls, dims: Mapping[int, int] | Iterable[int],
                  truncation: int = DEFAULT_TRUNCATION) -> PoincareSeries:
        c = [0] * (truncation + 1)
        items = dims.items() if isinstance(dims, Mapping) else enumerate(dims)
        for d, v in items:
            if d < 0:
                raise ValueError(f"negative degree {d}")
            if d <= truncation:
                c[d] += v
        return cls(tuple(c))

    def __getitem__(self, degree: int) -> int:
        if 0 <= degree <= self.truncation:
            return self.coeffs[degree]
        return 0

    def _check(self, other: PoincareSeries) -> None:
        if other.truncation != self.truncation:
            raise ValueError(
                f"truncation mismatch: {self.truncation} vs {other.truncation}")

    def __add__(self, other: PoincareSeries) -> PoincareSeries:
        self._check(other)
        return PoincareSeries(tuple(a + b for a, b in zip(self.coeffs, other.coeffs)))

    def __sub__(self, other: PoincareSeries) -> PoincareSeries:
        self._check(other)
        return PoincareSeries(tuple(a - b for a, b in zip(self.coeffs, other.coeffs)))

    def __mul__(self, other: PoincareSeries) -> PoincareSeries:
        return series_mul(self, other)

    def shift(self, k: int) -> PoincareSeries:
        """Multiply by ``t**k``; negative ``k`` drops the low coefficients."""
        n = self.truncation
        c = [0] * (n + 1)
        for d, v in enumerate(self.coeffs):
            if 0 <= d + k <= n:
                c[d + k] = v
            elif d + k < 0 and v:
                raise ValueError(f"shift by {k} would move degree {d} below zero")
        return PoincareSeries(tuple(c))

    def is_dimension_series(self) -> bool:
        return self.coeffs[0] == 1 and all(c >= 0 for c in self.coeffs)

    def records(self) -> list[dict[str, int]]:
        return [{"degree": d, "dim": v} for d, v in enumerate(self.coeffs)]

    def table(self) -> str:
        width = max(len(str(v)) for v in self.coeffs + (self.truncation,))
        lines = ["degree  dim"]
        for d, v in enumerate(self.coeffs):
            lines.append(f"{d:>{max(width, 6)}}  {v}")
        return "\n".join(lines)


def series_mul(a: PoincareSeries, b: PoincareSeries) -> PoincareSeries:
    """Cauchy product truncated at the common truncation degree."""
    a._check(b)
    n = a.truncation
    out = [0] * (n + 1)
    for i, x in enumerate(a.coeffs):
        if not x:
            continue
        for j in range(n + 1 - i):
            y = b.coeffs[j]
            if y:
                out[i + j] += x * y
    return PoincareSeries(tuple(out))


def geometric_series(g: PoincareSeries) -> PoincareSeries:
    """Return ``1/(1-g)``, the series of the tensor algebra on ``g``."""
    if g.coeffs[0] != 0:
        raise ValueError("geometric series needs a zero constant term")
    n = g.truncation
    h = [0] * (n + 1)
    h[0] = 1
    # h = 1 + g*h, solved degree by degree
    for d in range(1, n + 1):
        h[d] = sum(g.coeffs[i] * h[d - i] for i in range(1, d + 1))
    return PoincareSeries(tuple(h))


class Shape(str, Enum):
    POLYNOMIAL = "polynomial"
    EXTERIOR = "exterior"
    TRUNCATED = "truncated"
    RATIONAL_MIXED = "rational-mixed"


class InversionError(ValueError):
    """The target series is not the series of an algebra of the given shape."""

    def __init__(self, message: str, degree: int):
        super().__init__(message)
        self.degree = degree


@dataclass(frozen=True)
class GeneratorCounts:
    """Number of free generators per degree for an algebra of ``shape``.

    For the truncated shape ``p`` is the truncation height; for the other
    shapes it only fixes the parity rules (``p = 0`` means rational).
    """

    counts: Mapping[int, int]
    shape: Shape
    p: int
    _items: tuple[tuple[int, int], ...] = field(init=False, repr=False, compare=True)

    def __post_init__(self):
        items = tuple(sorted((int(d), int(c)) for d, c in dict(self.counts).items() if c))
        for d, c in items:
            if d < 1 or c < 0:
                raise ValueError(f"invalid generator count {c} in degree {d}")
        object.__setattr__(self, "_items", items)
        object.__setattr__(self, "counts", dict(items))
        object.__setattr__(self, "shape", Shape(self.shape))

    def __hash__(self):
        return hash((self._items, self.shape, self.p))

    def factor_kind(self, degree: int) -> str:
        return factor_kind(self.shape, self.p, degree)

    def series(self, truncation: int = DEFAULT_TRUNCATION) -> PoincareSeries:
        return generator_series(self, truncation)

    def records(self) -> list[dict[str, object]]:
        return [{"degree": d, "count": c, "factor": self.factor_kind(d)}
                for d, c in self._items]


def factor_kind(shape: Shape, p: int, degree: int) -> str:
    """Which monogenic factor a generator of ``degree`` contributes.

    Raises :class:`InversionError` when the parity is impossible for the shape:
    away from characteristic 2 odd-degree classes square to zero, so they can
    only be exterior, and an exterior generator of even degree would not be
    graded-commutative.
    """
    shape = Shape(shape)
    odd = degree % 2 == 1
    if shape is Shape.RATIONAL_MIXED:
        if p != 0:
            raise ValueError("rational-mixed shape requires p = 0")
        return "exterior" if odd else "polynomial"
    if p == 2:
        if shape is Shape.TRUNCATED:
            return "exterior"
        return shape.value
    if shape is Shape.POLYNOMIAL:
        if odd:
            raise InversionError(
                f"odd-degree polynomial generator in degree {degree} at p={p}", degree)
        return "polynomial"
    if shape is Shape.EXTERIOR:
        if not odd:
            raise InversionError(
                f"even-degree exterior generator in degree {degree} at p={p}", degree)
        return "exterior"
    if p == 0:
        raise ValueError("truncated shape needs a positive prime")
    return "exterior" if odd else "truncated"


def _apply_factor(coeffs: list[int], kind: str, degree: int, count: int, p: int) -> None:
    n = len(coeffs) - 1
    for _ in range(count):
        if kind == "polynomial":
            # divide by (1 - t^d)
            for k in range(degree, n + 1):
                coeffs[k] += coeffs[k - degree]
        elif kind == "exterior":
            for k in range(n, degree - 1, -1):
                coeffs[k] += coeffs[k - degree]
        else:
            # (1 - t^{pd}) / (1 - t^d)
            top = p * degree
            for k in range(n, top - 1, -1):
                coeffs[k] -= coeffs[k - top]
            for k in range(degree, n + 1):
                coeffs[k] += coeffs[k - degree]


def generator_series(counts: GeneratorCounts, truncation: int = DEFAULT_TRUNCATION
                     ) -> PoincareSeries:
    """Series of the free algebra described by ``counts``, truncated."""
    c = [0] * (truncation + 1)
    c[0] = 1
    for d, k in counts.counts.items():
        if d <= truncation:
            _apply_factor(c, counts.factor_kind(d), d, k, counts.p)
    return PoincareSeries(tuple(c))


def invert_generators(target: PoincareSeries, shape: Shape | str, p: int) -> GeneratorCounts:
    """Greedy degreewise inversion of ``target`` into generator counts.

    At each degree the count is the gap between ``target`` and the series of
    the generators found so far; a negative gap means no algebra of this
    shape has the given series.
    """
    shape = Shape(shape)
    if target.coeffs[0] != 1:
        raise InversionError("target series must have constant term 1", 0)
    if shape is Shape.RATIONAL_MIXED and p != 0:
        raise ValueError("rational-mixed shape requires p = 0")
    n = target.truncation
    current = [0] * (n + 1)
    current[0] = 1
    counts: dict[int, int] = {}
    for d in range(1, n + 1):
        gap = target.coeffs[d] - current[d]
        if gap < 0:
            raise InversionError(
                f"{shape.value} shape inconsistent with series at degree {d} "
                f"(deficit {gap})", d)
        if gap:
            kind = factor_kind(shape, p, d)
            _apply_factor(current, kind, d, gap, p)
            counts[d] = gap
    return GeneratorCounts(counts, shape, p)
