"""Finite-type graded-commutative algebras with Steenrod data.

An :class:`AlgebraPresentation` is a free graded-commutative algebra on named
generators, each either polynomial or truncated (``x**h = 0``).  Away from
characteristic 2, odd-degree generators are exterior.  Monomials are exponent
tuples in generator declaration order; a :class:`Class` is a homogeneous
linear combination of monomials.

Steenrod operations are specified on generators only and extended to
monomials by the Cartan formula.  Instability is built in: ``Sq^{|x|} x = x^2``
and ``P^k x = x^p`` for ``|x| = 2k``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Mapping

from .grfield import Field, Scalar, field

Monomial = tuple[int, ...]


@dataclass(frozen=True, order=True)
class Op:
    """A single Steenrod operation: ``Sq^i``, ``P^i`` or the Bockstein."""

    kind: str
    index: int = 0

    def __post_init__(self):
        if self.kind not in ("Sq", "P", "beta"):
            raise ValueError(f"unknown operation kind {self.kind!r}")
        if self.index < 0:
            raise ValueError(f"negative operation index {self.index}")
        if self.kind == "beta" and self.index != 0:
            raise ValueError("the Bockstein takes no index")

    def __str__(self):
        return "beta" if self.kind == "beta" else f"{self.kind}{self.index}"

    def degree(self, p: int) -> int:
        if self.kind == "Sq":
            return self.index
        if self.kind == "P":
            return 2 * self.index * (p - 1)
        return 1

    def check_prime(self, p: int) -> None:
        if p == 0:
            raise ValueError("no Steenrod operations on rational cohomology")
        if (self.kind == "Sq") != (p == 2):
            raise ValueError(f"{self} does not act at p = {p}")


def Sq(i: int) -> Op:
    return Op("Sq", i)


def P(i: int) -> Op:
    return Op("P", i)


BETA = Op("beta")


def parse_op(text: str) -> Op:
    text = text.strip()
    if text == "beta":
        return BETA
    for kind in ("Sq", "P"):
        if text.startswith(kind) and text[len(kind):].isdigit():
            return Op(kind, int(text[len(kind):]))
    raise ValueError(f"cannot parse operation {text!r}")


@dataclass(frozen=True)
class Generator:
    name: str
    degree: int
    height: int | None = None  # None: polynomial; otherwise x**height == 0

    @property
    def is_polynomial(self) -> bool:
        return self.height is None


class Class:
    """Homogeneous element of an :class:`AlgebraPresentation`."""

    __slots__ = ("algebra", "degree", "terms", "_key")

    def __init__(self, algebra: AlgebraPresentation, degree: int,
                 terms: Mapping[Monomial, Scalar] | None = None):
        f = algebra.field
        clean: dict[Monomial, Scalar] = {}
        for mono, c in (terms or {}).items():
            mono = tuple(mono)
            c = f(c)
            if not c:
                continue
            if algebra.monomial_degree(mono) != degree:
                raise ValueError(f"monomial {mono} does not have degree {degree}")
            if not algebra.is_admissible(mono):
                raise ValueError(f"monomial {mono} violates a truncation relation")
            clean[mono] = c
        self.algebra = algebra
        self.degree = degree
        self.terms = clean
        self._key = tuple(sorted(clean.items()))

    def __repr__(self):
        return f"Class({self.algebra.format_class(self)}, deg={self.degree})"

    def __str__(self):
        return self.algebra.format_class(self)

    def __eq__(self, other):
        if not isinstance(other, Class):
            return NotImplemented
        if self.is_zero() and other.is_zero():
            return self.algebra is other.algebra or self.algebra == other.algebra
        return (self.degree == other.degree and self._key == other._key
                and self.algebra == other.algebra)

    def __hash__(self):
        return hash(self._key) if self._key else hash(())

    def __bool__(self):
        return bool(self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    def _combine(self, other: Class, sign: int) -> Class:
        if other.is_zero():
            return self
        if self.is_zero():
            return other if sign > 0 else -other
        if other.degree != self.degree:
            raise ValueError(f"cannot add classes of degree {self.degree} and {other.degree}")
        f = self.algebra.field
        out = dict(self.terms)
        for mono, c in other.terms.items():
            out[mono] = f.add(out.get(mono, f.zero), c if sign > 0 else f.neg(c))
        return Class(self.algebra, self.degree, out)

    def __add__(self, other: Class) -> Class:
        return self._combine(other, 1)

    def __sub__(self, other: Class) -> Class:
        return self._combine(other, -1)

    def __neg__(self) -> Class:
        return self.scale(-1)

    def scale(self, c) -> Class:
        f = self.algebra.field
        c = f(c)
        return Class(self.algebra, self.degree,
                     {m: f.mul(c, v) for m, v in self.terms.items()})

    def __mul__(self, other):
        if isinstance(other, Class):
            return self.algebra.multiply(self, other)
        return self.scale(other)

    __rmul__ = scale

    def __pow__(self, k: int) -> Class:
        out = self.algebra.one()
        for _ in range(k):
            out = out * self
        return out

    def coefficient(self, mono: Monomial) -> Scalar:
        return self.terms.get(tuple(mono), self.algebra.field.zero)

    def to_vector(self) -> tuple[Scalar, ...]:
        return tuple(self.coefficient(m) for m in self.algebra.monomial_basis(self.degree))

    def serialize(self) -> list[list]:
        return [[list(m), _jsonable(c)] for m, c in self._key]


def _jsonable(c: Scalar):
    if isinstance(c, int):
        return c
    return c.numerator if c.denominator == 1 else f"{c.numerator}/{c.denominator}"


class AlgebraPresentation:
    """Free graded-commutative algebra over F_p (or Q) with Steenrod data.

    ``steenrod`` maps a generator name to ``{Op: value}``, where a value is a
    :class:`Class` or a ``{monomial: coefficient}`` mapping.  Entries that are
    forced by instability (``Sq^0``, ``Sq^{|x|}``, ``P^k`` on ``|x| = 2k``) may
    not be given; missing entries are zero.
    """

    def __init__(self, p: int, generators: Iterable[Generator | tuple],
                 steenrod: Mapping[str, Mapping[Op, object]] | None = None,
                 truncation: int = 24):
        self.p = p
        self.field: Field = field(p)
        gens = []
        for g in generators:
            if not isinstance(g, Generator):
                g = Generator(*g)
            if g.degree < 1:
                raise ValueError(f"generator {g.name} must have positive degree")
            if g.height is not None and g.height < 2:
                raise ValueError(f"generator {g.name}: truncation height must be >= 2")
            if p != 2 and g.degree % 2 == 1:
                # odd classes square to zero in a graded-commutative algebra
                g = Generator(g.name, g.degree, 2)
            gens.append(g)
        names = [g.name for g in gens]
        if len(set(names)) != len(names):
            raise ValueError("duplicate generator names")
        self.generators: tuple[Generator, ...] = tuple(gens)
        self.truncation = truncation
        self._index = {g.name: i for i, g in enumerate(gens)}
        self._basis_cache: dict[int, tuple[Monomial, ...]] = {}
        self._op_cache: dict[tuple[Op, Monomial], Class] = {}
        self._table: dict[tuple[int, Op], Class] = {}
        for name, ops in (steenrod or {}).items():
            if name not in self._index:
                raise ValueError(f"Steenrod table names unknown generator {name!r}")
            i = self._index[name]
            for op, value in ops.items():
                op = parse_op(op) if isinstance(op, str) else op
                self._check_table_entry(gens[i], op)
                cls = value if isinstance(value, Class) else \
                    Class(self, gens[i].degree + op.degree(p), value)
                if cls.algebra is not self:
                    cls = Class(self, cls.degree, cls.terms)
                if cls.degree != gens[i].degree + op.degree(p):
                    raise ValueError(f"{op}({name}) must have degree "
                                     f"{gens[i].degree + op.degree(p)}, got {cls.degree}")
                self._table[(i, op)] = cls

    def _check_table_entry(self, g: Generator, op: Op) -> None:
        op.check_prime(self.p)
        if op.kind == "Sq" and not 0 < op.index < g.degree:
            raise ValueError(f"Sq{op.index}({g.name}) is fixed by instability")
        if op.kind == "P":
            top = g.degree // 2 if g.degree % 2 == 0 else (g.degree - 1) // 2 + 1
            if not 0 < op.index < top:
                raise ValueError(f"P{op.index}({g.name}) is fixed by instability")

    def __repr__(self):
        gens = ", ".join(f"{g.name}:{g.degree}" + (f"^{g.height}" if g.height else "")
                         for g in self.generators)
        return f"AlgebraPresentation(p={self.p}, [{gens}])"

    # presentations are compared structurally so that equal data built twice agree
    def _signature(self):
        return (self.p, self.generators, tuple(sorted(
            ((i, op), c._key) for (i, op), c in self._table.items())))

    def __eq__(self, other):
        if not isinstance(other, AlgebraPresentation):
            return NotImplemented
        return self is other or self._signature() == other._signature()

    def __hash__(self):
        return hash((self.p, self.generators))

    # -- monomials -------------------------------------------------------

    def monomial_degree(self, mono: Monomial) -> int:
        if len(mono) != len(self.generators):
            raise ValueError(f"exponent vector {mono} has wrong length")
        return sum(e * g.degree for e, g in zip(mono, self.generators))

    def is_admissible(self, mono: Monomial) -> bool:
        return all(e >= 0 and (g.height is None or e < g.height)
                   for e, g in zip(mono, self.generators))

    def monomial_basis(self, d: int) -> tuple[Monomial, ...]:
        """Admissible exponent vectors of degree ``d``, lexicographically descending."""
        if d > self.truncation:
            raise ValueError(f"degree {d} beyond truncation {self.truncation}")
        if d < 0:
            return ()
        cached = self._basis_cache.get(d)
        if cached is not None:
            return cached
        out: list[Monomial] = []
        gens = self.generators

        def extend(i: int, remaining: int, prefix: list[int]):
            if i == len(gens):
                if remaining == 0:
                    out.append(tuple(prefix))
                return
            g = gens[i]
            top = remaining // g.degree
            if g.height is not None:
                top = min(top, g.height - 1)
            for e in range(top, -1, -1):
                prefix.append(e)
                extend(i + 1, remaining - e * g.degree, prefix)
                prefix.pop()

        extend(0, d, [])
        basis = tuple(out)
        self._basis_cache[d] = basis
        return basis

    def poincare_dims(self, truncation: int) -> list[int]:
        return [len(self.monomial_basis(d)) for d in range(truncation + 1)]

    # -- classes ---------------------------------------------------------

    def zero(self, degree: int) -> Class:
        return Class(self, degree)

    def one(self) -> Class:
        return Class(self, 0, {(0,) * len(self.generators): 1})

    def gen(self, name: str) -> Class:
        i = self._index[name]
        mono = [0] * len(self.generators)
        mono[i] = 1
        return Class(self, self.generators[i].degree, {tuple(mono): 1})

    def monomial(self, mono: Monomial, coeff=1) -> Class:
        mono = tuple(mono)
        if not self.is_admissible(mono):
            return Class(self, self.monomial_degree(mono))
        return Class(self, self.monomial_degree(mono), {mono: coeff})

    def from_vector(self, degree: int, vector) -> Class:
        return Class(self, degree, dict(zip(self.monomial_basis(degree), vector)))

    def _odd_positions(self, mono: Monomial) -> list[int]:
        return [i for i, e in enumerate(mono) if e and self.generators[i].degree % 2]

    def monomial_product(self, a: Monomial, b: Monomial) -> tuple[Monomial, int] | None:
        """Product of two monomials as (monomial, sign), or None if zero."""
        prod = tuple(x + y for x, y in zip(a, b))
        if not self.is_admissible(prod):
            return None
        sign = 1
        if self.p != 2:
            odd_a = self._odd_positions(a)
            swaps = sum(1 for j in self._odd_positions(b) for i in odd_a if i > j)
            sign = -1 if swaps % 2 else 1
        return prod, sign

    def multiply(self, c1: Class, c2: Class) -> Class:
        f = self.field
        out: dict[Monomial, Scalar] = {}
        for m1, a in c1.terms.items():
            for m2, b in c2.terms.items():
                r = self.monomial_product(m1, m2)
                if r is None:
                    continue
                mono, sign = r
                v = f.mul(a, b)
                out[mono] = f.add(out.get(mono, f.zero), v if sign > 0 else f.neg(v))
        return Class(self, c1.degree + c2.degree, out)

    # -- Steenrod operations ---------------------------------------------

    def _on_generator(self, i: int, op: Op) -> Class:
        g = self.generators[i]
        x = self.gen(g.name)
        shift = op.degree(self.p)
        if op.kind == "beta":
            return self._table.get((i, op), self.zero(g.degree + 1))
        if op.index == 0:
            return x
        if op.kind == "Sq":
            if op.index < g.degree:
                return self._table.get((i, op), self.zero(g.degree + shift))
            if op.index == g.degree:
                return x * x
            return self.zero(g.degree + shift)
        # P^i
        if g.degree % 2 == 0:
            k = g.degree // 2
            if op.index < k:
                return self._table.get((i, op), self.zero(g.degree + shift))
            if op.index == k:
                return x ** self.p
            return self.zero(g.degree + shift)
        if 2 * op.index < g.degree:
            return self._table.get((i, op), self.zero(g.degree + shift))
        return self.zero(g.degree + shift)

    def _on_monomial(self, op: Op, mono: Monomial) -> Class:
        key = (op, mono)
        hit = self._op_cache.get(key)
        if hit is not None:
            return hit
        d = self.monomial_degree(mono)
        shift = op.degree(self.p)
        first = next((i for i, e in enumerate(mono) if e), None)
        if first is None:
            # the unit: only the identity operation survives
            result = self.one() if (op.kind != "beta" and op.index == 0) else self.zero(shift)
        elif op.kind != "beta" and op.index == 0:
            result = self.monomial(mono)
        else:
            rest = list(mono)
            rest[first] -= 1
            rest = tuple(rest)
            g = self.generators[first]
            # mono = g * rest with g leftmost, so no reordering sign
            if op.kind == "beta":
                result = (self._on_generator(first, BETA) * self.monomial(rest)
                          + self.field.sign(g.degree) * self.gen(g.name)
                          * self._on_monomial(BETA, rest))
            else:
                result = self.zero(d + shift)
                top = op.index if op.kind == "P" else min(op.index, g.degree)
                for j in range(top + 1):
                    left = self._on_generator(first, Op(op.kind, j))
                    if left.is_zero():
                        continue
                    right = self._on_monomial(Op(op.kind, op.index - j), rest)
                    if right.is_zero():
                        continue
                    result = result + left * right
        if result.is_zero():
            result = self.zero(d + shift)
        self._op_cache[key] = result
        return result

    def steenrod(self, op: Op, c: Class) -> Class:
        """Apply ``op`` to ``c`` using the generator tables and the Cartan formula."""
        op.check_prime(self.p)
        out = self.zero(c.degree + op.degree(self.p))
        for mono, coeff in c.terms.items():
            out = out + self._on_monomial(op, mono).scale(coeff)
        return out

    def is_nilpotent_free(self) -> bool:
        return all(g.is_polynomial and (self.p == 2 or g.degree % 2 == 0)
                   for g in self.generators)

    # -- formatting ------------------------------------------------------

    def format_monomial(self, mono: Monomial) -> str:
        parts = []
        for e, g in zip(mono, self.generators):
            if e == 1:
                parts.append(g.name)
            elif e > 1:
                parts.append(f"{g.name}^{e}")
        return "*".join(parts) or "1"

    def format_class(self, c: Class) -> str:
        if c.is_zero():
            return "0"
        out = []
        for mono, coeff in c._key:
            m = self.format_monomial(mono)
            if coeff == 1:
                out.append(m)
            elif m == "1":
                out.append(str(coeff))
            else:
                out.append(f"{coeff}{m}" if self.p else f"({coeff}){m}")
        return " + ".join(out)


def steenrod(algebra: AlgebraPresentation, op: Op, c: Class) -> Class:
    return algebra.steenrod(op, c)


def monomial_basis(algebra: AlgebraPresentation, d: int) -> tuple[Monomial, ...]:
    return algebra.monomial_basis(d)


def multiply(c1: Class, c2: Class) -> Class:
    return c1.algebra.multiply(c1, c2)


def is_nilpotent_free(algebra: AlgebraPresentation) -> bool:
    return algebra.is_nilpotent_free()
