"""Thom modules, sphere-bundle rings and Massey's relation.

The reduced cohomology of a Thom space is free of rank one over the base on
an orientation ``u`` of degree ``n``.  A :class:`ThomClass` stores the base
coefficient ``x`` of ``x*u``.  Products use ``u*u = e*u`` for the Euler class
``e``; Steenrod operations use the Cartan formula together with the
orientation table ``op(u) = w_op * u``.

The sphere bundle ring is free over the base on ``{1, v}`` with ``v`` of
degree ``n - 1``, subject to ``v*v = s + t*v``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping

from .basealg import BETA, AlgebraPresentation, Class, Op, Sq, P, parse_op


class ThomModule:
    """Reduced cohomology of the Thom space of an oriented spherical fibration.

    ``orientation`` maps operations to base classes ``w`` with ``op(u) = w*u``.
    At p = 2 it may hold ``Sq^i`` for ``0 < i < n``; at odd p it may hold
    ``P^i`` for ``2i < n`` and the Bockstein.  ``Sq^n u = e*u`` and, for even
    ``n = 2k``, ``P^k u = u^p = e^(p-1) * u`` are filled in automatically.
    """

    def __init__(self, base: AlgebraPresentation, n: int, euler: Class | None = None,
                 orientation: Mapping[Op, object] | None = None):
        if n < 2:
            raise ValueError(f"fiber dimension must be >= 2 for a simply connected "
                             f"Thom space, got {n}")
        self.base = base
        self.p = base.p
        self.n = n
        if euler is None:
            euler = base.zero(n)
        if euler.algebra is not base:
            euler = Class(base, euler.degree, euler.terms)
        if euler.degree != n and not euler.is_zero():
            raise ValueError(f"Euler class must have degree {n}, got {euler.degree}")
        if euler.is_zero():
            euler = base.zero(n)
        if self.p != 2 and n % 2 == 1 and not euler.is_zero():
            raise ValueError("u*u = -u*u forces a zero Euler class for odd n away from p = 2")
        self.euler = euler
        self._orientation: dict[Op, Class] = {}
        for op, value in (orientation or {}).items():
            op = parse_op(op) if isinstance(op, str) else op
            self._check_orientation_entry(op)
            deg = op.degree(self.p)
            cls = value if isinstance(value, Class) else Class(base, deg, value)
            if cls.algebra is not base:
                cls = Class(base, cls.degree, cls.terms)
            if not cls.is_zero() and cls.degree != deg:
                raise ValueError(f"{op}(u) = w*u needs w of degree {deg}, got {cls.degree}")
            self._orientation[op] = cls if not cls.is_zero() else base.zero(deg)

    def _check_orientation_entry(self, op: Op) -> None:
        op.check_prime(self.p)
        if op.kind == "Sq" and not 0 < op.index < self.n:
            raise ValueError(f"Sq{op.index}(u) is fixed by instability and the Euler class")
        if op.kind == "P" and not 0 < 2 * op.index < self.n:
            raise ValueError(f"P{op.index}(u) is fixed by instability and the Euler class")

    def __repr__(self):
        return f"ThomModule({self.base!r}, n={self.n}, e={self.euler})"

    @property
    def field(self):
        return self.base.field

    def is_euler_zero(self) -> bool:
        return self.euler.is_zero()

    def orientation_class(self, op: Op) -> Class:
        """The base class ``w`` with ``op(u) = w * u``."""
        op.check_prime(self.p)
        b = self.base
        deg = op.degree(self.p)
        if op.kind == "beta":
            return self._orientation.get(op, b.zero(1))
        if op.index == 0:
            return b.one()
        if op.kind == "Sq":
            if op.index < self.n:
                return self._orientation.get(op, b.zero(deg))
            if op.index == self.n:
                return self.euler
            return b.zero(deg)
        if 2 * op.index < self.n:
            return self._orientation.get(op, b.zero(deg))
        if 2 * op.index == self.n:
            return self.euler ** (self.p - 1)
        return b.zero(deg)

    def orientation_table(self) -> dict[Op, Class]:
        return dict(sorted(self._orientation.items()))

    def thom_class(self, x: Class | None = None) -> ThomClass:
        return ThomClass(self, self.base.one() if x is None else x)

    def basis(self, degree: int) -> tuple[tuple[int, ...], ...]:
        """Base monomials ``m`` whose products ``m*u`` span reduced degree ``degree``."""
        return self.base.monomial_basis(degree - self.n)

    def reduced_dims(self, truncation: int) -> list[int]:
        return [len(self.basis(d)) if d >= self.n else 0 for d in range(truncation + 1)]


@dataclass(frozen=True)
class ThomClass:
    """The element ``x * u`` of the reduced cohomology of the Thom space."""

    module: ThomModule
    x: Class

    @property
    def degree(self) -> int:
        return self.x.degree + self.module.n

    def is_zero(self) -> bool:
        return self.x.is_zero()

    def __add__(self, other: ThomClass) -> ThomClass:
        return ThomClass(self.module, self.x + other.x)

    def __sub__(self, other: ThomClass) -> ThomClass:
        return ThomClass(self.module, self.x - other.x)

    def scale(self, c) -> ThomClass:
        return ThomClass(self.module, self.x.scale(c))

    def __mul__(self, other: ThomClass) -> ThomClass:
        return thom_product(self, other)

    def __eq__(self, other):
        if not isinstance(other, ThomClass):
            return NotImplemented
        return self.x == other.x

    def __hash__(self):
        return hash(self.x)

    def __str__(self):
        s = str(self.x)
        if s == "1":
            return "u"
        return f"({s})*u" if "+" in s else f"{s}*u"


def thom_product(m1: ThomClass, m2: ThomClass) -> ThomClass:
    """``(x*u)(y*u) = (-1)^(|y| n) x*y*e*u``."""
    T = m1.module
    prod = m1.x * m2.x * T.euler
    if T.p != 2 and (m2.x.degree * T.n) % 2:
        prod = -prod
    return ThomClass(T, prod)


def steenrod_thom(op: Op, m: ThomClass) -> ThomClass:
    """Cartan formula ``op(x*u) = sum op'(x) * op''(u)`` over the orientation table."""
    T = m.module
    b = T.base
    op.check_prime(T.p)
    if op.kind == "beta":
        x = m.x
        out = b.steenrod(BETA, x) + T.field.sign(x.degree) * (x * T.orientation_class(BETA))
        return ThomClass(T, out)
    out = b.zero(m.x.degree + op.degree(T.p))
    for j in range(op.index + 1):
        w = T.orientation_class(Op(op.kind, op.index - j))
        if w.is_zero():
            continue
        left = b.steenrod(Op(op.kind, j), m.x)
        if left.is_zero():
            continue
        out = out + left * w
    return ThomClass(T, out)


def wu_class(T: ThomModule) -> Class:
    """``w_{n-1}`` with ``Sq^{n-1} u = w*u`` (p = 2) or ``W_m`` with ``P^m u = W*u``."""
    if T.p == 2:
        return T.orientation_class(Sq(T.n - 1))
    if T.p == 0:
        raise ValueError("Wu classes need a positive characteristic")
    if T.n % 2 == 0:
        raise ValueError(f"odd-primary Wu class needs odd fiber dimension, got n = {T.n}")
    return T.orientation_class(P((T.n - 1) // 2))


@dataclass(frozen=True)
class SphereClass:
    """``a*v + b`` in the cohomology of the sphere bundle."""

    a: Class
    b: Class

    def __post_init__(self):
        if not self.a.is_zero() and not self.b.is_zero() and self.a.algebra != self.b.algebra:
            raise ValueError("sphere class components over different bases")

    @classmethod
    def v(cls, base: AlgebraPresentation, n: int) -> SphereClass:
        return cls(base.one(), base.zero(n - 1))

    @classmethod
    def base_class(cls, b: Class, n: int) -> SphereClass:
        return cls(b.algebra.zero(b.degree - n + 1), b)

    def degree(self, n: int) -> int:
        if not self.a.is_zero():
            return self.a.degree + n - 1
        return self.b.degree

    def is_zero(self) -> bool:
        return self.a.is_zero() and self.b.is_zero()

    def __add__(self, other: SphereClass) -> SphereClass:
        return SphereClass(self.a + other.a, self.b + other.b)

    def __sub__(self, other: SphereClass) -> SphereClass:
        return SphereClass(self.a - other.a, self.b - other.b)

    def __eq__(self, other):
        if not isinstance(other, SphereClass):
            return NotImplemented
        return self.a == other.a and self.b == other.b

    def __hash__(self):
        return hash((self.a, self.b))

    def __str__(self):
        a, b = str(self.a), str(self.b)
        parts = []
        if a != "0":
            parts.append("v" if a == "1" else (f"({a})*v" if "+" in a else f"{a}*v"))
        if b != "0":
            parts.append(b)
        return " + ".join(parts) or "0"


@dataclass(frozen=True)
class MasseyData:
    """Coefficients of ``v*v = s + t*v``; ``s`` has degree 2n-2, ``t`` degree n-1."""

    s: Class
    t: Class
    n: int

    def __post_init__(self):
        n = self.n
        if not self.s.is_zero() and self.s.degree != 2 * n - 2:
            raise ValueError(f"s must have degree {2 * n - 2}")
        if not self.t.is_zero() and self.t.degree != n - 1:
            raise ValueError(f"t must have degree {n - 1}")
        p = (self.s if not self.s.is_zero() else self.t).algebra.p
        if p != 2 and n % 2 == 0 and not (self.s.is_zero() and self.t.is_zero()):
            raise ValueError("v has odd degree, so v*v = 0 forces s = t = 0 away from p = 2")

    def relation(self) -> str:
        return f"v^2 = {self.s} + ({self.t})*v"


def sphere_mul(c1: SphereClass, c2: SphereClass, M: MasseyData) -> SphereClass:
    """Product in ``H*(B)[v] / (v^2 - t v - s)`` with Koszul signs."""
    n = M.n
    base = next(c.algebra for c in (c1.a, c1.b, c2.a, c2.b, M.s, M.t))
    f = base.field
    vdeg = n - 1

    def sgn(k):
        return f.sign(k) if base.p != 2 else f.one

    a1, b1, a2, b2 = c1.a, c1.b, c2.a, c2.b
    # a1 v a2 v = (-1)^{|v||a2|} a1 a2 v^2
    aa = (a1 * a2).scale(sgn(vdeg * a2.degree))
    # a1 v b2 = (-1)^{|v||b2|} a1 b2 v
    a_part = aa * M.t + (a1 * b2).scale(sgn(vdeg * b2.degree)) + b1 * a2
    b_part = aa * M.s + b1 * b2
    return SphereClass(a_part, b_part)


def massey_transform(M: MasseyData, w: Class) -> MasseyData:
    """Relation coefficients after replacing ``v`` by ``v + w``."""
    n = M.n
    if not w.is_zero() and w.degree != n - 1:
        raise ValueError(f"change of generator must have degree {n - 1}, got {w.degree}")
    s_new = M.s - w * M.t - w * w
    t_new = M.t if n % 2 == 0 else M.t + w.scale(2)
    return MasseyData(s_new, t_new, n)


def delta_star(c: SphereClass, T: ThomModule) -> ThomClass:
    """Coboundary ``a*v + b -> a*u``."""
    return ThomClass(T, c.a if not c.a.is_zero() else T.base.zero(c.degree(T.n) - T.n + 1))


def massey_consistency(T: ThomModule, M: MasseyData) -> bool:
    """Check ``t = w_{n-1}`` (p = 2, n odd)."""
    if T.p != 2 or T.n % 2 == 0:
        raise ValueError("t = w_{n-1} is asserted only for p = 2 and odd n")
    return M.t == wu_class(T)
