"""Space specifications: JSON documents and the built-in example spaces.

A space document describes the base algebra, the bundle (fiber dimension,
Euler class, orientation Steenrod data per prime) and optionally the
coefficients of Massey's relation.  Classes are arrays of
``[exponent-vector, coefficient]`` pairs; Steenrod tables are keyed by
operation kind and then by operation index as a string.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Any, Callable

import jsonschema

from .basealg import AlgebraPresentation, Class, Generator, Op
from .grfield import is_prime
from .thom import MasseyData, ThomModule

SCHEMA_ID = "loopcoh-space/1"

_CLASS = {
    "type": "array",
    "items": {
        "type": "array", "minItems": 2, "maxItems": 2,
        "prefixItems": [
            {"type": "array", "items": {"type": "integer", "minimum": 0}},
            {"anyOf": [{"type": "integer"}, {"type": "string", "pattern": r"^-?\d+/\d+$"}]},
        ],
    },
}

_OP_TABLE = {
    "type": "object",
    "properties": {
        "Sq": {"type": "object", "patternProperties": {r"^\d+$": _CLASS},
               "additionalProperties": False},
        "P": {"type": "object", "patternProperties": {r"^\d+$": _CLASS},
              "additionalProperties": False},
        "beta": _CLASS,
    },
    "additionalProperties": False,
}

_PER_PRIME = {"type": "object", "propertyNames": {"pattern": r"^\d+$"}}

SPACE_SCHEMA = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "type": "object",
    "required": ["schema", "name", "primes", "base", "bundle"],
    "additionalProperties": False,
    "properties": {
        "schema": {"const": SCHEMA_ID},
        "name": {"type": "string", "minLength": 1},
        "primes": {"type": "array", "items": {"type": "integer", "minimum": 0}, "minItems": 1},
        "max_degree": {"type": "integer", "minimum": 1},
        "base": {
            "type": "object",
            "required": ["generators"],
            "additionalProperties": False,
            "properties": {
                "generators": {
                    "type": "array",
                    "items": {
                        "type": "object",
                        "required": ["name", "degree"],
                        "additionalProperties": False,
                        "properties": {
                            "name": {"type": "string", "minLength": 1},
                            "degree": {"type": "integer", "minimum": 1},
                            "height": {"type": ["integer", "null"], "minimum": 2},
                        },
                    },
                },
                "steenrod": {**_PER_PRIME, "additionalProperties": {
                    "type": "object", "additionalProperties": _OP_TABLE}},
            },
        },
        "bundle": {
            "type": "object",
            "required": ["fiber_dim"],
            "additionalProperties": False,
            "properties": {
                "fiber_dim": {"type": "integer", "minimum": 2},
                "euler": _CLASS,
                "orientation": {**_PER_PRIME, "additionalProperties": _OP_TABLE},
            },
        },
        "massey": {
            "type": "object",
            "required": ["s", "t"],
            "additionalProperties": False,
            "properties": {"s": _CLASS, "t": _CLASS},
        },
    },
}


class SpecError(ValueError):
    """A space document is malformed; ``path`` names the offending field."""

    def __init__(self, message: str, path: str = ""):
        super().__init__(f"{path}: {message}" if path else message)
        self.path = path


def _coeff(value) -> Fraction:
    if isinstance(value, str):
        return Fraction(value)
    return Fraction(value)


def _canonical_class(raw: list) -> list:
    """Merge duplicate monomials, drop zeros, sort by exponent vector."""
    acc: dict[tuple[int, ...], Fraction] = {}
    for exps, c in raw:
        key = tuple(exps)
        acc[key] = acc.get(key, Fraction(0)) + _coeff(c)
    out = []
    for key in sorted(acc):
        c = acc[key]
        if c:
            out.append([list(key), c.numerator if c.denominator == 1
                        else f"{c.numerator}/{c.denominator}"])
    return out


def _canonical_table(table: dict) -> dict:
    out = {}
    for kind in ("Sq", "P"):
        if kind in table:
            entries = {k: _canonical_class(v) for k, v in table[kind].items()}
            entries = {k: v for k, v in sorted(entries.items(), key=lambda kv: int(kv[0])) if v}
            if entries:
                out[kind] = {str(int(k)): v for k, v in entries.items()}
    if "beta" in table:
        beta = _canonical_class(table["beta"])
        if beta:
            out["beta"] = beta
    return out


def _table_ops(table: dict) -> dict[Op, list]:
    ops = {}
    for kind in ("Sq", "P"):
        for idx, cls in table.get(kind, {}).items():
            ops[Op(kind, int(idx))] = cls
    if "beta" in table:
        ops[Op("beta")] = table["beta"]
    return ops


@dataclass
class SpaceSpec:
    name: str
    primes: tuple[int, ...]
    max_degree: int
    generators: tuple[Generator, ...]
    fiber_dim: int
    euler: list = field(default_factory=list)
    base_steenrod: dict[int, dict[str, dict]] = field(default_factory=dict)
    orientation: dict[int, dict] = field(default_factory=dict)
    massey: dict | None = None
    _modules: dict = field(default_factory=dict, repr=False, compare=False)

    def base_truncation(self) -> int:
        n = self.fiber_dim
        return self.max_degree + self.max_degree // (n - 1)

    def _class(self, A: AlgebraPresentation, raw: list, path: str, degree: int) -> Class:
        terms = {}
        for i, (exps, c) in enumerate(raw):
            if len(exps) != len(self.generators):
                raise SpecError(f"exponent vector {exps} should have "
                                f"{len(self.generators)} entries", f"{path}[{i}]")
            try:
                coeff = A.field(_coeff(c))
            except ZeroDivisionError as exc:
                raise SpecError(str(exc), f"{path}[{i}]") from None
            if not A.is_admissible(tuple(exps)):
                continue
            d = A.monomial_degree(tuple(exps))
            if d != degree:
                raise SpecError(f"monomial {exps} has degree {d}, expected {degree}",
                                f"{path}[{i}]")
            key = tuple(exps)
            terms[key] = A.field.add(terms.get(key, A.field.zero), coeff)
        return Class(A, degree, terms)

    def algebra(self, p: int) -> AlgebraPresentation:
        return self.thom_module(p).base

    def thom_module(self, p: int) -> ThomModule:
        if p not in self.primes:
            raise SpecError(f"prime {p} not declared for space {self.name!r}", "primes")
        hit = self._modules.get(p)
        if hit is not None:
            return hit
        A0 = AlgebraPresentation(p, self.generators, truncation=self.base_truncation())
        tables = {}
        for gname, table in self.base_steenrod.get(p, {}).items():
            if gname not in {g.name for g in self.generators}:
                raise SpecError(f"unknown generator {gname!r}", f"base.steenrod.{p}.{gname}")
            gdeg = next(g.degree for g in A0.generators if g.name == gname)
            ops = {}
            for op, raw in _table_ops(table).items():
                path = f"base.steenrod.{p}.{gname}.{op.kind}" + \
                    (f".{op.index}" if op.kind != "beta" else "")
                ops[op] = self._class(A0, raw, path, gdeg + op.degree(p))
            tables[gname] = {op: c.terms for op, c in ops.items()}
        try:
            A = AlgebraPresentation(p, self.generators, tables,
                                    truncation=self.base_truncation())
        except ValueError as exc:
            raise SpecError(str(exc), f"base.steenrod.{p}") from None
        n = self.fiber_dim
        euler = self._class(A, self.euler, "bundle.euler", n)
        orientation = {}
        for op, raw in _table_ops(self.orientation.get(p, {})).items():
            path = f"bundle.orientation.{p}.{op.kind}" + \
                (f".{op.index}" if op.kind != "beta" else "")
            orientation[op] = self._class(A, raw, path, op.degree(p))
        try:
            T = ThomModule(A, n, euler, orientation)
        except ValueError as exc:
            raise SpecError(str(exc), "bundle") from None
        self._modules[p] = T
        return T

    def massey_data(self, p: int) -> MasseyData | None:
        if self.massey is None:
            return None
        A = self.algebra(p)
        n = self.fiber_dim
        s = self._class(A, self.massey["s"], "massey.s", 2 * n - 2)
        t = self._class(A, self.massey["t"], "massey.t", n - 1)
        try:
            return MasseyData(s, t, n)
        except ValueError as exc:
            raise SpecError(str(exc), "massey") from None

    def validate(self) -> None:
        for p in self.primes:
            if p != 0 and not is_prime(p):
                raise SpecError(f"{p} is not a prime", "primes")
        for key in list(self.base_steenrod) + list(self.orientation):
            if key not in self.primes:
                raise SpecError(f"tables given for undeclared prime {key}", "primes")
        for p in self.primes:
            self.thom_module(p)
            self.massey_data(p)

    def to_json(self) -> dict[str, Any]:
        doc: dict[str, Any] = {
            "schema": SCHEMA_ID,
            "name": self.name,
            "primes": sorted(self.primes),
            "max_degree": self.max_degree,
            "base": {
                "generators": [{"name": g.name, "degree": g.degree, "height": g.height}
                               for g in self.generators],
            },
            "bundle": {"fiber_dim": self.fiber_dim,
                       "euler": _canonical_class(self.euler)},
        }
        steen = {}
        for p in sorted(self.base_steenrod):
            per = {g: _canonical_table(t) for g, t in sorted(self.base_steenrod[p].items())}
            per = {g: t for g, t in per.items() if t}
            if per:
                steen[str(p)] = per
        if steen:
            doc["base"]["steenrod"] = steen
        orient = {}
        for p in sorted(self.orientation):
            t = _canonical_table(self.orientation[p])
            if t:
                orient[str(p)] = t
        if orient:
            doc["bundle"]["orientation"] = orient
        if self.massey is not None:
            doc["massey"] = {"s": _canonical_class(self.massey["s"]),
                             "t": _canonical_class(self.massey["t"])}
        return doc

    def dumps(self) -> str:
        return json.dumps(self.to_json(), indent=2, sort_keys=True)


def spec_from_json(doc: dict, max_degree: int | None = None) -> SpaceSpec:
    validator = jsonschema.Draft202012Validator(SPACE_SCHEMA)
    errors = sorted(validator.iter_errors(doc), key=lambda e: list(e.absolute_path))
    if errors:
        err = errors[0]
        path = ".".join(str(x) for x in err.absolute_path)
        raise SpecError(err.message, path or "<root>")
    gens = tuple(Generator(g["name"], g["degree"], g.get("height"))
                 for g in doc["base"]["generators"])
    bundle = doc["bundle"]
    spec = SpaceSpec(
        name=doc["name"],
        primes=tuple(sorted(set(doc["primes"]))),
        max_degree=max_degree or doc.get("max_degree", 24),
        generators=gens,
        fiber_dim=bundle["fiber_dim"],
        euler=bundle.get("euler", []),
        base_steenrod={int(p): t for p, t in doc["base"].get("steenrod", {}).items()},
        orientation={int(p): t for p, t in bundle.get("orientation", {}).items()},
        massey=doc.get("massey"),
    )
    spec.validate()
    return spec


# -- built-in spaces -------------------------------------------------------


def _mono(*exps) -> list:
    return [[list(exps), 1]]


def _cpinf_eta_plus_r(primes, max_degree):
    # M = Thom space of eta + R over CP^inf, homotopy equivalent to Sigma CP^inf;
    # u suspends x, so Sq^2 u = x*u and P^1 u = x^(p-1)*u
    orientation = {}
    for p in primes:
        if p == 2:
            orientation[p] = {"Sq": {"2": _mono(1)}}
        elif p:
            orientation[p] = {"P": {"1": _mono(p - 1)}}
    return SpaceSpec("cpinf-eta-plus-r", primes, max_degree, (Generator("x", 2),), 3,
                     orientation=orientation, massey={"s": [], "t": _mono(1)})


def _spin3(primes, max_degree):
    # base HP^inf with y restricting to x^2 on CP^inf; P^1 y = 2 y^((p+1)/2);
    # P^1 u = y^((p-1)/2) u, detected on Sigma MSpin(2)
    steen, orientation = {}, {}
    for p in primes:
        if p > 2:
            steen[p] = {"y": {"P": {"1": [[[(p + 1) // 2], 2]]}}}
            orientation[p] = {"P": {"1": _mono((p - 1) // 2)}}
    return SpaceSpec("spin3", primes, max_degree, (Generator("y", 4),), 3,
                     base_steenrod=steen, orientation=orientation,
                     massey={"s": _mono(1), "t": []})


def _spin2_suspension(primes, max_degree):
    # Sigma MSpin(2): bundle eta^2 + R, Euler class 2x of eta^2 kills Sq^2 u mod 2
    orientation = {}
    for p in primes:
        if p > 2:
            orientation[p] = {"P": {"1": _mono(p - 1)}}
    return SpaceSpec("spin2-suspension", primes, max_degree, (Generator("x", 2),), 3,
                     orientation=orientation, massey={"s": [], "t": [[[1], 2]]})


def _cpinf_eta(primes, max_degree):
    return SpaceSpec("cpinf-eta", primes, max_degree, (Generator("x", 2),), 2,
                     euler=_mono(1))


def _cpinf_trivial(primes, max_degree):
    # trivial rank-3 bundle: M = Sigma^3 (CP^inf_+), every Sq^i u and P^i u vanishes
    return SpaceSpec("cpinf-trivial", primes, max_degree, (Generator("x", 2),), 3,
                     massey={"s": [], "t": []})


def _sphere(n: int) -> Callable:
    def build(primes, max_degree):
        return SpaceSpec(f"sphere-{n}", primes, max_degree, (), n,
                         massey={"s": [], "t": []})
    return build


BUILTINS: dict[str, Callable] = {
    "cpinf-eta-plus-r": _cpinf_eta_plus_r,
    "spin3": _spin3,
    "spin2-suspension": _spin2_suspension,
    "sphere-n": _sphere(3),
    "cpinf-eta": _cpinf_eta,
    "cpinf-trivial": _cpinf_trivial,
}

DEFAULT_PRIMES = (0, 2, 3, 5, 7)


def builtin_names() -> list[str]:
    return sorted(BUILTINS)


def builtin(name: str, primes=DEFAULT_PRIMES, max_degree: int = 24) -> SpaceSpec:
    m = re.fullmatch(r"sphere-(\d+)", name)
    if m:
        n = int(m.group(1))
        if n < 2:
            raise SpecError(f"sphere dimension must be >= 2, got {n}", "builtin")
        factory = _sphere(n)
    elif name in BUILTINS:
        factory = BUILTINS[name]
    else:
        raise SpecError(f"unknown builtin {name!r}; known: {', '.join(builtin_names())}",
                        "builtin")
    spec = factory(tuple(sorted(set(primes))), max_degree)
    spec.validate()
    return spec


def load_spec(source: str | Path, *, primes=None, max_degree: int | None = None) -> SpaceSpec:
    """Load a builtin by name or a JSON space document from a file path."""
    path = Path(source)
    if path.suffix == ".json" or path.exists():
        try:
            doc = json.loads(path.read_text())
        except FileNotFoundError:
            raise SpecError(f"no such file {source}", "<file>") from None
        except json.JSONDecodeError as exc:
            raise SpecError(f"invalid JSON: {exc}", "<file>") from None
        return spec_from_json(doc, max_degree)
    return builtin(str(source), primes or DEFAULT_PRIMES, max_degree or 24)
