"""E2-term, collapse, and structure of the loop-space cohomology.

When the Euler class vanishes all reduced products in the Thom space are
zero, the bar differential vanishes and the spectral sequence collapses, so
the loop-space Poincare series is ``1/(1 - t^(n-1) P_B(t))``.  Which
monogenic factors appear is decided from the Wu class, nilpotents in the
base, and the parity of ``n``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import Iterable, Sequence

from .bar import BarElement, Word, bar_complex, steenrod_bar
from .basealg import Op, P, Sq
from .series import GeneratorCounts, PoincareSeries, Shape, geometric_series, \
    invert_generators, series_mul
from .thom import ThomModule, wu_class


class HypothesisError(ValueError):
    """The requested computation needs ``u^2 = 0`` (vanishing Euler class)."""


class Verdict(str, Enum):
    POLYNOMIAL = "Polynomial"
    EXTERIOR = "Exterior"
    P_TRUNCATED = "PTruncated"
    RATIONAL_MIXED = "RationalMixed"
    UNKNOWN = "Unknown"


@dataclass(frozen=True)
class Evidence:
    p: int
    euler_zero: bool
    wu_nonzero: bool | None
    nilpotent_free: bool
    n_parity: str
    reason: str

    def as_dict(self) -> dict:
        return {"p": self.p, "euler_zero": self.euler_zero, "wu_nonzero": self.wu_nonzero,
                "nilpotent_free": self.nilpotent_free, "n_parity": self.n_parity,
                "reason": self.reason}


@dataclass(frozen=True)
class Classification:
    verdict: Verdict
    evidence: Evidence
    generator_counts: GeneratorCounts | None = None

    def __post_init__(self):
        if (self.verdict is Verdict.UNKNOWN) != (self.generator_counts is None):
            raise ValueError("exactly the non-Unknown verdicts carry generator counts")


@dataclass(frozen=True)
class E2Page:
    dims: dict[tuple[int, int], int]
    collapse: bool
    max_total_degree: int
    word_counts: dict[tuple[int, int], int] = field(default_factory=dict)

    def total_dims(self) -> list[int]:
        out = [0] * (self.max_total_degree + 1)
        for (s, t), d in self.dims.items():
            if t - s <= self.max_total_degree:
                out[t - s] += d
        return out


def collapse_case(T: ThomModule) -> bool:
    return T.is_euler_zero()


def _require_collapse(T: ThomModule) -> None:
    if not collapse_case(T):
        raise HypothesisError(
            "hypothesis not met: u^2 = 0 (vanishing Euler class) is required, "
            f"but e = {T.euler}")


def base_series(T: ThomModule, truncation: int) -> PoincareSeries:
    return PoincareSeries(tuple(T.base.poincare_dims(truncation)))


def suspended_series(T: ThomModule, truncation: int) -> PoincareSeries:
    """Series of the desuspended reduced cohomology: ``t^(n-1) P_B(t)``."""
    return base_series(T, truncation).shift(T.n - 1)


def loop_series(T: ThomModule, truncation: int) -> PoincareSeries:
    _require_collapse(T)
    return geometric_series(suspended_series(T, truncation))


def _internal_limit(T: ThomModule, total: int) -> int:
    # a word of length s has t >= s*n, so t - s <= total forces s <= total/(n-1)
    return total + total // (T.n - 1)


def e2_page(T: ThomModule, max_total_degree: int) -> E2Page:
    """Tor dimensions, by bar-complex homology, for every total degree up to the bound."""
    bc = bar_complex(T)
    if _internal_limit(T, max_total_degree) > bc.max_degree:
        raise ValueError("base truncation too small for the requested total degree")
    dims: dict[tuple[int, int], int] = {}
    words: dict[tuple[int, int], int] = {}
    for s in range(0, max_total_degree // (T.n - 1) + 1):
        for t in range(s * T.n, max_total_degree + s + 1):
            d = bc.tor_dim(s, t)
            words[(s, t)] = len(bc.basis(s, t))
            if d:
                dims[(s, t)] = d
    return E2Page(dims, collapse_case(T), max_total_degree, words)


def tor_total_series(T: ThomModule, truncation: int) -> PoincareSeries:
    return PoincareSeries(tuple(e2_page(T, truncation).total_dims()))


@dataclass(frozen=True)
class EdgeColumn:
    dims: dict[int, int]
    injective: bool


def edge_column(T: ThomModule, max_degree: int) -> EdgeColumn:
    """Column ``s = 1`` of the E2-page and whether no length-1 word is a boundary."""
    bc = bar_complex(T)
    dims = {}
    injective = True
    for t in range(T.n, max_degree + 1):
        d = bc.tor_dim(1, t)
        if d:
            dims[t] = d
        incoming = bc.matrix(2, t)
        if not incoming.is_zero():
            injective = False
    return EdgeColumn(dims, injective)


def _wu_nonzero(T: ThomModule) -> bool:
    return not wu_class(T).is_zero()


def classify(T: ThomModule, truncation: int) -> Classification:
    p = T.p
    nil_free = T.base.is_nilpotent_free()
    parity = "odd" if T.n % 2 else "even"

    def unknown(reason, wu=None):
        return Classification(Verdict.UNKNOWN,
                              Evidence(p, T.is_euler_zero(), wu, nil_free, parity, reason))

    if not T.is_euler_zero():
        return unknown("Euler class nonzero: u^2 != 0, collapse not established")
    target = loop_series(T, truncation)
    if p == 0:
        letters_odd = all(not d or (k % 2 == 1)
                          for k, d in enumerate(T.reduced_dims(truncation)))
        ev = Evidence(p, True, None, nil_free, parity,
                      "rational Borel decomposition" + (
                          "; reduced cohomology concentrated in odd degrees"
                          if letters_odd else ""))
        if letters_odd:
            return Classification(Verdict.POLYNOMIAL, ev,
                                  invert_generators(target, Shape.POLYNOMIAL, 0))
        return Classification(Verdict.RATIONAL_MIXED, ev,
                              invert_generators(target, Shape.RATIONAL_MIXED, 0))
    if p == 2:
        wu = _wu_nonzero(T)
        if wu and nil_free:
            verdict, shape = Verdict.POLYNOMIAL, Shape.POLYNOMIAL
            reason = "u^2 = 0, no nilpotents, Sq^(n-1) u != 0"
        elif not wu:
            verdict, shape = Verdict.EXTERIOR, Shape.EXTERIOR
            reason = "u^2 = 0, Sq^(n-1) u = 0"
        else:
            return unknown("Sq^(n-1) u != 0 but the base has nilpotents", wu)
        return Classification(verdict, Evidence(p, True, wu, nil_free, parity, reason),
                              invert_generators(target, shape, p))
    if T.n % 2 == 0:
        return unknown("odd prime with even fiber dimension")
    wu = _wu_nonzero(T)
    if wu and nil_free:
        verdict, shape = Verdict.POLYNOMIAL, Shape.POLYNOMIAL
        reason = "no nilpotents, P^m u != 0"
    elif not wu:
        verdict, shape = Verdict.P_TRUNCATED, Shape.TRUNCATED
        reason = "P^m u = 0"
    else:
        return unknown("P^m u != 0 but the base has nilpotents", wu)
    return Classification(verdict, Evidence(p, True, wu, nil_free, parity, reason),
                          invert_generators(target, shape, p))


def splitting_check(T: ThomModule, truncation: int) -> bool:
    """Compare the tensor-power count, the loop series and the Tor totals."""
    _require_collapse(T)
    shifted = suspended_series(T, truncation)
    acc = PoincareSeries.zero(truncation)
    power = PoincareSeries.one(truncation)
    for _ in range(1, truncation // (T.n - 1) + 1):
        power = series_mul(power, shifted)
        acc = acc + power
    loop = loop_series(T, truncation)
    tensor_ok = acc == loop - PoincareSeries.one(truncation)
    tor_ok = tor_total_series(T, truncation) == loop
    return tensor_ok and tor_ok


def power_operation(T: ThomModule, w: Word) -> Op:
    """Operation that computes the p-th power of a class of the word's total degree."""
    _require_collapse(T)
    s, t = len(w), sum(T.base.monomial_degree(m) + T.n for m in w)
    total = t - s
    if T.p == 2:
        return Sq(total)
    if total % 2:
        raise ValueError("P-power mechanism needs an even total degree")
    return P(total // 2)


def power_mechanism(T: ThomModule, w: Word):
    """Return ``(computed, expected)`` for the p-th power of ``[x_1 u|...|x_l u]``.

    The expected word has each letter replaced by ``x_i^p * W`` where
    ``W`` is the Wu class; when ``W = 0`` it is zero.
    """
    computed = steenrod_bar(T, power_operation(T, w), w)
    W = wu_class(T)
    terms = {(): T.field.one}
    for m in w:
        c = (T.base.monomial(m) ** T.p) * W
        new = {}
        for prefix, a in terms.items():
            for mono, b in c.terms.items():
                key = prefix + (mono,)
                new[key] = T.field.add(new.get(key, T.field.zero), T.field.mul(a, b))
        terms = new
    expected = BarElement(T, terms)
    return computed, expected


@dataclass(frozen=True)
class LocalGlobal:
    polynomial: bool
    ring: str
    primes: tuple[int, ...]
    counts: GeneratorCounts | None
    disagreement: str | None


def _ring_name(excluded: set[int]) -> str:
    excluded = sorted(excluded)
    if not excluded:
        return "Z"
    return "Z[" + ", ".join(f"1/{q}" for q in excluded) + "]"


def local_global(results: Sequence[tuple[int, Classification]],
                 excluded: Iterable[int] | str = ()) -> LocalGlobal:
    """Polynomiality over ``Z[S^-1]`` from polynomiality at every sampled prime.

    ``excluded`` is the set ``S`` of inverted primes, or ``"others"`` to
    invert every prime outside the sample (a localization at the sample).
    """
    primes = tuple(p for p, _ in results)
    if not results:
        raise ValueError("no primes sampled")
    if excluded == "others":
        ring = "Z_(" + ",".join(str(p) for p in sorted(set(primes) - {0})) + ")"
    else:
        excluded = set(excluded)
        bad = [p for p in primes if p in excluded]
        if bad:
            raise ValueError(f"prime {bad[0]} is inverted but listed among the results")
        ring = _ring_name(excluded)
    common = None
    for p, c in results:
        if c.generator_counts is not None:
            odd = [d for d in c.generator_counts.counts if d % 2]
            if odd:
                raise ValueError(f"p = {p}: generators in odd degree {odd[0]}; "
                                 "the local-global principle needs even degrees")
        if c.verdict is not Verdict.POLYNOMIAL:
            return LocalGlobal(False, ring, primes, None,
                               f"p = {p}: verdict {c.verdict.value}")
        counts = dict(c.generator_counts.counts)
        if common is None:
            common = (p, c.generator_counts)
        elif dict(common[1].counts) != counts:
            return LocalGlobal(False, ring, primes, None,
                               f"generator counts differ between p = {common[0]} and p = {p}")
    return LocalGlobal(True, ring, primes, common[1], None)
