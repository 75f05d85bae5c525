"""Normalized bar complex of the cohomology of a Thom space.

Letters are base monomials ``m`` standing for ``m*u`` in reduced cohomology;
a word is a tuple of letters.  Words of length ``s`` and internal degree
``t`` sit in bidegree ``(-s, t)`` and have total degree ``t - s``.

The differential contracts adjacent letters with the Thom-module product,
with sign ``(-1)^(sum_{j<=i} (|a_j| - 1))`` when contracting positions ``i``
and ``i+1``.  The shuffle product uses the Koszul sign of the shifted degrees
``|a| - 1`` of the letters moved past each other.
"""

from __future__ import annotations

from itertools import combinations
from typing import Iterable, Mapping

from .basealg import Monomial, Op
from .grfield import Scalar, SparseMatrix, homology_dim
from .thom import ThomClass, ThomModule, steenrod_thom, thom_product

Word = tuple[Monomial, ...]


class BarElement:
    """Linear combination of bar words over the coefficient field of ``module``."""

    __slots__ = ("module", "terms")

    def __init__(self, module: ThomModule, terms: Mapping[Word, Scalar] | None = None):
        f = module.field
        self.module = module
        self.terms: dict[Word, Scalar] = {}
        for w, c in (terms or {}).items():
            c = f(c)
            if c:
                self.terms[tuple(w)] = c

    @classmethod
    def word(cls, module: ThomModule, w: Iterable[Monomial], coeff=1) -> BarElement:
        return cls(module, {tuple(tuple(m) for m in w): coeff})

    def __repr__(self):
        return f"BarElement({self})"

    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        for w, c in sorted(self.terms.items(), key=lambda kv: word_key(self.module, kv[0])):
            text = format_word(self.module, w)
            parts.append(text if c == 1 else f"{c}{text}")
        return " + ".join(parts)

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def __eq__(self, other):
        if not isinstance(other, BarElement):
            return NotImplemented
        return self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def __add__(self, other: BarElement) -> BarElement:
        f = self.module.field
        out = dict(self.terms)
        for w, c in other.terms.items():
            out[w] = f.add(out.get(w, f.zero), c)
        return BarElement(self.module, out)

    def __sub__(self, other: BarElement) -> BarElement:
        return self + other.scale(-1)

    def scale(self, c) -> BarElement:
        f = self.module.field
        c = f(c)
        return BarElement(self.module, {w: f.mul(c, v) for w, v in self.terms.items()})

    def bidegrees(self) -> set[tuple[int, int]]:
        return {bidegree(self.module, w) for w in self.terms}


def letter_degree(T: ThomModule, m: Monomial) -> int:
    return T.base.monomial_degree(m) + T.n


def bidegree(T: ThomModule, w: Word) -> tuple[int, int]:
    return -len(w), sum(letter_degree(T, m) for m in w)


def total_degree(T: ThomModule, w: Word) -> int:
    s, t = bidegree(T, w)
    return t + s


def letter_key(T: ThomModule, m: Monomial):
    # degree first, then position in the (descending lex) monomial basis
    return letter_degree(T, m), tuple(-e for e in m)


def word_key(T: ThomModule, w: Word):
    return tuple(letter_key(T, m) for m in w)


def format_word(T: ThomModule, w: Word) -> str:
    return "[" + "|".join(str(ThomClass(T, T.base.monomial(m))) for m in w) + "]"


def _expand(m: ThomClass) -> dict[Monomial, Scalar]:
    return dict(m.x.terms)


class BarComplex:
    """Bar words, differentials and Tor for one Thom module.

    Internal degrees are limited by the base truncation: a word of internal
    degree ``t`` needs base monomials up to degree ``t - n``.
    """

    def __init__(self, module: ThomModule):
        self.module = module
        self.max_degree = module.base.truncation + module.n
        self._basis: dict[tuple[int, int], tuple[Word, ...]] = {}
        self._index: dict[tuple[int, int], dict[Word, int]] = {}
        self._matrix: dict[tuple[int, int], SparseMatrix] = {}
        self._tor: dict[tuple[int, int], int] = {}
        self._products: dict[tuple[Monomial, Monomial], dict[Monomial, Scalar]] = {}
        self._shift: dict[Monomial, int] = {}

    def _check(self, t: int) -> None:
        if t > self.max_degree:
            raise ValueError(f"internal degree {t} beyond truncation {self.max_degree}")

    def basis(self, s: int, t: int) -> tuple[Word, ...]:
        if s < 0:
            raise ValueError("negative bar length")
        self._check(t)
        key = (s, t)
        hit = self._basis.get(key)
        if hit is not None:
            return hit
        T = self.module
        if s == 0:
            words: list[Word] = [()] if t == 0 else []
        else:
            words = []
            # first letter has degree d >= n, the remaining s-1 letters need >= (s-1)n
            for d in range(T.n, t - (s - 1) * T.n + 1):
                letters = T.basis(d)
                if not letters:
                    continue
                tails = self.basis(s - 1, t - d)
                for m in letters:
                    for tail in tails:
                        words.append((m,) + tail)
        out = tuple(words)
        self._basis[key] = out
        self._index[key] = {w: i for i, w in enumerate(out)}
        return out

    def index(self, s: int, t: int) -> dict[Word, int]:
        self.basis(s, t)
        return self._index[(s, t)]

    def _product(self, m1: Monomial, m2: Monomial) -> dict[Monomial, Scalar]:
        key = (m1, m2)
        hit = self._products.get(key)
        if hit is None:
            T = self.module
            hit = _expand(thom_product(ThomClass(T, T.base.monomial(m1)),
                                       ThomClass(T, T.base.monomial(m2))))
            self._products[key] = hit
        return hit

    def _shifted(self, m: Monomial) -> int:
        d = self._shift.get(m)
        if d is None:
            d = self._shift[m] = letter_degree(self.module, m) - 1
        return d

    def _differential_terms(self, w: Word) -> dict[Word, Scalar]:
        f = self.module.field
        out: dict[Word, Scalar] = {}
        shifted = 0
        for i in range(len(w) - 1):
            shifted += self._shifted(w[i])
            prod = self._product(w[i], w[i + 1])
            if not prod:
                continue
            sign = f.sign(shifted)
            for m, c in prod.items():
                nw = w[:i] + (m,) + w[i + 2:]
                out[nw] = f.add(out.get(nw, f.zero), f.mul(sign, c))
        return {nw: c for nw, c in out.items() if c}

    def differential(self, w: Word) -> BarElement:
        return BarElement(self.module, self._differential_terms(w))

    def matrix(self, s: int, t: int) -> SparseMatrix:
        """Sparse matrix of ``d : (-s, t) -> (-s+1, t)`` on the word bases."""
        key = (s, t)
        hit = self._matrix.get(key)
        if hit is not None:
            return hit
        f = self.module.field
        src = self.basis(s, t)
        if s == 0:
            m = SparseMatrix(f, 0, len(src), tuple({} for _ in src))
        else:
            tgt = self.index(s - 1, t)
            cols = []
            for w in src:
                col = {}
                if not self.module.is_euler_zero():
                    col = {tgt[nw]: c for nw, c in self._differential_terms(w).items()}
                cols.append(col)
            m = SparseMatrix(f, len(tgt), len(src), tuple(cols))
        self._matrix[key] = m
        return m

    def tor_dim(self, s: int, t: int) -> int:
        key = (s, t)
        hit = self._tor.get(key)
        if hit is None:
            if t < s * self.module.n:
                hit = 1 if (s, t) == (0, 0) else 0
            else:
                hit = homology_dim(self.matrix(s + 1, t), self.matrix(s, t),
                                   where=(-s, t))
            self._tor[key] = hit
        return hit


def bar_complex(T: ThomModule) -> BarComplex:
    bc = getattr(T, "_bar_complex", None)
    if bc is None:
        bc = BarComplex(T)
        T._bar_complex = bc
    return bc


def bar_basis(T: ThomModule, s: int, t: int) -> tuple[Word, ...]:
    return bar_complex(T).basis(s, t)


def bar_differential(T: ThomModule, w: Word) -> BarElement:
    return bar_complex(T).differential(tuple(w))


def apply_differential(x: BarElement) -> BarElement:
    out = BarElement(x.module)
    for w, c in x.terms.items():
        out = out + bar_differential(x.module, w).scale(c)
    return out


def tor_dims(T: ThomModule, s: int, t: int) -> int:
    return bar_complex(T).tor_dim(s, t)


def coproduct(w: Word) -> list[tuple[Word, Word]]:
    """Deconcatenation: all splittings ``w = left + right``."""
    return [(w[:i], w[i:]) for i in range(len(w) + 1)]


def shuffle(T: ThomModule, w1: Word, w2: Word) -> BarElement:
    """Signed sum over all interleavings of ``w1`` and ``w2``."""
    f = T.field
    r, s = len(w1), len(w2)
    sh1 = [letter_degree(T, m) - 1 for m in w1]
    prefix = [0]
    for m in w2:
        prefix.append(prefix[-1] + letter_degree(T, m) - 1)
    out: dict[Word, Scalar] = {}
    for pos in combinations(range(r + s), r):
        word: list[Monomial] = []
        exponent = 0
        i = j = 0
        pos_set = set(pos)
        for k in range(r + s):
            if k in pos_set:
                # letters of w2 already placed moved past this letter of w1
                exponent += sh1[i] * prefix[j]
                word.append(w1[i])
                i += 1
            else:
                word.append(w2[j])
                j += 1
        wt = tuple(word)
        out[wt] = f.add(out.get(wt, f.zero), f.sign(exponent) if T.p != 2 else f.one)
    return BarElement(T, out)


def shuffle_elements(x: BarElement, y: BarElement) -> BarElement:
    T = x.module
    f = T.field
    out = BarElement(T)
    for w1, a in x.terms.items():
        for w2, b in y.terms.items():
            out = out + shuffle(T, w1, w2).scale(f.mul(a, b))
    return out


Tensor = dict[tuple[Word, Word], Scalar]


def coproduct_element(x: BarElement) -> Tensor:
    f = x.module.field
    out: Tensor = {}
    for w, c in x.terms.items():
        for pair in coproduct(w):
            out[pair] = f.add(out.get(pair, f.zero), c)
    return {k: v for k, v in out.items() if v}


def shuffle_tensors(T: ThomModule, a: Tensor, b: Tensor) -> Tensor:
    """``(x1 (x) y1)(x2 (x) y2) = (-1)^(|y1||x2|) (x1 x2) (x) (y1 y2)``."""
    f = T.field
    out: Tensor = {}
    for (x1, y1), c1 in a.items():
        for (x2, y2), c2 in b.items():
            sign = f.sign(total_degree(T, y1) * total_degree(T, x2))
            coeff = f.mul(sign, f.mul(c1, c2))
            left = shuffle(T, x1, x2)
            right = shuffle(T, y1, y2)
            for lw, lc in left.terms.items():
                for rw, rc in right.terms.items():
                    key = (lw, rw)
                    out[key] = f.add(out.get(key, f.zero), f.mul(coeff, f.mul(lc, rc)))
    return {k: v for k, v in out.items() if v}


def steenrod_bar(T: ThomModule, op: Op, w: Word) -> BarElement:
    """Letterwise Cartan distribution of ``Sq^k`` or ``P^k`` over a bar word."""
    if not T.is_euler_zero():
        raise ValueError("Steenrod action on bar words requires u^2 = 0 (zero Euler class)")
    op.check_prime(T.p)
    if op.kind == "beta":
        raise ValueError("only Sq^k and P^k act letterwise on bar words")
    f = T.field
    w = tuple(w)
    cache: dict[tuple[int, int], dict[Monomial, Scalar]] = {}

    def letter_op(i: int, k: int) -> dict[Monomial, Scalar]:
        key = (i, k)
        if key not in cache:
            cache[key] = _expand(steenrod_thom(Op(op.kind, k),
                                               ThomClass(T, T.base.monomial(w[i]))))
        return cache[key]

    out: dict[Word, Scalar] = {}

    def distribute(i: int, remaining: int, prefix: Word, coeff: Scalar) -> None:
        if i == len(w):
            if remaining == 0:
                out[prefix] = f.add(out.get(prefix, f.zero), coeff)
            return
        if i == len(w) - 1:
            choices = [remaining]
        else:
            choices = range(remaining + 1)
        for k in choices:
            for m, c in letter_op(i, k).items():
                distribute(i + 1, remaining - k, prefix + (m,), f.mul(coeff, c))

    distribute(0, op.index, (), f.one)
    return BarElement(T, out)


def steenrod_bar_element(op: Op, x: BarElement) -> BarElement:
    out = BarElement(x.module)
    for w, c in x.terms.items():
        out = out + steenrod_bar(x.module, op, w).scale(c)
    return out
