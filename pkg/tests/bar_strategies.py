"""Random Thom modules and bar words shared by the bar tests and the acceptance suite."""

from __future__ import annotations

from hypothesis import strategies as st

from loopcoh.bar import BarElement, bar_basis
from loopcoh.basealg import AlgebraPresentation, Class, Generator, P, Sq
from loopcoh.thom import ThomModule

N = 16


def _rand_class(draw, A, d, p):
    basis = A.monomial_basis(d)
    cs = draw(st.lists(st.integers(0, max(p - 1, 1)), min_size=len(basis),
                       max_size=len(basis)))
    return dict(zip(basis, cs))


@st.composite
def thom_modules(draw, p: int, euler: bool | None = None):
    """A Thom module over a base with one even and possibly one odd generator."""
    gens = [Generator("x", draw(st.sampled_from([2, 4])))]
    if draw(st.booleans()):
        gens.append(Generator("a", draw(st.sampled_from([1, 3]))))
    A = AlgebraPresentation(p, gens, truncation=N)
    want_euler = draw(st.booleans()) if euler is None else euler
    if want_euler:
        n = draw(st.sampled_from([2, 4])) if p != 2 else draw(st.integers(2, 4))
    else:
        n = draw(st.integers(2, 5))
    e = _rand_class(draw, A, n, p) if want_euler else {}
    orientation = {}
    if p == 2:
        for i in range(1, n):
            orientation[Sq(i)] = _rand_class(draw, A, i, p)
    else:
        for i in range(1, (n + 1) // 2):
            if 2 * i < n:
                orientation[P(i)] = _rand_class(draw, A, 2 * i * (p - 1), p)
    return ThomModule(A, n, euler=Class(A, n, e) if e else A.zero(n),
                      orientation=orientation)


@st.composite
def words(draw, T: ThomModule, max_len: int = 2, max_t: int = N):
    """A random basis word with internal degree at most ``max_t``."""
    s = draw(st.integers(0, max_len))
    choices = [t for t in range(s * T.n, max_t + 1) if bar_basis(T, s, t)]
    if not choices:
        return ()
    t = draw(st.sampled_from(choices))
    return draw(st.sampled_from(bar_basis(T, s, t)))


@st.composite
def module_and_words(draw, p: int, k: int, euler: bool | None = False, max_len: int = 2):
    T = draw(thom_modules(p, euler))
    budget = N
    out = []
    for _ in range(k):
        w = draw(words(T, max_len, max(budget, 0)))
        budget -= sum(T.base.monomial_degree(m) + T.n for m in w)
        if budget < 0:
            w = ()
        out.append(w)
    return (T, *out)


def element(T, w) -> BarElement:
    return BarElement.word(T, w)
