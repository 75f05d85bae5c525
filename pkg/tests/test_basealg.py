from __future__ import annotations

from math import comb

import pytest
from hypothesis import given, settings, strategies as st

from loopcoh.basealg import (BETA, AlgebraPresentation, Class, Generator, Op, P, Sq,
                             is_nilpotent_free, monomial_basis, parse_op, steenrod)


def cp_inf(p: int) -> AlgebraPresentation:
    return AlgebraPresentation(p, [Generator("x", 2)])


def test_parse_op():
    assert parse_op("Sq2") == Sq(2)
    assert parse_op("P1") == P(1)
    assert parse_op("beta") == BETA
    with pytest.raises(ValueError):
        parse_op("Q3")


def test_basis_order():
    A = AlgebraPresentation(2, [Generator("x", 2), Generator("y", 4)])
    assert monomial_basis(A, 8) == ((4, 0), (2, 1), (0, 2))


def test_odd_generators_exterior_at_odd_p():
    A = AlgebraPresentation(3, [Generator("a", 3), Generator("b", 3)])
    a, b = A.gen("a"), A.gen("b")
    assert (a * a).is_zero()
    assert a * b == -(b * a)
    assert not is_nilpotent_free(A)


@pytest.mark.parametrize("k", range(0, 9))
def test_squares_on_cp_inf(k):
    # Sq^{2i} x^k = C(k, i) x^{k+i}, Sq^{odd} = 0
    A = cp_inf(2)
    x = A.gen("x")
    for i in range(0, k + 1):
        assert steenrod(A, Sq(2 * i), x ** k) == (x ** (k + i)).scale(comb(k, i))
        assert steenrod(A, Sq(2 * i + 1), x ** k).is_zero()


@pytest.mark.parametrize("p", [3, 5])
@pytest.mark.parametrize("k", range(0, 7))
def test_reduced_powers_on_cp_inf(p, k):
    A = cp_inf(p)
    x = A.gen("x")
    for i in range(0, k + 1):
        assert steenrod(A, P(i), x ** k) == (x ** (k + (p - 1) * i)).scale(comb(k, i))


def test_sq_on_rp_inf():
    A = AlgebraPresentation(2, [Generator("w", 1)])
    w = A.gen("w")
    for k in range(8):
        for i in range(k + 2):
            assert steenrod(A, Sq(i), w ** k) == (w ** (k + i)).scale(comb(k, i))


def test_table_validation():
    with pytest.raises(ValueError):
        AlgebraPresentation(2, [Generator("x", 2)], {"x": {Sq(2): {(2,): 1}}})
    with pytest.raises(ValueError):
        AlgebraPresentation(3, [Generator("x", 2)], {"x": {Sq(1): {}}})


# -- property tests with random generator tables ------------------------------

GENS = [Generator("x", 2), Generator("y", 3), Generator("z", 4)]


def random_class(A: AlgebraPresentation, degree: int, coeffs: list[int]) -> Class:
    basis = A.monomial_basis(degree)
    return Class(A, degree, {m: c for m, c in zip(basis, coeffs)})


@st.composite
def algebras(draw, p):
    A0 = AlgebraPresentation(p, GENS, truncation=20)
    ops = ([Sq(1)], [Sq(1), Sq(2)], [Sq(1), Sq(2), Sq(3)]) if p == 2 else \
        ([BETA], [BETA, P(1)], [BETA, P(1)])
    table = {}
    for g, gops in zip(GENS, ops):
        entries = {}
        for op in gops:
            if op.kind == "P" and 2 * op.index >= g.degree:
                continue
            d = g.degree + op.degree(p)
            basis = A0.monomial_basis(d)
            cs = draw(st.lists(st.integers(0, p - 1), min_size=len(basis),
                               max_size=len(basis)))
            entries[op] = dict(zip(basis, cs))
        table[g.name] = entries
    return AlgebraPresentation(p, GENS, table, truncation=20)


@st.composite
def class_pair(draw, p):
    A = draw(algebras(p))
    d1, d2 = draw(st.integers(0, 7)), draw(st.integers(0, 7))
    c = []
    for d in (d1, d2):
        n = len(A.monomial_basis(d))
        c.append(random_class(A, d, draw(st.lists(st.integers(0, p - 1), min_size=n,
                                                   max_size=n))))
    return A, c[0], c[1]


@settings(max_examples=40, deadline=None)
@given(class_pair(2), st.integers(0, 10))
def test_cartan_p2(data, k):
    A, a, b = data
    lhs = steenrod(A, Sq(k), a * b)
    rhs = A.zero(a.degree + b.degree + k)
    for i in range(k + 1):
        rhs = rhs + steenrod(A, Sq(i), a) * steenrod(A, Sq(k - i), b)
    assert lhs == rhs


@settings(max_examples=40, deadline=None)
@given(class_pair(3), st.integers(0, 3))
def test_cartan_p3(data, k):
    A, a, b = data
    lhs = steenrod(A, P(k), a * b)
    rhs = A.zero(a.degree + b.degree + 4 * k)
    for i in range(k + 1):
        rhs = rhs + steenrod(A, P(i), a) * steenrod(A, P(k - i), b)
    assert lhs == rhs
    beta_rhs = steenrod(A, BETA, a) * b + (a * steenrod(A, BETA, b)).scale((-1) ** a.degree)
    assert steenrod(A, BETA, a * b) == beta_rhs


@settings(max_examples=40, deadline=None)
@given(class_pair(2))
def test_instability_p2(data):
    A, a, _ = data
    assert steenrod(A, Sq(a.degree), a) == a * a
    assert steenrod(A, Sq(a.degree + 1), a).is_zero()


@settings(max_examples=40, deadline=None)
@given(class_pair(3))
def test_instability_p3(data):
    A, a, _ = data
    if a.degree % 2 == 0:
        assert steenrod(A, P(a.degree // 2), a) == a ** 3
    assert steenrod(A, P(a.degree // 2 + 1), a).is_zero()
