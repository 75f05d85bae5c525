from __future__ import annotations

from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from loopcoh.grfield import (DifferentialError, Matrix, SparseMatrix, field, homology_dim,
                             rank, row_reduce)
from oracles import rank_gf2_bruteforce


def test_field_arithmetic():
    f = field(7)
    assert f.inv(3) == 5
    assert f(Fraction(1, 2)) == 4
    assert f.sign(3) == 6
    q = field(0)
    assert q.inv(Fraction(2, 3)) == Fraction(3, 2)
    with pytest.raises(ValueError):
        field(6)


def test_homology_small_chain():
    # F_2 -> F_2^2 -> F_2, d_in = (1,1)^T, d_out = (1,1): ker = <(1,1)> = im
    f = field(2)
    d_in = Matrix.from_rows(f, [[1], [1]])
    d_out = Matrix.from_rows(f, [[1, 1]])
    kernel = [(a, b) for a in range(2) for b in range(2) if (a + b) % 2 == 0]
    image = {((1 * c) % 2, (1 * c) % 2) for c in range(2)}
    assert len(kernel) == len(image) == 2
    assert homology_dim(d_in, d_out) == 0


def test_homology_detects_d_squared():
    f = field(3)
    d_in = Matrix.from_rows(f, [[1], [0]])
    d_out = Matrix.from_rows(f, [[1, 0]])
    with pytest.raises(DifferentialError) as exc:
        homology_dim(d_in, d_out, where=(-1, 4))
    assert exc.value.where == (-1, 4)


def test_kernel_basis_is_kernel():
    f = field(5)
    m = Matrix.from_rows(f, [[1, 2, 3, 4], [2, 4, 6, 8], [0, 1, 0, 1]])
    rr = row_reduce(m)
    assert rr.rank == 2
    assert len(rr.kernel_basis) == 2
    for v in rr.kernel_basis:
        assert all(c == 0 for c in m.apply(v))


def test_rational_rank():
    f = field(0)
    m = Matrix.from_rows(f, [[Fraction(1, 2), 1], [1, 2]])
    assert rank(m) == 1


mat_st = st.integers(1, 5).flatmap(
    lambda c: st.lists(st.lists(st.integers(0, 1), min_size=c, max_size=c),
                       min_size=1, max_size=5))


@settings(max_examples=80, deadline=None)
@given(mat_st)
def test_rank_gf2_against_span(rows):
    assert rank(Matrix.from_rows(field(2), rows)) == rank_gf2_bruteforce(rows)


@settings(max_examples=80, deadline=None)
@given(st.sampled_from([2, 3, 7, 0]), st.integers(1, 5).flatmap(
    lambda c: st.lists(st.lists(st.integers(-4, 4), min_size=c, max_size=c),
                       min_size=1, max_size=5)))
def test_rank_transpose(p, rows):
    m = Matrix.from_rows(field(p), rows)
    assert rank(m) == rank(m.transpose())


@settings(max_examples=80, deadline=None)
@given(st.sampled_from([2, 3, 5, 0]), st.integers(1, 6).flatmap(
    lambda c: st.lists(st.lists(st.integers(-2, 2), min_size=c, max_size=c),
                       min_size=1, max_size=6)))
def test_sparse_rank_matches_dense(p, rows):
    m = Matrix.from_rows(field(p), rows)
    sp = SparseMatrix.from_dense(m)
    assert sp.to_dense() == m
    assert rank(sp) == rank(m)
    assert (sp @ SparseMatrix.from_dense(m.transpose())).to_dense() == m @ m.transpose()


def test_homology_mixed_representations():
    f = field(2)
    d_in = Matrix.from_rows(f, [[1], [1]])
    d_out = SparseMatrix.from_dense(Matrix.from_rows(f, [[1, 1]]))
    assert homology_dim(d_in, d_out) == 0


@settings(max_examples=60, deadline=None)
@given(st.sampled_from([2, 3, 5]), st.integers(1, 4), st.integers(2, 5), st.integers(1, 4),
       st.randoms(use_true_random=False))
def test_homology_change_of_basis(p, a, b, c, rnd):
    # d_out d_in = 0 by construction: d_in lands in the kernel of d_out
    f = field(p)
    d_out = Matrix.from_rows(f, [[rnd.randrange(p) for _ in range(b)] for _ in range(c)])
    kernel = row_reduce(d_out).kernel_basis
    cols = [[0] * b for _ in range(a)]
    for j in range(a):
        for v in kernel:
            k = rnd.randrange(p)
            cols[j] = [(x + k * y) % p for x, y in zip(cols[j], v)]
    d_in = Matrix.from_rows(f, cols).transpose()
    base = homology_dim(d_in, d_out)
    # elementary change of basis g = I + k e_ij in the middle term
    i, j = rnd.sample(range(b), 2)
    k = rnd.randrange(1, p) if p > 2 else 1
    g = [[int(r == s) for s in range(b)] for r in range(b)]
    g_inv = [row[:] for row in g]
    g[i][j], g_inv[i][j] = k, (-k) % p
    g, g_inv = Matrix.from_rows(f, g), Matrix.from_rows(f, g_inv)
    assert homology_dim(g @ d_in, d_out @ g_inv) == base
