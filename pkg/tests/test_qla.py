from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from conftest import oracle_inertia, sympy_rank
from stratatop.qla import (NO_SOLUTION, RationalMatrix, Subspace, block_diag, diagonalize_symmetric, extend_basis,
                           hstack, image_basis, inverse, is_diagonal, kernel_basis, nullity, rank, rref, signature,
                           solve, vstack)

small = st.integers(-4, 4)


@st.composite
def matrices(draw, max_rows=6, max_cols=6):
    r = draw(st.integers(0, max_rows))
    c = draw(st.integers(0, max_cols))
    data = [[draw(small) for _ in range(c)] for _ in range(r)]
    return RationalMatrix(data, rows=r, cols=c)


def matrices_of(r, c):
    return st.lists(st.lists(small, min_size=c, max_size=c), min_size=r, max_size=r).map(
        lambda d: RationalMatrix(d, rows=r, cols=c))


@st.composite
def symmetric(draw, max_n=6, n=None):
    n = draw(st.integers(0, max_n)) if n is None else n
    a = [[0] * n for _ in range(n)]
    for i in range(n):
        for j in range(i, n):
            a[i][j] = a[j][i] = draw(small)
    return RationalMatrix(a, rows=n, cols=n)


@st.composite
def invertible(draw, n):
    # product of elementary matrices
    m = RationalMatrix.identity(n)
    for _ in range(draw(st.integers(0, 3 * n))):
        i, j = draw(st.integers(0, n - 1)), draw(st.integers(0, n - 1))
        if i == j:
            continue
        c = draw(st.integers(-2, 2))
        e = RationalMatrix.from_sparse(n, n, {**{(k, k): 1 for k in range(n)}, (i, j): c})
        m = m @ e
    return m


def test_construction_and_access():
    m = RationalMatrix([[1, "1/2"], [0, -3]])
    assert m.shape == (2, 2)
    assert m[0, 1] == Fraction(1, 2)
    assert m.T == RationalMatrix([[1, 0], ["1/2", -3]])
    assert RationalMatrix.from_columns([[1, 0], ["1/2", -3]]) == m
    assert RationalMatrix.from_json(m.to_json()) == m
    with pytest.raises(ValueError):
        RationalMatrix([[1, 2], [3]])


def test_stacking():
    a = RationalMatrix([[1, 2]])
    b = RationalMatrix([[3, 4]])
    assert vstack([a, b]) == RationalMatrix([[1, 2], [3, 4]])
    assert hstack([a, b]) == RationalMatrix([[1, 2, 3, 4]])
    assert block_diag([a, b]) == RationalMatrix([[1, 2, 0, 0], [0, 0, 3, 4]])


def test_rank_known():
    assert rank(RationalMatrix([[1, 2], [2, 4]])) == 1
    assert rank(RationalMatrix.identity(5)) == 5
    assert rank(RationalMatrix.zeros(3, 0)) == 0


def test_solve_inconsistent():
    m = RationalMatrix([[1, 1], [2, 2]])
    assert solve(m, [1, 3]) is NO_SOLUTION
    x = solve(m, [1, 2])
    assert m @ list(x) == (1, 2)


def test_inverse_singular():
    with pytest.raises(ValueError):
        inverse(RationalMatrix([[1, 2], [2, 4]]))


def test_signature_kernel_values():
    assert signature(RationalMatrix([[0, 1], [1, 0]])).sigma == 0
    assert signature(RationalMatrix([[1]])).sigma == 1
    assert signature(RationalMatrix([[-1, 0], [0, -1]])).sigma == -2


def test_subspace_ops():
    a = Subspace(3, [[1, 0, 0], [0, 1, 0]])
    b = Subspace(3, [[0, 1, 0], [0, 0, 1]])
    assert a.intersection(b) == Subspace(3, [[0, 1, 0]])
    assert a.sum(b).dim == 3
    assert a.contains([2, -1, 0]) and not a.contains([0, 0, 1])
    assert extend_basis(a.vectors(), [[1, 1, 0], [0, 0, 5]]) == [(0, 0, 5)]


@given(matrices())
@settings(max_examples=80, deadline=None)
def test_rank_matches_oracle(m):
    assert rank(m) == sympy_rank(m)


@given(matrices())
@settings(max_examples=80, deadline=None)
def test_rank_nullity(m):
    k = kernel_basis(m)
    assert k.dim == nullity(m) == m.cols - rank(m)
    for v in k.vectors():
        assert not any(m @ list(v))
    assert image_basis(m).dim == rank(m)


@given(matrices())
@settings(max_examples=60, deadline=None)
def test_rref_transform(m):
    red, piv, tr = rref(m)
    assert tr @ m == red
    assert len(piv) == rank(m)
    for i, p in enumerate(piv):
        assert red[i, p] == 1
        assert all(red[j, p] == 0 for j in range(red.rows) if j != i)


@given(matrices(), st.data())
@settings(max_examples=60, deadline=None)
def test_solve_consistent(m, data):
    x0 = [data.draw(small) for _ in range(m.cols)]
    b = m @ x0
    x = solve(m, b)
    assert x is not NO_SOLUTION
    assert m @ list(x) == b


@given(st.integers(1, 5).flatmap(invertible))
@settings(max_examples=50, deadline=None)
def test_inverse_roundtrip(m):
    assert inverse(m) @ m == RationalMatrix.identity(m.rows)


@given(st.tuples(*[st.integers(0, 4)] * 4).flatmap(
    lambda d: st.tuples(matrices_of(d[0], d[1]), matrices_of(d[1], d[2]), matrices_of(d[2], d[3]))))
@settings(max_examples=50, deadline=None)
def test_matmul_associative(abc):
    a, b, c = abc
    assert (a @ b) @ c == a @ (b @ c)


@given(symmetric())
@settings(max_examples=60, deadline=None)
def test_diagonalization_exact(s):
    p, d = diagonalize_symmetric(s)
    assert p.T @ s @ p == d
    assert is_diagonal(d)
    if p.rows:
        assert rank(p) == p.rows


@given(symmetric())
@settings(max_examples=60, deadline=None)
def test_signature_matches_inertia_oracle(s):
    assert tuple(signature(s)) == oracle_inertia(s)


@given(st.integers(1, 5).flatmap(lambda n: st.tuples(symmetric(n=n), invertible(n))))
@settings(max_examples=40, deadline=None)
def test_signature_congruence_invariant(pair):
    s, p = pair
    assert signature(p.T @ s @ p) == signature(s)
