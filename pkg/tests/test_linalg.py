from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from quadsys.errors import TrivialVector
from quadsys.linalg import (
    Matrix,
    extend_to_basis,
    inverse,
    kernel_basis,
    mat_vec,
    rank,
    row_reduce,
)
from quadsys.padic import FieldContext

C3 = FieldContext(3)


def fr(M):
    return M.to_fractions()


def vecs(basis):
    return [[x.to_fraction() for x in v] for v in basis]


def test_row_reduce_identity():
    I = Matrix.identity(C3, 3)
    rr = row_reduce(I)
    assert rr.rank == 3
    assert fr(rr.transform) == fr(I)


@pytest.mark.parametrize("p", [3, 5, 7])
def test_row_reduce_prefers_unit_pivot(p):
    ctx = FieldContext(p)
    rr = row_reduce(Matrix(ctx, [[p, 1], [1, 1]]))
    assert rr.rank == 2
    # the unit in column 0 (row 1) beats p in row 0
    assert rr.pivots[0] == (0, 0)
    assert rr.transform.row(0)[0].is_zero() is False
    single = row_reduce(Matrix(ctx, [[p, 1]]))
    assert single.pivots == [(0, 1)]


def test_row_reduce_zero_matrix():
    assert row_reduce(Matrix.zeros(C3, 2, 3)).rank == 0


def test_kernel_examples():
    assert vecs(kernel_basis(Matrix(C3, [[1, 1, 0]]))) == [[1, -1, 0], [0, 0, 1]]
    assert kernel_basis(Matrix.identity(C3, 3)) == []
    assert vecs(kernel_basis(Matrix(C3, [[0, 0]]))) == [[1, 0], [0, 1]]


def test_extend_examples():
    I = Matrix.identity(C3, 3)
    assert fr(extend_to_basis([C3(0), C3(0), C3(1)])) == fr(I)
    assert fr(extend_to_basis([C3(1), C3(0)])) == [[0, 1], [1, 0]]
    assert fr(extend_to_basis([C3(3), C3(1)])) == [[1, 3], [0, 1]]
    with pytest.raises(TrivialVector):
        extend_to_basis([C3(0), C3(0)])


def test_inverse():
    M = Matrix(C3, [[3, 1], [1, 1]])
    assert fr(inverse(M) @ M) == fr(Matrix.identity(C3, 2))


small = st.integers(-20, 20)


@st.composite
def matrices(draw):
    p = draw(st.sampled_from([2, 3, 5]))
    r = draw(st.integers(1, 4))
    c = draw(st.integers(1, 5))
    rows = draw(st.lists(st.lists(small, min_size=c, max_size=c), min_size=r, max_size=r))
    # working precision above the fixed zero threshold, as the solver runs
    return Matrix(FieldContext(p, precision=40).with_precision(80), rows)


@settings(max_examples=60)
@given(matrices())
def test_kernel_vectors_are_killed(M):
    for u in kernel_basis(M):
        assert all(x.is_zero() for x in mat_vec(M, u))


@settings(max_examples=60)
@given(matrices())
def test_rank_nullity(M):
    assert rank(M) + len(kernel_basis(M)) == M.cols


@settings(max_examples=60)
@given(matrices())
def test_transform_reproduces_reduced(M):
    rr = row_reduce(M)
    assert (rr.transform @ M).agrees_with(rr.reduced)


@settings(max_examples=60)
@given(st.sampled_from([3, 5]), st.lists(small, min_size=1, max_size=6).filter(any))
def test_extend_is_invertible(p, ints):
    ctx = FieldContext(p, precision=40)
    v = [ctx(x) for x in ints]
    P = extend_to_basis(v)
    assert rank(P) == len(v)
    assert [x.to_fraction() for x in P.column(len(v) - 1)] == [Fraction(x) for x in ints]
