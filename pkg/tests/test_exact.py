from fractions import Fraction as F

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from graphdist.exact import (RationalMatrix, as_rational, dot, independent_rows, lp_feasible,
                             nullspace_basis, rank, rref, solve_affine)

small = st.integers(min_value=-4, max_value=4)


def matrices(max_rows=4, max_cols=5):
    return st.integers(1, max_rows).flatmap(
        lambda r: st.integers(1, max_cols).flatmap(
            lambda c: st.lists(st.lists(small, min_size=c, max_size=c), min_size=r, max_size=r)))


def test_floats_are_refused():
    with pytest.raises(TypeError):
        as_rational(0.5)
    assert as_rational("3/4") == F(3, 4)


def test_ragged_rows_rejected():
    with pytest.raises(ValueError):
        RationalMatrix([[1, 2], [3]])


def test_matrix_product_and_transpose():
    A = RationalMatrix([[1, 2], [3, 4]])
    assert (A @ RationalMatrix.identity(2)) == A
    assert A.transpose().rows == ((1, 3), (2, 4))
    assert A.apply([1, -1]) == (-1, -1)


def test_rref_of_known_matrix():
    R, r, piv = rref(RationalMatrix([[2, 4, 2], [1, 2, 3], [3, 6, 5]]))
    assert r == 2
    assert piv == [0, 2]
    assert R.row(0) == (1, 2, 0)
    assert R.row(1) == (0, 0, 1)


@given(matrices())
def test_rank_nullity(rows):
    A = RationalMatrix(rows)
    kernel = nullspace_basis(A)
    assert rank(A) + len(kernel) == A.ncols
    for v in kernel:
        assert all(x == 0 for x in A.apply(v))


@given(matrices(), st.lists(small, min_size=5, max_size=5))
def test_solve_affine_on_consistent_systems(rows, x):
    A = RationalMatrix(rows)
    x = x[:A.ncols]
    b = A.apply(x)
    x0, kernel = solve_affine(A, b)
    assert A.apply(x0) == b
    assert len(kernel) == A.ncols - rank(A)


def test_inconsistent_system():
    A = RationalMatrix([[1, 1], [2, 2]])
    assert solve_affine(A, [1, 3]) is None
    assert independent_rows(A, [1, 3]) is None
    A2, b2 = independent_rows(A, [1, 2])
    assert A2.nrows == 1 and b2 == (1,)


def test_lp_feasible_witness():
    A = RationalMatrix([[1, 1, 1], [1, -1, 0]])
    res = lp_feasible(A, [1, F(1, 3)])
    assert res.feasible
    assert A.apply(res.witness) == (1, F(1, 3))
    assert all(v >= 0 for v in res.witness)


def test_lp_farkas_certificate():
    # x1 + x2 = 1 and x1 + x2 = 2 cannot both hold
    A = RationalMatrix([[1, 1], [1, 1]])
    b = [1, 2]
    res = lp_feasible(A, b)
    assert not res.feasible
    y = res.certificate
    assert all(dot(y, A.col(j)) >= 0 for j in range(A.ncols))
    assert dot(y, b) < 0


@settings(max_examples=60)
@given(matrices(3, 4), st.lists(small, min_size=3, max_size=3))
def test_lp_verdicts_are_certified(rows, b):
    A = RationalMatrix(rows)
    b = b[:A.nrows]
    res = lp_feasible(A, b)
    if res.feasible:
        assert A.apply(res.witness) == tuple(b)
        assert all(v >= 0 for v in res.witness)
    else:
        y = res.certificate
        assert all(dot(y, A.col(j)) >= 0 for j in range(A.ncols))
        assert dot(y, b) < 0
