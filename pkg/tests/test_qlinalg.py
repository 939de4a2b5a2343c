from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from mcdeform.errors import DimensionError, ValidationError
from mcdeform.qlinalg import (RatMatrix, kernel_basis, rank, rref, solve, subquotient,
                              subquotient_dim)


def M(rows):
    return RatMatrix.from_columns([list(c) for c in zip(*rows)], rows=len(rows))


def test_kernel_of_identity_is_empty():
    assert kernel_basis(RatMatrix.identity(2)) == []


def test_kernel_of_zero_is_standard_basis():
    assert kernel_basis(RatMatrix(2, 2)) == [[1, 0], [0, 1]]


def test_kernel_rank_one():
    assert kernel_basis(M([[1, 2], [2, 4]])) == [[-2, 1]]


def test_solve_identity():
    assert solve(RatMatrix.identity(2), [3, 5]) == [3, 5]


def test_solve_free_variables_zeroed():
    assert solve(M([[1, 1]]), [2]) == [2, 0]


def test_solve_inconsistent_is_none():
    assert solve(M([[0]]), [1]) is None


def test_solve_dimension_mismatch_is_an_error():
    with pytest.raises(DimensionError):
        solve(RatMatrix.identity(2), [1, 2, 3])


def test_subquotient_examples():
    assert subquotient_dim(RatMatrix(2, 0), RatMatrix(0, 2)) == 2
    assert subquotient_dim(RatMatrix.identity(1), RatMatrix(0, 1)) == 0
    assert subquotient_dim(M([[0]]), M([[0]])) == 1


def test_subquotient_rejects_non_complex():
    with pytest.raises(ValidationError):
        subquotient(RatMatrix.identity(1), RatMatrix.identity(1))


def test_exact_fractions():
    m = M([[Fraction(1, 3), 1], [1, 3]])
    assert rank(m) == 1
    assert kernel_basis(m) == [[-3, 1]]


matrices = st.integers(1, 4).flatmap(lambda r: st.integers(1, 4).flatmap(
    lambda c: st.lists(st.lists(st.integers(-3, 3), min_size=c, max_size=c),
                       min_size=r, max_size=r)))


@settings(max_examples=60, deadline=None)
@given(matrices)
def test_rank_nullity(rows):
    m = M(rows)
    assert rank(m) + len(kernel_basis(m)) == m.shape[1]
    for v in kernel_basis(m):
        assert all(x == 0 for x in m @ v)


@settings(max_examples=60, deadline=None)
@given(matrices, st.data())
def test_solve_is_exact_or_certifies_inconsistency(rows, data):
    m = M(rows)
    b = data.draw(st.lists(st.integers(-3, 3), min_size=m.shape[0], max_size=m.shape[0]))
    x = solve(m, b)
    aug = RatMatrix.block([[m, RatMatrix.from_columns([b], rows=m.shape[0])]])
    if x is None:
        assert rank(aug) > rank(m)
    else:
        assert list(m @ x) == [Fraction(v) for v in b]


def test_determinism():
    m = M([[1, 2, 3], [2, 4, 6], [1, 0, 1]])
    assert kernel_basis(m) == kernel_basis(m.copy())
    assert rref(m) == rref(m.copy())
