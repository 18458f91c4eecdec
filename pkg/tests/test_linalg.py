import numpy as np
import pytest
from hypothesis import given, strategies as st
from hypothesis.extra.numpy import arrays

from conftest import NEG, mp_matrix, mp_vector
from tropic.linalg import (
    DimensionError,
    Matrix,
    Vector,
    mat_mul,
    mat_vec_mul,
    pseudo_invert,
    regularity,
    scalar_mul,
    support,
    vec_add,
    vec_distance,
)
from tropic.semifield import MAX_PLUS, MAX_TIMES, MIN_PLUS, DomainError, Scalar


def test_vector_add_and_scale():
    assert vec_add(mp_vector([1, 4]), mp_vector([3, 2])) == mp_vector([3, 4])
    a = mp_vector([1, NEG, 4])
    assert a + a == a
    assert a + Vector.zeros(MAX_PLUS, 3) == a
    assert scalar_mul(2, mp_vector([1, 4])) == mp_vector([3, 6])
    assert scalar_mul(Scalar.one(MAX_PLUS), a) == a
    assert scalar_mul(Scalar.zero(MAX_PLUS), a).is_zero()


def test_products():
    A = mp_matrix([[1, 3], [2, 1]])
    assert mat_vec_mul(A, mp_vector([3, 1])) == mp_vector([4, 5])
    assert Matrix.identity(MAX_PLUS, 2) @ mp_vector([7, NEG]) == mp_vector([7, NEG])
    assert (Matrix.zeros(MAX_PLUS, 2, 2) @ mp_vector([1, 2])).is_zero()
    assert mat_mul(mp_matrix([[0, 1], [NEG, 0]]), mp_matrix([[0], [2]])) == mp_matrix([[3], [2]])
    assert mat_mul(Matrix.identity(MAX_PLUS, 2), A) == A
    assert mat_mul(A, Matrix.zeros(MAX_PLUS, 2, 3)).is_zero()


def test_shape_errors():
    with pytest.raises(DimensionError):
        mp_matrix([[1, 2]]) @ mp_vector([1])
    with pytest.raises(DimensionError):
        mp_vector([1]) + mp_vector([1, 2])


def test_pseudo_inverse():
    assert pseudo_invert(mp_vector([2, NEG, 5])).tolist() == [-2, NEG, -5]
    assert pseudo_invert(Vector(MAX_TIMES, [4, 1])).tolist() == [0.25, 1]
    x = mp_vector([2, NEG, 5])
    assert x.pinv() @ x == 0
    with pytest.raises(DomainError):
        pseudo_invert(Vector.zeros(MAX_PLUS, 2))


def test_support_and_regularity():
    assert support(mp_vector([2, NEG, 5])) == {0, 2}
    assert support(Vector.zeros(MAX_PLUS, 3)) == frozenset()
    assert support(mp_vector([1, 2, 3])) == {0, 1, 2}
    assert regularity(mp_matrix([[0, NEG], [NEG, 0]])) == (True, True)
    assert regularity(mp_matrix([[0, NEG], [NEG, NEG]])) == (False, False)
    assert regularity(mp_matrix([[0], [NEG]])) == (False, True)


def test_vec_distance():
    assert vec_distance(mp_vector([1, 2]), mp_vector([3, 1])) == 2
    assert vec_distance(mp_vector([1, NEG]), mp_vector([1, 2])).is_top
    assert vec_distance(mp_vector([NEG, NEG]), mp_vector([NEG, NEG])) == 0
    assert vec_distance(Vector(MAX_TIMES, [2, 1]), Vector(MAX_TIMES, [1, 3])) == 3


def test_min_plus_product_is_shortest_path_step():
    A = Matrix(MIN_PLUS, [[0, 4], [1, 0]])
    assert (A @ Vector(MIN_PLUS, [0, np.inf])).tolist() == [0, 1]


def test_arrays_are_read_only():
    v = mp_vector([1, 2])
    with pytest.raises(ValueError):
        v.values[0] = 5


# -- properties -------------------------------------------------------------------

ints = st.integers(-10, 10).map(float)
entries = st.one_of(ints, ints, ints, st.just(NEG))


def vectors(m):
    return arrays(float, m, elements=entries)


def regular(m):
    return arrays(float, m, elements=ints)


@given(st.integers(1, 5).flatmap(lambda m: st.tuples(regular(m), regular(m))))
def test_outer_product_dominates_identity(pair):
    # x y^- >= (x^- y)^{-1} I entry-wise
    x, y = mp_vector(pair[0]), mp_vector(pair[1])
    outer = (x @ y.pinv()).values
    scale = -(x.pinv() @ y).value
    assert np.all(np.diag(outer) >= scale)


@given(st.integers(1, 4).flatmap(lambda m: st.tuples(
    arrays(float, (m, 3), elements=entries), regular(3))))
def test_residual_inequality(pair):
    # (Ax)^- A <= x^- for regular x
    A, x = mp_matrix(pair[0]), mp_vector(pair[1])
    Ax = A @ x
    if A.is_zero() or Ax.is_zero():
        return
    lhs = Ax.pinv() @ A
    assert np.all(MAX_PLUS.le(lhs.values, x.pinv().values))


@given(st.integers(1, 5).flatmap(lambda m: st.tuples(regular(m), arrays(float, m, elements=st.integers(0, 5).map(float)))))
def test_pseudo_inverse_is_antitone(pair):
    x = mp_vector(pair[0])
    y = mp_vector(pair[0] + pair[1])
    assert x <= y
    assert np.all(x.pinv().values >= y.pinv().values)


@given(st.integers(1, 5).flatmap(lambda m: st.tuples(regular(m), regular(m))))
def test_distance_is_chebyshev(pair):
    a, b = pair
    assert vec_distance(mp_vector(a), mp_vector(b)).value == np.max(np.abs(a - b))


@given(st.integers(1, 4).flatmap(lambda m: st.tuples(
    arrays(float, (m, 3), elements=entries), vectors(3), arrays(float, 3, elements=st.integers(0, 4).map(float)))))
def test_isotonicity(triple):
    A, a, bump = mp_matrix(triple[0]), triple[1], triple[2]
    lo, hi = mp_vector(a), mp_vector(a + bump)
    assert A @ lo <= A @ hi
    B = mp_matrix(triple[0] + 1)
    assert A @ lo <= B @ lo
