from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, strategies as st

from randoracle.core import SparseRationalMatrix
from randoracle.errors import ContractViolation

frac = st.fractions(min_value=-3, max_value=3, max_denominator=6)


def matrices(dim):
    return st.dictionaries(st.tuples(st.integers(0, dim - 1), st.integers(0, dim - 1)), frac,
                           max_size=dim * dim).map(lambda d: SparseRationalMatrix(dim, d))


def dense(m):
    return m.to_dense(object)


@given(matrices(3), matrices(3))
def test_arithmetic_matches_dense(a, b):
    assert (dense(a + b) == dense(a) + dense(b)).all()
    assert (dense(a - b) == dense(a) - dense(b)).all()
    assert (dense(a @ b) == dense(a).dot(dense(b))).all()
    assert (dense(a.scale(Fraction(2, 3))) == dense(a) * Fraction(2, 3)).all()
    assert a.trace() == sum(dense(a).diagonal(), Fraction(0))


@given(matrices(2), matrices(3))
def test_kron_matches_numpy(a, b):
    assert (dense(a.kron(b)) == np.kron(dense(a), dense(b))).all()


@given(matrices(3))
def test_no_zero_entries_stored(a):
    assert all(v != 0 for _, v in a.items())
    assert (a - a).nnz() == 0


def test_outer_and_symmetry():
    m = SparseRationalMatrix.outer({0: 1, 2: -1}, 3, Fraction(1, 2))
    assert m[(0, 2)] == Fraction(-1, 2)
    assert m.is_symmetric()
    assert m.trace() == 1


def test_first_difference_is_row_major():
    a = SparseRationalMatrix(3, {(2, 0): 1, (0, 1): 1})
    b = SparseRationalMatrix(3, {(2, 0): 2})
    assert a.first_difference(b) == ((0, 1), 1, 0)
    assert a.first_difference(a) is None


def test_bounds_and_dims():
    with pytest.raises(ContractViolation):
        SparseRationalMatrix(2, {(2, 0): 1})
    with pytest.raises(ContractViolation):
        SparseRationalMatrix(2) + SparseRationalMatrix(3)
