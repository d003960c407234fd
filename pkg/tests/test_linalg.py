from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cmtilt.linalg import (Field, IncrementalBasis, complement_std, kernel_basis, kernel_matrix,
                           quotient_basis, rank, solve)


def test_rank_identity(field):
    assert rank(field.eye(3), field) == 3


def test_rank_depends_on_characteristic():
    rows = [[1, 1], [1, -1]]
    assert rank(Field().array(rows), Field()) == 2
    assert rank(Field(2).array(rows), Field(2)) == 1


def test_rank_zero_matrix(field):
    assert rank(field.zeros(0, 0), field) == 0
    assert rank(field.zeros(2, 3), field) == 0


def test_kernel_basis_of_row():
    F = Field()
    (k,) = kernel_basis(F.array([[1, 1]]), F)
    assert list(k) == [F(-1), F(1)]


def test_kernel_of_invertible_is_empty(field):
    assert kernel_basis(field.eye(4), field) == []


def test_solve_consistent(field):
    m = field.array([[1, 0], [0, 1]])
    x = solve(m, field.vector([1, 2]), field)
    assert list(x) == [field(1), field(2)]


def test_solve_inconsistent(field):
    m = field.array([[1, 1], [1, 1]])
    assert solve(m, field.vector([0, 1]), field) == "inconsistent"


def test_solve_over_rationals_is_exact():
    F = Field()
    x = solve(F.array([[3]]), F.vector([1]), F)
    assert x[0] == F(Fraction(1, 3))


def test_quotient_basis_completes_subspace(field):
    e = field.eye(3)
    reps = quotient_basis([e[0], e[1], e[2]], [e[0] + e[1]], field)
    assert len(reps) == 2


def test_quotient_basis_rejects_non_subspace(field):
    e = field.eye(2)
    with pytest.raises(ValueError):
        quotient_basis([e[0]], [e[1]], field)


def test_complement_std():
    F = Field(3)
    assert complement_std(F.array([[1, 2, 0]]), F) == [1, 2]


def test_field_parse_forms():
    assert Field.parse("Q").p is None
    assert Field.parse({"Fp": 5}).p == 5
    assert Field.parse("F2").p == 2
    assert Field.parse("GF(7)").p == 7
    with pytest.raises(ValueError):
        Field.parse("F4")


def test_incremental_basis_coords(field):
    b = IncrementalBasis(field, 3)
    u, v = field.vector([1, 1, 0]), field.vector([0, 1, 1])
    assert b.add(u) and b.add(v)
    assert not b.add(field.red(u + v))
    assert list(b.coords(field.red(u + v))) == [field(1), field(1)]
    assert b.coords(field.vector([1, 0, 0])) is None


matrices = st.integers(1, 5).flatmap(lambda r: st.integers(1, 5).flatmap(
    lambda c: st.lists(st.lists(st.integers(-3, 3), min_size=c, max_size=c), min_size=r, max_size=r)))


@settings(max_examples=60, deadline=None)
@given(matrices, st.sampled_from([None, 2, 3, 5]))
def test_rank_nullity(rows, p):
    F = Field(p)
    m = F.array(rows)
    k = kernel_matrix(m, F)
    assert rank(m, F) + k.shape[1] == m.shape[1]
    assert F.is_zero(F.red(F.mm(m, k)))


@settings(max_examples=60, deadline=None)
@given(matrices, st.sampled_from([None, 2, 3]))
def test_solve_round_trip(rows, p):
    F = Field(p)
    m = F.array(rows)
    x0 = F.vector([1] * m.shape[1])
    b = F.red(F.mm(m, x0))
    x = solve(m, b, F)
    assert not isinstance(x, str)
    assert np.array_equal(F.red(F.mm(m, x)), b)


@settings(max_examples=40, deadline=None)
@given(matrices)
def test_rational_rank_bounds_mod_p_rank(rows):
    # reduction mod p can only lose rank
    assert rank(Field(3).array(rows), Field(3)) <= rank(Field().array(rows), Field())
