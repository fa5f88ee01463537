"""Exact linear algebra: rref, kernels, subspaces, inequality witnesses."""

from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from tropctl.errors import ValidationError
from tropctl.linalg import (
    AffineInequalities,
    Matrix,
    Subspace,
    integer_primitive,
    is_primitive,
    parse_rational,
    rational_str,
    span_dim,
    vec,
)

import oracles


rationals = st.fractions(
    min_value=Fraction(-20), max_value=Fraction(20), max_denominator=6
)


def small_matrices(max_rows=5, max_cols=5):
    return st.integers(min_value=1, max_value=max_cols).flatmap(
        lambda c: st.lists(
            st.lists(rationals, min_size=c, max_size=c), min_size=1, max_size=max_rows
        )
    )


def test_parse_rational_forms():
    assert parse_rational("3/4") == Fraction(3, 4)
    assert parse_rational("-7") == Fraction(-7)
    assert parse_rational("0.5") == Fraction(1, 2)  # decimal strings stay exact
    with pytest.raises(ValueError):
        parse_rational(5)  # JSON rationals must be strings
    with pytest.raises(ZeroDivisionError):
        parse_rational("1/0")
    with pytest.raises(ValueError):
        parse_rational("abc")


def test_rational_str_round_trip():
    for q in [Fraction(3, 4), Fraction(-2), Fraction(0), Fraction(11, 3)]:
        assert parse_rational(rational_str(q)) == q


def test_rref_known_matrix():
    m = Matrix([[1, 2, 3], [2, 4, 6], [1, 1, 1]])
    reduced, pivots = m.rref()
    assert pivots == (0, 1)
    assert m.rank() == 2
    assert m.kernel().dim == 1
    (k,) = m.kernel().basis
    assert m.mul_vec(k) == vec([0, 0, 0])


def test_kernel_of_zero_and_full_rank():
    z = Matrix([[0, 0]], cols=2)
    assert z.kernel().dim == 2
    eye = Matrix([[1, 0], [0, 1]])
    assert eye.kernel().dim == 0


def test_solve_consistent_and_inconsistent():
    m = Matrix([[1, 1], [1, -1]])
    x = m.solve(vec([2, 0]))
    assert x == vec([1, 1])
    m2 = Matrix([[1, 1], [2, 2]])
    assert m2.solve(vec([1, 3])) is None


@settings(max_examples=60, deadline=None)
@given(small_matrices())
def test_rank_nullity_and_kernel_membership(rows):
    m = Matrix(rows)
    cols = len(rows[0])
    assert m.rank() + m.kernel().dim == cols
    for b in m.kernel().basis:
        assert all(x == 0 for x in m.mul_vec(b))
    # the independent oracle agrees on both numbers
    assert m.rank() == oracles.matrix_rank(rows)
    assert m.kernel().dim == oracles.nullity(rows, cols)


@settings(max_examples=40, deadline=None)
@given(st.lists(st.lists(rationals, min_size=4, max_size=4), min_size=0, max_size=3))
def test_annihilator_involution(vectors):
    s = Subspace.span(vectors, 4)
    ann = s.annihilator()
    assert s.dim + ann.dim == 4
    assert ann.annihilator() == s
    for a in ann.basis:
        for v in vectors:
            assert sum(Fraction(x) * y for x, y in zip(v, a)) == 0


def test_subspace_equality_ignores_basis_choice():
    a = Subspace.span([vec([1, 0, 0]), vec([0, 1, 0])], 3)
    b = Subspace.span([vec([1, 1, 0]), vec([1, -1, 0])], 3)
    assert a == b
    assert a.contains(b) and b.contains(a)
    assert not a.contains_vector(vec([0, 0, 1]))


def test_intersection():
    a = Subspace.span([vec([1, 0, 0]), vec([0, 1, 0])], 3)
    b = Subspace.span([vec([0, 1, 0]), vec([0, 0, 1])], 3)
    cap = a.intersect(b)
    assert cap == Subspace.span([vec([0, 1, 0])], 3)
    assert span_dim([vec([1, 2]), vec([2, 4])], 2) == 1


def test_integer_primitive():
    assert integer_primitive(vec([Fraction(2, 3), Fraction(-4, 3)])) == (1, -2)
    assert integer_primitive((6, -9, 3)) == (2, -3, 1)
    assert is_primitive((2, -3, 1))
    assert not is_primitive((2, 4))


def test_affine_witness_feasible():
    # x > 0, y > 0, x + y < 3 has rational solutions
    ineqs = AffineInequalities(2)
    ineqs.add(vec([1, 0]), Fraction(0))
    ineqs.add(vec([0, 1]), Fraction(0))
    ineqs.add(vec([-1, -1]), Fraction(3))
    w = ineqs.witness()
    assert w is not None
    x, y = w
    assert x > 0 and y > 0 and x + y < 3


def test_affine_witness_infeasible():
    # x > 1 and x < 0 cannot hold
    ineqs = AffineInequalities(1)
    ineqs.add(vec([1]), Fraction(-1))
    ineqs.add(vec([-1]), Fraction(0))
    assert ineqs.witness() is None
