"""Laurent series order, rebasing, and phylogenetic trees."""

import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from tropctl.errors import ValidationError
from tropctl.laurent import (
    LaurentSeries,
    clusters,
    is_strictly_ascending,
    laurent_cmp,
    laurent_comparable,
    laurent_greater,
    laurent_less,
    parse_series,
    phylo_tree,
    PhyloLeaf,
    PhyloNode,
    rebase,
    serialize_series,
)
from tropctl.randgen import random_ascending_series

import fixtures


def _s(*terms):
    return LaurentSeries(terms)


def test_series_basics():
    s = _s((-5, 1), (-2, 1))
    assert s.order() == -5
    assert s.coeff(-2) == 1
    assert s.coeff(-3) == 0
    assert not s.is_zero()
    assert LaurentSeries.zero().is_zero()
    # exponent collisions merge; zero coefficients drop out
    assert _s((-1, 1), (-1, -1)).is_zero()
    assert s.evaluate(Fraction(1, 2)) == 32 + 4


def test_order_examples():
    # a deeper second term dominates a shallower one
    a = _s((-5, 1), (-2, 1))
    b = _s((-5, 1), (-3, 1))
    assert laurent_less(a, b)
    assert laurent_greater(b, a)
    assert laurent_cmp(a, b) == -1
    # nonzero series dominate the zero series regardless of sign
    assert laurent_greater(_s((-4, -2)), LaurentSeries.zero())
    # equal series compare as equal
    assert laurent_cmp(a, a) == 0


def test_incomparable_pair():
    # same order, different leading coefficients: neither dominates
    a = _s((-5, 1))
    b = _s((-5, 2))
    assert not laurent_comparable(a, b)
    with pytest.raises(ValidationError):
        laurent_cmp(a, b)


def test_ascending_chain():
    fam = [lab_s for _lab, lab_s in fixtures.r7_series()]
    assert is_strictly_ascending(fam)
    fam2 = [lab_s for _lab, lab_s in fixtures.rebase5_series()]
    assert is_strictly_ascending(fam2)


def test_parse_serialize_round_trip():
    s = _s((-5, Fraction(3, 2)), (-1, -2))
    data = serialize_series(s)
    assert parse_series(data) == s
    with pytest.raises(ValidationError):
        parse_series([["-1", "1"]])  # exponents must be integers, not strings


def test_phylo_r7_frozen_tree():
    tree = phylo_tree(fixtures.r7_series())
    fam = clusters(tree)
    assert fam == fixtures.R7_CLUSTERS
    # the deepest separation in the caterpillar group happens at order -15
    assert isinstance(tree, PhyloNode)
    assert tree.depth == -20


def test_phylo_depths_are_orders():
    tree = phylo_tree(fixtures.r7_series())

    def walk(t):
        if isinstance(t, PhyloLeaf):
            return
        assert isinstance(t.depth, int)
        walk(t.first)
        walk(t.second)

    walk(tree)


def test_phylo_rejects_non_ascending():
    items = [(1, _s((-5, 1))), (2, LaurentSeries.zero())]
    with pytest.raises(ValidationError):
        phylo_tree(items)


def test_rebase_frozen_family():
    items = fixtures.rebase5_series()
    base_fam = clusters(phylo_tree(items))
    assert base_fam == fixtures.REBASE5_CLUSTERS
    for lab in [1, 2, 3, 4, 5]:
        moved = rebase(items, lab)
        labels = [l for l, _s2 in moved]
        assert labels[0] == lab  # the base has the zero series, hence smallest
        assert clusters(phylo_tree(moved)) == fixtures.REBASE5_CLUSTERS


def test_rebase_unknown_label():
    with pytest.raises(ValidationError):
        rebase(fixtures.rebase5_series(), 99)


@settings(max_examples=30, deadline=None)
@given(st.integers(min_value=0, max_value=10_000), st.integers(min_value=3, max_value=6))
def test_random_families_rebase_invariant(seed, count):
    rng = random.Random(seed)
    fam = random_ascending_series(rng, count)
    items = list(enumerate(fam, start=1))
    reference = clusters(phylo_tree(items))
    for lab, _series in items:
        assert clusters(phylo_tree(rebase(items, lab))) == reference


@settings(max_examples=40, deadline=None)
@given(st.integers(min_value=0, max_value=10_000))
def test_random_ascending_families_are_chains(seed):
    rng = random.Random(seed)
    fam = random_ascending_series(rng, rng.randint(2, 7))
    assert fam[0].is_zero()
    assert is_strictly_ascending(fam)
    # total comparability plus transitivity of the sort order
    for i in range(len(fam)):
        for j in range(i + 1, len(fam)):
            assert laurent_less(fam[i], fam[j])
