"""Graph core: construction checks, genus, loop decomposition, chains."""

import random

import pytest

from tropctl.errors import ValidationError
from tropctl.graphs import AbstractGraph
from tropctl.randgen import random_trivalent_graph

import fixtures


def theta_graph():
    return AbstractGraph(
        ["x", "y"],
        [
            ("a", ("x", "y"), 1),
            ("b", ("x", "y"), 1),
            ("c", ("x", "y"), 2),
            ("ux", ("x", None), 1),
            ("uy", ("y", None), 1),
        ],
    )


def test_construction_rejects_bad_input():
    with pytest.raises(ValidationError):
        AbstractGraph([], [])
    with pytest.raises(ValidationError):
        AbstractGraph(["v", "v"], [("e", ("v", None), 1)])
    with pytest.raises(ValidationError):
        AbstractGraph(["v"], [("e", ("v", "w"), 1)])
    with pytest.raises(ValidationError):
        AbstractGraph(["v"], [("e", ("v", None), 0)])
    with pytest.raises(ValidationError):
        AbstractGraph(["v", "w"], [("e", ("v", None), 1), ("f", ("w", None), 1)])
    with pytest.raises(ValidationError):
        AbstractGraph(["v", "w"], [("e", ("v", "w"), 1), ("e", ("v", "w"), 1)])


def test_counts_and_valence():
    g = theta_graph()
    assert g.genus() == 2
    assert g.valence("x") == 4
    assert not g.is_trivalent()
    v, e_inn, e, e_tot = g.euler_counts()
    assert (v, e_inn, e, e_tot) == (2, 3, 2, 5)
    assert 1 - g.genus() == v - e_inn


def test_selfloop_counts_twice():
    g = AbstractGraph(
        ["v"],
        [("loop", ("v", "v"), 1), ("u", ("v", None), 1)],
    )
    assert g.valence("v") == 3
    assert g.genus() == 1
    assert g.loop_part() == frozenset({"loop"})


def test_loop_part_of_square():
    g = fixtures.curve(fixtures.square_loop_doc()).graph
    assert g.loop_part() == frozenset({"s01", "s12", "s23", "s30"})
    dec = g.loop_decomposition()
    assert len(dec.chains) == 1
    assert dec.chains[0].closed
    assert set(dec.chains[0].edges) == {"s01", "s12", "s23", "s30"}


def test_loop_part_excludes_bridges_and_trees():
    # two triangles joined by a bridge; a tree twig hangs off one corner
    edges = [
        ("a1", ("p", "q"), 1),
        ("a2", ("q", "r"), 1),
        ("a3", ("r", "p"), 1),
        ("b1", ("s", "t"), 1),
        ("b2", ("t", "w"), 1),
        ("b3", ("w", "s"), 1),
        ("bridge", ("p", "s"), 1),
        ("twig", ("q", "z"), 1),
        ("uz", ("z", None), 1),
        ("ur", ("r", None), 1),
        ("ut", ("t", None), 1),
        ("uw", ("w", None), 1),
    ]
    g = AbstractGraph(["p", "q", "r", "s", "t", "w", "z"], edges)
    assert g.genus() == 2
    loop = g.loop_part()
    assert loop == {"a1", "a2", "a3", "b1", "b2", "b3"}
    dec = g.loop_decomposition()
    assert len(dec.bouquets) == 2
    tree_edge_sets = [set(es) for es, _kind in dec.tree_components]
    assert {"bridge"} in tree_edge_sets
    assert {"twig", "uz"} in tree_edge_sets


def test_theta_chains_run_junction_to_junction():
    g = theta_graph()
    dec = g.loop_decomposition()
    assert g.loop_part() == {"a", "b", "c"}
    assert len(dec.chains) == 3
    for ch in dec.chains:
        assert not ch.closed
        assert len(ch.edges) == 1
        assert set(ch.vertices) == {"x", "y"}


def test_random_trivalent_graphs_have_requested_genus():
    rng = random.Random(20260816)
    for _ in range(40):
        genus = rng.randint(0, 5)
        g = random_trivalent_graph(rng, genus)
        assert g.genus() == genus
        assert all(g.valence(v) == 3 for v in g.vertex_ids)
        # loop edges keep endpoints connected when removed
        for eid in g.loop_part():
            e = g.edges[eid]
            assert e.is_selfloop or g._endpoints_connected_without(eid)
