"""Frozen reference inputs shared by the unit and acceptance tests.

Every value here was fixed by hand (balancing checked vertex by vertex) before
the implementation work, so the tests compare the code against independently
derived expectations rather than against its own output.
"""

from __future__ import annotations

import random

from tropctl.curves import TropicalCurve, parse_curve
from tropctl.laurent import LaurentSeries
from tropctl.randgen import random_genus1_curve, random_series_for_vertex


# -- two vertical tripods joined by three chains (genus 2, R^3) -----------------
#
# Junctions T=(0,0,1) and B=(0,0,0); each chain climbs an arm direction, then a
# vertical rung, then returns.  Arm directions (1,0,0), (0,1,0), (-1,-1,0);
# every chain's direction pair spans a plane whose annihilator line is the
# chain's contribution to the obstruction dual.  Expected: dim H = 1,
# parameter dimension 7.

def gamma1_doc() -> dict:
    return {
        "ambient_dim": 3,
        "vertices": [
            {"id": "T", "position": ["0", "0", "1"]},
            {"id": "B", "position": ["0", "0", "0"]},
            {"id": "T1", "position": ["1", "0", "1"]},
            {"id": "B1", "position": ["1", "0", "0"]},
            {"id": "T2", "position": ["0", "1", "1"]},
            {"id": "B2", "position": ["0", "1", "0"]},
            {"id": "T3", "position": ["-1", "-1", "1"]},
            {"id": "B3", "position": ["-1", "-1", "0"]},
        ],
        "edges": [
            # chain with perp direction (1,0,0): arm (0,1,0) plus the rung
            {"id": "l1_at", "ends": ["T", "T2"], "weight": 1},
            {"id": "l1_ab", "ends": ["B", "B2"], "weight": 1},
            {"id": "l1_v", "ends": ["B2", "T2"], "weight": 1},
            # chain with perp direction (0,1,0): arm (1,0,0)
            {"id": "l2_at", "ends": ["T", "T1"], "weight": 1},
            {"id": "l2_ab", "ends": ["B", "B1"], "weight": 1},
            {"id": "l2_v", "ends": ["B1", "T1"], "weight": 1},
            # chain with perp direction (1,-1,0): arm (-1,-1,0)
            {"id": "l3_at", "ends": ["T", "T3"], "weight": 1},
            {"id": "l3_ab", "ends": ["B", "B3"], "weight": 1},
            {"id": "l3_v", "ends": ["B3", "T3"], "weight": 1},
            {"id": "u_t1", "ends": ["T1", None], "weight": 1, "direction": [1, 0, 1]},
            {"id": "u_b1", "ends": ["B1", None], "weight": 1, "direction": [1, 0, -1]},
            {"id": "u_t2", "ends": ["T2", None], "weight": 1, "direction": [0, 1, 1]},
            {"id": "u_b2", "ends": ["B2", None], "weight": 1, "direction": [0, 1, -1]},
            {"id": "u_t3", "ends": ["T3", None], "weight": 1, "direction": [-1, -1, 1]},
            {"id": "u_b3", "ends": ["B3", None], "weight": 1, "direction": [-1, -1, -1]},
        ],
    }


# -- the same graph with one rung slid off to the side (genus 2, R^3) ------------
#
# The middle chain detours T2 -> c -> d -> B2 along direction (1,1,0), so its
# direction set spans all of R^3 and kills that chain's perp line; the other
# two chains share no common annihilator.  Expected: dim H = 0, parameter
# dimension 8.

def gamma2_doc() -> dict:
    return {
        "ambient_dim": 3,
        "vertices": [
            {"id": "T", "position": ["0", "0", "1"]},
            {"id": "B", "position": ["0", "0", "0"]},
            {"id": "T1", "position": ["1", "0", "1"]},
            {"id": "B1", "position": ["1", "0", "0"]},
            {"id": "T2", "position": ["0", "1", "1"]},
            {"id": "B2", "position": ["0", "1", "0"]},
            {"id": "T3", "position": ["-1", "-1", "1"]},
            {"id": "B3", "position": ["-1", "-1", "0"]},
            {"id": "c", "position": ["1", "2", "1"]},
            {"id": "d", "position": ["1", "2", "0"]},
        ],
        "edges": [
            {"id": "l1_at", "ends": ["T", "T2"], "weight": 1},
            {"id": "l1_ab", "ends": ["B", "B2"], "weight": 1},
            {"id": "m1_ac", "ends": ["T2", "c"], "weight": 1},
            {"id": "m2_bd", "ends": ["B2", "d"], "weight": 1},
            {"id": "m3_cd", "ends": ["d", "c"], "weight": 1},
            {"id": "l2_at", "ends": ["T", "T1"], "weight": 1},
            {"id": "l2_ab", "ends": ["B", "B1"], "weight": 1},
            {"id": "l2_v", "ends": ["B1", "T1"], "weight": 1},
            {"id": "l3_at", "ends": ["T", "T3"], "weight": 1},
            {"id": "l3_ab", "ends": ["B", "B3"], "weight": 1},
            {"id": "l3_v", "ends": ["B3", "T3"], "weight": 1},
            {"id": "u_t1", "ends": ["T1", None], "weight": 1, "direction": [1, 0, 1]},
            {"id": "u_b1", "ends": ["B1", None], "weight": 1, "direction": [1, 0, -1]},
            {"id": "u_t2", "ends": ["T2", None], "weight": 1, "direction": [-1, 0, 0]},
            {"id": "u_b2", "ends": ["B2", None], "weight": 1, "direction": [-1, 0, 0]},
            {"id": "u_t3", "ends": ["T3", None], "weight": 1, "direction": [-1, -1, 1]},
            {"id": "u_b3", "ends": ["B3", None], "weight": 1, "direction": [-1, -1, -1]},
            {"id": "u_c", "ends": ["c", None], "weight": 1, "direction": [1, 1, 1]},
            {"id": "u_d", "ends": ["d", None], "weight": 1, "direction": [1, 1, -1]},
        ],
    }


# -- unit square loop in the z = 0 plane of R^3 ----------------------------------
#
# Genus one, all vertices 3-valent, loop directions span only the plane, so
# dim H = 1 and the curve is superabundant.

def square_loop_doc() -> dict:
    return {
        "ambient_dim": 3,
        "vertices": [
            {"id": "a", "position": ["0", "0", "0"]},
            {"id": "b", "position": ["1", "0", "0"]},
            {"id": "c", "position": ["1", "1", "0"]},
            {"id": "d", "position": ["0", "1", "0"]},
        ],
        "edges": [
            {"id": "s01", "ends": ["a", "b"], "weight": 1},
            {"id": "s12", "ends": ["b", "c"], "weight": 1},
            {"id": "s23", "ends": ["c", "d"], "weight": 1},
            {"id": "s30", "ends": ["d", "a"], "weight": 1},
            {"id": "u0", "ends": ["a", None], "weight": 1, "direction": [-1, -1, 0]},
            {"id": "u1", "ends": ["b", None], "weight": 1, "direction": [1, -1, 0]},
            {"id": "u2", "ends": ["c", None], "weight": 1, "direction": [1, 1, 0]},
            {"id": "u3", "ends": ["d", None], "weight": 1, "direction": [-1, 1, 0]},
        ],
    }


# -- planar square through one 4-valent vertex, with a weight-2 vertical ----------
#
# The square a-loop lies in z = 0, but the 4-valent vertex V carries a
# weight-2 edge pointing down and a leg (1,1,2), so the directions at the loop
# span R^3: the local residue system forces every pair value to vanish and
# dim H = 0 for every admissible configuration.

def ex534_doc() -> dict:
    return {
        "ambient_dim": 3,
        "vertices": [
            {"id": "V", "position": ["0", "0", "0"]},
            {"id": "A", "position": ["-1", "0", "0"]},
            {"id": "B", "position": ["-1", "-1", "0"]},
            {"id": "C", "position": ["0", "-1", "0"]},
        ],
        "edges": [
            {"id": "e1_va", "ends": ["V", "A"], "weight": 1},
            {"id": "e2_down", "ends": ["V", None], "weight": 2, "direction": [0, 0, -1]},
            {"id": "e3_out", "ends": ["V", None], "weight": 1, "direction": [1, 1, 2]},
            {"id": "e4_cv", "ends": ["C", "V"], "weight": 1},
            {"id": "f1_ab", "ends": ["A", "B"], "weight": 1},
            {"id": "f2_bc", "ends": ["B", "C"], "weight": 1},
            {"id": "g1_a", "ends": ["A", None], "weight": 1, "direction": [-1, 1, 0]},
            {"id": "g2_b", "ends": ["B", None], "weight": 1, "direction": [-1, -1, 0]},
            {"id": "g3_c", "ends": ["C", None], "weight": 1, "direction": [1, -1, 0]},
        ],
    }


# -- two planar squares sharing one 4-valent vertex (genus 2) --------------------
#
# Loop one runs V-A-B-C in z = 0; loop two runs V-P-Q-S in the plane spanned
# by (0,-1,1) and (1,1,0).  Each loop is planar, and the local system at V
# leaves exactly one pair-value solution: dim H = 1, with
# a12 = a21 = 0 and a13 = a32 = -a31 = -a23.  Splitting V so the loops
# separate gives a 3-valent type with dim H = 2.

def ex536_doc() -> dict:
    return {
        "ambient_dim": 3,
        "vertices": [
            {"id": "V", "position": ["0", "0", "0"]},
            {"id": "A", "position": ["1", "0", "0"]},
            {"id": "B", "position": ["1", "1", "0"]},
            {"id": "C", "position": ["0", "1", "0"]},
            {"id": "P", "position": ["0", "-1", "1"]},
            {"id": "Q", "position": ["3", "2", "1"]},
            {"id": "S", "position": ["-1", "0", "-1"]},
        ],
        "edges": [
            {"id": "e1_va", "ends": ["V", "A"], "weight": 1},
            {"id": "e2_cv", "ends": ["C", "V"], "weight": 1},
            {"id": "e3_vp", "ends": ["V", "P"], "weight": 1},
            {"id": "e4_sv", "ends": ["S", "V"], "weight": 1},
            {"id": "f1_ab", "ends": ["A", "B"], "weight": 1},
            {"id": "f2_bc", "ends": ["B", "C"], "weight": 1},
            {"id": "f3_pq", "ends": ["P", "Q"], "weight": 1},
            {"id": "f4_qs", "ends": ["Q", "S"], "weight": 1},
            {"id": "g1_a", "ends": ["A", None], "weight": 1, "direction": [1, -1, 0]},
            {"id": "g2_b", "ends": ["B", None], "weight": 1, "direction": [1, 1, 0]},
            {"id": "g3_c", "ends": ["C", None], "weight": 1, "direction": [-1, 1, 0]},
            {"id": "g4_p", "ends": ["P", None], "weight": 1, "direction": [-1, -2, 1]},
            {"id": "g5_q", "ends": ["Q", None], "weight": 1, "direction": [3, 2, 1]},
            {"id": "g6_s", "ends": ["S", None], "weight": 1, "direction": [-3, -1, -2]},
        ],
    }


# The split of V that separates the two loops: square edges on one side of the
# new bridge, the P-side edges on the other.
EX536_SPLIT = ("e1_va", "e2_cv", ("e3_vp", "e4_sv"))


def curve(doc: dict) -> TropicalCurve:
    return parse_curve(doc)


# -- Laurent series families -----------------------------------------------------

def _s(*terms) -> LaurentSeries:
    return LaurentSeries(terms)


def r7_series() -> list[tuple]:
    """Eight labeled series realizing a mixed nested/caterpillar tree.

    Labels 2..5 share the leading term t^-10 and separate at depths
    -6/-7 and deeper; labels 6..8 share t^-20 and separate immediately.
    """
    return [
        (1, _s()),
        (2, _s((-10, 1), (-6, 1), (-3, 1))),
        (3, _s((-10, 1), (-6, 1), (-4, 1))),
        (4, _s((-10, 1), (-6, 1), (-4, 1), (-1, 1))),
        (5, _s((-10, 1), (-7, 1))),
        (6, _s((-20, 1))),
        (7, _s((-20, 1), (-14, 1))),
        (8, _s((-20, 1), (-15, 1))),
    ]


R7_CLUSTERS = {
    frozenset({1, 2, 3, 4, 5, 6, 7, 8}),
    frozenset({1, 2, 3, 4, 5}),
    frozenset({2, 3, 4, 5}),
    frozenset({2, 3, 4}),
    frozenset({3, 4}),
    frozenset({6, 7, 8}),
    frozenset({6, 7}),
}


def rebase5_series() -> list[tuple]:
    """Five labeled series whose cluster family must survive every rebase."""
    return [
        (1, _s()),
        (2, _s((-5, 1), (-2, 1))),
        (3, _s((-5, 1), (-3, 1))),
        (4, _s((-5, 1), (-4, 1), (-3, 1))),
        (5, _s((-6, 1), (-5, 1), (-4, 1))),
    ]


REBASE5_CLUSTERS = {
    frozenset({1, 2, 3, 4, 5}),
    frozenset({1, 2, 3, 4}),
    frozenset({2, 3, 4}),
    frozenset({2, 3}),
}


# -- random degeneration scenarios -------------------------------------------------

def random_higher_valent_case(rng: random.Random):
    """A genus-one curve with one vertex of valence 4 or 5, plus ascending
    series for that vertex's finite slots.  Returns (curve, vertex id,
    {vertex: series list})."""
    extra = rng.choice([1, 1, 2])
    n = rng.choice([2, 3, 3, 4])
    c = random_genus1_curve(rng, n, extra_legs=extra)
    high = [v for v in c.graph.vertex_ids if c.graph.valence(v) > 3]
    assert len(high) == 1
    v = high[0]
    slots = c.graph.valence(v) - 1
    series = random_series_for_vertex(rng, slots)
    return c, v, {v: series}
