"""Local residue calculus at higher-valent vertices.

A vertex of valence r+2 is modeled by a rational curve with marked points:
one finite point per incident edge except a distinguished edge sitting at
infinity, the first finite point pinned to 0.  Obstruction covectors w_e on
the bounded edges satisfy three exact conditions: each w_e is perpendicular
to its edge direction, the w_e sum to zero, and the residue polynomial built
from the pair values a[i,j] = weight_i * w_j(direction_i) vanishes
identically.  Assembling these local systems over a whole curve (with flag
covectors tied across each bounded edge) gives the curve-level obstruction
space; on a 3-valent curve it agrees with the chain method.
"""

from __future__ import annotations

from fractions import Fraction
from typing import NamedTuple

from .curves import CombinatorialType, TropicalCurve, contract_image, replace_star
from .errors import PreconditionError, ValidationError
from .graphs import Flag
from .laurent import (
    LaurentSeries,
    PhyloLeaf,
    PhyloNode,
    clusters,
    laurent_cmp,
    phylo_tree,
)
from .linalg import Matrix, Q0, Q1, Subspace, integer_primitive, vec


def _as_type(obj) -> CombinatorialType:
    if isinstance(obj, TropicalCurve):
        return obj.combinatorial_type()
    if isinstance(obj, CombinatorialType):
        return obj
    raise TypeError(f"expected a curve or combinatorial type, got {type(obj).__name__}")


class SlotRecord(NamedTuple):
    label: object  # edge id, or synthetic name for standalone models
    flag: object  # Flag when the slot comes from a graph, else None
    weight: int
    direction: tuple
    bounded: bool


class LocalModel:
    """Star of one vertex with marked-point coordinates.

    slots lists the edges in marked-point order: the finite slots first
    (coordinate coords[i] for slot i), then the infinity slot last.  The
    infinity slot is the last bounded edge in sorted order, falling back to
    the last edge when nothing is bounded.
    """

    def __init__(self, slots: list[SlotRecord], coords, n: int, vertex=None):
        self.slots = list(slots)
        self.n = n
        self.vertex = vertex
        self.finite = self.slots[:-1]
        self.infinity = self.slots[-1] if self.slots else None
        self.r = len(self.slots) - 2
        coords = tuple(Fraction(c) for c in coords)
        if len(coords) != len(self.finite):
            raise ValidationError(
                "bad-coords",
                f"expected {len(self.finite)} marked coordinates, got {len(coords)}",
                vertex=vertex,
            )
        if coords and coords[0] != 0:
            raise ValidationError(
                "bad-coords", "the first marked coordinate must be 0", vertex=vertex
            )
        if len(set(coords)) != len(coords):
            raise ValidationError(
                "bad-coords", "marked coordinates must be pairwise distinct", vertex=vertex
            )
        self.coords = coords

    @classmethod
    def from_star(cls, obj, vertex: str, coords=None) -> "LocalModel":
        ct = _as_type(obj)
        g = ct.graph
        inc = g.incident(vertex)
        eids = [eid for eid, _slot in inc]
        selfloop = len(set(eids)) != len(eids)
        records = []
        for eid, slot in inc:
            e = g.edges[eid]
            d = ct.flag_direction(Flag(vertex, eid, slot))
            if all(x == 0 for x in d):
                raise PreconditionError(
                    "zero-direction-local",
                    f"edge {eid} at {vertex} has no direction; the local model needs one",
                    vertex=vertex,
                    edge=eid,
                )
            # a loop edge meets the vertex twice; its two slots get distinct labels
            label = f"{eid}#{slot}" if selfloop and eids.count(eid) == 2 else eid
            records.append(
                SlotRecord(label, Flag(vertex, eid, slot), e.weight, d, not e.is_unbounded)
            )
        inf_idx = len(records) - 1
        for i in range(len(records) - 1, -1, -1):
            if records[i].bounded:
                inf_idx = i
                break
        slots = [rec for i, rec in enumerate(records) if i != inf_idx]
        slots.append(records[inf_idx])
        if coords is None:
            coords = tuple(Fraction(i) for i in range(len(slots) - 1))
        return cls(slots, coords, ct.n, vertex=vertex)


def standard_local_model(r: int, n: int, coords, bounded=None, weights=None) -> LocalModel:
    """The (r+2)-valent star with unit-vector directions in Q^n.

    Edges 1..r+1 point along the first r+1 coordinate vectors with the given
    weights (default all 1); the last edge balances them, its weight being
    the content of the weighted sum.  bounded marks which of the r+2 edges
    are bounded (default: all).
    """
    from math import gcd

    if n < r + 1:
        raise ValidationError("bad-model", "need ambient dimension at least r+1")
    if weights is None:
        weights = [1] * (r + 1)
    if bounded is None:
        bounded = [True] * (r + 2)
    dirs = []
    for i in range(r + 1):
        d = [0] * n
        d[i] = 1
        dirs.append(tuple(d))
    last = [0] * n
    for i in range(r + 1):
        last[i] = -weights[i]
    gg = 0
    for x in last:
        gg = gcd(gg, abs(x))
    dirs.append(tuple(x // gg for x in last))
    all_weights = list(weights) + [gg]
    records = [
        SlotRecord(f"E{i + 1}", None, all_weights[i], dirs[i], bool(bounded[i]))
        for i in range(r + 2)
    ]
    inf_idx = len(records) - 1
    for i in range(len(records) - 1, -1, -1):
        if records[i].bounded:
            inf_idx = i
            break
    slots = [rec for i, rec in enumerate(records) if i != inf_idx]
    slots.append(records[inf_idx])
    return LocalModel(slots, coords, n)


def model_from_doc(doc) -> LocalModel:
    """Build a standalone LocalModel from a JSON document.

    Schema: {"ambient_dim": n, "edges": [{"label"?, "weight", "direction",
    "bounded"?}, ...], "coords"?: ["p/q", ...]}.  The infinity slot is the
    last bounded edge in listed order (last edge if none is bounded); coords
    apply to the remaining edges in listed order and default to 0, 1, 2, ...
    Directions must be primitive and balance against the weights.
    """
    from .linalg import is_primitive, parse_rational

    if not isinstance(doc, dict):
        raise ValidationError("bad-model", "model document must be a JSON object")
    n = doc.get("ambient_dim")
    if not isinstance(n, int) or n < 1:
        raise ValidationError("bad-model", "ambient_dim must be a positive integer")
    edges = doc.get("edges")
    if not isinstance(edges, list) or len(edges) < 3:
        raise ValidationError("bad-model", "edges must list at least 3 edges")
    records = []
    labels = set()
    balance = [0] * n
    for i, entry in enumerate(edges):
        if not isinstance(entry, dict):
            raise ValidationError("bad-model", f"edge {i} must be an object")
        label = entry.get("label", f"E{i + 1}")
        if not isinstance(label, str) or label in labels:
            raise ValidationError("bad-model", f"edge {i} needs a unique string label")
        labels.add(label)
        weight = entry.get("weight", 1)
        if not isinstance(weight, int) or weight < 1:
            raise ValidationError("bad-model", f"edge {label}: weight must be a positive integer", edge=label)
        d = entry.get("direction")
        if (
            not isinstance(d, list)
            or len(d) != n
            or not all(isinstance(x, int) for x in d)
        ):
            raise ValidationError(
                "bad-model", f"edge {label}: direction must be {n} integers", edge=label
            )
        d = tuple(d)
        if not is_primitive(d):
            raise ValidationError(
                "bad-model", f"edge {label}: direction must be primitive and nonzero", edge=label
            )
        bounded = entry.get("bounded", True)
        if not isinstance(bounded, bool):
            raise ValidationError("bad-model", f"edge {label}: bounded must be a boolean", edge=label)
        for k in range(n):
            balance[k] += weight * d[k]
        records.append(SlotRecord(label, None, weight, d, bounded))
    if any(x != 0 for x in balance):
        raise ValidationError(
            "unbalanced",
            f"weighted directions sum to {tuple(balance)}, expected zero",
        )
    inf_idx = len(records) - 1
    for i in range(len(records) - 1, -1, -1):
        if records[i].bounded:
            inf_idx = i
            break
    slots = [rec for i, rec in enumerate(records) if i != inf_idx]
    slots.append(records[inf_idx])
    coords = doc.get("coords")
    if coords is None:
        coords = tuple(Fraction(i) for i in range(len(slots) - 1))
    else:
        if not isinstance(coords, list):
            raise ValidationError("bad-model", "coords must be a list of rationals")
        coords = tuple(parse_rational(c) for c in coords)
    return LocalModel(slots, coords, n)


# -- residue polynomial rows -------------------------------------------------------


def _product_coeffs(points):
    """Coefficients (low degree first) of prod (x - p) over the points."""
    coeffs = [Q1]
    for p in points:
        nxt = [Q0] * (len(coeffs) + 1)
        for i, c in enumerate(coeffs):
            nxt[i + 1] += c
            nxt[i] -= p * c
        coeffs = nxt
    return coeffs


def _local_rows(model: LocalModel):
    """(rows, bounded slot records) of the local obstruction system.

    Row groups: perpendicularity of each bounded covector to its own edge,
    the covector sum, and the coefficients of the residue polynomial

        P(x) = sum over finite slot pairs i != j of
               a[i,j] * prod over finite l != i, j of (x - p_l)

    with a[i,j] = weight_i * w_j(direction_i); all r coefficients vanish.
    """
    n = model.n
    bounded = [rec for rec in model.slots if rec.bounded]
    index = {rec.label: i for i, rec in enumerate(bounded)}
    nvars = len(bounded) * n
    rows = []
    for rec in bounded:
        row = [Q0] * nvars
        base = index[rec.label] * n
        for k in range(n):
            row[base + k] = Fraction(rec.direction[k])
        rows.append(row)
    for k in range(n):
        row = [Q0] * nvars
        for rec in bounded:
            row[index[rec.label] * n + k] += 1
        rows.append(row)
    finite = model.finite
    m = len(finite)
    if m >= 2:
        degree = m - 2
        poly = {}
        for i in range(m):
            for j in range(m):
                if i == j:
                    continue
                pts = [model.coords[l] for l in range(m) if l != i and l != j]
                poly[(i, j)] = _product_coeffs(pts)
        for k in range(degree + 1):
            row = [Q0] * nvars
            for (i, j), coeffs in poly.items():
                rec_j = finite[j]
                if not rec_j.bounded:
                    continue
                rec_i = finite[i]
                base = index[rec_j.label] * n
                factor = coeffs[k] * rec_i.weight
                for t in range(n):
                    row[base + t] += factor * rec_i.direction[t]
            rows.append(row)
    return rows, bounded


def a_system(model: LocalModel) -> dict:
    """Kernel of the local obstruction system at one vertex."""
    rows, bounded = _local_rows(model)
    nvars = len(bounded) * model.n
    space = Matrix(rows, cols=nvars).kernel()
    basis = []
    for bv in space.basis:
        basis.append(
            {rec.label: tuple(bv[i * model.n : (i + 1) * model.n]) for i, rec in enumerate(bounded)}
        )
    return {
        "dim": space.dim,
        "space": space,
        "variables": [rec.label for rec in bounded],
        "basis": basis,
        "model": model,
    }


def a_values(model: LocalModel, assignment: dict) -> dict:
    """Pair values a[(i,j)] = weight_i * w_j(direction_i) of a solution.

    assignment maps slot labels to covectors; indices run over the finite
    slots, 1-based in slot order.
    """
    out = {}
    finite = model.finite
    for i, rec_i in enumerate(finite):
        for j, rec_j in enumerate(finite):
            if i == j:
                continue
            w = assignment.get(rec_j.label)
            if w is None:
                val = Q0
            else:
                val = sum((Fraction(w[k]) * rec_i.direction[k] for k in range(model.n)), Q0)
            out[(i + 1, j + 1)] = rec_i.weight * val
    return out


# -- descendant pair system ---------------------------------------------------------


def _pair_tree_leaves(tree):
    if not isinstance(tree, (tuple, list)):
        return [tree]
    if len(tree) != 2:
        raise ValidationError("bad-tree", "pair trees branch in twos")
    return _pair_tree_leaves(tree[0]) + _pair_tree_leaves(tree[1])


def b_system(tree) -> dict:
    """Row system of descendant-pair sums over a rooted binary tree.

    Variables are ordered pairs (i, j), i != j, of leaf labels; each internal
    node contributes one row summing the variables over ordered pairs of its
    descendant leaves.  The rank equals the number of internal nodes.
    """
    leaves = _pair_tree_leaves(tree)
    if len(set(leaves)) != len(leaves):
        raise ValidationError("bad-tree", "leaf labels must be distinct")
    if len(leaves) < 2:
        raise ValidationError("bad-tree", "need at least two leaves")
    ordered = sorted(leaves)
    pairs = [(i, j) for i in ordered for j in ordered if i != j]
    col = {p: k for k, p in enumerate(pairs)}
    rows = []
    node_sets = []

    def walk(t):
        if not isinstance(t, (tuple, list)):
            return frozenset([t])
        s = walk(t[0]) | walk(t[1])
        node_sets.append(s)
        return s

    walk(tree)
    for s in node_sets:
        row = [Q0] * len(pairs)
        for i in s:
            for j in s:
                if i != j:
                    row[col[(i, j)]] += 1
        rows.append(row)
    m = Matrix(rows, cols=len(pairs))
    return {
        "matrix": m,
        "rank": m.rank(),
        "internal_nodes": len(node_sets),
        "pairs": pairs,
    }


# -- curve-level assembly -----------------------------------------------------------


def xi_map(obj, coords_by_vertex=None) -> dict:
    """Curve-level obstruction space from the local residue systems.

    One covector variable per bounded flag; each vertex contributes its local
    rows, the two flags of a bounded edge are tied to opposite values, and
    flags on bounded edges outside the loop subgraph are pinned to zero (on
    tree parts this is forced anyway; pinning keeps bridges exact as well).
    Vertices of valence 4 or more need marked coordinates (coords_by_vertex);
    3-valent and lower vertices get defaults, which cannot change the kernel
    there.
    """
    ct = _as_type(obj)
    g = ct.graph
    n = ct.n
    coords_by_vertex = coords_by_vertex or {}
    bflags = [f for f in g.flags() if not g.edges[f.edge].is_unbounded]
    index = {f: i for i, f in enumerate(bflags)}
    nvars = len(bflags) * n
    rows = []
    models = {}
    for v in g.vertex_ids:
        coords = coords_by_vertex.get(v)
        if coords is None and g.valence(v) > 3:
            raise PreconditionError(
                "missing-config",
                f"vertex {v} has valence {g.valence(v)} and needs marked coordinates",
                vertex=v,
            )
        model = LocalModel.from_star(ct, v, coords)
        models[v] = model
        local_rows, bounded = _local_rows(model)
        gmap = []  # local slot -> global flag index
        for rec in bounded:
            gmap.append(index[rec.flag])
        for lr in local_rows:
            row = [Q0] * nvars
            for li, gi in enumerate(gmap):
                for k in range(n):
                    row[gi * n + k] += lr[li * n + k]
            rows.append(row)
    for eid in g.bounded_edge_ids():
        e = g.edges[eid]
        b0 = index[Flag(e.ends[0], eid, 0)] * n
        b1 = index[Flag(e.ends[1], eid, 1)] * n
        for k in range(n):
            row = [Q0] * nvars
            row[b0 + k] += 1
            row[b1 + k] += 1
            rows.append(row)
    loop = g.loop_part()
    for f, i in index.items():
        if f.edge in loop:
            continue
        for k in range(n):
            row = [Q0] * nvars
            row[i * n + k] = Q1
            rows.append(row)
    space = Matrix(rows, cols=nvars).kernel()
    basis = []
    for bv in space.basis:
        basis.append({f: tuple(bv[i * n : (i + 1) * n]) for f, i in index.items()})
    return {
        "dim": space.dim,
        "space": space,
        "flag_order": tuple(bflags),
        "basis": basis,
        "models": models,
    }


# -- genus-one smoothing criterion ---------------------------------------------------


def genus1_loop_criterion(curve: TropicalCurve) -> dict:
    """Span test of the directions emanating from the image loop.

    For a genus-one curve, collect the directions of all image edges at the
    vertices of the (unique) image cycle; a full span certifies an
    unobstructed smoothing, and in general the obstruction dual is the
    annihilator of the span.
    """
    if curve.graph.genus() != 1:
        raise PreconditionError(
            "not-genus1", f"genus is {curve.graph.genus()}, need exactly 1"
        )
    image = contract_image(curve)
    ig = image.curve.graph
    loop = ig.loop_part()
    loop_vertices = sorted(
        {v for eid in loop for v in ig.edges[eid].ends if v is not None}
    )
    dirs = []
    flags = []
    for v in loop_vertices:
        for eid, slot in ig.incident(v):
            f = Flag(v, eid, slot)
            dirs.append(vec(image.curve.flag_direction(f)))
            flags.append(f)
    span = Subspace.span(dirs, curve.n)
    ann = span.annihilator()
    return {
        "span_dim": span.dim,
        "dim_h": curve.n - span.dim,
        "smoothable": span.dim == curve.n,
        "loop_vertices": loop_vertices,
        "flag_count": len(flags),
        "h_basis": [integer_primitive(bv) for bv in ann.basis],
    }


# -- phylogenetic resolution and degeneration comparison -------------------------------


def _phylo_to_pairs(tree):
    if isinstance(tree, PhyloLeaf):
        return tree.label
    return (_phylo_to_pairs(tree.first), _phylo_to_pairs(tree.second))


def vertex_series(model: LocalModel, series_list: list[LaurentSeries]):
    """Pair the finite slots with their series; validates count and the
    pinned zero series on the first slot."""
    if len(series_list) != len(model.finite):
        raise ValidationError(
            "bad-laurent",
            f"vertex {model.vertex}: expected {len(model.finite)} series, got {len(series_list)}",
            vertex=model.vertex,
        )
    if series_list and not series_list[0].is_zero():
        raise ValidationError(
            "bad-laurent",
            f"vertex {model.vertex}: the first slot's series must be zero",
            vertex=model.vertex,
        )
    return [(rec.label, s) for rec, s in zip(model.finite, series_list)]


def vertex_phylo(model: LocalModel, series_list: list[LaurentSeries]):
    """Ascending-sorted phylogenetic tree of a vertex's series, leaf labels
    being the finite slot edge ids."""
    import functools

    items = vertex_series(model, series_list)
    items = sorted(items, key=functools.cmp_to_key(lambda a, b: laurent_cmp(a[1], b[1])))
    return phylo_tree(items)


def resolve_by_phylo(obj, series_by_vertex: dict) -> tuple:
    """Replace every higher-valent star by its phylogenetic tree.

    Returns (resolved combinatorial type, {vertex: tree}).  The infinity
    edge joins the two top branches at the original vertex.
    """
    ct = _as_type(obj)
    g = ct.graph
    trees = {}
    out = ct
    idx = 0
    for v in g.vertex_ids:
        if g.valence(v) <= 3:
            continue
        if v not in series_by_vertex:
            raise PreconditionError(
                "missing-laurent",
                f"vertex {v} has valence {g.valence(v)} and needs series data",
                vertex=v,
            )
        model = LocalModel.from_star(ct, v)
        tree = vertex_phylo(model, series_by_vertex[v])
        trees[v] = tree
        idx += 1
        triple = (
            model.infinity.label,
            _phylo_to_pairs(tree.first),
            _phylo_to_pairs(tree.second),
        )
        out = replace_star(out, v, triple, new_prefix=f"__p{idx}_")
    return out, trees


def degeneration_compare(
    curve: TropicalCurve,
    series_by_vertex: dict,
    t0: Fraction | None = None,
    max_shrinks: int = 12,
) -> dict:
    """Evaluated-coordinate obstruction dimension against the resolved type.

    The series are evaluated at a small t to produce marked coordinates; t
    shrinks by 1000 until the dimension repeats (and skips any t where
    evaluated points collide).  The resolved type's chain dimension bounds
    the evaluated dimension from above.
    """
    from .obstruction import dual_obstruction_chain

    image = contract_image(curve)
    ct = image.curve.combinatorial_type()
    g = ct.graph
    models = {}
    for v in g.vertex_ids:
        if g.valence(v) > 3:
            if v not in series_by_vertex:
                raise PreconditionError(
                    "missing-laurent",
                    f"vertex {v} has valence {g.valence(v)} and needs series data",
                    vertex=v,
                )
            models[v] = LocalModel.from_star(ct, v)
            vertex_series(models[v], series_by_vertex[v])  # validate counts
    resolved, trees = resolve_by_phylo(ct, series_by_vertex)
    d0 = dual_obstruction_chain(resolved)["dim"]
    t = Fraction(t0) if t0 is not None else Fraction(1, 10**6)
    if not 0 < t < 1:
        raise ValidationError("bad-evaluation-point", "t must lie strictly between 0 and 1")
    dims = []
    t_used = None
    shrinks = 0
    while shrinks <= max_shrinks:
        coords_by_vertex = {}
        collision = False
        for v, model in models.items():
            vals = [s.evaluate(t) for s in series_by_vertex[v]]
            if len(set(vals)) != len(vals):
                collision = True
                break
            coords_by_vertex[v] = vals
        if not collision:
            d = xi_map(ct, coords_by_vertex)["dim"]
            dims.append(d)
            t_used = t
            if len(dims) >= 2 and dims[-1] == dims[-2]:
                break
        t = t / 1000
        shrinks += 1
    if not dims:
        raise ValidationError(
            "no-admissible-t", "every tried t made some marked points collide"
        )
    d = dims[-1]
    report = {
        "d": d,
        "d0": d0,
        "semicontinuous": d <= d0,
        "stabilized": len(dims) >= 2 and dims[-1] == dims[-2],
        "t_used": t_used,
        "dims_seen": dims,
        "resolved_type": resolved,
        "trees": trees,
        "clusters": {v: sorted(tuple(sorted(c)) for c in clusters(tr)) for v, tr in trees.items()},
    }
    return report
