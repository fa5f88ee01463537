"""Parametrized tropical curves: positions, directions, balancing, images.

A curve is an abstract graph plus rational vertex positions in Q^n and
primitive integer directions per edge.  Directions are stored once per edge,
measured from ends[0]; the flag direction flips sign at the other end.

A bounded edge whose endpoints share a position is contracted.  Contracted
edges must carry a direction entry in input files; the zero vector means "no
virtual direction" (stored as None), a nonzero vector is the virtual
direction of the degenerating family and participates in per-vertex
balancing.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Mapping, Sequence

from .errors import PreconditionError, ValidationError
from .graphs import AbstractGraph, Flag
from .linalg import (
    Q0,
    integer_primitive,
    is_primitive,
    is_zero_vec,
    parse_rational,
    rational_str,
    vec,
    vec_scale,
    vec_sub,
    zero_vec,
)

DEFAULT_MAX_DIM = 16


class CombinatorialType:
    """Graph plus direction map; no positions or lengths."""

    def __init__(self, graph: AbstractGraph, n: int, directions: Mapping[str, tuple | None]):
        self.graph = graph
        self.n = n
        self.directions = dict(directions)

    def edge_direction(self, eid: str) -> tuple | None:
        return self.directions.get(eid)

    def flag_direction(self, flag: Flag) -> tuple:
        d = self.directions.get(flag.edge)
        if d is None:
            return tuple([0] * self.n)
        return d if flag.slot == 0 else tuple(-x for x in d)


class TropicalCurve:
    def __init__(
        self,
        graph: AbstractGraph,
        n: int,
        positions: Mapping[str, Sequence[Fraction]],
        directions: Mapping[str, tuple | None],
    ):
        self.graph = graph
        self.n = n
        self.positions = {v: vec(positions[v]) for v in graph.vertex_ids}
        self.directions = {}
        for eid in graph.edge_ids:
            d = directions.get(eid)
            self.directions[eid] = None if d is None else tuple(int(x) for x in d)
        _validate_curve(self)

    # -- directions ----------------------------------------------------------

    def edge_direction(self, eid: str) -> tuple | None:
        return self.directions[eid]

    def flag_direction(self, flag: Flag) -> tuple:
        """Primitive integer direction at the flag's vertex (zero if none)."""
        d = self.directions[flag.edge]
        if d is None:
            return tuple([0] * self.n)
        return d if flag.slot == 0 else tuple(-x for x in d)

    def is_contracted(self, eid: str) -> bool:
        e = self.graph.edges[eid]
        if e.is_unbounded:
            return False
        return self.positions[e.ends[0]] == self.positions[e.ends[1]]

    def edge_length(self, eid: str) -> Fraction:
        """Lattice length: position difference = length * primitive direction."""
        e = self.graph.edges[eid]
        if e.is_unbounded:
            raise PreconditionError("unbounded-length", f"edge {eid} is unbounded", edge=eid)
        diff = vec_sub(self.positions[e.ends[1]], self.positions[e.ends[0]])
        if is_zero_vec(diff):
            return Q0
        d = self.directions[eid]
        for i, x in enumerate(d):
            if x != 0:
                return diff[i] / x
        raise AssertionError("unreachable: nonzero difference with zero direction")

    def combinatorial_type(self) -> CombinatorialType:
        return CombinatorialType(self.graph, self.n, self.directions)

    def __eq__(self, other):
        return (
            isinstance(other, TropicalCurve)
            and self.n == other.n
            and self.graph.vertex_ids == other.graph.vertex_ids
            and self.graph.edges == other.graph.edges
            and self.positions == other.positions
            and self.directions == other.directions
        )

    def __hash__(self):
        return hash((self.n, self.graph.vertex_ids, tuple(sorted(self.directions.items()))))


def _validate_curve(c: TropicalCurve):
    g = c.graph
    for v in g.vertex_ids:
        if len(c.positions[v]) != c.n:
            raise ValidationError(
                "bad-position", f"vertex {v} position must have {c.n} entries", vertex=v
            )
    for eid in g.edge_ids:
        e = g.edges[eid]
        d = c.directions[eid]
        if e.is_unbounded:
            if d is None:
                raise ValidationError(
                    "missing-direction", f"unbounded edge {eid} needs a direction", edge=eid
                )
            if not is_primitive(d):
                raise ValidationError(
                    "non-primitive", f"edge {eid} direction is not primitive", edge=eid
                )
            continue
        diff = vec_sub(c.positions[e.ends[1]], c.positions[e.ends[0]])
        if is_zero_vec(diff):
            if d is not None and not is_primitive(d):
                raise ValidationError(
                    "non-primitive",
                    f"contracted edge {eid} virtual direction is not primitive",
                    edge=eid,
                )
            continue
        prim = integer_primitive(diff)
        if d is None:
            c.directions[eid] = prim
        elif tuple(d) != prim:
            raise ValidationError(
                "direction-mismatch",
                f"edge {eid} direction does not match endpoint positions",
                edge=eid,
            )
    residuals = balancing_residuals(c)
    bad = [v for v, r in residuals if not is_zero_vec(r)]
    if bad:
        raise ValidationError(
            "unbalanced", f"balancing fails at: {', '.join(bad)}", vertices=bad
        )


def balancing_residuals(c: TropicalCurve) -> list[tuple[str, tuple]]:
    """Per-vertex weighted direction sums; zero everywhere iff balanced.

    Contracted edges contribute their virtual direction when they have one
    (the curve is then a limit of honest curves) and nothing otherwise.
    """
    out = []
    for v in c.graph.vertex_ids:
        total = zero_vec(c.n)
        for eid, slot in c.graph.incident(v):
            w = c.graph.edges[eid].weight
            u = c.flag_direction(Flag(v, eid, slot))
            total = tuple(t + w * x for t, x in zip(total, u))
        out.append((v, total))
    return out


def check_balancing(c: TropicalCurve) -> list[tuple[str, tuple]]:
    """Vertices with nonzero residual; empty iff balanced."""
    return [(v, r) for v, r in balancing_residuals(c) if not is_zero_vec(r)]


# -- file format --------------------------------------------------------------


def parse_curve(doc: dict, max_dim: int = DEFAULT_MAX_DIM) -> TropicalCurve:
    if not isinstance(doc, dict):
        raise ValidationError("schema", "curve document must be a JSON object")
    n = doc.get("ambient_dim")
    if not isinstance(n, int) or n < 1:
        raise ValidationError("schema", "ambient_dim must be a positive integer")
    if n > max_dim:
        raise ValidationError(
            "dimension-cap", f"ambient_dim {n} exceeds the configured cap {max_dim}"
        )
    vs = doc.get("vertices")
    es = doc.get("edges")
    if not isinstance(vs, list) or not isinstance(es, list):
        raise ValidationError("schema", "vertices and edges must be lists")
    positions = {}
    vertex_ids = []
    for item in vs:
        if not isinstance(item, dict) or not isinstance(item.get("id"), str):
            raise ValidationError("schema", "each vertex needs a string id")
        vid = item["id"]
        pos = item.get("position")
        if not isinstance(pos, list) or len(pos) != n:
            raise ValidationError(
                "schema", f"vertex {vid} position must list {n} rationals", vertex=vid
            )
        try:
            positions[vid] = vec(parse_rational(p) for p in pos)
        except (ValueError, ZeroDivisionError) as exc:
            raise ValidationError(
                "bad-rational", f"vertex {vid} position: {exc}", vertex=vid
            ) from exc
        vertex_ids.append(vid)
    edges = []
    directions = {}
    for item in es:
        if not isinstance(item, dict) or not isinstance(item.get("id"), str):
            raise ValidationError("schema", "each edge needs a string id")
        eid = item["id"]
        ends = item.get("ends")
        if not isinstance(ends, list) or len(ends) != 2 or not isinstance(ends[0], str):
            raise ValidationError(
                "schema", f"edge {eid} ends must be [vertex, vertex-or-null]", edge=eid
            )
        if ends[1] is not None and not isinstance(ends[1], str):
            raise ValidationError(
                "schema", f"edge {eid} second end must be a vertex id or null", edge=eid
            )
        weight = item.get("weight", 1)
        d = item.get("direction")
        if d is not None:
            if (
                not isinstance(d, list)
                or len(d) != n
                or not all(isinstance(x, int) and not isinstance(x, bool) for x in d)
            ):
                raise ValidationError(
                    "schema", f"edge {eid} direction must list {n} integers", edge=eid
                )
            d = None if all(x == 0 for x in d) else tuple(d)
        else:
            if ends[1] is None:
                raise ValidationError(
                    "missing-direction", f"unbounded edge {eid} needs a direction", edge=eid
                )
            if (
                ends[1] in positions
                and ends[0] in positions
                and positions[ends[0]] == positions[ends[1]]
            ):
                raise ValidationError(
                    "missing-direction",
                    f"contracted edge {eid} needs a direction entry (zero vector for none)",
                    edge=eid,
                )
        edges.append((eid, (ends[0], ends[1]), weight))
        directions[eid] = d
    graph = AbstractGraph(vertex_ids, edges)
    return TropicalCurve(graph, n, positions, directions)


def serialize_curve(c: TropicalCurve) -> dict:
    vs = [
        {"id": v, "position": [rational_str(x) for x in c.positions[v]]}
        for v in c.graph.vertex_ids
    ]
    es = []
    for eid in c.graph.edge_ids:
        e = c.graph.edges[eid]
        d = c.directions[eid]
        item = {
            "id": eid,
            "ends": [e.ends[0], e.ends[1]],
            "weight": e.weight,
            "direction": list(d) if d is not None else [0] * c.n,
        }
        es.append(item)
    return {"ambient_dim": c.n, "vertices": vs, "edges": es}


# -- degree, dimensions --------------------------------------------------------


def degree(c: TropicalCurve) -> tuple[tuple[tuple, int], ...]:
    """Multiset of weighted unbounded directions, as sorted (vector, count)."""
    counts: dict[tuple, int] = {}
    for eid in c.graph.unbounded_edge_ids():
        e = c.graph.edges[eid]
        u = c.flag_direction(Flag(e.ends[0], eid, 0))
        wu = tuple(e.weight * x for x in u)
        counts[wu] = counts.get(wu, 0) + 1
    return tuple(sorted(counts.items()))


def is_immersive(c: TropicalCurve) -> bool:
    return not any(c.is_contracted(eid) for eid in c.graph.bounded_edge_ids())


def expected_dim(c: TropicalCurve) -> int:
    e = len(c.graph.unbounded_edge_ids())
    g = c.graph.genus()
    return e + (c.n - 3) * (1 - g)


# -- image graph ---------------------------------------------------------------


class ImageCurve:
    """The curve after contracting zero-length edges.

    curve: the quotient as a TropicalCurve (may have higher-valent vertices).
    source_map: source vertex -> image vertex.  clusters: image vertex ->
    sorted source vertices.  sigma/s: total and bounded image valences.
    """

    def __init__(self, curve: TropicalCurve, source_map: dict):
        self.curve = curve
        self.source_map = dict(source_map)
        clusters: dict[str, list] = {}
        for src, img in source_map.items():
            clusters.setdefault(img, []).append(src)
        self.clusters = {img: tuple(sorted(c)) for img, c in clusters.items()}
        self.sigma = {v: curve.graph.valence(v) for v in curve.graph.vertex_ids}
        self.s = {
            v: sum(
                1
                for eid, _slot in curve.graph.incident(v)
                if not curve.graph.edges[eid].is_unbounded
            )
            for v in curve.graph.vertex_ids
        }


def contract_image(c: TropicalCurve) -> ImageCurve:
    contracted = [eid for eid in c.graph.bounded_edge_ids() if c.is_contracted(eid)]
    # union-find over contracted edges; a cycle of contracted edges is a
    # contracted loop and is rejected
    parent = {v: v for v in c.graph.vertex_ids}

    def find(v):
        while parent[v] != v:
            parent[v] = parent[parent[v]]
            v = parent[v]
        return v

    for eid in contracted:
        a, b = c.graph.edges[eid].ends
        ra, rb = find(a), find(b)
        if ra == rb:
            raise PreconditionError(
                "contracted-loop",
                f"contracting edge {eid} collapses a loop",
                edge=eid,
            )
        parent[max(ra, rb)] = min(ra, rb)

    source_map = {v: find(v) for v in c.graph.vertex_ids}
    image_vertices = sorted(set(source_map.values()))
    edges = []
    directions = {}
    for eid in c.graph.edge_ids:
        if eid in contracted:
            continue
        e = c.graph.edges[eid]
        a = source_map[e.ends[0]]
        b = None if e.ends[1] is None else source_map[e.ends[1]]
        edges.append((eid, (a, b), e.weight))
        directions[eid] = c.directions[eid]
    graph = AbstractGraph(image_vertices, edges)
    positions = {v: c.positions[v] for v in image_vertices}
    image = TropicalCurve(graph, c.n, positions, directions)
    return ImageCurve(image, source_map)


# -- assumption A ---------------------------------------------------------------


def assumption_a_report(c: TropicalCurve) -> dict:
    """The three-part admissibility check.

    Deformability into an immersive curve has no general decision procedure;
    the report says "guaranteed" (immersive already, or the image curve's
    abundancy map is surjective) or "undetermined".
    """
    higher = [v for v in c.graph.vertex_ids if c.graph.valence(v) > 3]
    trivalent = not higher
    try:
        image = contract_image(c)
        no_contracted_loop = True
    except PreconditionError:
        image = None
        no_contracted_loop = False
    if is_immersive(c):
        deformability = "guaranteed"
    elif image is None:
        deformability = "undetermined"
    else:
        from .obstruction import abundancy_map

        _m, _rank, surjective = abundancy_map(image.curve)
        deformability = "guaranteed" if surjective else "undetermined"
    return {
        "trivalent_source": trivalent,
        "higher_valent_vertices": higher,
        "no_contracted_loop": no_contracted_loop,
        "deformability": deformability,
        "satisfied": no_contracted_loop and deformability == "guaranteed",
    }


# -- star replacement and 3-valent resolution -----------------------------------

# A replacement tree for a vertex is a nested structure over its edge ids:
# the top level is a 3-tuple of subtrees (the vertex keeps valence 3), every
# deeper level is a 2-tuple, and a leaf is an edge id.  A star of valence s
# therefore grows s - 3 new vertices, all 3-valent.


def _tree_leaves(t):
    if isinstance(t, str):
        return [t]
    out = []
    for part in t:
        out.extend(_tree_leaves(part))
    return out


def replace_star(
    ct: CombinatorialType, vertex: str, tree, new_prefix: str
) -> CombinatorialType:
    """Replace the star of a higher-valent vertex by a 3-valent tree.

    The tree's leaves must be exactly the edges at the vertex.  Each internal
    edge points from its parent down to the new node and carries the weighted
    direction sum of the leaves behind the node (primitive part as direction,
    content as weight); the flag sums then vanish at every new vertex.  A
    zero sum is rejected: the replacement would contract an edge.
    """
    g = ct.graph
    star = [eid for eid, _slot in g.incident(vertex)]
    if len(set(star)) != len(star):
        raise PreconditionError(
            "selfloop-star",
            f"cannot replace the star at {vertex}: a loop edge is attached twice",
            vertex=vertex,
        )
    if not isinstance(tree, (tuple, list)) or len(tree) != 3:
        raise PreconditionError(
            "bad-replacement",
            f"replacement tree for {vertex} must have three parts at the top",
            vertex=vertex,
        )
    leaves = _tree_leaves(tuple(tree))
    if sorted(leaves) != sorted(star):
        raise PreconditionError(
            "bad-replacement",
            f"replacement tree for {vertex} must use exactly its incident edges",
            vertex=vertex,
        )

    reattach = {}
    internal = []
    new_vertices = []
    counter = [0]

    def weighted_dir(eid):
        e = g.edges[eid]
        slot = 0 if e.ends[0] == vertex else 1
        u = ct.flag_direction(Flag(vertex, eid, slot))
        return tuple(e.weight * x for x in u)

    def build(t, parent_vertex):
        """Attach subtree t below parent_vertex; return its weighted sum."""
        if isinstance(t, str):
            reattach[t] = parent_vertex
            return weighted_dir(t)
        if len(t) != 2:
            raise PreconditionError(
                "bad-replacement",
                f"replacement tree for {vertex} must branch in pairs below the top",
                vertex=vertex,
            )
        counter[0] += 1
        node = f"{new_prefix}{counter[0]}"
        new_vertices.append(node)
        total = tuple(
            sum(parts) for parts in zip(build(t[0], node), build(t[1], node))
        )
        if all(x == 0 for x in total):
            raise PreconditionError(
                "zero-direction-split",
                f"replacement at {vertex} creates a contracted internal edge",
                vertex=vertex,
            )
        internal.append((parent_vertex, node, total))
        return total

    for part in tree:
        build(part, vertex)

    vertices = list(g.vertex_ids) + new_vertices
    edges = []
    directions = dict(ct.directions)
    for eid in g.edge_ids:
        e = g.edges[eid]
        if vertex in e.ends:
            ends = list(e.ends)
            ends[0 if e.ends[0] == vertex else 1] = reattach[eid]
            edges.append((eid, tuple(ends), e.weight))
        else:
            edges.append((eid, e.ends, e.weight))
    from math import gcd

    for i, (parent_vertex, node, total) in enumerate(internal, 1):
        gg = 0
        for x in total:
            gg = gcd(gg, abs(x))
        eid = f"{new_prefix}edge{i}"
        edges.append((eid, (parent_vertex, node), gg))
        directions[eid] = tuple(x // gg for x in total)
    graph = AbstractGraph(vertices, edges)
    return CombinatorialType(graph, ct.n, directions)


def resolve_to_trivalent(c: TropicalCurve, choices: dict):
    """Replace each higher-valent star by a chosen 3-valent tree.

    Returns a dict with the new combinatorial type, feasibility of a
    realization with strictly positive bounded edge lengths, and a sample
    realization (positions) when one exists.
    """
    if not is_immersive(c):
        raise PreconditionError(
            "not-embedded", "resolution requires an embedded curve (no contracted edges)"
        )
    ct = c.combinatorial_type()
    higher = [v for v in c.graph.vertex_ids if c.graph.valence(v) > 3]
    missing = [v for v in higher if v not in choices]
    if missing:
        raise PreconditionError(
            "missing-choice",
            f"no replacement tree for: {', '.join(missing)}",
            vertices=missing,
        )
    for idx, v in enumerate(higher, 1):
        ct = replace_star(ct, v, choices[v], new_prefix=f"__r{idx}_")
    feasible, positions = _realize_type(ct)
    return {"type": ct, "feasible": feasible, "realization": positions}


def _realize_type(ct: CombinatorialType):
    """Search for positions realizing the type with all lengths positive.

    Lengths are the unknowns; positions follow from a spanning tree.  Cycle
    closure gives the equality system, then Fourier-Motzkin decides strict
    positivity over its solution space.
    """
    from .linalg import AffineInequalities, Matrix, vec_add

    g = ct.graph
    bounded = g.bounded_edge_ids()
    if not bounded:
        return True, {g.vertex_ids[0]: zero_vec(ct.n)}
    index = {eid: i for i, eid in enumerate(bounded)}
    # spanning tree by sorted edge ids
    parent = {v: v for v in g.vertex_ids}

    def find(v):
        while parent[v] != v:
            parent[v] = parent[parent[v]]
            v = parent[v]
        return v

    tree = []
    rest = []
    for eid in bounded:
        a, b = g.edges[eid].ends
        ra, rb = find(a), find(b)
        if ra == rb:
            rest.append(eid)
        else:
            parent[max(ra, rb)] = min(ra, rb)
            tree.append(eid)
    # express each vertex position as a linear map of lengths
    root = g.vertex_ids[0]
    coeff = {root: {}}  # vertex -> {edge index: signed direction tuple}
    todo = [root]
    tree_set = set(tree)
    while todo:
        v = todo.pop()
        for eid, slot in g.incident(v):
            if eid not in tree_set:
                continue
            o = g.edges[eid].ends[1 - slot]
            if o in coeff:
                continue
            d = ct.directions[eid]
            # moving from ends[0] to ends[1] adds +length*direction
            sign = 1 if slot == 0 else -1
            m = dict(coeff[v])
            m[index[eid]] = tuple(sign * x for x in d)
            coeff[o] = m
            todo.append(o)
    rows = []
    for eid in rest:
        a, b = g.edges[eid].ends
        d = ct.directions[eid]
        for k in range(ct.n):
            row = [Q0] * len(bounded)
            for j, dv in coeff[b].items():
                row[j] += dv[k]
            for j, dv in coeff[a].items():
                row[j] -= dv[k]
            row[index[eid]] -= d[k]
            rows.append(row)
    kernel = Matrix(rows, cols=len(bounded)).kernel()
    ineqs = AffineInequalities(kernel.dim)
    for i in range(len(bounded)):
        ineqs.add([bv[i] for bv in kernel.basis], Q0)
    w = ineqs.witness()
    if w is None:
        return False, None
    lengths = [Q0] * len(bounded)
    for c_val, bv in zip(w, kernel.basis):
        lengths = [a + c_val * x for a, x in zip(lengths, bv)]
    positions = {}
    for v in g.vertex_ids:
        p = zero_vec(ct.n)
        for j, dv in coeff[v].items():
            p = vec_add(p, vec_scale(lengths[j], dv))
        positions[v] = p
    return True, positions
