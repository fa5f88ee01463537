"""Abstract weighted graphs with flags, genus, and loop decomposition.

Graphs may have parallel edges and (rarely useful but legal) self-loops.
Unbounded edges have exactly one vertex endpoint; the missing endpoint is
represented by None.  All iteration orders are fixed by sorted ids so that
every downstream matrix and report is reproducible.
"""

from __future__ import annotations

from typing import Iterable, NamedTuple

from .errors import PreconditionError, ValidationError


class Edge(NamedTuple):
    id: str
    ends: tuple  # (vid, vid) bounded, (vid, None) unbounded
    weight: int

    @property
    def is_unbounded(self) -> bool:
        return self.ends[1] is None

    @property
    def is_selfloop(self) -> bool:
        return not self.is_unbounded and self.ends[0] == self.ends[1]


class Flag(NamedTuple):
    vertex: str
    edge: str
    slot: int  # end index within the edge; disambiguates self-loop flags


class Chain(NamedTuple):
    """Maximal run of loop-part edges between junction vertices.

    vertices has one more entry than edges for open chains; for a closed
    chain (a cycle none of whose vertices is a junction) the first and last
    vertex coincide and the walk starts at the smallest edge id.
    """

    edges: tuple[str, ...]
    vertices: tuple[str, ...]
    closed: bool


class LoopDecomposition(NamedTuple):
    loop_edges: frozenset[str]
    bouquets: tuple[frozenset[str], ...]
    chains: tuple[Chain, ...]
    tree_components: tuple[tuple[frozenset[str], str], ...]  # (edge set, "U"|"B")


class AbstractGraph:
    """Weighted connected finite graph with bounded and unbounded edges."""

    def __init__(self, vertices: Iterable[str], edges: Iterable[tuple]):
        vs = sorted(set(vertices))
        if not vs:
            raise ValidationError("empty-graph", "graph has no vertices")
        if len(vs) != len(list(vertices)):
            raise ValidationError("duplicate-vertex", "vertex ids must be unique")
        emap: dict[str, Edge] = {}
        for eid, ends, weight in edges:
            if eid in emap:
                raise ValidationError("duplicate-edge", f"edge id repeated: {eid}", edge=eid)
            if not isinstance(weight, int) or weight < 1:
                raise ValidationError("bad-weight", f"edge {eid} weight must be a positive integer", edge=eid)
            a, b = ends
            if a not in set(vs) or (b is not None and b not in set(vs)):
                raise ValidationError("unknown-endpoint", f"edge {eid} references an unknown vertex", edge=eid)
            emap[eid] = Edge(eid, (a, b), weight)
        self.vertex_ids: tuple[str, ...] = tuple(vs)
        self.edge_ids: tuple[str, ...] = tuple(sorted(emap))
        self.edges: dict[str, Edge] = {eid: emap[eid] for eid in self.edge_ids}
        self._adj: dict[str, list[tuple[str, int]]] = {v: [] for v in self.vertex_ids}
        for eid in self.edge_ids:
            e = self.edges[eid]
            self._adj[e.ends[0]].append((eid, 0))
            if e.ends[1] is not None:
                self._adj[e.ends[1]].append((eid, 1))
        for v in self.vertex_ids:
            if not self._adj[v]:
                raise ValidationError("isolated-vertex", f"vertex {v} has no incident edge", vertex=v)
        if not self._connected():
            raise ValidationError("disconnected", "graph is not connected")

    # -- basic structure ---------------------------------------------------

    def _connected(self) -> bool:
        seen = {self.vertex_ids[0]}
        stack = [self.vertex_ids[0]]
        while stack:
            v = stack.pop()
            for eid, slot in self._adj[v]:
                o = self.edges[eid].ends[1 - slot]
                if o is not None and o not in seen:
                    seen.add(o)
                    stack.append(o)
        return len(seen) == len(self.vertex_ids)

    def incident(self, v: str) -> list[tuple[str, int]]:
        """(edge id, slot) pairs at v, sorted by edge id then slot."""
        return sorted(self._adj[v])

    def valence(self, v: str) -> int:
        return len(self._adj[v])

    def flags(self) -> list[Flag]:
        out = []
        for eid in self.edge_ids:
            e = self.edges[eid]
            out.append(Flag(e.ends[0], eid, 0))
            if e.ends[1] is not None:
                out.append(Flag(e.ends[1], eid, 1))
        return out

    def bounded_edge_ids(self) -> list[str]:
        return [eid for eid in self.edge_ids if not self.edges[eid].is_unbounded]

    def unbounded_edge_ids(self) -> list[str]:
        return [eid for eid in self.edge_ids if self.edges[eid].is_unbounded]

    def is_trivalent(self) -> bool:
        return all(self.valence(v) <= 3 for v in self.vertex_ids)

    # -- counts ------------------------------------------------------------

    def genus(self) -> int:
        return len(self.bounded_edge_ids()) - len(self.vertex_ids) + 1

    def euler_counts(self) -> tuple[int, int, int, int]:
        """(V, e_inn, e, e_tot); satisfies 1 - g = V - e_inn."""
        v = len(self.vertex_ids)
        e_inn = len(self.bounded_edge_ids())
        e = len(self.unbounded_edge_ids())
        return (v, e_inn, e, e_inn + e)

    # -- loop decomposition --------------------------------------------------

    def _endpoints_connected_without(self, eid: str) -> bool:
        e = self.edges[eid]
        a, b = e.ends
        seen = {a}
        stack = [a]
        while stack:
            v = stack.pop()
            for fid, slot in self._adj[v]:
                if fid == eid:
                    continue
                o = self.edges[fid].ends[1 - slot]
                if o is not None and o not in seen:
                    seen.add(o)
                    stack.append(o)
        return b in seen

    def loop_part(self) -> frozenset[str]:
        """Bounded edges whose interior removal lowers the first Betti number."""
        out = set()
        for eid in self.bounded_edge_ids():
            e = self.edges[eid]
            if e.is_selfloop or self._endpoints_connected_without(eid):
                out.add(eid)
        return frozenset(out)

    def loop_decomposition(self) -> LoopDecomposition:
        loop = self.loop_part()
        bouquets = _edge_components(self, loop)
        chains = _cut_chains(self, loop)
        trees = _tree_components(self, loop)
        return LoopDecomposition(loop, bouquets, chains, trees)


def _edge_components(g: AbstractGraph, edge_set: frozenset[str]) -> tuple[frozenset[str], ...]:
    """Connected components of the subgraph on the given edges."""
    remaining = set(edge_set)
    comps = []
    while remaining:
        seed = min(remaining)
        comp = {seed}
        remaining.discard(seed)
        frontier = [seed]
        while frontier:
            eid = frontier.pop()
            for v in g.edges[eid].ends:
                if v is None:
                    continue
                for fid, _slot in g._adj[v]:
                    if fid in remaining:
                        remaining.discard(fid)
                        comp.add(fid)
                        frontier.append(fid)
        comps.append(frozenset(comp))
    return tuple(sorted(comps, key=min))


def _loop_valence(g: AbstractGraph, loop: frozenset[str]) -> dict[str, int]:
    val = {v: 0 for v in g.vertex_ids}
    for eid in loop:
        for v in g.edges[eid].ends:
            val[v] += 1  # a self-loop contributes twice via its two ends
    return val


def _cut_chains(g: AbstractGraph, loop: frozenset[str]) -> tuple[Chain, ...]:
    lval = _loop_valence(g, loop)
    junctions = {v for v, k in lval.items() if k >= 3}
    used: set[str] = set()
    chains: list[Chain] = []

    def walk(start_v: str, eid: str) -> Chain:
        edges = [eid]
        verts = [start_v]
        used.add(eid)
        e = g.edges[eid]
        cur = e.ends[1] if e.ends[0] == start_v else e.ends[0]
        if e.is_selfloop:
            cur = start_v
        verts.append(cur)
        while cur not in junctions:
            nxt = None
            for fid, slot in g.incident(cur):
                if fid in loop and fid not in used:
                    nxt = (fid, slot)
                    break
            if nxt is None:
                break
            fid, slot = nxt
            used.add(fid)
            edges.append(fid)
            f = g.edges[fid]
            cur = f.ends[1 - slot]
            verts.append(cur)
        return Chain(tuple(edges), tuple(verts), closed=False)

    for j in sorted(junctions):
        for eid, _slot in g.incident(j):
            if eid in loop and eid not in used:
                chains.append(walk(j, eid))
    # leftover loop edges belong to cycles with no junction: closed chains
    leftover = sorted(loop - used)
    while leftover:
        start = leftover[0]
        e = g.edges[start]
        ch = walk(e.ends[0], start)
        chains.append(Chain(ch.edges, ch.vertices, closed=True))
        leftover = sorted(loop - used)
    return tuple(sorted(chains, key=lambda c: c.edges[0]))


def _tree_components(g: AbstractGraph, loop: frozenset[str]) -> tuple[tuple[frozenset[str], str], ...]:
    non_loop = frozenset(eid for eid in g.edge_ids if eid not in loop)
    comps = _edge_components(g, non_loop)
    loop_vertices = set()
    for eid in loop:
        loop_vertices.update(v for v in g.edges[eid].ends if v is not None)
    out = []
    for comp in comps:
        attach = 0
        for eid in comp:
            for v in g.edges[eid].ends:
                if v is not None and v in loop_vertices:
                    attach += 1
        out.append((comp, "U" if attach == 1 else "B"))
    return tuple(sorted(out, key=lambda t: min(t[0])))


def require_trivalent(g: AbstractGraph, what: str = "operation"):
    bad = [v for v in g.vertex_ids if g.valence(v) > 3]
    if bad:
        raise PreconditionError(
            "not-trivalent",
            f"{what} requires a 3-valent graph; offending vertices: {', '.join(bad)}",
            vertices=bad,
        )
