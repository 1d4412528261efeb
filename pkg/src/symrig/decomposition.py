"""Structured decompositions used by the direction constructions: an
identity-colored spanning tree plus gain-(1,1) pieces, two gain-(1,1)
halves with base vertices, and the overlap graph of those bases."""

from __future__ import annotations

from dataclasses import dataclass
from math import gcd

from .colored_graph import ColoredGraph, build_lift, edge_components, spanning_forest, \
    switch, zeroing_potentials, cycle_gain
from .errors import InternalDisagreement, NotInClass
from .sparsity import SparsityClass, gain11_independent, is_class, matroid_union_decompose


@dataclass(frozen=True)
class MapComponent:
    """Connected edge set with exactly one cycle.

    ``potentials`` satisfy h(head) = h(tail) + color on every edge except
    ``closing``, with h(base) = 0. ``cycle`` is the closed walk from the
    base that ends with the closing edge.
    """

    edges: tuple
    vertices: tuple
    base: int
    closing: int
    tree: tuple
    potentials: dict
    cycle: tuple
    gain: int

    def to_dict(self) -> dict:
        return {"edges": list(self.edges), "base": self.base, "closing": self.closing,
                "gain": self.gain}


def _tree_walk(g: ColoredGraph, tree, a, b):
    adj = {}
    for i in tree:
        e = g.edges[i]
        adj.setdefault(e.tail, []).append((e.head, i, True))
        adj.setdefault(e.head, []).append((e.tail, i, False))
    prev = {a: None}
    stack = [a]
    while stack:
        u = stack.pop()
        for w, i, fwd in sorted(adj.get(u, ())):
            if w not in prev:
                prev[w] = (u, i, fwd)
                stack.append(w)
    steps = []
    u = b
    while prev[u] is not None:
        p, i, fwd = prev[u]
        steps.append((i, fwd))
        u = p
    return steps[::-1]


def map_component(g: ColoredGraph, edges) -> MapComponent:
    edges = tuple(sorted(edges))
    forest = spanning_forest(g, edges)
    extra = [i for i in edges if i not in set(forest)]
    if len(extra) != 1:
        raise InternalDisagreement(f"component {edges} has {len(extra)} independent cycles")
    fc = _tree_walk(g, forest, g.edges[extra[0]].head, g.edges[extra[0]].tail)
    cyc_edges = {i for i, _ in fc} | {extra[0]}
    cyc_verts = set()
    for i in cyc_edges:
        cyc_verts.update((g.edges[i].tail, g.edges[i].head))
    base = min(cyc_verts)
    closing = min(i for i in cyc_edges if base in (g.edges[i].tail, g.edges[i].head))
    tree = tuple(i for i in edges if i != closing)
    h = {base: 0}
    stack = [base]
    adj = {}
    for i in tree:
        e = g.edges[i]
        adj.setdefault(e.tail, []).append((e.head, e.color))
        adj.setdefault(e.head, []).append((e.tail, -e.color))
    while stack:
        u = stack.pop()
        for w, c in adj.get(u, ()):
            if w not in h:
                h[w] = (h[u] + c) % g.k
                stack.append(w)
    ce = g.edges[closing]
    if ce.is_loop:
        walk = [(closing, True)]
    elif ce.head == base:
        walk = _tree_walk(g, tree, base, ce.tail) + [(closing, True)]
    else:
        walk = _tree_walk(g, tree, base, ce.head) + [(closing, False)]
    cg = cycle_gain(g, walk)
    verts = tuple(sorted(h))
    return MapComponent(edges, verts, base, closing, tree, h, cg.cycle, cg.gain)


@dataclass(frozen=True)
class NiceDecomposition:
    recolored: ColoredGraph
    potentials: dict            # switching potentials: recolored = switch(g, potentials)
    tree_edges: tuple
    map_edges: tuple
    components: tuple           # MapComponent per piece of map_edges

    def to_dict(self) -> dict:
        return {"recolored": self.recolored.to_dict(), "tree_edges": list(self.tree_edges),
                "map_edges": list(self.map_edges),
                "components": [c.to_dict() for c in self.components],
                "bases": [c.base for c in self.components]}


def nice_decompose(g: ColoredGraph, check: bool = True) -> NiceDecomposition:
    """Spanning tree colored 0 plus a gain-(1,1) graph, for reflection-(2,2)."""
    if check and not is_class(g, SparsityClass.REFLECTION22).member:
        raise NotInClass("input is not reflection-(2,2)")
    dec = matroid_union_decompose(g, SparsityClass.REFLECTION22)
    if not dec.success:
        raise NotInClass("no tree plus gain-(1,1) decomposition")
    tree, X = dec.parts
    phi = zeroing_potentials(g, tree)
    rec = switch(g, phi)
    comps = tuple(map_component(rec, c) for c in edge_components(rec, X))
    out = NiceDecomposition(rec, phi, tuple(tree), tuple(X), comps)
    _check_lift_structure(out)
    return out


def _check_lift_structure(dec: NiceDecomposition) -> None:
    g = dec.recolored
    if any(g.edges[i].color != 0 for i in dec.tree_edges):
        raise InternalDisagreement("tree edge kept a nonzero color")
    lift = build_lift(g)
    if dec.tree_edges:
        parts = lift.edge_components(dec.tree_edges)
        if len(parts) != g.k:
            raise InternalDisagreement(f"tree lifts to {len(parts)} pieces, expected {g.k}")
    for c in dec.components:
        want = gcd(g.k, c.gain)
        got = len(lift.edge_components(c.edges))
        if got != want:
            raise InternalDisagreement(f"map piece {c.edges} lifts to {got} pieces, expected {want}")


@dataclass(frozen=True)
class ConeDecomposition:
    halves: tuple               # (X edges, Y edges)
    components: tuple           # (X pieces, Y pieces), each a tuple of MapComponent

    @property
    def bases(self):
        return tuple(tuple(c.base for c in h) for h in self.components)

    def to_dict(self) -> dict:
        return {"halves": [list(h) for h in self.halves],
                "components": [[c.to_dict() for c in h] for h in self.components]}


def cone_decompose(g: ColoredGraph, check: bool = True) -> ConeDecomposition:
    """Two spanning gain-(1,1) graphs, for cone-(2,2)."""
    if check and not is_class(g, SparsityClass.CONE22).member:
        raise NotInClass("input is not cone-(2,2)")
    dec = matroid_union_decompose(g, SparsityClass.CONE22)
    if not dec.success:
        raise NotInClass("no decomposition into two gain-(1,1) graphs")
    halves = tuple(tuple(p) for p in dec.parts)
    for h in halves:
        if len(h) != g.n or not gain11_independent(g, h):
            raise InternalDisagreement(f"half {h} is not a spanning gain-(1,1) graph")
    comps = tuple(tuple(map_component(g, c) for c in edge_components(g, h)) for h in halves)
    return ConeDecomposition(halves, comps)


@dataclass(frozen=True)
class OverlapGraph:
    """Nodes are ("x", i) / ("y", j) for the pieces of the two halves."""

    nodes: tuple
    edges: tuple                # (source node, target node)
    pred: dict                  # the unique in-neighbour of every node
    cycles: tuple               # one directed cycle per component, as node lists
    paths: dict                 # node -> directed path from a cycle node to it

    def to_dict(self) -> dict:
        def name(v):
            return f"{v[0]}{v[1]}"
        return {"nodes": [name(v) for v in self.nodes],
                "edges": [[name(a), name(b)] for a, b in self.edges],
                "cycles": [[name(v) for v in c] for c in self.cycles]}


def overlap_graph(g: ColoredGraph, dec: ConeDecomposition) -> OverlapGraph:
    X, Y = dec.components
    nodes = tuple([("x", i) for i in range(len(X))] + [("y", j) for j in range(len(Y))])
    edges = []
    for i, xc in enumerate(X):
        for j, yc in enumerate(Y):
            if yc.base in xc.vertices:
                edges.append((("x", i), ("y", j)))
            if xc.base in yc.vertices:
                edges.append((("y", j), ("x", i)))
    pred = {}
    for a, b in edges:
        if b in pred:
            raise InternalDisagreement(f"overlap node {b} has in-degree above 1")
        pred[b] = a
    missing = [v for v in nodes if v not in pred]
    if missing:
        raise InternalDisagreement(f"overlap nodes without an in-edge: {missing}")
    # following predecessors from any node ends in the cycle of its component
    cycles, on_cycle = [], {}
    for v in nodes:
        seen = []
        u = v
        while u not in seen and u not in on_cycle:
            seen.append(u)
            u = pred[u]
        if u in on_cycle:
            continue
        cyc = seen[seen.index(u):]
        cyc = cyc[::-1]              # forward orientation: pred[c[i+1]] == c[i]
        start = cyc.index(min(cyc))
        cyc = cyc[start:] + cyc[:start]
        for c in cyc:
            on_cycle[c] = len(cycles)
        cycles.append(cyc)
    paths = {}
    for v in nodes:
        walk = [v]
        while walk[-1] not in on_cycle:
            walk.append(pred[walk[-1]])
        paths[v] = walk[::-1]
    return OverlapGraph(nodes, tuple(edges), pred, tuple(tuple(c) for c in cycles), paths)
