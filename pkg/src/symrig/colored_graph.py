"""Z/kZ-colored quotient graphs, the gain map, recoloring, lifts and
reductions of non-free actions.

A colored graph stores one directed edge per edge orbit of a symmetric
framework. The edge ``tail -> head`` with color ``c`` lifts to the edges
``(tail, a) -> (head, a + c)`` for every group element ``a``.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from math import gcd
from typing import Iterable, Sequence

ROTATION = "rotation"
REFLECTION = "reflection"


@dataclass(frozen=True)
class GroupSpec:
    kind: str
    order: int

    def __post_init__(self):
        if self.kind not in (ROTATION, REFLECTION):
            raise ValueError(f"unknown group kind {self.kind!r}")
        if self.kind == REFLECTION and self.order != 2:
            raise ValueError("a reflection group has order 2")
        if self.order < 2:
            raise ValueError("group order must be at least 2")

    @classmethod
    def rotation(cls, k: int) -> "GroupSpec":
        return cls(ROTATION, k)

    @classmethod
    def reflection(cls) -> "GroupSpec":
        return cls(REFLECTION, 2)

    @property
    def is_rotation(self) -> bool:
        return self.kind == ROTATION

    def to_dict(self) -> dict:
        return {"kind": self.kind, "order": self.order}


@dataclass(frozen=True)
class Edge:
    tail: int
    head: int
    color: int

    @property
    def is_loop(self) -> bool:
        return self.tail == self.head

    def to_dict(self) -> dict:
        return {"tail": self.tail, "head": self.head, "color": self.color}


@dataclass(frozen=True)
class ColoredGraph:
    """Directed multigraph with colors in Z/kZ. Edge indices are stable."""

    n: int
    edges: tuple
    group: GroupSpec

    def __post_init__(self):
        object.__setattr__(self, "edges", tuple(
            e if isinstance(e, Edge) else Edge(*e) for e in self.edges))

    @classmethod
    def build(cls, n: int, edges: Iterable, kind: str = ROTATION, k: int = 2) -> "ColoredGraph":
        """Shorthand: ``edges`` as ``(tail, head, color)`` triples."""
        group = GroupSpec.reflection() if kind == REFLECTION else GroupSpec.rotation(k)
        return cls(n, tuple(Edge(*e) for e in edges), group)

    @property
    def m(self) -> int:
        return len(self.edges)

    @property
    def k(self) -> int:
        return self.group.order

    def arrays(self):
        """(tails, heads, colors) as plain lists, the kernel input format."""
        return ([e.tail for e in self.edges], [e.head for e in self.edges],
                [e.color % self.k for e in self.edges])

    def with_edges(self, edges: Iterable, n: int | None = None) -> "ColoredGraph":
        return ColoredGraph(self.n if n is None else n, tuple(edges), self.group)

    def add_edge(self, tail: int, head: int, color: int) -> "ColoredGraph":
        return self.with_edges(self.edges + (Edge(tail, head, color % self.k),))

    def drop_edges(self, idx: Iterable[int]) -> "ColoredGraph":
        gone = set(idx)
        return self.with_edges(e for i, e in enumerate(self.edges) if i not in gone)

    def restrict(self, idx: Iterable[int]) -> "ColoredGraph":
        """Keep only the listed edges (vertex ids unchanged)."""
        return self.with_edges(self.edges[i] for i in sorted(set(idx)))

    def vertices_of(self, idx: Iterable[int]) -> list:
        vs = set()
        for i in idx:
            vs.add(self.edges[i].tail)
            vs.add(self.edges[i].head)
        return sorted(vs)

    def compact(self, idx: Iterable[int] | None = None):
        """Edge-induced subgraph with vertices renumbered 0..n'-1.

        Returns (graph, old vertex ids in new order).
        """
        idx = range(self.m) if idx is None else sorted(set(idx))
        verts = self.vertices_of(idx)
        new = {v: i for i, v in enumerate(verts)}
        edges = [Edge(new[self.edges[i].tail], new[self.edges[i].head], self.edges[i].color)
                 for i in idx]
        return ColoredGraph(len(verts), tuple(edges), self.group), verts

    def is_connected(self) -> bool:
        return self.n > 0 and len(vertex_components(self)) == 1

    def to_dict(self) -> dict:
        return {"group": self.group.to_dict(), "n": self.n,
                "edges": [e.to_dict() for e in self.edges]}

    def to_json(self, indent: int | None = None) -> str:
        return json.dumps(self.to_dict(), indent=indent)

    @classmethod
    def from_dict(cls, data: dict) -> "ColoredGraph":
        try:
            grp = data["group"]
            group = GroupSpec(str(grp["kind"]), int(grp["order"]))
            n = int(data["n"])
            edges = tuple(Edge(int(e["tail"]), int(e["head"]), int(e["color"]))
                          for e in data["edges"])
        except (KeyError, TypeError) as exc:
            raise ValueError(f"malformed colored graph: {exc!r}") from None
        return cls(n, edges, group)

    @classmethod
    def from_json(cls, text: str) -> "ColoredGraph":
        return cls.from_dict(json.loads(text))


@dataclass(frozen=True)
class Diagnostic:
    level: str          # "error" or "warning"
    invariant: str
    element: str

    def __str__(self):
        return f"{self.level}: {self.invariant} ({self.element})"


def validate(g: ColoredGraph) -> list:
    """All violated invariants of ``g``; empty when it is well formed."""
    out = []
    if g.n < 0:
        out.append(Diagnostic("error", "negative vertex count", f"n={g.n}"))
    for i, e in enumerate(g.edges):
        for end in (e.tail, e.head):
            if not 0 <= end < g.n:
                out.append(Diagnostic("error", "vertex out of range", f"edge {i}: vertex {end}"))
        if not 0 <= e.color < g.k:
            out.append(Diagnostic("error", "color out of range", f"edge {i}: color {e.color}"))
        elif e.is_loop and e.color == 0:
            out.append(Diagnostic("warning", "trivial-gain self-loop", f"edge {i} at vertex {e.tail}"))
    return out


def check_valid(g: ColoredGraph) -> None:
    errors = [d for d in validate(g) if d.level == "error"]
    if errors:
        raise ValueError("; ".join(map(str, errors)))


# ---------------------------------------------------------------- forests

class _Potentials:
    """Union-find with Z/kZ potentials: label(head) = label(tail) + color."""

    def __init__(self, k: int):
        self.k = k
        self.parent = {}
        self.pot = {}

    def find(self, v):
        if v not in self.parent:
            self.parent[v] = v
            self.pot[v] = 0
            return v, 0
        path = []
        while self.parent[v] != v:
            path.append(v)
            v = self.parent[v]
        root, acc = v, 0
        for u in reversed(path):
            acc = (acc + self.pot[u]) % self.k
            self.parent[u] = root
            self.pot[u] = acc
        return root, (self.pot[path[0]] if path else 0)

    def union(self, tail, head, color) -> int | None:
        """Merge and return None, or return the gain of the closed cycle."""
        rt, pt = self.find(tail)
        rh, ph = self.find(head)
        if rt != rh:
            self.parent[rh] = rt
            self.pot[rh] = (pt + color - ph) % self.k
            return None
        return (pt + color - ph) % self.k


def edge_components(g: ColoredGraph, edge_subset: Iterable[int] | None = None) -> list:
    """Connected components of an edge-induced subgraph as sorted edge lists,
    ordered by smallest edge index."""
    idx = sorted(set(range(g.m) if edge_subset is None else edge_subset))
    uf = _Potentials(1)
    for i in idx:
        uf.union(g.edges[i].tail, g.edges[i].head, 0)
    groups = {}
    for i in idx:
        groups.setdefault(uf.find(g.edges[i].tail)[0], []).append(i)
    return sorted(groups.values(), key=lambda c: c[0])


def vertex_components(g: ColoredGraph) -> list:
    """Connected components of the whole graph as sorted vertex lists
    (isolated vertices included)."""
    uf = _Potentials(1)
    for v in range(g.n):
        uf.find(v)
    for e in g.edges:
        uf.union(e.tail, e.head, 0)
    groups = {}
    for v in range(g.n):
        groups.setdefault(uf.find(v)[0], []).append(v)
    return sorted(groups.values(), key=lambda c: c[0])


def spanning_forest(g: ColoredGraph, edge_subset: Iterable[int] | None = None,
                    prefer: Iterable[int] = ()) -> list:
    """Kruskal forest of the subset in index order; ``prefer`` edges go first."""
    idx = sorted(set(range(g.m) if edge_subset is None else edge_subset))
    prefer = [i for i in sorted(set(prefer)) if i in set(idx)]
    rest = [i for i in idx if i not in set(prefer)]
    uf = _Potentials(1)
    forest = []
    for i in prefer + rest:
        e = g.edges[i]
        if uf.union(e.tail, e.head, 0) is None:
            forest.append(i)
    return sorted(forest)


def forest_potentials(g: ColoredGraph, forest: Sequence[int]) -> dict:
    """Potentials phi with phi(head) = phi(tail) + color on every forest edge
    and phi = 0 at the smallest vertex of each tree. Vertices off the forest
    get 0."""
    adj = {}
    for i in forest:
        e = g.edges[i]
        adj.setdefault(e.tail, []).append((e.head, e.color))
        adj.setdefault(e.head, []).append((e.tail, -e.color))
    phi = {}
    for root in sorted(adj):
        if root in phi:
            continue
        phi[root] = 0
        stack = [root]
        while stack:
            u = stack.pop()
            for w, c in adj[u]:
                if w not in phi:
                    phi[w] = (phi[u] + c) % g.k
                    stack.append(w)
    return {v: phi.get(v, 0) for v in range(g.n)}


@dataclass(frozen=True)
class CycleGain:
    """Closed walk given as ``(edge index, forward)`` steps, with its gain."""

    cycle: tuple
    gain: int

    def to_dict(self) -> dict:
        return {"cycle": [[i, bool(f)] for i, f in self.cycle], "gain": self.gain}


def cycle_gain(g: ColoredGraph, cycle: Sequence) -> CycleGain:
    """Signed color sum along a closed walk; reversed edges count negatively."""
    steps = tuple((int(i), bool(f)) for i, f in cycle)
    if not steps:
        return CycleGain((), 0)
    pos = None
    start = None
    total = 0
    for i, fwd in steps:
        e = g.edges[i]
        a, b = (e.tail, e.head) if fwd else (e.head, e.tail)
        if pos is None:
            start = a
        elif pos != a:
            raise ValueError(f"walk breaks at edge {i}")
        pos = b
        total += e.color if fwd else -e.color
    if pos != start:
        raise ValueError("walk is not closed")
    return CycleGain(steps, total % g.k)


def fundamental_cycles(g: ColoredGraph, edge_subset: Iterable[int] | None = None,
                       forest: Sequence[int] | None = None) -> list:
    """One CycleGain per non-forest edge of the subset."""
    idx = sorted(set(range(g.m) if edge_subset is None else edge_subset))
    if forest is None:
        forest = spanning_forest(g, idx)
    fset = set(forest)
    adj = {}
    for i in forest:
        e = g.edges[i]
        adj.setdefault(e.tail, []).append((e.head, i, True))
        adj.setdefault(e.head, []).append((e.tail, i, False))

    def tree_path(a, b):
        # walk from a to b inside the forest
        prev = {a: None}
        stack = [a]
        while stack:
            u = stack.pop()
            if u == b:
                break
            for w, i, fwd in adj.get(u, ()):
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

    out = []
    for i in idx:
        if i in fset:
            continue
        e = g.edges[i]
        out.append(cycle_gain(g, [(i, True)] + tree_path(e.head, e.tail)))
    return out


def rho_image(g: ColoredGraph, edge_subset: Iterable[int] | None = None) -> list:
    """Per component (ordered as ``edge_components``), the generator
    gcd(k, gains) of the image subgroup; k means trivial."""
    out = []
    for comp in edge_components(g, edge_subset):
        d = g.k
        for cg in fundamental_cycles(g, comp):
            d = gcd(d, cg.gain)
        out.append(d)
    return out


def rho_image_trivial(g: ColoredGraph, edge_subset: Iterable[int] | None = None) -> list:
    """Per component of the edge-induced subgraph: is the gain image {0}?"""
    return [d == g.k for d in rho_image(g, edge_subset)]


def switch(g: ColoredGraph, phi: dict) -> ColoredGraph:
    """Equivalent coloring color + phi(tail) - phi(head)."""
    return g.with_edges(
        Edge(e.tail, e.head, (e.color + phi.get(e.tail, 0) - phi.get(e.head, 0)) % g.k)
        for e in g.edges)


def zeroing_potentials(g: ColoredGraph, edge_subset: Iterable[int]) -> dict:
    """Potentials whose switch makes every edge of the subset color 0."""
    sub = sorted(set(edge_subset))
    if not all(rho_image_trivial(g, sub)):
        raise ValueError("subgraph has nontrivial gain image")
    forest = spanning_forest(g, range(g.m), prefer=spanning_forest(g, sub))
    return forest_potentials(g, forest)


def recolor_zero_on(g: ColoredGraph, edge_subset: Iterable[int]) -> ColoredGraph:
    """Equivalent coloring that vanishes on a subgraph with trivial gain image."""
    return switch(g, zeroing_potentials(g, edge_subset))


def equivalent_colorings(g: ColoredGraph, h: ColoredGraph) -> bool:
    """Same underlying graph and same gains on a common cycle basis."""
    if (g.n, g.m, g.k) != (h.n, h.m, h.k):
        return False
    if any((a.tail, a.head) != (b.tail, b.head) for a, b in zip(g.edges, h.edges)):
        return False
    forest = spanning_forest(g)
    return ([c.gain for c in fundamental_cycles(g, forest=forest)]
            == [c.gain for c in fundamental_cycles(h, forest=forest)])


# ------------------------------------------------------------------- lifts

@dataclass(frozen=True)
class Lift:
    """Cover graph. Lifted vertex ``(i, a)`` has id ``i * k + a``."""

    base: ColoredGraph
    vertices: tuple
    edges: tuple        # (tail id, head id, base edge index)
    action: tuple       # action[a][v] = id of a . v

    @property
    def k(self) -> int:
        return self.base.k

    def vid(self, i: int, a: int) -> int:
        return i * self.k + a % self.k

    def components(self) -> list:
        uf = _Potentials(1)
        for v in range(len(self.vertices)):
            uf.find(v)
        for t, h, _ in self.edges:
            uf.union(t, h, 0)
        groups = {}
        for v in range(len(self.vertices)):
            groups.setdefault(uf.find(v)[0], []).append(v)
        return sorted(groups.values())

    def edge_components(self, base_edges: Iterable[int]) -> list:
        """Components of the lift of an edge-induced base subgraph."""
        keep = set(base_edges)
        uf = _Potentials(1)
        verts = set()
        for t, h, i in self.edges:
            if i in keep:
                uf.union(t, h, 0)
                verts.update((t, h))
        groups = {}
        for v in verts:
            groups.setdefault(uf.find(v)[0], []).append(v)
        return sorted(sorted(c) for c in groups.values())

    def quotient(self) -> ColoredGraph:
        """Orbit representatives with tail in the identity fiber."""
        k = self.k
        edges = []
        for t, h, _ in self.edges:
            if t % k == 0:
                edges.append(Edge(t // k, h // k, h % k))
        return ColoredGraph(self.base.n, tuple(edges), self.base.group)

    def to_description(self) -> dict:
        return {"group": self.base.group.to_dict(), "n": len(self.vertices),
                "action": list(self.action[1 % self.k]),
                "edges": [[t, h] for t, h, _ in self.edges]}


def build_lift(g: ColoredGraph) -> Lift:
    check_valid(g)
    k = g.k
    verts = tuple((i, a) for i in range(g.n) for a in range(k))
    edges = tuple((e.tail * k + a, e.head * k + (a + e.color) % k, idx)
                  for idx, e in enumerate(g.edges) for a in range(k))
    action = tuple(tuple(i * k + (a + b) % k for i in range(g.n) for a in range(k))
                   for b in range(k))
    return Lift(g, verts, edges, action)


# --------------------------------------------------- non-free reductions

@dataclass(frozen=True)
class LiftedDescription:
    """A symmetric graph given in full: group, vertex count, the permutation
    induced by the group generator, and undirected edges."""

    group: GroupSpec
    n: int
    action: tuple
    edges: tuple = field(default_factory=tuple)

    @classmethod
    def from_dict(cls, data: dict) -> "LiftedDescription":
        try:
            grp = data["group"]
            group = GroupSpec(str(grp["kind"]), int(grp["order"]))
            n = int(data["n"])
            action = tuple(int(x) for x in data["action"])
            edges = tuple((int(u), int(v)) for u, v in data["edges"])
        except (KeyError, TypeError, ValueError) as exc:
            raise ValueError(f"malformed lifted description: {exc!r}") from None
        desc = cls(group, n, action, edges)
        desc.check()
        return desc

    def to_dict(self) -> dict:
        return {"group": self.group.to_dict(), "n": self.n,
                "action": list(self.action), "edges": [list(e) for e in self.edges]}

    def power(self, v: int, a: int) -> int:
        for _ in range(a % self.group.order):
            v = self.action[v]
        return v

    def check(self) -> None:
        if len(self.action) != self.n or sorted(self.action) != list(range(self.n)):
            raise ValueError("action is not a permutation of the vertices")
        k = self.group.order
        for v in range(self.n):
            if self.power(v, k) != v:
                raise ValueError(f"generator order does not divide {k} at vertex {v}")
        for u, v in self.edges:
            if not (0 <= u < self.n and 0 <= v < self.n):
                raise ValueError(f"edge ({u}, {v}) out of range")
            if u == v:
                raise ValueError(f"self-loop at lifted vertex {u}")
        have = sorted(tuple(sorted(e)) for e in self.edges)
        moved = sorted(tuple(sorted((self.action[u], self.action[v]))) for u, v in self.edges)
        if have != moved:
            raise ValueError("edge set is not invariant under the action")

    def fixed_vertices(self) -> list:
        return [v for v in range(self.n) if self.action[v] == v]


def _edge_orbits(desc: LiftedDescription, edges) -> list:
    """Group undirected edges (as a multiset) into orbits; each orbit is a
    list of positions into ``edges``."""
    pool = {}
    for pos, (u, v) in enumerate(edges):
        pool.setdefault(tuple(sorted((u, v))), []).append(pos)
    orbits = []
    used = set()
    for pos, (u, v) in enumerate(edges):
        if pos in used:
            continue
        start = tuple(sorted((u, v)))
        size = 1
        while size < desc.group.order and tuple(sorted(
                (desc.power(u, size), desc.power(v, size)))) != start:
            size += 1
        orbit = []
        for a in range(size):
            key = tuple(sorted((desc.power(u, a), desc.power(v, a))))
            cand = next(c for c in pool[key] if c not in used)
            used.add(cand)
            orbit.append(cand)
        orbits.append(orbit)
    return orbits


def _free_quotient(desc: LiftedDescription, edges, skip=()) -> tuple:
    """Quotient of the vertices outside ``skip`` (which must carry a free
    action). Returns (ColoredGraph, vertex -> (orbit id, element), inverted
    edge orbit count)."""
    k = desc.group.order
    label = {}
    n_orb = 0
    for v in range(desc.n):
        if v in skip or v in label:
            continue
        for a in range(k):
            w = desc.power(v, a)
            if w in label:
                raise ValueError(f"action is not free at vertex {v}")
            label[w] = (n_orb, a)
        n_orb += 1
    out = []
    inverted = 0
    for orbit in _edge_orbits(desc, edges):
        u, v = edges[orbit[0]]
        (iu, au), (iv, av) = label[u], label[v]
        color = (av - au) % k
        if iu == iv and (2 * color) % k == 0:
            # edge mapped onto itself with ends swapped
            inverted += 1
        out.append(Edge(iu, iv, color))
    return ColoredGraph(n_orb, tuple(out), desc.group), label, inverted


def reduce_inverted_edges(desc: LiftedDescription) -> ColoredGraph:
    """Quotient where each inverted edge orbit becomes a loop colored by the
    group element that swaps its ends. Requires a free vertex action."""
    if isinstance(desc, dict):
        desc = LiftedDescription.from_dict(desc)
    if desc.fixed_vertices():
        raise ValueError("fixed vertex present; reduce it first")
    g, _, _ = _free_quotient(desc, desc.edges)
    return g


def reduce_fixed_vertex(desc: LiftedDescription) -> ColoredGraph:
    """Delete a rotation-fixed hub and replace each of its edge orbits by a
    loop colored 1 (the k-gon) at the neighbouring orbit."""
    if isinstance(desc, dict):
        desc = LiftedDescription.from_dict(desc)
    fixed = desc.fixed_vertices()
    if not fixed:
        return reduce_inverted_edges(desc)
    if not desc.group.is_rotation:
        raise ValueError("a vertex fixed by a reflection lies on the mirror; unsupported")
    if len(fixed) > 1:
        raise ValueError(f"more than one fixed vertex: {fixed}")
    hub = fixed[0]
    spokes = [e for e in desc.edges if hub in e]
    if not spokes:
        raise ValueError("fixed vertex has no incident edges")
    rest = [e for e in desc.edges if hub not in e]
    g, label, _ = _free_quotient(desc, rest, skip={hub})
    loops = []
    for orbit in _edge_orbits(desc, spokes):
        u, v = spokes[orbit[0]]
        other = v if u == hub else u
        loops.append(Edge(label[other][0], label[other][0], 1))
    return g.with_edges(g.edges + tuple(loops))


def reduce_lifted(desc) -> ColoredGraph:
    """Fixed vertex first, then inverted edges."""
    return reduce_fixed_vertex(desc)
