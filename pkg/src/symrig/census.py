"""Instance generators: exhaustive small colored multigraphs and random
class members."""

from __future__ import annotations

import itertools
from typing import Iterator

import numpy as np

from .colored_graph import ColoredGraph, Edge, GroupSpec, spanning_forest
from .sparsity import SparsityClass, first_violator, global_count

MAX_EXHAUSTIVE_N = 4


def _connected(n: int, slots) -> bool:
    seen = {0}
    adj = {v: set() for v in range(n)}
    for i, j in slots:
        adj[i].add(j)
        adj[j].add(i)
    stack = [0]
    while stack:
        u = stack.pop()
        for w in adj[u] - seen:
            seen.add(w)
            stack.append(w)
    return len(seen) == n


def multigraphs(n: int, m: int) -> list:
    """Connected loopy multigraphs on n vertices with m edges, one per
    isomorphism class, as sorted tuples of (i, j) with i <= j."""
    slots = [(i, j) for i in range(n) for j in range(i, n)]
    perms = list(itertools.permutations(range(n)))
    seen = set()
    out = []
    for combo in itertools.combinations_with_replacement(slots, m):
        if not _connected(n, combo):
            continue
        canon = min(tuple(sorted(tuple(sorted((p[i], p[j]))) for i, j in combo)) for p in perms)
        if canon not in seen:
            seen.add(canon)
            out.append(canon)
    return out


def colorings(n: int, shape, group: GroupSpec) -> Iterator[ColoredGraph]:
    """All colorings of a multigraph with a spanning tree colored 0, up to
    reordering parallel edges and reversing loops."""
    k = group.order
    base = ColoredGraph(n, tuple(Edge(i, j, 0) for i, j in shape), group)
    tree = set(spanning_forest(base))
    free = [e for e in range(len(shape)) if e not in tree]
    seen = set()
    for cols in itertools.product(range(k), repeat=len(free)):
        colors = [0] * len(shape)
        for e, c in zip(free, cols):
            i, j = shape[e]
            colors[e] = min(c, (-c) % k) if i == j else c
        key = tuple(sorted(zip(shape, colors)))
        if key in seen:
            continue
        seen.add(key)
        yield ColoredGraph(n, tuple(Edge(i, j, c) for (i, j), c in key), group)


def exhaustive(n: int, m: int, group: GroupSpec) -> Iterator[ColoredGraph]:
    if n > MAX_EXHAUSTIVE_N:
        raise ValueError(f"exhaustive mode supports n <= {MAX_EXHAUSTIVE_N}")
    for shape in multigraphs(n, m):
        yield from colorings(n, shape, group)


def _candidate_edges(n: int, k: int):
    out = []
    for i in range(n):
        for j in range(i, n):
            for c in range(k):
                if i == j and (c == 0 or c > (-c) % k):
                    continue
                out.append((i, j, c))
    return out


def random_member(cls: SparsityClass, n: int, group: GroupSpec, rng: np.random.Generator,
                  max_tries: int = 50) -> ColoredGraph:
    """A random graph in the class, grown greedily from a shuffled pool of
    colored edges (each edge kept when the class count still holds)."""
    need = global_count(cls, n)
    cands = _candidate_edges(n, group.order)
    for _ in range(max_tries):
        # parallel copies are allowed, so offer each candidate twice
        pool = [cands[i] for i in rng.permutation(len(cands))]
        pool += [cands[i] for i in rng.permutation(len(cands))]
        g = ColoredGraph(n, (), group)
        for t, h, c in pool:
            if g.m == need:
                break
            if rng.random() < 0.5:
                t, h, c = h, t, (-c) % group.order
            trial = g.add_edge(t, h, c)
            if first_violator(trial, cls, must=(trial.m - 1,)) is None:
                g = trial
        if g.m == need and g.is_connected():
            return g
    raise RuntimeError(f"could not grow a {cls.value} graph on {n} vertices")


def random_graph(n: int, m: int, group: GroupSpec, rng: np.random.Generator) -> ColoredGraph:
    """Connected random colored multigraph: random spanning tree, then
    uniformly random extra edges (loops allowed)."""
    k = group.order
    edges = []
    order = rng.permutation(n)
    for pos in range(1, n):
        u = int(order[pos])
        w = int(order[rng.integers(pos)])
        edges.append(Edge(w, u, int(rng.integers(k))))
    while len(edges) < m:
        t, h = (int(x) for x in rng.integers(n, size=2))
        c = int(rng.integers(1, k)) if t == h else int(rng.integers(k))
        edges.append(Edge(t, h, c))
    perm = rng.permutation(len(edges))
    return ColoredGraph(n, tuple(edges[i] for i in perm), group)
