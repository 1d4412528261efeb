"""Independent reference computations for the tests.

Nothing here reuses the library's union-find, kernels or rank code: gain
images come from a breadth-first search over the cover graph, counts from
plain subset enumeration, and ranks from numpy.linalg.matrix_rank.
"""

from itertools import combinations

import numpy as np


def components(g, subset):
    """Edge components of an edge-induced subgraph, by repeated BFS."""
    subset = sorted(set(subset))
    left = set(subset)
    out = []
    while left:
        start = min(left)
        comp = {start}
        verts = {g.edges[start].tail, g.edges[start].head}
        grew = True
        while grew:
            grew = False
            for i in list(left - comp):
                e = g.edges[i]
                if e.tail in verts or e.head in verts:
                    comp.add(i)
                    verts |= {e.tail, e.head}
                    grew = True
        left -= comp
        out.append(sorted(comp))
    return sorted(out)


def gain_subgroup(g, comp):
    """The set of group elements a with (v0, 0) ~ (v0, a) in the cover."""
    k = g.k
    v0 = g.edges[comp[0]].tail
    seen = {(v0, 0)}
    frontier = [(v0, 0)]
    while frontier:
        v, a = frontier.pop()
        for i in comp:
            e = g.edges[i]
            nxt = []
            if e.tail == v:
                nxt.append((e.head, (a + e.color) % k))
            if e.head == v:
                nxt.append((e.tail, (a - e.color) % k))
            for s in nxt:
                if s not in seen:
                    seen.add(s)
                    frontier.append(s)
    return sorted(a for v, a in seen if v == v0)


def trivial_flags(g, subset):
    return [gain_subgroup(g, c) == [0] for c in components(g, subset)]


def counts(g, subset):
    verts = set()
    for i in subset:
        verts |= {g.edges[i].tail, g.edges[i].head}
    flags = trivial_flags(g, subset)
    return len(verts), len(subset), flags.count(False), flags.count(True)


def first_violator(g, a, b_nt, b_t, pool=None):
    pool = range(g.m) if pool is None else sorted(pool)
    for s in range(1, len(pool) + 1):
        for sub in combinations(pool, s):
            n, m, c, c0 = counts(g, sub)
            if m > a * n - b_nt * c - b_t * c0:
                return sub
    return None


def lift_matrix_rank(A):
    return int(np.linalg.matrix_rank(A, tol=1e-8 * max(1.0, np.abs(A).max(initial=0.0))))
