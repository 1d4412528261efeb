from math import gcd

import numpy as np
import pytest

from symrig.census import exhaustive, random_member
from symrig.colored_graph import GroupSpec, build_lift, cycle_gain, equivalent_colorings
from symrig.decomposition import cone_decompose, map_component, nice_decompose, overlap_graph
from symrig.errors import NotInClass
from symrig.sparsity import SparsityClass as SC, gain11_independent, is_class

import oracles


def _check_map_component(g, c):
    assert c.base in c.vertices and c.closing in c.edges
    assert len(c.edges) == len(c.vertices)
    for i in c.tree:
        e = g.edges[i]
        assert (c.potentials[e.tail] + e.color - c.potentials[e.head]) % g.k == 0
    assert c.potentials[c.base] == 0
    assert cycle_gain(g, c.cycle).gain == c.gain
    # the gain generates the component's gain image
    assert gain11_independent(g, c.edges)
    assert oracles.gain_subgroup(g, list(c.edges)) == list(range(0, g.k, gcd(g.k, c.gain)))


def test_map_component_loop(G):
    g = G(1, [(0, 0, 1)], k=3)
    c = map_component(g, [0])
    assert (c.base, c.closing, c.gain) == (0, 0, 1)


def test_nice_decomposition_census():
    grp = GroupSpec.reflection()
    seen = 0
    for n in range(1, 5):
        for g in exhaustive(n, 2 * n - 1, grp):
            if not is_class(g, SC.REFLECTION22).member:
                with pytest.raises(NotInClass):
                    nice_decompose(g)
                continue
            dec = nice_decompose(g)
            rec = dec.recolored
            assert equivalent_colorings(g, rec)
            assert sorted(dec.tree_edges + dec.map_edges) == list(range(g.m))
            assert len(dec.tree_edges) == g.n - 1
            assert all(rec.edges[i].color == 0 for i in dec.tree_edges)
            for c in dec.components:
                _check_map_component(rec, c)
                assert c.gain == 1
            # the tree lifts to two copies, each map piece to one
            lift = build_lift(rec)
            assert len(lift.edge_components(dec.tree_edges)) == 2 or n == 1
            seen += 1
    assert seen > 20


@pytest.mark.parametrize("k", [2, 3, 4, 6])
def test_cone_decomposition_and_overlap(k):
    rng = np.random.default_rng(k)
    grp = GroupSpec.rotation(k)
    for _ in range(25):
        n = int(rng.integers(1, 6))
        g = random_member(SC.CONE22, n, grp, rng)
        dec = cone_decompose(g)
        X, Y = dec.halves
        assert sorted(X + Y) == list(range(g.m))
        for half, comps in zip(dec.halves, dec.components):
            assert len(half) == g.n and gain11_independent(g, half)
            covered = sorted(v for c in comps for v in c.vertices)
            assert covered == list(range(g.n))
            for c in comps:
                _check_map_component(g, c)
        ov = overlap_graph(g, dec)
        # in-degree exactly one, and every node reaches a cycle
        assert sorted(ov.pred) == sorted(ov.nodes)
        for cyc in ov.cycles:
            for a, b in zip(cyc, cyc[1:] + cyc[:1]):
                assert ov.pred[b] == a
        for v, path in ov.paths.items():
            assert path[-1] == v and any(path[0] in c for c in ov.cycles)


def test_cone_decompose_rejects(G):
    with pytest.raises(NotInClass):
        cone_decompose(G(2, [(0, 1, 0), (0, 1, 0)]))
