import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from symrig.algebra import (DIRECTION_NET, RIGIDITY, DirectionAssignment, bareiss_rank,
                            build_direction_system, build_rigidity_system, exact_rank,
                            generic_rank, numerical_rank, nullspace, rank_transfer_check,
                            sample_assignment, sample_points)
from symrig.census import exhaustive
from symrig.colored_graph import ColoredGraph, GroupSpec
from symrig.geometry import QUARTER, group_matrix

import oracles


@st.composite
def small_graphs(draw, kinds=("rotation", "reflection")):
    kind = draw(st.sampled_from(kinds))
    k = 2 if kind == "reflection" else draw(st.sampled_from([2, 3, 4, 6]))
    n = draw(st.integers(1, 4))
    m = draw(st.integers(0, 2 * n + 1))
    edges = [(draw(st.integers(0, n - 1)), draw(st.integers(0, n - 1)),
              draw(st.integers(0, k - 1))) for _ in range(m)]
    return ColoredGraph.build(n, edges, kind=kind, k=k)


def lifted_direction_matrix(g, normals):
    """Direction network on the lift with symmetric normals, composed with
    the embedding of symmetric placements p_(i,a) = g^a p_i."""
    k = g.k
    mats = [group_matrix(g.group.kind, k, a) for a in range(k)]
    L = np.zeros((k * g.m, 2 * k * g.n))
    for r, (e, d) in enumerate(zip(g.edges, normals)):
        for a in range(k):
            u, v = e.tail * k + a, e.head * k + (a + e.color) % k
            row = r * k + a
            nd = mats[a] @ d
            L[row, 2 * v:2 * v + 2] += nd
            L[row, 2 * u:2 * u + 2] -= nd
    S = np.zeros((2 * k * g.n, 2 * g.n))
    for i in range(g.n):
        for a in range(k):
            S[2 * (i * k + a):2 * (i * k + a) + 2, 2 * i:2 * i + 2] = mats[a]
    return L @ S


@settings(max_examples=150, deadline=None)
@given(small_graphs(), st.integers(0, 2**32 - 1))
def test_direction_rank_matches_lift(g, seed):
    d = sample_assignment(g, np.random.default_rng(seed))
    A = build_direction_system(g, d).matrix
    r, _, _ = numerical_rank(A)
    assert r == oracles.lift_matrix_rank(lifted_direction_matrix(g, d.normals / 1e6))


@settings(max_examples=100, deadline=None)
@given(small_graphs(), st.integers(0, 2**32 - 1))
def test_rigidity_system_is_direction_system_of_edges(g, seed):
    P = sample_points(g, np.random.default_rng(seed))
    A = build_rigidity_system(g, P).matrix
    # the symmetric placement itself satisfies <g^c p_j - p_i, e> = |e|^2
    ev = np.array([group_matrix(g.group.kind, g.k, e.color) @ P[e.head] - P[e.tail]
                   for e in g.edges]).reshape(-1, 2)
    assert np.allclose(A @ P.reshape(-1), (ev ** 2).sum(axis=1), rtol=1e-12)


def test_trivial_motions_in_kernel():
    rng = np.random.default_rng(0)
    cone = ColoredGraph.build(3, [(0, 1, 1), (1, 2, 0), (2, 0, 2), (1, 1, 1)], k=3)
    P = sample_points(cone, rng)
    A = build_rigidity_system(cone, P).matrix
    spin = (QUARTER @ P.T).T.reshape(-1)
    assert np.allclose(A @ spin, 0, atol=1e-6 * np.abs(A).max() * np.abs(spin).max())
    refl = ColoredGraph.build(3, [(0, 1, 1), (1, 2, 0), (2, 0, 1)], kind="reflection")
    A = build_rigidity_system(refl, sample_points(refl, rng)).matrix
    assert np.allclose(A @ np.tile([0.0, 1.0], 3), 0)


def test_loop_examples(G):
    assert generic_rank(G(1, [(0, 0, 1)]), DIRECTION_NET).rank == 1
    assert generic_rank(G(1, [(0, 0, 1)], kind="reflection"), RIGIDITY).rank == 1
    rep = generic_rank(G(2, [(0, 1, 0)], k=3), RIGIDITY)
    assert (rep.rank, rep.nullity) == (1, 3)
    d = rep.to_dict()
    assert set(d) >= {"rank", "nullity", "trials", "tolerance", "gap", "seed", "kind"}


def test_gap_and_nullspace():
    # rows are normalized first, so dependence has to come from direction
    A = np.array([[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [1.0, 1.0, 1e-13]])
    r, gap, _ = numerical_rank(A)
    assert r == 2 and gap > 1e3
    Z = nullspace(A)
    assert Z.shape == (3, 1) and abs(abs(Z[2, 0]) - 1) < 1e-9
    assert numerical_rank(np.eye(2))[1] == float("inf")


def test_bareiss():
    assert bareiss_rank([[1, 2], [2, 4]]) == 1
    assert bareiss_rank([[0, 1, 2], [1, 0, 3], [1, 1, 5]]) == 2
    assert bareiss_rank([]) == 0


@pytest.mark.parametrize("grp", [GroupSpec.rotation(2), GroupSpec.rotation(4),
                                 GroupSpec.reflection()])
def test_exact_rank_agrees_on_census(grp):
    rng = np.random.default_rng(7)
    for n in range(1, 4):
        for g in exhaustive(n, 2 * n - 1, grp):
            d = sample_assignment(g, rng)
            assert exact_rank(g, DIRECTION_NET, d) == numerical_rank(
                build_direction_system(g, d).matrix)[0]
            P = sample_points(g, rng)
            assert exact_rank(g, RIGIDITY, P) == numerical_rank(
                build_rigidity_system(g, P).matrix)[0]


def test_exact_rank_rejects_irrational_group(G):
    with pytest.raises(ValueError):
        exact_rank(G(1, [(0, 0, 1)], k=3), DIRECTION_NET, [[1.0, 0.0]])


def test_transfer_guards(G):
    g = G(2, [(0, 1, 0)], k=2)
    d = DirectionAssignment([[0.0, 1.0]])
    with pytest.raises(ValueError):
        rank_transfer_check(g, d, [[0, 0], [0, 1]])
    with pytest.raises(ValueError):
        rank_transfer_check(g, d, [[0, 0], [0, 0]])
    rep = rank_transfer_check(g, d, [[0, 0], [1, 0]])
    assert rep.ok and rep.compared_with == "d"
