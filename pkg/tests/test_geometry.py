import numpy as np
import pytest
from hypothesis import assume, given, settings, strategies as st

from symrig.geometry import (QUARTER, SIGMA, Rotation, composite_scale, group_matrix, perp,
                             projection_map, scale_factor, solve_rotation_locus, unit, vstar)

angles = st.floats(0.0, 2 * np.pi, allow_nan=False)
rotations = st.integers(2, 8).flatmap(lambda k: st.builds(Rotation, st.just(k),
                                                          st.integers(1, k - 1)))


def vec(t):
    return np.array([np.cos(t), np.sin(t)])


def test_basic_maps():
    assert np.allclose(perp([1, 0]), [0, 1])
    assert np.allclose(QUARTER @ [1, 0], [0, 1])
    assert np.allclose(SIGMA @ [1, 2], [-1, 2])
    assert np.array_equal(Rotation(4, 1).matrix, QUARTER)
    assert np.array_equal(group_matrix("reflection", 2, 3), SIGMA)
    assert Rotation(6, 4).order == 3 and Rotation(5, 7).power == 2
    with pytest.raises(ValueError):
        unit([0, 0])


@settings(max_examples=200, deadline=None)
@given(rotations)
def test_half_squares_to_rotation(R):
    assert np.allclose(R.half @ R.half, R.matrix, atol=1e-12)


def test_locus_examples():
    assert np.allclose(solve_rotation_locus(Rotation(2, 1), [0, 1]), [0, 1])
    with pytest.raises(ValueError):
        solve_rotation_locus(Rotation(3, 0), [1, 0])


@settings(max_examples=300, deadline=None)
@given(rotations, angles, st.floats(-5, 5).filter(lambda t: abs(t) > 1e-3))
def test_locus_property(R, a, t):
    v = solve_rotation_locus(R, vec(a))
    p = t * v
    q = (R.matrix - np.eye(2)) @ p
    cross = q[0] * np.sin(a) - q[1] * np.cos(a)
    assert abs(cross) < 1e-9 * max(1.0, abs(t))


@settings(max_examples=300, deadline=None)
@given(rotations, angles, angles)
def test_scale_factor_against_projection(R, a, b):
    v, w = vec(a), vec(b)
    vs = vstar(v, R)
    assume(abs(w[0] * vs[1] - w[1] * vs[0]) > 1e-3)
    T = projection_map(v, w, R)
    # T is a projection onto span(w) with kernel span(vstar)
    assert np.allclose(T @ T, T, atol=1e-9)
    assert np.allclose(T @ vs, 0, atol=1e-9)
    assert np.allclose(T @ v, scale_factor(v, w, R) * w, atol=1e-9)


@settings(max_examples=100, deadline=None)
@given(angles, angles)
def test_order_two_scale_is_zero(a, b):
    v, w = vec(a), vec(b)
    # vstar is -v here, so w must not be parallel to v
    assume(abs(w[0] * v[1] - w[1] * v[0]) > 1e-3)
    assert scale_factor(v, w, Rotation(2, 1)) == 0.0


def test_composite_scale():
    R = Rotation(3, 1)
    vs = [vec(0.3), vec(1.1), vec(2.0)]
    expect = np.prod([scale_factor(vs[i], vs[(i + 1) % 3], R) for i in range(3)])
    assert composite_scale(vs, [R] * 3) == pytest.approx(expect)
    with pytest.raises(ValueError):
        composite_scale(vs, [R, R, Rotation(3, 0)])
