"""Planar linear maps used by the direction constructions: rotations,
half-rotations, the reflection, and the projections T(v, w, R) with their
scale factors."""

from __future__ import annotations

from dataclasses import dataclass
from math import cos, gcd, pi, sin

import numpy as np

TOL = 1e-10

SIGMA = np.array([[-1.0, 0.0], [0.0, 1.0]])      # mirror in the y-axis
QUARTER = np.array([[0.0, -1.0], [1.0, 0.0]])    # counter-clockwise pi/2


def _snap(x: float) -> float:
    # exact values at multiples of a quarter turn
    for t in (-1.0, 0.0, 1.0):
        if abs(x - t) < 1e-15:
            return t
    return x


def rotation_matrix(angle: float) -> np.ndarray:
    c, s = _snap(cos(angle)), _snap(sin(angle))
    return np.array([[c, -s], [s, c]])


def unit(v) -> np.ndarray:
    """Normalized copy of a nonzero planar vector."""
    v = np.asarray(v, dtype=float).reshape(2)
    norm = float(np.hypot(v[0], v[1]))
    if norm == 0.0:
        raise ValueError("direction must be nonzero")
    return v / norm


def perp(v) -> np.ndarray:
    """Counter-clockwise quarter turn of v (works on stacked rows too)."""
    v = np.asarray(v, dtype=float)
    return np.stack([-v[..., 1], v[..., 0]], axis=-1)


@dataclass(frozen=True)
class Rotation:
    """R_k^power, the rotation through 2*pi*power/k."""

    k: int
    power: int

    def __post_init__(self):
        object.__setattr__(self, "power", self.power % self.k)

    @property
    def matrix(self) -> np.ndarray:
        return rotation_matrix(2 * pi * self.power / self.k)

    @property
    def half(self) -> np.ndarray:
        """Canonical square root: angle pi*power/k with power in [0, k)."""
        return rotation_matrix(pi * self.power / self.k)

    @property
    def is_identity(self) -> bool:
        return self.power == 0

    @property
    def order(self) -> int:
        return self.k // gcd(self.k, self.power)


def group_matrix(kind: str, k: int, power: int) -> np.ndarray:
    """Matrix of the group element ``power`` for a rotation or reflection group."""
    if kind == "reflection":
        return SIGMA.copy() if power % 2 else np.eye(2)
    return Rotation(k, power).matrix


def _dot(a, b) -> float:
    # scalar arithmetic: numpy's dot may fuse multiply-adds and lose exact zeros
    return float(a[0]) * float(b[0]) + float(a[1]) * float(b[1])


def vstar(v, R: Rotation) -> np.ndarray:
    """Half-rotation of R applied to v-perp."""
    return R.half @ perp(unit(v))


def solve_rotation_locus(R: Rotation, v_star) -> np.ndarray:
    """Unit direction v with (R - I) p parallel to v_star exactly for p on span(v)."""
    if R.is_identity:
        raise ValueError("locus undefined for the identity rotation")
    return unit(QUARTER @ R.half.T @ unit(v_star))


def scale_factor(v, w, R: Rotation) -> float:
    """lambda with T(v, w, R) v = lambda w, where T projects onto span(w)
    along vstar(v, R)."""
    v, w = unit(v), unit(w)
    n = perp(R.half @ perp(v))
    den = _dot(w, n)
    if abs(den) < TOL:
        raise ValueError("projection undefined: w is parallel to vstar")
    return _dot(v, n) / den


def projection_map(v, w, R: Rotation) -> np.ndarray:
    """2x2 matrix of T(v, w, R): projection onto span(w) along vstar(v, R)."""
    w = unit(w)
    n = perp(vstar(v, R))
    den = _dot(w, n)
    if abs(den) < TOL:
        raise ValueError("projection undefined: w is parallel to vstar")
    return np.outer(w, n) / den


def composite_scale(vs, Ss) -> float:
    """Product of the scale factors around the cycle v_1 -> v_2 -> ... -> v_1."""
    if len(vs) != len(Ss) or not vs:
        raise ValueError("need one rotation per link")
    lam = 1.0
    for i, (v, S) in enumerate(zip(vs, Ss)):
        if S.is_identity:
            raise ValueError(f"link {i} uses the identity rotation")
        lam *= scale_factor(v, vs[(i + 1) % len(vs)], S)
    return lam
