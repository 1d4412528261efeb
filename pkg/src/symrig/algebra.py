"""Direction-network and infinitesimal-rigidity systems on the quotient,
with a seeded numerical rank oracle and an exact rank for rational groups.

Unknowns are ordered (x_0, y_0, x_1, y_1, ...). A direction assignment is
stored as one *normal* per edge: the row for edge i -> j with color c is
<g^c p_j - p_i, d> = 0, so the lifted edge is parallel to d-perp.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .colored_graph import REFLECTION, ColoredGraph
from .geometry import group_matrix, perp

DIRECTION_NET = "direction-net"
RIGIDITY = "rigidity"
KINDS = (DIRECTION_NET, RIGIDITY)

REL_TOL = 1e-8          # singular values below REL_TOL * largest count as zero
GAP_RELIABLE = 1e3
SAMPLE_BOX = 10**6


@dataclass(frozen=True)
class DirectionAssignment:
    normals: np.ndarray          # shape (m, 2)
    provenance: str = "random-generic"

    def __post_init__(self):
        arr = np.asarray(self.normals, dtype=float).reshape(-1, 2)
        if arr.size and np.any(np.hypot(arr[:, 0], arr[:, 1]) == 0):
            raise ValueError("directions must be nonzero")
        object.__setattr__(self, "normals", arr)

    @property
    def edge_directions(self) -> np.ndarray:
        """Directions the lifted edges are parallel to."""
        return perp(self.normals)

    def perp(self) -> "DirectionAssignment":
        return DirectionAssignment(perp(self.normals), self.provenance + "+perp")

    def to_dict(self) -> dict:
        return {"normals": self.normals.tolist(), "provenance": self.provenance}


@dataclass(frozen=True)
class LinearSystem:
    matrix: np.ndarray
    kind: str
    n: int

    @property
    def rows(self) -> int:
        return self.matrix.shape[0]


def _group_mats(g: ColoredGraph):
    return [group_matrix(g.group.kind, g.k, c) for c in range(g.k)]


def build_direction_system(g: ColoredGraph, d) -> LinearSystem:
    """Rows <g^c p_j - p_i, d_e> for every edge e = i -> j of color c."""
    normals = d.normals if isinstance(d, DirectionAssignment) else np.asarray(d, float).reshape(-1, 2)
    if normals.shape[0] != g.m:
        raise ValueError(f"need {g.m} directions, got {normals.shape[0]}")
    mats = _group_mats(g)
    A = np.zeros((g.m, 2 * g.n))
    for r, (e, dv) in enumerate(zip(g.edges, normals)):
        head = mats[e.color % g.k].T @ dv
        A[r, 2 * e.head:2 * e.head + 2] += head
        A[r, 2 * e.tail:2 * e.tail + 2] -= dv
    return LinearSystem(A, DIRECTION_NET, g.n)


def edge_vectors(g: ColoredGraph, points) -> np.ndarray:
    """g^c p_j - p_i for each edge."""
    P = np.asarray(points, dtype=float).reshape(g.n, 2)
    mats = _group_mats(g)
    out = np.zeros((g.m, 2))
    for r, e in enumerate(g.edges):
        out[r] = mats[e.color % g.k] @ P[e.head] - P[e.tail]
    return out


def build_rigidity_system(g: ColoredGraph, points) -> LinearSystem:
    """Rows <g^c v_j - v_i, g^c p_j - p_i>: the direction system whose
    normals are the edge vectors of the placement."""
    A = build_direction_system(g, edge_vectors(g, points)).matrix
    return LinearSystem(A, RIGIDITY, g.n)


# ------------------------------------------------------------ numerics

def _row_normalize(A: np.ndarray) -> np.ndarray:
    norms = np.linalg.norm(A, axis=1)
    norms[norms == 0] = 1.0
    return A / norms[:, None]


def singular_values(A: np.ndarray) -> np.ndarray:
    if A.size == 0:
        return np.zeros(0)
    return np.linalg.svd(_row_normalize(A), compute_uv=False)


def numerical_rank(A: np.ndarray, rel_tol: float = REL_TOL):
    """(rank, gap, singular values); gap = s_r / s_{r+1} (inf when nothing
    is below the cut)."""
    s = singular_values(A)
    if s.size == 0 or s[0] == 0:
        return 0, math.inf, s
    r = int(np.sum(s > rel_tol * s[0]))
    gap = math.inf if r >= s.size or s[r] == 0 else float(s[r - 1] / s[r])
    return r, gap, s


def nullspace(A: np.ndarray, rel_tol: float = REL_TOL) -> np.ndarray:
    """Orthonormal basis (columns) of the numerical nullspace."""
    cols = A.shape[1]
    if A.shape[0] == 0:
        return np.eye(cols)
    B = _row_normalize(A)
    _, s, vt = np.linalg.svd(B)
    if s.size == 0 or s[0] == 0:
        return np.eye(cols)
    r = int(np.sum(s > rel_tol * s[0]))
    return vt[r:].T.copy()


@dataclass
class RankReport:
    rank: int
    nullity: int
    trials: int
    tolerance: float
    gap: float
    seed: int
    kind: str
    singular_values: list = field(default_factory=list)

    @property
    def reliable(self) -> bool:
        return self.gap >= GAP_RELIABLE

    def to_dict(self) -> dict:
        return {"kind": self.kind, "rank": self.rank, "nullity": self.nullity,
                "trials": self.trials, "tolerance": self.tolerance, "seed": self.seed,
                "gap": None if math.isinf(self.gap) else self.gap,
                "reliable": self.reliable, "singular_values": list(self.singular_values)}


def sample_assignment(g: ColoredGraph, rng: np.random.Generator) -> DirectionAssignment:
    """Integer normals from the box [-SAMPLE_BOX, SAMPLE_BOX]^2."""
    while True:
        d = rng.integers(-SAMPLE_BOX, SAMPLE_BOX + 1, size=(g.m, 2)).astype(float)
        if g.m == 0 or np.all(np.abs(d).sum(axis=1) > 0):
            return DirectionAssignment(d)


def sample_points(g: ColoredGraph, rng: np.random.Generator) -> np.ndarray:
    return rng.integers(-SAMPLE_BOX, SAMPLE_BOX + 1, size=(g.n, 2)).astype(float)


def system_for(g: ColoredGraph, kind: str, rng: np.random.Generator) -> LinearSystem:
    if kind == DIRECTION_NET:
        return build_direction_system(g, sample_assignment(g, rng))
    if kind == RIGIDITY:
        return build_rigidity_system(g, sample_points(g, rng))
    raise ValueError(f"unknown system kind {kind!r}")


def generic_rank(g: ColoredGraph, kind: str = DIRECTION_NET, trials: int = 3, seed: int = 0,
                 rel_tol: float = REL_TOL) -> RankReport:
    """Maximum numerical rank over ``trials`` seeded random instances."""
    if trials < 1:
        raise ValueError("trials must be at least 1")
    rng = np.random.default_rng(seed)
    best = None
    for _ in range(trials):
        r, gap, s = numerical_rank(system_for(g, kind, rng).matrix, rel_tol)
        if best is None or r > best[0] or (r == best[0] and gap > best[1]):
            best = (r, gap, s)
    r, gap, s = best
    return RankReport(r, 2 * g.n - r, trials, rel_tol, gap, seed, kind, [float(x) for x in s])


def rank_of(A: np.ndarray, rel_tol: float = REL_TOL) -> int:
    return numerical_rank(A, rel_tol)[0]


# -------------------------------------------------------- rank transfer

COLLAPSE_TOL = 1e-9
RESIDUAL_TOL = 1e-8


@dataclass(frozen=True)
class TransferReport:
    ok: bool
    rigidity_rank: int
    direction_rank: int
    compared_with: str          # "d" or "d-perp"

    def __bool__(self):
        return self.ok

    def to_dict(self) -> dict:
        return {"ok": self.ok, "rigidity_rank": self.rigidity_rank,
                "direction_rank": self.direction_rank, "compared_with": self.compared_with}


def rank_transfer_check(g: ColoredGraph, d: DirectionAssignment, points) -> TransferReport:
    """Rigidity rank at a faithful solution of (g, d) against the rank of
    (g, d) for rotations or of (g, d-perp) for the reflection."""
    P = np.asarray(points, dtype=float).reshape(g.n, 2)
    scale = max(1.0, float(np.abs(P).max(initial=0.0)))
    A = _row_normalize(build_direction_system(g, d).matrix)
    if g.m and float(np.abs(A @ P.reshape(-1)).max()) > RESIDUAL_TOL * scale:
        raise ValueError("points do not solve the direction network")
    ev = edge_vectors(g, P)
    if g.m and float(np.hypot(ev[:, 0], ev[:, 1]).min()) <= COLLAPSE_TOL * scale:
        raise ValueError("realization has a collapsed edge")
    rig = rank_of(build_rigidity_system(g, P).matrix)
    if g.group.kind == REFLECTION:
        other, tag = rank_of(build_direction_system(g, d.perp()).matrix), "d-perp"
    else:
        other, tag = rank_of(build_direction_system(g, d).matrix), "d"
    return TransferReport(rig == other, rig, other, tag)


# ----------------------------------------------------------- exact rank

_EXACT_ROT = {
    1: [[1, 0], [0, 1]],
    2: [[-1, 0], [0, -1]],
    3: [[0, -1], [1, 0]],    # quarter turn, k = 4
}


def _exact_group(g: ColoredGraph):
    if g.group.kind == REFLECTION:
        return [[[1, 0], [0, 1]], [[-1, 0], [0, 1]]]
    if g.k == 2:
        return [_EXACT_ROT[1], _EXACT_ROT[2]]
    if g.k == 4:
        q = _EXACT_ROT[3]
        mats = [_EXACT_ROT[1]]
        for _ in range(3):
            a = mats[-1]
            mats.append([[sum(q[i][t] * a[t][j] for t in range(2)) for j in range(2)]
                         for i in range(2)])
        return mats
    raise ValueError(f"exact rank needs a rational group (reflection, or k in 2, 4); got k={g.k}")


def bareiss_rank(rows) -> int:
    """Rank of an integer matrix by fraction-free elimination."""
    M = [list(r) for r in rows]
    if not M:
        return 0
    n_rows, n_cols = len(M), len(M[0])
    rank, prev = 0, 1
    for c in range(n_cols):
        piv = next((r for r in range(rank, n_rows) if M[r][c] != 0), None)
        if piv is None:
            continue
        M[rank], M[piv] = M[piv], M[rank]
        for r in range(rank + 1, n_rows):
            for j in range(c + 1, n_cols):
                M[r][j] = (M[rank][c] * M[r][j] - M[r][c] * M[rank][j]) // prev
            M[r][c] = 0
        prev = M[rank][c]
        rank += 1
        if rank == n_rows:
            break
    return rank


def exact_rank(g: ColoredGraph, kind: str, assignment) -> int:
    """Rank over the rationals. ``assignment`` holds normals (direction
    net) or points (rigidity); floats are read as exact binary fractions."""
    mats = _exact_group(g)
    vals = np.asarray(assignment.normals if isinstance(assignment, DirectionAssignment)
                      else assignment, dtype=float).reshape(-1, 2)
    F = [[Fraction(float(x)) for x in row] for row in vals]

    def apply(M, v):
        return [M[0][0] * v[0] + M[0][1] * v[1], M[1][0] * v[0] + M[1][1] * v[1]]

    if kind == RIGIDITY:
        normals = []
        for e in g.edges:
            gp = apply(mats[e.color % g.k], F[e.head])
            normals.append([gp[0] - F[e.tail][0], gp[1] - F[e.tail][1]])
    elif kind == DIRECTION_NET:
        normals = F
    else:
        raise ValueError(f"unknown system kind {kind!r}")
    rows = []
    for e, dv in zip(g.edges, normals):
        M = mats[e.color % g.k]
        Mt = [[M[0][0], M[1][0]], [M[0][1], M[1][1]]]
        row = [Fraction(0)] * (2 * g.n)
        hv = apply(Mt, dv)
        row[2 * e.head] += hv[0]
        row[2 * e.head + 1] += hv[1]
        row[2 * e.tail] -= dv[0]
        row[2 * e.tail + 1] -= dv[1]
        den = math.lcm(*(x.denominator for x in row)) if row else 1
        rows.append([int(x * den) for x in row])
    return bareiss_rank(rows)
