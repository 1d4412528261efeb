"""Solving direction networks, the constructive direction assignments,
special pairs for the reflection, and the end-to-end rigidity decision."""

from __future__ import annotations

import itertools
import logging
from dataclasses import dataclass, field

import numpy as np

from . import algebra
from .algebra import DirectionAssignment, build_direction_system, build_rigidity_system, \
    edge_vectors, generic_rank, nullspace, rank_of, rank_transfer_check
from .colored_graph import REFLECTION, ColoredGraph
from .decomposition import cone_decompose, nice_decompose, overlap_graph
from .drawing import emit_svg  # noqa: F401  (re-exported)
from .errors import InternalDisagreement, NotInClass
from .geometry import Rotation, composite_scale, group_matrix, perp, unit, vstar
from .sparsity import SparsityClass, first_violator, fundamental_circuit, is_class, \
    reduce_ross_circuits, ross_basis

log = logging.getLogger(__name__)

COLLAPSE_TOL = 1e-9
AXIS_TOL = 1e-8
MAX_ATTEMPTS = 100


@dataclass
class Realization:
    points: np.ndarray
    residual: float
    nullity: int
    edges: list                 # "faithful" / "collapsed" per edge
    classification: str         # faithful, strongly-faithful, collapsed, mixed
    kind: str = "rotation"
    k: int = 2

    @property
    def faithful(self) -> bool:
        return self.classification in ("faithful", "strongly-faithful")

    def to_dict(self) -> dict:
        return {"points": self.points.tolist(), "nullity": self.nullity,
                "classification": self.classification, "edges": list(self.edges),
                "residual": self.residual}


def trivial_vectors(g: ColoredGraph) -> np.ndarray:
    """Solutions present for every assignment: the vertical translation for
    the reflection, nothing for rotations (scaling is handled by nullity)."""
    if g.group.kind == REFLECTION and g.n:
        tau = np.tile([0.0, 1.0], g.n)
        return (tau / np.linalg.norm(tau))[:, None]
    return np.zeros((2 * g.n, 0))


def _lifted_orbit(g: ColoredGraph, p) -> np.ndarray:
    mats = [group_matrix(g.group.kind, g.k, a) for a in range(g.k)]
    return np.array([[M @ p[i] for M in mats] for i in range(g.n)])


def classify(g: ColoredGraph, points) -> tuple:
    """Per-edge and global classification of a placement (already scaled)."""
    P = np.asarray(points, dtype=float).reshape(g.n, 2)
    ev = edge_vectors(g, P)
    lens = np.hypot(ev[:, 0], ev[:, 1]) if g.m else np.zeros(0)
    edges = ["collapsed" if L <= COLLAPSE_TOL else "faithful" for L in lens]
    if g.m and all(e == "collapsed" for e in edges):
        return edges, "collapsed"
    if any(e == "collapsed" for e in edges):
        return edges, "mixed"
    orbit = _lifted_orbit(g, P).reshape(-1, 2)
    diff = orbit[:, None, :] - orbit[None, :, :]
    dist = np.hypot(diff[..., 0], diff[..., 1])
    np.fill_diagonal(dist, np.inf)
    if g.n and dist.min() > COLLAPSE_TOL:
        return edges, "strongly-faithful"
    return edges, "faithful"


def _normalize_points(z: np.ndarray, n: int) -> np.ndarray:
    P = z.reshape(n, 2)
    norms = np.hypot(P[:, 0], P[:, 1])
    top = norms.max(initial=0.0)
    if top <= 0:
        return np.zeros((n, 2))
    P = P / top
    flat = P.reshape(-1)
    lead = next((x for x in flat if abs(x) > COLLAPSE_TOL), 1.0)
    return P * (1.0 if lead > 0 else -1.0)


def realization_from(g: ColoredGraph, d, z: np.ndarray, nullity: int) -> Realization:
    P = _normalize_points(np.asarray(z, dtype=float), g.n)
    A = algebra._row_normalize(build_direction_system(g, d).matrix)
    res = float(np.abs(A @ P.reshape(-1)).max()) if g.m else 0.0
    edges, cls = classify(g, P)
    return Realization(P, res, nullity, edges, cls, g.group.kind, g.k)


def solve_direction_network(g: ColoredGraph, d, seed: int = 0) -> Realization:
    """A realization of (g, d) after removing the trivial solutions.

    With one remaining dimension this is the unique realization up to
    scale; with more, a seeded generic combination is taken.
    """
    if not isinstance(d, DirectionAssignment):
        d = DirectionAssignment(d)
    A = build_direction_system(g, d).matrix
    Z = nullspace(A)
    nullity = Z.shape[1]
    T = trivial_vectors(g)
    if T.shape[1] and nullity:
        Z = Z - T @ (T.T @ Z)
        u, s, _ = np.linalg.svd(Z, full_matrices=False)
        Z = u[:, s > 1e-6]
    if Z.shape[1] == 0:
        # nothing but the trivial solutions: a collapsed realization
        z = T[:, 0] if T.shape[1] and nullity else np.zeros(2 * g.n)
    elif Z.shape[1] == 1:
        z = Z[:, 0]
    else:
        rng = np.random.default_rng(seed)
        z = Z @ rng.standard_normal(Z.shape[1])
    return realization_from(g, d, z, nullity)


def random_assignment(g: ColoredGraph, rng: np.random.Generator) -> DirectionAssignment:
    return DirectionAssignment(np.array([unit(rng.standard_normal(2)) for _ in range(g.m)])
                               .reshape(g.m, 2))


# ------------------------------------------------------- cone collapse

def _lines_independent(vs, k: int, tol: float = 1e-6) -> bool:
    """No two lines span(v_i), span(v_j) are related by a rotation R_k^c."""
    ang = [np.arctan2(v[1], v[0]) for v in vs]
    for a, b in itertools.combinations(ang, 2):
        for c in range(k):
            x = (a - b - 2 * np.pi * c / k) % np.pi
            if min(x, np.pi - x) < tol:
                return False
    return True


def _cycle_scales_ok(cycles, vs_of, k: int, rng, cap: int = 4096, tol: float = 1e-6) -> bool:
    for cyc in cycles:
        vs = [vs_of[c] for c in cyc]
        L = len(vs)
        total = (k - 1) ** L
        if total <= cap:
            combos = itertools.product(range(1, k), repeat=L)
        else:
            combos = (tuple(int(x) for x in rng.integers(1, k, size=L)) for _ in range(cap))
        for powers in combos:
            try:
                lam = composite_scale(vs, [Rotation(k, p) for p in powers])
            except ValueError:
                return False
            if abs(abs(lam) - 1.0) < tol:
                return False
    return True


def _component_normals(g: ColoredGraph, comp, v) -> dict:
    """Normals for one gain-(1,1) piece placing its base on span(v)."""
    h = comp.potentials
    ce = g.edges[comp.closing]
    if ce.is_loop:
        s_exp, g_close = ce.color, 0
    elif ce.head == comp.base:
        u = ce.tail
        s_exp, g_close = h[u] + ce.color, h[u]
    else:
        u = ce.head
        s_exp, g_close = h[u] - ce.color, h[u] - ce.color
    R = lambda a: Rotation(g.k, a).matrix
    vs = vstar(v, Rotation(g.k, s_exp))
    out = {}
    for i in comp.tree:
        out[i] = perp(R(-h[g.edges[i].tail]) @ vs)
    out[comp.closing] = perp(R(-g_close) @ vs)
    return out


def cone_collapse_directions(g: ColoredGraph, seed: int = 0,
                             max_attempts: int = MAX_ATTEMPTS) -> DirectionAssignment:
    """Directions for a cone-(2,2) graph whose only realization is the origin."""
    if g.group.kind == REFLECTION:
        raise NotInClass("cone construction needs a rotation group")
    if not is_class(g, SparsityClass.CONE22).member:
        raise NotInClass("input is not cone-(2,2)")
    dec = cone_decompose(g, check=False)
    ov = overlap_graph(g, dec)
    pieces = [("x", i, c) for i, c in enumerate(dec.components[0])] + \
             [("y", j, c) for j, c in enumerate(dec.components[1])]
    rng = np.random.default_rng(seed)
    for attempt in range(max_attempts):
        vs = {(h, i): unit(rng.standard_normal(2)) for h, i, _ in pieces}
        if not _lines_independent(list(vs.values()), g.k):
            log.info("cone collapse attempt %d (seed %d): lines related by rotation", attempt, seed)
            continue
        if not _cycle_scales_ok(ov.cycles, vs, g.k, rng):
            log.info("cone collapse attempt %d (seed %d): unit composite scale", attempt, seed)
            continue
        normals = np.zeros((g.m, 2))
        for h, i, comp in pieces:
            for e, nv in _component_normals(g, comp, vs[(h, i)]).items():
                normals[e] = nv
        d = DirectionAssignment(normals, "constructed")
        if rank_of(build_direction_system(g, d).matrix) == 2 * g.n:
            return d
        log.info("cone collapse attempt %d (seed %d): nullity above 0", attempt, seed)
    raise RuntimeError(f"cone collapse failed after {max_attempts} attempts (seed {seed})")


# --------------------------------------------------- reflection collapse

TREE_DIRECTION = np.array([2.0, 1.0]) / np.sqrt(5.0)
MAP_DIRECTION = np.array([0.0, 1.0])


def reflection_collapse_directions(g: ColoredGraph) -> DirectionAssignment:
    """Tree edges parallel to (2,1), map edges vertical; the only
    realizations put every vertex at one point of the mirror."""
    if g.group.kind != REFLECTION:
        raise NotInClass("reflection construction needs the reflection group")
    dec = nice_decompose(g)
    # normals in the recolored frame, carried back by the switching potentials
    tree_n, map_n = perp(TREE_DIRECTION), perp(MAP_DIRECTION)
    normals = np.zeros((g.m, 2))
    for i, e in enumerate(g.edges):
        base = tree_n if i in set(dec.tree_edges) else map_n
        normals[i] = group_matrix(REFLECTION, 2, dec.potentials[e.tail]).T @ base
    return DirectionAssignment(normals, "constructed")


def axis_collapsed(g: ColoredGraph, Z: np.ndarray, tol: float = AXIS_TOL) -> bool:
    """Nullspace is exactly the all-points-equal-on-the-mirror line."""
    if Z.shape[1] != 1:
        return False
    tau = trivial_vectors(g)[:, 0]
    z = Z[:, 0] * np.sign(Z[:, 0] @ tau or 1.0)
    return float(np.abs(z - tau).max()) < tol


# -------------------------------------------------------- Ross graphs

def ross_realize(g: ColoredGraph, seed: int = 0, max_attempts: int = MAX_ATTEMPTS):
    """Generic directions with a strongly faithful realization, unique up to
    scale and vertical translation."""
    if g.group.kind != REFLECTION:
        raise NotInClass("Ross realizations need the reflection group")
    if first_violator(g, SparsityClass.ROSS) is not None or g.m != 2 * g.n - 2:
        raise NotInClass("input is not a Ross graph")
    for attempt in range(max_attempts):
        s = seed + attempt
        d = random_assignment(g, np.random.default_rng(s))
        real = solve_direction_network(g, d, seed=s)
        if real.nullity == 2 and real.classification == "strongly-faithful":
            return d, real
        log.info("Ross realization seed %d: nullity %d, %s", s, real.nullity, real.classification)
    raise RuntimeError(f"no strongly faithful Ross realization in {max_attempts} seeds from {seed}")


# ------------------------------------------------------- special pairs

class SpecialPairFailure(RuntimeError):
    def __init__(self, message, diagnostics):
        super().__init__(message)
        self.diagnostics = diagnostics


@dataclass
class SpecialPair:
    d: DirectionAssignment
    realization: Realization
    nullity_d: int
    nullity_perp: int
    perp_on_axis: bool
    expected_nullity: int            # 2n - |Ross basis|
    circuits: list
    nonbasis: list
    transfer: object
    attempts: int
    log: list = field(default_factory=list)

    @property
    def literal(self) -> bool:
        """Nullity exactly 2 with a faithful realization, perp collapsed."""
        return self.nullity_d == 2 and self.realization.faithful and self.perp_on_axis

    def to_dict(self) -> dict:
        return {"directions": self.d.to_dict(), "realization": self.realization.to_dict(),
                "nullity_d": self.nullity_d, "nullity_perp": self.nullity_perp,
                "perp_collapsed_on_axis": self.perp_on_axis,
                "expected_nullity": self.expected_nullity, "ross_circuits": self.circuits,
                "nonbasis_edges": self.nonbasis, "rank_transfer": self.transfer.to_dict(),
                "attempts": self.attempts, "literal_special_pair": self.literal,
                "log": self.log}


def _swap_into_cycles(g: ColoredGraph, basis, rejected, circuits):
    """Exchange so each circuit's non-basis edge sits on a cycle of its
    gain-(1,1) part with nonzero color after recoloring."""
    B = set(basis)
    nonbasis = []
    for f, C in zip(rejected, circuits):
        sub, _ = g.compact(C)
        nd = nice_decompose(sub, check=False)
        cands = [C[i] for comp in nd.components for i, _ in comp.cycle
                 if nd.recolored.edges[i].color != 0]
        e = min(cands)
        if e != f:
            B.discard(e)
            B.add(f)
        nonbasis.append(e)
    return sorted(B), nonbasis


def _local_special(g: ColoredGraph, C, normals) -> bool:
    sub, _ = g.compact(C)
    d = DirectionAssignment(normals[list(C)])
    A = build_direction_system(sub, d).matrix
    if 2 * sub.n - rank_of(A) != 2:
        return False
    if not solve_direction_network(sub, d).faithful:
        return False
    return axis_collapsed(sub, nullspace(build_direction_system(sub, d.perp()).matrix))


def _reduced_perp_ok(g: ColoredGraph, red, normals_perp) -> bool:
    rg = red.graph
    rn = np.zeros((rg.m, 2))
    for i, j in enumerate(red.edge_map):
        if j is not None:
            phi = red.potentials[g.edges[i].tail]
            rn[j] = group_matrix(REFLECTION, 2, phi) @ normals_perp[i]
    kept = sum(j is not None for j in red.edge_map)
    rn[kept:] = [1.0, 0.0]       # loops standing for collapsed circuits
    Z = nullspace(build_direction_system(rg, rn).matrix)
    return Z.shape[1] == 1


def construct_special_pair(g: ColoredGraph, seed: int = 0,
                           max_attempts: int = MAX_ATTEMPTS) -> SpecialPair:
    """Directions d on a reflection-Laman graph with a faithful realization
    of (g, d) while (g, d-perp) only has the collapsed one."""
    if g.group.kind != REFLECTION:
        raise NotInClass("special pairs are defined for the reflection group")
    if not is_class(g, SparsityClass.REFLECTION_LAMAN).member:
        raise NotInClass("input is not reflection-Laman")
    basis, rejected = ross_basis(g)
    circuits = [fundamental_circuit(g, basis, f) for f in rejected]
    B, nonbasis = _swap_into_cycles(g, basis, rejected, circuits)
    red = reduce_ross_circuits(g, circuits)
    expected = 2 * g.n - len(B)
    rng = np.random.default_rng(seed)
    base = np.array([unit(rng.standard_normal(2)) for _ in range(g.m)]).reshape(g.m, 2)
    history = []
    step = 1e-2
    for attempt in range(max_attempts):
        pseed = seed * 1000003 + attempt
        if attempt == 0:
            dB = base.copy()
        else:
            noise = np.random.default_rng(pseed).standard_normal(base.shape)
            dB = base + step * noise
            step /= 2
        why = _try_special(g, B, nonbasis, circuits, red, dB, expected, pseed)
        if isinstance(why, SpecialPair):
            why.attempts = attempt + 1
            why.log = history
            return why
        history.append({"attempt": attempt, "seed": pseed, "reason": why})
        log.info("special pair attempt %d (seed %d): %s", attempt, pseed, why)
    raise SpecialPairFailure(f"no special pair after {max_attempts} attempts", history)


def _try_special(g, B, nonbasis, circuits, red, dB, expected, pseed):
    normals = np.array(dB, dtype=float)
    AB = build_direction_system(g, normals).matrix[B]
    if rank_of(AB) != len(B):
        return "basis rows dependent"
    # realization of the basis part, then the induced non-basis directions
    Z = nullspace(AB)
    T = trivial_vectors(g)
    Z = Z - T @ (T.T @ Z)
    u, s, _ = np.linalg.svd(Z, full_matrices=False)
    Z = u[:, s > 1e-6]
    if Z.shape[1] == 0:
        return "basis part has no nontrivial solution"
    z = Z @ np.random.default_rng(pseed).standard_normal(Z.shape[1])
    P = _normalize_points(z, g.n)
    gB = g.restrict(B)
    if classify(gB, P)[1] != "strongly-faithful":
        return "basis realization not strongly faithful"
    ev = edge_vectors(g, P)
    for f in nonbasis:
        if np.hypot(*ev[f]) <= COLLAPSE_TOL:
            return f"induced edge {f} collapsed"
        normals[f] = perp(unit(ev[f]))
    for C in circuits:
        if not _local_special(g, C, normals):
            return f"circuit {list(C)} is not a local special pair"
    d = DirectionAssignment(normals, "constructed")
    dp = d.perp()
    if not _reduced_perp_ok(g, red, dp.normals):
        return "reduced graph perp system has nullity above 1"
    A = build_direction_system(g, d).matrix
    nul = 2 * g.n - rank_of(A)
    if nul != expected:
        return f"nullity {nul}, expected {expected}"
    real = solve_direction_network(g, d, seed=pseed)
    if not real.faithful:
        return f"realization is {real.classification}"
    Zp = nullspace(build_direction_system(g, dp).matrix)
    if not axis_collapsed(g, Zp):
        return f"perp system nullity {Zp.shape[1]} or not collapsed on the mirror"
    tr = rank_transfer_check(g, d, real.points)
    if not tr.ok:
        return f"rank transfer failed: {tr.to_dict()}"
    return SpecialPair(d, real, nul, Zp.shape[1], True, expected,
                       [list(c) for c in circuits], list(nonbasis), tr, 0)


def is_special_pair(g: ColoredGraph, d, seed: int = 0) -> bool:
    """Literal test: nullity 2 with a faithful realization, perp system
    collapsed onto the mirror."""
    if not isinstance(d, DirectionAssignment):
        d = DirectionAssignment(d)
    if 2 * g.n - rank_of(build_direction_system(g, d).matrix) != 2:
        return False
    if not solve_direction_network(g, d, seed=seed).faithful:
        return False
    return axis_collapsed(g, nullspace(build_direction_system(g, d.perp()).matrix))


def rigid_pair(g: ColoredGraph, d, seed: int = 0) -> bool:
    """Faithful realization of (g, d) and a collapsed-only (g, d-perp):
    the property that forces infinitesimal rigidity."""
    if not isinstance(d, DirectionAssignment):
        d = DirectionAssignment(d)
    if not solve_direction_network(g, d, seed=seed).faithful:
        return False
    return axis_collapsed(g, nullspace(build_direction_system(g, d.perp()).matrix))


# --------------------------------------------------- rigidity decision

def _class_rank(g: ColoredGraph, cls: SparsityClass) -> tuple:
    basis = []
    for e in range(g.m):
        if first_violator(g, cls, basis + [e], must=(e,)) is None:
            basis.append(e)
    return len(basis), basis


def decide_rigidity(g: ColoredGraph, seed: int = 0, trials: int = 3) -> dict:
    """Combinatorial verdict cross-checked against the linear algebra.

    Raises InternalDisagreement when they differ.
    """
    target = 2 * g.n - 1
    refl = g.group.kind == REFLECTION
    cls = SparsityClass.REFLECTION_LAMAN if refl else SparsityClass.CONE_LAMAN
    verdict = is_class(g, cls)
    if verdict.member:
        combo = "minimally-rigid"
    else:
        r, _ = _class_rank(g, cls)
        combo = "overbraced" if r == target else "flexible"
    rig = generic_rank(g, algebra.RIGIDITY, trials=trials, seed=seed)
    if rig.rank == target:
        alg = "minimally-rigid" if g.m == target else "overbraced"
    else:
        alg = "flexible"
    evidence = {"verdict": combo, "class": verdict.to_dict(),
                "rigidity_rank": rig.to_dict(), "algebraic_verdict": alg}
    problems = []
    if alg != combo:
        problems.append(f"combinatorics say {combo}, generic rigidity rank says {alg}")
    if refl:
        if verdict.member:
            try:
                sp = construct_special_pair(g, seed=seed)
            except SpecialPairFailure as exc:
                problems.append(f"special pair construction failed: {exc}")
            else:
                rr = rank_of(build_rigidity_system(g, sp.realization.points).matrix)
                evidence["special_pair"] = sp.to_dict()
                evidence["rigidity_rank_at_realization"] = rr
                if rr != target:
                    problems.append(f"rigidity rank {rr} at the special-pair realization")
    else:
        dn = generic_rank(g, algebra.DIRECTION_NET, trials=trials, seed=seed)
        evidence["direction_rank"] = dn.to_dict()
        faithful = None
        if dn.rank == target and g.m == target:
            d = random_assignment(g, np.random.default_rng(seed))
            real = solve_direction_network(g, d, seed=seed)
            faithful = real.faithful
            evidence["realization"] = real.to_dict()
            if faithful:
                tr = rank_transfer_check(g, d, real.points)
                rr = tr.rigidity_rank
                evidence["rank_transfer"] = tr.to_dict()
                if not tr.ok:
                    problems.append(f"rank transfer failed: {tr.to_dict()}")
                if (rr == target) != verdict.member:
                    problems.append(f"rigidity rank {rr} at a faithful realization")
        dn_says = dn.rank == target and bool(faithful)
        if g.m == target and dn_says != verdict.member:
            problems.append(f"direction network rank {dn.rank}, faithful={faithful}, "
                            f"but class membership is {verdict.member}")
    if problems:
        raise InternalDisagreement("; ".join(problems) + f" on {g.to_json()}")
    return evidence
