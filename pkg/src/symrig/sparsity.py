"""Membership in the colored sparsity classes, with witnesses.

Every class is defined by a per-component bound on edge-induced subgraphs,
``m' <= a*n' - b_nt*c' - b_t*c0'`` where ``c'`` counts components whose
gain image is nontrivial and ``c0'`` those whose image is trivial, plus a
global edge count. Brute force over edge subsets is the reference; the
matroid-union path is the fast one and is checked against it on small
inputs.
"""

from __future__ import annotations

import enum
import itertools
from collections import deque
from dataclasses import dataclass, field
from typing import Callable, Iterable, Sequence

from . import kernels
from .colored_graph import ColoredGraph, Edge, _Potentials, edge_components, \
    rho_image_trivial, spanning_forest, forest_potentials
from .errors import InternalDisagreement, NotInClass, TooLarge

MAX_ENUM_EDGES = 26


class SparsityClass(enum.Enum):
    CONE_LAMAN = "cone-laman"
    REFLECTION_LAMAN = "reflection-laman"
    ROSS = "ross"
    ROSS_CIRCUIT = "ross-circuit"
    CONE22 = "cone-22"
    REFLECTION22 = "reflection-22"
    CONE11 = "cone-11"
    REFLECTION11 = "reflection-11"
    PLAIN22 = "plain-22"
    LAMAN23 = "laman-23"

    @classmethod
    def parse(cls, name: str) -> "SparsityClass":
        key = name.strip().lower().replace("_", "-")
        for c in cls:
            if key in (c.value, c.value.replace("-", ""), c.name.lower().replace("_", "-")):
                return c
        raise ValueError(f"unknown sparsity class {name!r}")


# (a, b_nt, b_t, global count offset): bound a*n' - b_nt*c' - b_t*c0',
# global count m = a*n - offset
_COUNTS = {
    SparsityClass.CONE_LAMAN: (2, 1, 3, 1),
    SparsityClass.REFLECTION_LAMAN: (2, 1, 3, 1),
    SparsityClass.ROSS: (2, 2, 3, 2),
    SparsityClass.ROSS_CIRCUIT: (2, 2, 3, None),
    SparsityClass.CONE22: (2, 0, 2, 0),
    SparsityClass.REFLECTION22: (2, 1, 2, 1),
    SparsityClass.CONE11: (1, 0, 1, 0),
    SparsityClass.REFLECTION11: (1, 0, 1, 0),
    SparsityClass.PLAIN22: (2, 2, 2, 2),
    SparsityClass.LAMAN23: (2, 3, 3, 3),
}


def count_bound(cls: SparsityClass, n: int, c: int, c0: int) -> int:
    """Right-hand side of the class inequality for a subgraph."""
    a, b_nt, b_t, _ = _COUNTS[cls]
    return a * n - b_nt * c - b_t * c0


def global_count(cls: SparsityClass, n: int) -> int | None:
    a, _, _, off = _COUNTS[cls]
    return None if off is None else a * n - off


@dataclass(frozen=True)
class SparsityVerdict:
    cls: SparsityClass
    member: bool
    witness: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {"class": self.cls.value, "member": self.member, "witness": self.witness}


def subset_counts(g: ColoredGraph, idx: Iterable[int]) -> dict:
    idx = sorted(set(idx))
    triv = rho_image_trivial(g, idx)
    return {"n": len(g.vertices_of(idx)), "m": len(idx),
            "c": triv.count(False), "c0": triv.count(True)}


def _violation_witness(g, cls, idx) -> dict:
    w = {"type": "violation", "edges": list(idx)}
    w.update(subset_counts(g, idx))
    w["bound"] = count_bound(cls, w["n"], w["c"], w["c0"])
    return w


def first_violator(g: ColoredGraph, cls: SparsityClass, idx: Iterable[int] | None = None,
                   must: Sequence[int] = ()) -> tuple | None:
    """Smallest (size, then lexicographic) violating subset of ``idx``
    containing ``must``, in global edge indices.

    Without ``must`` a minimal-size violator is connected (the counts add
    over components), so each connected component is searched on its own.
    """
    idx = sorted(set(range(g.m) if idx is None else idx))
    must = sorted(set(must))
    a, b_nt, b_t, _ = _COUNTS[cls]
    comps = [idx] if must else edge_components(g, idx)
    best = None
    for comp in comps:
        if len(comp) > MAX_ENUM_EDGES:
            raise TooLarge(f"component with {len(comp)} edges exceeds the "
                           f"enumeration guard of {MAX_ENUM_EDGES}")
        sub, _ = g.compact(comp)
        t, h, col = sub.arrays()
        local_must = [comp.index(e) for e in must]
        hit = kernels.first_violator(sub.n, g.k, t, h, col, a, b_nt, b_t, tuple(local_must))
        if hit is not None:
            cand = tuple(comp[i] for i in hit)
            if best is None or (len(cand), cand) < (len(best), best):
                best = cand
    return best


def is_sparse_bruteforce(g: ColoredGraph, cls: SparsityClass) -> SparsityVerdict:
    """Check every nonempty edge subset, then the global count."""
    if g.m > MAX_ENUM_EDGES:
        raise TooLarge(f"{g.m} edges exceeds the enumeration guard of {MAX_ENUM_EDGES}")
    if cls is SparsityClass.ROSS_CIRCUIT:
        return _ross_circuit_bruteforce(g)
    hit = first_violator(g, cls)
    if hit is not None:
        return SparsityVerdict(cls, False, _violation_witness(g, cls, hit))
    need = global_count(cls, g.n)
    if g.m != need:
        return SparsityVerdict(cls, False, {"type": "count", "n": g.n, "m": g.m, "required": need})
    return SparsityVerdict(cls, True, {"type": "counts", "n": g.n, "m": g.m})


def _ross_circuit_bruteforce(g: ColoredGraph) -> SparsityVerdict:
    cls = SparsityClass.ROSS_CIRCUIT
    if g.m == 0 or first_violator(g, SparsityClass.ROSS) is None:
        return SparsityVerdict(cls, False, {"type": "independent", "n": g.n, "m": g.m})
    for e in range(g.m):
        hit = first_violator(g, SparsityClass.ROSS, [i for i in range(g.m) if i != e])
        if hit is not None:
            return SparsityVerdict(cls, False, _violation_witness(g, SparsityClass.ROSS, hit))
    return SparsityVerdict(cls, True, {"type": "circuit", "n": g.n, "m": g.m})


# ------------------------------------------------------ independence oracles

def graphic_independent(g: ColoredGraph, edge_subset: Iterable[int]) -> bool:
    """Forest test; loops are dependent."""
    uf = _Potentials(1)
    for i in edge_subset:
        e = g.edges[i]
        if uf.union(e.tail, e.head, 0) is not None:
            return False
    return True


def gain11_independent(g: ColoredGraph, edge_subset: Iterable[int]) -> bool:
    """At most one cycle per component, and that cycle has nonzero gain."""
    uf = _Potentials(g.k)
    cyc = {}
    for i in edge_subset:
        e = g.edges[i]
        rt, pt = uf.find(e.tail)
        rh, ph = uf.find(e.head)
        if rt != rh:
            if cyc.get(rt) and cyc.get(rh):
                return False
            uf.union(e.tail, e.head, e.color % g.k)
            cyc[rt] = cyc.get(rt, False) or cyc.get(rh, False)
        else:
            if cyc.get(rt) or (pt + e.color - ph) % g.k == 0:
                return False
            cyc[rt] = True
    return True


def greedy_rank(g: ColoredGraph, edge_subset: Iterable[int], oracle: Callable) -> int:
    basis = []
    for i in sorted(set(edge_subset)):
        if oracle(g, basis + [i]):
            basis.append(i)
    return len(basis)


# ----------------------------------------------------------- matroid union

@dataclass(frozen=True)
class UnionDecomposition:
    target: SparsityClass
    success: bool
    parts: tuple = ()           # one sorted edge tuple per matroid
    witness: tuple = ()         # deficient set on failure
    ranks: tuple = ()           # rank of the witness in each matroid

    def to_dict(self) -> dict:
        d = {"target": self.target.value, "success": self.success,
             "parts": [list(p) for p in self.parts]}
        if not self.success:
            d["witness"] = list(self.witness)
            d["ranks"] = list(self.ranks)
        return d


_UNION_ORACLES = {
    SparsityClass.REFLECTION22: (graphic_independent, gain11_independent),
    SparsityClass.CONE22: (gain11_independent, gain11_independent),
}


def matroid_partition(g: ColoredGraph, oracles: Sequence[Callable], elements: Iterable[int]):
    """Edmonds matroid partition with shortest augmenting paths.

    Returns (parts, None) when every element was placed, else
    (parts so far, visited set) where the visited set S satisfies
    |S| > sum of its ranks.
    """
    sets = [set() for _ in oracles]
    owner = {}
    for x in sorted(set(elements)):
        parent = {x: None}
        queue = deque([x])
        found = None
        while queue and found is None:
            y = queue.popleft()
            for i, indep in enumerate(oracles):
                if owner.get(y) == i:
                    continue
                if indep(g, sorted(sets[i] | {y})):
                    found = (y, i)
                    break
                for z in sorted(sets[i]):
                    if z not in parent and indep(g, sorted((sets[i] - {z}) | {y})):
                        parent[z] = (y, i)
                        queue.append(z)
        if found is None:
            return [sorted(s) for s in sets], sorted(parent)
        cur, tgt = found
        while True:
            old = owner.get(cur)
            if old is not None:
                sets[old].discard(cur)
            sets[tgt].add(cur)
            owner[cur] = tgt
            if parent[cur] is None:
                break
            cur, tgt = parent[cur]
    return [sorted(s) for s in sets], None


def matroid_union_decompose(g: ColoredGraph, target: SparsityClass) -> UnionDecomposition:
    """Split into (spanning tree, gain-(1,1)) for reflection-(2,2) or into two
    gain-(1,1) graphs for cone-(2,2)."""
    if target not in _UNION_ORACLES:
        raise ValueError(f"no union decomposition for {target.value}")
    need = global_count(target, g.n)
    if g.m != need:
        raise ValueError(f"{target.value} needs m = {need}, got {g.m}")
    oracles = _UNION_ORACLES[target]
    parts, visited = matroid_partition(g, oracles, range(g.m))
    if visited is None:
        return UnionDecomposition(target, True, tuple(tuple(p) for p in parts))
    ranks = tuple(greedy_rank(g, visited, o) for o in oracles)
    if len(visited) <= sum(ranks):
        raise InternalDisagreement("matroid partition failed without a deficient set")
    return UnionDecomposition(target, False, tuple(tuple(p) for p in parts),
                              tuple(visited), ranks)


# ------------------------------------------------------------ dispatch

def trivial_block(g: ColoredGraph, size_bound: Callable[[int], int] = lambda n: 2 * n - 2):
    """A vertex set U (|U| >= 2) with potentials h such that at least
    ``size_bound(|U|)`` edges inside U satisfy color = h(head) - h(tail).

    Those edges form a subgraph whose gain image is trivial. Returns
    (U, h, edge list) for the first such U (by size, then lexicographic),
    or None.
    """
    k = g.k
    for s in range(2, g.n + 1):
        for U in itertools.combinations(range(g.n), s):
            inside = [i for i, e in enumerate(g.edges) if e.tail in U and e.head in U]
            need = size_bound(s)
            if len(inside) < need:
                continue
            pos = {v: j for j, v in enumerate(U)}
            for rest in itertools.product(range(k), repeat=s - 1):
                h = (0,) + rest
                good = [i for i in inside
                        if (g.edges[i].color - h[pos[g.edges[i].head]]
                            + h[pos[g.edges[i].tail]]) % k == 0]
                if len(good) >= need:
                    return list(U), dict(zip(U, h)), good
    return None


def _union_verdict(g: ColoredGraph, cls: SparsityClass) -> SparsityVerdict:
    need = global_count(cls, g.n)
    if g.m != need:
        return SparsityVerdict(cls, False, {"type": "count", "n": g.n, "m": g.m, "required": need})
    dec = matroid_union_decompose(g, cls)
    if dec.success:
        return SparsityVerdict(cls, True, {"type": "decomposition",
                                           "parts": [list(p) for p in dec.parts]})
    return SparsityVerdict(cls, False, {"type": "deficient-set", "edges": list(dec.witness),
                                        "ranks": list(dec.ranks)})


def _cone_laman_fast(g: ColoredGraph) -> SparsityVerdict:
    cls = SparsityClass.CONE_LAMAN
    need = global_count(cls, g.n)
    if g.m != need:
        return SparsityVerdict(cls, False, {"type": "count", "n": g.n, "m": g.m, "required": need})
    for i, e in enumerate(g.edges):
        doubled = g.add_edge(e.tail, e.head, e.color)
        v = _union_verdict(doubled, SparsityClass.CONE22)
        if not v.member:
            return SparsityVerdict(cls, False, {"type": "doubling", "edge": i,
                                                "cone22": v.witness})
    return SparsityVerdict(cls, True, {"type": "doubling", "n": g.n, "m": g.m})


def _reflection_laman_fast(g: ColoredGraph) -> SparsityVerdict:
    cls = SparsityClass.REFLECTION_LAMAN
    v22 = _union_verdict(g, SparsityClass.REFLECTION22)
    if not v22.member:
        return SparsityVerdict(cls, False, v22.witness)
    block = trivial_block(g)
    if block is not None:
        U, h, edges = block
        return SparsityVerdict(cls, False, {"type": "trivial-block", "vertices": U,
                                            "potentials": {str(v): p for v, p in h.items()},
                                            "edges": edges})
    return SparsityVerdict(cls, True, v22.witness)


_FAST = {
    SparsityClass.CONE22: lambda g: _union_verdict(g, SparsityClass.CONE22),
    SparsityClass.REFLECTION22: lambda g: _union_verdict(g, SparsityClass.REFLECTION22),
    SparsityClass.CONE_LAMAN: _cone_laman_fast,
    SparsityClass.REFLECTION_LAMAN: _reflection_laman_fast,
}


def is_class(g: ColoredGraph, cls: SparsityClass | str, crosscheck: bool = True) -> SparsityVerdict:
    """Class membership. Fast paths are compared with brute force when the
    instance is small enough; a mismatch raises InternalDisagreement."""
    if isinstance(cls, str):
        cls = SparsityClass.parse(cls)
    fast = _FAST.get(cls)
    if fast is None:
        return is_sparse_bruteforce(g, cls)
    verdict = fast(g)
    if crosscheck and g.m <= MAX_ENUM_EDGES:
        ref = is_sparse_bruteforce(g, cls)
        if ref.member != verdict.member:
            raise InternalDisagreement(
                f"{cls.value}: fast path says {verdict.member}, brute force says {ref.member} "
                f"on {g.to_json()}")
        if not ref.member and ref.witness.get("type") == "violation":
            # the brute-force witness is the minimal circuit; prefer it
            verdict = SparsityVerdict(cls, False, dict(ref.witness, fast=verdict.witness))
    return verdict


# ---------------------------------------------------------- Ross circuits

def ross_basis(g: ColoredGraph) -> tuple:
    """Greedy Ross-independent edges in index order, and the rejected ones."""
    basis, rejected = [], []
    for e in range(g.m):
        if first_violator(g, SparsityClass.ROSS, basis + [e], must=(e,)) is None:
            basis.append(e)
        else:
            rejected.append(e)
    return basis, rejected


def fundamental_circuit(g: ColoredGraph, basis: Sequence[int], e: int) -> list:
    """Minimal Ross-dependent subset of basis + e, by deletion probing."""
    cur = sorted(set(basis) | {e})
    for f in list(cur):
        if f == e:
            continue
        trial = [x for x in cur if x != f]
        if first_violator(g, SparsityClass.ROSS, trial, must=(e,)) is not None:
            cur = trial
    return cur


def find_ross_circuits(g: ColoredGraph, check: bool = True) -> list:
    """The Ross-circuits of a reflection-Laman graph (vertex disjoint)."""
    if check and not is_class(g, SparsityClass.REFLECTION_LAMAN).member:
        raise NotInClass("input is not reflection-Laman")
    basis, rejected = ross_basis(g)
    circuits = [fundamental_circuit(g, basis, e) for e in rejected]
    seen = set()
    for c in circuits:
        vs = set(g.vertices_of(c))
        if vs & seen:
            raise InternalDisagreement(f"Ross-circuits share vertices: {circuits}")
        seen |= vs
    return circuits


@dataclass(frozen=True)
class Reduction:
    """Reduced graph plus the bookkeeping to map back to the input."""

    graph: ColoredGraph
    circuits: tuple         # edge lists in the input
    vertex_map: tuple       # input vertex -> reduced vertex
    potentials: tuple       # switching potential per input vertex
    edge_map: tuple         # input edge -> reduced edge index, or None if contracted


def _is_unit_loop(g: ColoredGraph, circuit) -> bool:
    return len(circuit) == 1 and g.edges[circuit[0]].is_loop and g.edges[circuit[0]].color == 1


def reduce_ross_circuits(g: ColoredGraph, circuits=None) -> Reduction:
    if circuits is None:
        circuits = find_ross_circuits(g)
    phi = [0] * g.n
    cls_of = list(range(g.n))
    contracted = []
    for c in circuits:
        if _is_unit_loop(g, c):
            continue
        forest = spanning_forest(g, c)
        pot = forest_potentials(g, forest)
        vs = g.vertices_of(c)
        for v in vs:
            phi[v] = pot[v]
            cls_of[v] = vs[0]
        contracted.append(vs[0])
    reps = sorted(set(cls_of))
    new_id = {r: i for i, r in enumerate(reps)}
    vmap = tuple(new_id[cls_of[v]] for v in range(g.n))
    edges, emap = [], []
    for e in g.edges:
        t, h = vmap[e.tail], vmap[e.head]
        if t == h and cls_of[e.tail] in contracted:
            emap.append(None)
            continue
        emap.append(len(edges))
        edges.append(Edge(t, h, (e.color + phi[e.tail] - phi[e.head]) % g.k))
    for r in contracted:
        edges.append(Edge(new_id[r], new_id[r], 1))
    red = ColoredGraph(len(reps), tuple(edges), g.group)
    return Reduction(red, tuple(tuple(c) for c in circuits), vmap, tuple(phi), tuple(emap))


def reduced_graph(g: ColoredGraph) -> ColoredGraph:
    """Contract each Ross-circuit to a vertex carrying a loop colored 1."""
    return reduce_ross_circuits(g).graph
