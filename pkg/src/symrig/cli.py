"""Command-line front end.

Exit codes: 0 member / success, 1 non-member, 2 error.
"""

from __future__ import annotations

import argparse
import json
import sys
from collections import Counter

import numpy as np

from . import algebra
from .colored_graph import ColoredGraph, GroupSpec, LiftedDescription, build_lift, \
    check_valid, reduce_lifted
from .census import MAX_EXHAUSTIVE_N, exhaustive, random_graph, random_member
from .decomposition import cone_decompose, nice_decompose, overlap_graph
from .errors import InternalDisagreement, NotInClass
from .realization import SpecialPairFailure, construct_special_pair, cone_collapse_directions, \
    decide_rigidity, emit_svg, random_assignment, reflection_collapse_directions, ross_realize, \
    solve_direction_network
from .sparsity import SparsityClass, is_class, reduced_graph

MAX_RANDOM_N = 6

EXIT_OK, EXIT_NO, EXIT_ERR = 0, 1, 2


class UsageError(ValueError):
    pass


def _read_json(path: str):
    if path == "-":
        return json.load(sys.stdin)
    with open(path, encoding="utf-8") as fh:
        return json.load(fh)


def _load_graph(path: str) -> ColoredGraph:
    g = ColoredGraph.from_dict(_read_json(path))
    check_valid(g)
    return g


def _emit(obj) -> None:
    print(json.dumps(obj, indent=2, sort_keys=False))


def cmd_check(args) -> int:
    g = _load_graph(args.input)
    v = is_class(g, SparsityClass.parse(args.cls))
    _emit(v.to_dict())
    return EXIT_OK if v.member else EXIT_NO


def cmd_rank(args) -> int:
    g = _load_graph(args.input)
    rep = algebra.generic_rank(g, args.kind, trials=args.trials, seed=args.seed, rel_tol=args.tol)
    _emit(rep.to_dict())
    return EXIT_OK


def cmd_realize(args) -> int:
    g = _load_graph(args.input)
    how = args.construct
    if how == "random":
        d = random_assignment(g, np.random.default_rng(args.seed))
        real = solve_direction_network(g, d, seed=args.seed)
    elif how == "collapse":
        d = (reflection_collapse_directions(g) if g.group.kind == "reflection"
             else cone_collapse_directions(g, seed=args.seed))
        real = solve_direction_network(g, d, seed=args.seed)
    elif how == "ross":
        d, real = ross_realize(g, seed=args.seed)
    else:
        sp = construct_special_pair(g, seed=args.seed)
        d, real = sp.d, sp.realization
    out = real.to_dict()
    out["directions"] = d.to_dict()
    if args.svg:
        emit_svg(g, real, args.svg)
        out["svg"] = args.svg
    _emit(out)
    return EXIT_OK


def cmd_decompose(args) -> int:
    g = _load_graph(args.input)
    cls = SparsityClass.parse(args.cls)
    if cls is SparsityClass.REFLECTION22:
        _emit(nice_decompose(g).to_dict())
    elif cls is SparsityClass.CONE22:
        dec = cone_decompose(g)
        out = dec.to_dict()
        out["overlap"] = overlap_graph(g, dec).to_dict()
        _emit(out)
    else:
        raise UsageError("decompose supports --class reflection-22 or cone-22")
    return EXIT_OK


def cmd_reduce(args) -> int:
    data = _read_json(args.input)
    if "action" in data:
        g = reduce_lifted(LiftedDescription.from_dict(data))
    else:
        g = ColoredGraph.from_dict(data)
        check_valid(g)
        g = reduced_graph(g)
    _emit(g.to_dict())
    return EXIT_OK


def cmd_special_pair(args) -> int:
    g = _load_graph(args.input)
    if g.group.kind != "reflection":
        raise UsageError("special pairs need a reflection graph")
    if not is_class(g, SparsityClass.REFLECTION_LAMAN).member:
        _emit({"member": False, "class": SparsityClass.REFLECTION_LAMAN.value})
        return EXIT_NO
    _emit(construct_special_pair(g, seed=args.seed).to_dict())
    return EXIT_OK


def cmd_lift(args) -> int:
    g = _load_graph(args.input)
    _emit(build_lift(g).to_description())
    return EXIT_OK


def cmd_rigid(args) -> int:
    g = _load_graph(args.input)
    ev = decide_rigidity(g, seed=args.seed, trials=args.trials)
    _emit(ev)
    return EXIT_OK if ev["verdict"] == "minimally-rigid" else EXIT_NO


def xvalidate(kind: str, ks, n_max: int, exhaustive_mode: bool, samples: int, seed: int,
              trials: int = 3) -> dict:
    """Run the rigidity decision on a family of m = 2n - 1 graphs."""
    if exhaustive_mode and n_max > MAX_EXHAUSTIVE_N:
        raise UsageError(f"exhaustive mode supports n <= {MAX_EXHAUSTIVE_N}")
    if not exhaustive_mode and n_max > MAX_RANDOM_N:
        raise UsageError(f"random mode supports n <= {MAX_RANDOM_N}")
    groups = [GroupSpec.reflection()] if kind == "reflection" else [GroupSpec.rotation(k) for k in ks]
    rng = np.random.default_rng(seed)
    matrix = Counter()
    disagreements = []
    count = 0
    for grp in groups:
        if exhaustive_mode:
            family = (g for n in range(1, n_max + 1) for g in exhaustive(n, 2 * n - 1, grp))
        else:
            cls = SparsityClass.REFLECTION_LAMAN if grp.kind == "reflection" else SparsityClass.CONE_LAMAN

            def family(grp=grp, cls=cls):
                for i in range(samples):
                    n = int(rng.integers(1, n_max + 1))
                    # half class members, half arbitrary graphs with the same count
                    yield (random_member(cls, n, grp, rng) if i % 2 == 0
                           else random_graph(n, 2 * n - 1, grp, rng))
            family = family()
        for g in family:
            count += 1
            try:
                ev = decide_rigidity(g, seed=seed, trials=trials)
            except InternalDisagreement as exc:
                disagreements.append({"instance": count, "group": grp.to_dict(),
                                      "graph": g.to_dict(), "error": str(exc)})
                continue
            matrix[f"{ev['verdict']}|{ev['algebraic_verdict']}"] += 1
    return {"kind": kind, "k": [g.order for g in groups], "n_max": n_max,
            "mode": "exhaustive" if exhaustive_mode else "random",
            "samples": None if exhaustive_mode else samples, "seed": seed,
            "instances": count, "agreement": dict(sorted(matrix.items())),
            "disagreements": disagreements}


def cmd_xvalidate(args) -> int:
    rep = xvalidate(args.kind, args.k, args.n_max, args.exhaustive, args.samples, args.seed,
                    args.trials)
    _emit(rep)
    return EXIT_OK if not rep["disagreements"] else EXIT_NO


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="symrig", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    def add(name, func, helptext, graph=True):
        sp = sub.add_parser(name, help=helptext)
        if graph:
            sp.add_argument("input", help="colored-graph JSON file, or - for stdin")
        sp.add_argument("--seed", type=int, default=0)
        sp.set_defaults(func=func)
        return sp

    sp = add("check", cmd_check, "sparsity class membership")
    sp.add_argument("--class", dest="cls", required=True,
                    choices=[c.value for c in SparsityClass])

    sp = add("rank", cmd_rank, "generic rank of a linear system")
    sp.add_argument("--kind", choices=algebra.KINDS, default=algebra.DIRECTION_NET)
    sp.add_argument("--trials", type=int, default=3)
    sp.add_argument("--tol", type=float, default=algebra.REL_TOL)

    sp = add("realize", cmd_realize, "solve a direction network")
    sp.add_argument("--construct", choices=["random", "collapse", "ross", "special-pair"],
                    default="random")
    sp.add_argument("--svg", help="also write an SVG drawing here")

    sp = add("decompose", cmd_decompose, "tree/map or two-map decomposition")
    sp.add_argument("--class", dest="cls", default="reflection-22",
                    choices=["reflection-22", "cone-22"])

    add("reduce", cmd_reduce, "reduce a lifted description, or contract Ross-circuits")
    add("special-pair", cmd_special_pair, "construct a special pair")
    add("lift", cmd_lift, "lifted description of a colored graph")

    sp = add("rigid", cmd_rigid, "decide generic minimal rigidity")
    sp.add_argument("--trials", type=int, default=3)

    sp = add("xvalidate", cmd_xvalidate, "cross-validate over a graph family", graph=False)
    sp.add_argument("--kind", choices=["rotation", "reflection"], default="rotation")
    sp.add_argument("--k", type=int, nargs="+", default=[2])
    sp.add_argument("--n-max", type=int, default=3)
    mode = sp.add_mutually_exclusive_group()
    mode.add_argument("--exhaustive", action="store_true")
    mode.add_argument("--samples", type=int, default=100)
    sp.add_argument("--trials", type=int, default=3)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (OSError, json.JSONDecodeError, ValueError, NotInClass, SpecialPairFailure,
            InternalDisagreement, RuntimeError) as exc:
        print(f"symrig: error: {exc}", file=sys.stderr)
        return EXIT_ERR


if __name__ == "__main__":
    sys.exit(main())
