"""Time the compiled subset-enumeration kernel against the pure-Python one.

Usage: python benchmarks/bench_kernels.py [--edges 14 16 18] [--repeat 3]

Each case is a sparse instance, so the kernel has to visit every subset
before answering "no violator".
"""

import argparse
import time

import numpy as np

from symrig import _kernels_py
from symrig.census import random_member
from symrig.colored_graph import GroupSpec
from symrig.sparsity import SparsityClass

try:
    from symrig import _kernels as _compiled
except ImportError:
    _compiled = None


def _instance(m, seed):
    # Cone-(1,1) graphs have m = n, so n = m gives m edges with no violator.
    rng = np.random.default_rng(seed)
    g = random_member(SparsityClass.CONE11, m, GroupSpec.rotation(3), rng)
    return g


def _time(fn, args, repeat):
    best = float("inf")
    out = None
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn(*args)
        best = min(best, time.perf_counter() - t0)
    return best, out


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--edges", type=int, nargs="+", default=[10, 12, 14, 16])
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()
    if _compiled is None:
        print("compiled extension not built; only the fallback is available")
    print(f"{'edges':>6} {'subsets':>10} {'python s':>10} {'compiled s':>11} {'speedup':>8}")
    for m in args.edges:
        g = _instance(m, args.seed)
        t, h, c = g.arrays()
        call = (g.n, g.k, t, h, c, 1, 0, 1)
        tp, rp = _time(_kernels_py.first_violator, call, args.repeat)
        if _compiled is not None:
            tc, rc = _time(_compiled.first_violator, call, args.repeat)
            assert rc == rp, "backends disagree"
            print(f"{m:>6} {2**m:>10} {tp:>10.4f} {tc:>11.5f} {tp / tc:>8.1f}")
        else:
            print(f"{m:>6} {2**m:>10} {tp:>10.4f} {'-':>11} {'-':>8}")


if __name__ == "__main__":
    main()
