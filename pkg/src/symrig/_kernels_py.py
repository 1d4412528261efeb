"""Pure-Python versions of the subset-enumeration kernels.

These mirror ``_kernels.pyx`` line for line and must return identical
results; ``symrig.kernels`` picks whichever is available.
"""

from itertools import combinations


def _subset_violates(subset, n, k, tails, heads, colors, a, b_nt, b_t, parent, pot, nontriv, stamp, tag):
    touched = []
    unions = 0
    for e in subset:
        for v in (tails[e], heads[e]):
            if stamp[v] != tag:
                stamp[v] = tag
                parent[v] = v
                pot[v] = 0
                nontriv[v] = 0
                touched.append(v)
        ru, pu = _find(tails[e], parent, pot, k)
        rv, pv = _find(heads[e], parent, pot, k)
        if ru != rv:
            # label(head) = label(tail) + color
            parent[rv] = ru
            pot[rv] = (pu + colors[e] - pv) % k
            nontriv[ru] |= nontriv[rv]
            unions += 1
        elif (pu + colors[e] - pv) % k != 0:
            nontriv[ru] = 1
    n_sub = len(touched)
    c_nt = 0
    c_t = 0
    for v in touched:
        if parent[v] == v:
            if nontriv[v]:
                c_nt += 1
            else:
                c_t += 1
    return len(subset) > a * n_sub - b_nt * c_nt - b_t * c_t


def _find(v, parent, pot, k):
    acc = 0
    root = v
    while parent[root] != root:
        acc += pot[root]
        root = parent[root]
    # compress
    total = acc
    while parent[v] != root:
        nxt = parent[v]
        step = pot[v]
        parent[v] = root
        pot[v] = total % k
        total -= step
        v = nxt
    return root, acc % k


def first_violator(n, k, tails, heads, colors, a, b_nt, b_t, must=()):
    """Smallest (size, then lexicographic) violating edge subset containing ``must``.

    A subset violates when ``m' > a*n' - b_nt*c' - b_t*c0'`` where c' counts
    components with nontrivial gain image and c0' the trivial ones.
    Returns a tuple of edge indices, or None if every subset satisfies the count.
    """
    m = len(tails)
    must = tuple(sorted(set(must)))
    free = [e for e in range(m) if e not in set(must)]
    parent = [0] * n
    pot = [0] * n
    nontriv = [0] * n
    stamp = [-1] * n
    tag = 0
    lo = 0 if must else 1
    for s in range(lo, len(free) + 1):
        for combo in combinations(free, s):
            subset = tuple(sorted(must + combo))
            tag += 1
            if _subset_violates(subset, n, k, tails, heads, colors, a, b_nt, b_t,
                                parent, pot, nontriv, stamp, tag):
                return subset
    return None
