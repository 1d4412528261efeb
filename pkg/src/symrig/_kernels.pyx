# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled subset-enumeration kernels (see ``_kernels_py`` for the reference)."""

from libc.stdlib cimport malloc, free


cdef inline int _mod(int x, int k) nogil:
    x = x % k
    if x < 0:
        x += k
    return x


cdef int _find(int v, int* parent, int* pot, int k, int* out_pot) nogil:
    cdef int acc = 0
    cdef int root = v
    cdef int nxt, step, total
    while parent[root] != root:
        acc += pot[root]
        root = parent[root]
    total = acc
    while parent[v] != root:
        nxt = parent[v]
        step = pot[v]
        parent[v] = root
        pot[v] = _mod(total, k)
        total -= step
        v = nxt
    out_pot[0] = _mod(acc, k)
    return root


cdef bint _violates(int* subset, int size, int k, int* tails, int* heads, int* colors,
                    int a, int b_nt, int b_t, int* parent, int* pot, char* nontriv,
                    int* stamp, int tag, int* touched) nogil:
    cdef int i, j, e, v, ru, rv, pu, pv
    cdef int n_sub = 0
    cdef int c_nt = 0
    cdef int c_t = 0
    cdef int ends[2]
    for i in range(size):
        e = subset[i]
        ends[0] = tails[e]
        ends[1] = heads[e]
        for j in range(2):
            v = ends[j]
            if stamp[v] != tag:
                stamp[v] = tag
                parent[v] = v
                pot[v] = 0
                nontriv[v] = 0
                touched[n_sub] = v
                n_sub += 1
        ru = _find(tails[e], parent, pot, k, &pu)
        rv = _find(heads[e], parent, pot, k, &pv)
        if ru != rv:
            parent[rv] = ru
            pot[rv] = _mod(pu + colors[e] - pv, k)
            if nontriv[rv]:
                nontriv[ru] = 1
        elif _mod(pu + colors[e] - pv, k) != 0:
            nontriv[ru] = 1
    for i in range(n_sub):
        v = touched[i]
        if parent[v] == v:
            if nontriv[v]:
                c_nt += 1
            else:
                c_t += 1
    return size > a * n_sub - b_nt * c_nt - b_t * c_t


def first_violator(int n, int k, tails, heads, colors, int a, int b_nt, int b_t, must=()):
    """Compiled twin of ``_kernels_py.first_violator``."""
    cdef int m = len(tails)
    must_sorted = sorted(set(must))
    must_set = set(must_sorted)
    free_list = [e for e in range(m) if e not in must_set]
    cdef int n_must = len(must_sorted)
    cdef int n_free = len(free_list)
    cdef int *ct = <int*> malloc(max(m, 1) * sizeof(int))
    cdef int *ch = <int*> malloc(max(m, 1) * sizeof(int))
    cdef int *cc = <int*> malloc(max(m, 1) * sizeof(int))
    cdef int *fr = <int*> malloc(max(n_free, 1) * sizeof(int))
    cdef int *ms = <int*> malloc(max(n_must, 1) * sizeof(int))
    cdef int *idx = <int*> malloc((n_free + 1) * sizeof(int))
    cdef int *subset = <int*> malloc(max(m, 1) * sizeof(int))
    cdef int *parent = <int*> malloc(max(n, 1) * sizeof(int))
    cdef int *pot = <int*> malloc(max(n, 1) * sizeof(int))
    cdef char *nontriv = <char*> malloc(max(n, 1) * sizeof(char))
    cdef int *stamp = <int*> malloc(max(n, 1) * sizeof(int))
    cdef int *touched = <int*> malloc(max(n, 1) * sizeof(int))
    cdef int i, s, lo, size, p, q, fi, mi, tag = 0
    cdef bint found = False
    result = None
    try:
        for i in range(m):
            ct[i] = tails[i]
            ch[i] = heads[i]
            cc[i] = colors[i]
        for i in range(n_free):
            fr[i] = free_list[i]
        for i in range(n_must):
            ms[i] = must_sorted[i]
        for i in range(n):
            stamp[i] = -1
        lo = 0 if n_must > 0 else 1
        with nogil:
            for s in range(lo, n_free + 1):
                for i in range(s):
                    idx[i] = i
                while True:
                    # merge the fixed and the chosen edges in increasing order
                    fi = 0
                    mi = 0
                    size = 0
                    while fi < s or mi < n_must:
                        if mi >= n_must or (fi < s and fr[idx[fi]] < ms[mi]):
                            subset[size] = fr[idx[fi]]
                            fi += 1
                        else:
                            subset[size] = ms[mi]
                            mi += 1
                        size += 1
                    tag += 1
                    if _violates(subset, size, k, ct, ch, cc, a, b_nt, b_t,
                                 parent, pot, nontriv, stamp, tag, touched):
                        found = True
                        break
                    # next combination in lexicographic order
                    p = s - 1
                    while p >= 0 and idx[p] == n_free - s + p:
                        p -= 1
                    if p < 0:
                        break
                    idx[p] += 1
                    for q in range(p + 1, s):
                        idx[q] = idx[q - 1] + 1
                if found:
                    break
        if found:
            result = tuple(subset[i] for i in range(size))
    finally:
        free(ct); free(ch); free(cc); free(fr); free(ms); free(idx)
        free(subset); free(parent); free(pot); free(nontriv); free(stamp); free(touched)
    return result
