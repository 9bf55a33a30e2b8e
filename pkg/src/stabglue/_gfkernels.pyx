# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled GF(p) kernels; same API as ``_kernels_py``."""
from libc.stdlib cimport malloc, free

from ._kernels_py import BudgetExceeded, subspaces_of


cdef long long _inv(long long a, long long p):
    cdef long long r = 1, e = p - 2
    a %= p
    while e:
        if e & 1:
            r = r * a % p
        a = a * a % p
        e >>= 1
    return r


cdef int _rref_c(long long *m, int nrows, int ncols, long long p, int *piv):
    """In-place rref of a row-major buffer; returns the rank."""
    cdef int r = 0, c, k, i, j
    cdef long long iv, f, t
    for c in range(ncols):
        if r >= nrows:
            break
        k = r
        while k < nrows and m[k * ncols + c] == 0:
            k += 1
        if k == nrows:
            continue
        if k != r:
            for j in range(ncols):
                t = m[r * ncols + j]
                m[r * ncols + j] = m[k * ncols + j]
                m[k * ncols + j] = t
        iv = _inv(m[r * ncols + c], p)
        if iv != 1:
            for j in range(ncols):
                m[r * ncols + j] = m[r * ncols + j] * iv % p
        for i in range(nrows):
            if i != r:
                f = m[i * ncols + c]
                if f:
                    for j in range(ncols):
                        m[i * ncols + j] = (m[i * ncols + j] - f * m[r * ncols + j]) % p
                        if m[i * ncols + j] < 0:
                            m[i * ncols + j] += p
        piv[r] = c
        r += 1
    return r


def rref_mod_p(rows, int ncols, long long p):
    """Reduced row echelon form over GF(p) with leftmost pivots.

    Returns (nonzero rows of the rref, pivot columns).
    """
    cdef int nrows = len(rows), i, j, rk
    if nrows == 0 or ncols == 0:
        return [], []
    cdef long long *m = <long long *> malloc(nrows * ncols * sizeof(long long))
    cdef int *piv = <int *> malloc((nrows if nrows < ncols else ncols) * sizeof(int) + sizeof(int))
    if m == NULL or piv == NULL:
        free(m)
        free(piv)
        raise MemoryError()
    try:
        for i in range(nrows):
            row = rows[i]
            for j in range(ncols):
                m[i * ncols + j] = row[j] % p
        rk = _rref_c(m, nrows, ncols, p, piv)
        out = [tuple([m[i * ncols + j] for j in range(ncols)]) for i in range(rk)]
        return out, [piv[i] for i in range(rk)]
    finally:
        free(m)
        free(piv)


def _span_rref(vectors, int n, long long p):
    if not vectors:
        return (), []
    rows, piv = rref_mod_p(vectors, n, p)
    return tuple(rows), piv


def enumerate_subobjects(long long p, dims, edges, long budget=200000):
    """All tuples of subspaces closed under the given linear maps.

    ``edges`` is a list ``(s, t, matrix)`` with ``matrix`` a list of rows of shape
    dims[t] x dims[s]; vertices must be topologically ordered (s < t).
    Each result is a tuple, one rref basis (tuple of rows) per vertex.
    """
    cdef int nv = len(dims)
    incoming = [[] for _ in range(nv)]
    for s, t, mt in edges:
        if not s < t:
            raise ValueError("edges must respect the vertex order")
        incoming[t].append((s, [list(r) for r in mt]))
    results = []
    cur = [None] * nv
    _rec(0, nv, p, dims, incoming, cur, results, budget)
    return results


cdef _rec(int v, int nv, long long p, dims, incoming, list cur, list results, long budget):
    cdef int n, q, i, j, k
    cdef long long s
    if v == nv:
        results.append(tuple(cur))
        if len(results) > budget:
            raise BudgetExceeded(len(results), budget)
        return
    n = dims[v]
    req = []
    for src, mt in incoming[v]:
        for b in cur[src]:
            w = []
            for row in mt:
                s = 0
                for j in range(len(row)):
                    s += (<long long> row[j]) * (<long long> b[j])
                w.append(s % p)
            req.append(w)
    if req:
        rbasis, rpiv = _span_rref(req, n, p)
    else:
        rbasis, rpiv = (), []
    ps = set(rpiv)
    comp = [j for j in range(n) if j not in ps]
    q = len(comp)
    for sub in subspaces_of(q, p):
        vecs = list(rbasis)
        for row in sub:
            w = [0] * n
            for k in range(q):
                if row[k]:
                    w[comp[k]] = row[k]
            vecs.append(w)
        basis, _ = _span_rref(vecs, n, p)
        cur[v] = basis
        _rec(v + 1, nv, p, dims, incoming, cur, results, budget)
    cur[v] = None


def contains(big, small, long long p):
    """Whether the span of ``small`` lies in the rref span ``big``."""
    if not small:
        return True
    if not big:
        return False
    n = len(big[0])
    rows, piv = rref_mod_p(list(big) + list(small), n, p)
    return len(rows) == len(big)
