"""Pure-Python GF(p) kernels; the compiled ``_gfkernels`` module mirrors this API."""
from __future__ import annotations

from itertools import combinations, product


class BudgetExceeded(Exception):
    def __init__(self, count: int, budget: int):
        super().__init__(f"enumeration exceeded budget {budget} (reached {count})")
        self.count = count
        self.budget = budget


def rref_mod_p(rows, ncols, p):
    """Reduced row echelon form over GF(p) with leftmost pivots.

    Returns (nonzero rows of the rref, pivot columns).
    """
    m = [[x % p for x in r] for r in rows]
    piv = []
    r = 0
    nrows = len(m)
    for c in range(ncols):
        if r >= nrows:
            break
        k = r
        while k < nrows and m[k][c] == 0:
            k += 1
        if k == nrows:
            continue
        if k != r:
            m[r], m[k] = m[k], m[r]
        row = m[r]
        inv = pow(row[c], p - 2, p)
        if inv != 1:
            row = [(x * inv) % p for x in row]
            m[r] = row
        for i in range(nrows):
            if i != r:
                f = m[i][c]
                if f:
                    mi = m[i]
                    m[i] = [(a - f * b) % p for a, b in zip(mi, row)]
        piv.append(c)
        r += 1
    return [tuple(x) for x in m[:r]], piv


def _reduce(vec, basis, piv, p):
    """Reduce vec against an rref basis; returns the remainder."""
    v = list(vec)
    for b, c in zip(basis, piv):
        f = v[c]
        if f:
            v = [(x - f * y) % p for x, y in zip(v, b)]
    return v


def _span_rref(vectors, n, p):
    if not vectors:
        return (), []
    rows, piv = rref_mod_p(vectors, n, p)
    return tuple(rows), piv


def _all_subspaces_rref(q, p):
    """All subspaces of GF(p)^q, each as a tuple of rref rows."""
    out = [()]
    for k in range(1, q + 1):
        for pivs in combinations(range(q), k):
            free = []
            for i, c in enumerate(pivs):
                for j in range(c + 1, q):
                    if j not in pivs:
                        free.append((i, j))
            for vals in product(range(p), repeat=len(free)):
                rows = [[0] * q for _ in range(k)]
                for i, c in enumerate(pivs):
                    rows[i][c] = 1
                for (i, j), v in zip(free, vals):
                    rows[i][j] = v
                out.append(tuple(tuple(r) for r in rows))
    return out


_SUBSPACE_CACHE: dict = {}


def subspaces_of(q, p):
    key = (q, p)
    s = _SUBSPACE_CACHE.get(key)
    if s is None:
        s = _all_subspaces_rref(q, p)
        _SUBSPACE_CACHE[key] = s
    return s


def _complement(basis, piv, n):
    """Unit vectors completing an rref basis to GF(p)^n."""
    comp = []
    ps = set(piv)
    for j in range(n):
        if j not in ps:
            e = [0] * n
            e[j] = 1
            comp.append(tuple(e))
    return comp


def _apply(mat, vec, p):
    return [sum(a * b for a, b in zip(row, vec)) % p for row in mat]


def enumerate_subobjects(p, dims, edges, budget=200000):
    """All tuples of subspaces closed under the given linear maps.

    ``edges`` is a list ``(s, t, matrix)`` with ``matrix`` a list of rows of shape
    dims[t] x dims[s]; vertices must be topologically ordered (s < t).
    Each result is a tuple, one rref basis (tuple of rows) per vertex.
    """
    nv = len(dims)
    incoming = [[] for _ in range(nv)]
    for s, t, m in edges:
        if not s < t:
            raise ValueError("edges must respect the vertex order")
        incoming[t].append((s, m))
    results = []
    cur = [None] * nv

    def rec(v):
        if v == nv:
            results.append(tuple(cur))
            if len(results) > budget:
                raise BudgetExceeded(len(results), budget)
            return
        n = dims[v]
        req = []
        for s, m in incoming[v]:
            for b in cur[s]:
                req.append(_apply(m, b, p))
        rbasis, rpiv = _span_rref(req, n, p) if req else ((), [])
        comp = _complement(rbasis, rpiv, n)
        q = len(comp)
        for sub in subspaces_of(q, p):
            vecs = list(rbasis)
            for row in sub:
                w = [0] * n
                for coef, e in zip(row, comp):
                    if coef:
                        w = [(x + coef * y) % p for x, y in zip(w, e)]
                vecs.append(tuple(w))
            basis, _ = _span_rref(vecs, n, p)
            cur[v] = basis
            rec(v + 1)
        cur[v] = None

    rec(0)
    return results


def contains(big, small, p):
    """Whether the span of ``small`` lies in the rref span ``big``."""
    if not small:
        return True
    if not big:
        return False
    n = len(big[0])
    piv = []
    for row in big:
        for j in range(n):
            if row[j]:
                piv.append(j)
                break
    for v in small:
        if any(_reduce(v, big, piv, p)):
            return False
    return True
