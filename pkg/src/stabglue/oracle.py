"""Brute-force semistability and HN oracles over GF(p), plus test universes.

Everything here works on finite fields by listing every subobject, so it is
only meant for desk-scale objects (total dimension around 5 over GF(2)).
"""
from __future__ import annotations

from functools import lru_cache
from itertools import product
from typing import Callable

from . import kernels
from .exact import ExactComplex, phase_of
from .linalg import Field, Mat, GF
from .quiverrep import IndecLabel, Rep, RepMap, direct_sum, hom_space, indecomposable, quiver, zero_rep

__all__ = [
    "rep_problem",
    "pair_problem",
    "brute_semistable",
    "brute_hn",
    "brute_stable",
    "chain_to_rref",
    "irreducible_polys",
    "indec_labels",
    "rep_universe",
    "pair_universe",
]


# ------------------------------------------------------------ problems


def _rows(m: Mat):
    return [list(r) for r in m.data]


def rep_problem(m: Rep):
    """(p, dims, edges) for the subrepresentations of m."""
    p = m.field.char
    if not p:
        raise ValueError("the oracle needs a finite field")
    edges = [(s, t, _rows(a)) for (s, t), a in zip(m.quiver.arrows, m.arrows)]
    return p, list(m.dims), edges


def pair_problem(delta: RepMap):
    """(p, dims, edges) for sub-pairs (A', B') with delta(A') in B'.

    Vertices are the A-vertices followed by the B-vertices.
    """
    a, b = delta.src, delta.tgt
    p = a.field.char
    if not p:
        raise ValueError("the oracle needs a finite field")
    nv = a.quiver.nverts
    edges = [(s, t, _rows(m)) for (s, t), m in zip(a.quiver.arrows, a.arrows)]
    edges += [(nv + s, nv + t, _rows(m)) for (s, t), m in zip(b.quiver.arrows, b.arrows)]
    edges += [(v, nv + v, _rows(c)) for v, c in enumerate(delta.comps)]
    edges.sort(key=lambda e: (e[1], e[0]))
    return p, list(a.dims) + list(b.dims), edges


# ------------------------------------------------------------ brute force


def _dims(sub) -> tuple:
    return tuple(len(b) for b in sub)


@lru_cache(maxsize=4096)
def _subs_cached(p, dims, edges_key, budget):
    edges = [(s, t, [list(r) for r in m]) for s, t, m in edges_key]
    return kernels.enumerate_subobjects(p, list(dims), edges, budget)


def _subs(problem, budget):
    p, dims, edges = problem
    key = tuple((s, t, tuple(tuple(r) for r in m)) for s, t, m in edges)
    return _subs_cached(p, tuple(dims), key, budget)


def _phases(charge):
    """Memoized dims -> phase; the same dimension vectors recur across subobjects."""
    memo = getattr(charge, "_phase_memo", None)
    if memo is None:
        memo = {}
        try:
            charge._phase_memo = memo
        except AttributeError:
            pass

    def ph(d):
        r = memo.get(d)
        if r is None:
            r = memo[d] = phase_of(charge(d))
        return r

    return ph


def brute_semistable(problem, charge: Callable[[tuple], ExactComplex], budget: int = 200000):
    """Phase of the whole object if no subobject has bigger phase, else None."""
    p, dims, _ = problem
    if not any(dims):
        return None
    ph = _phases(charge)
    phi = ph(tuple(dims))
    for sub in _subs(problem, budget):
        d = _dims(sub)
        if not any(d) or d == tuple(dims):
            continue
        if ph(d) > phi:
            return None
    return phi


def brute_stable(problem, charge, budget: int = 200000) -> bool:
    """Strict inequality against every nonzero proper subobject."""
    p, dims, _ = problem
    if not any(dims):
        return False
    ph = _phases(charge)
    phi = ph(tuple(dims))
    for sub in _subs(problem, budget):
        d = _dims(sub)
        if not any(d) or d == tuple(dims):
            continue
        if ph(d) >= phi:
            return False
    return True


def _contains(big, small, p) -> bool:
    return all(kernels.contains(b, s, p) for b, s in zip(big, small))


def brute_hn(problem, charge, budget: int = 200000) -> list:
    """HN chain as [(sub, phase)], sub being per-vertex rref row tuples.

    Each step picks, among subobjects strictly containing the previous one,
    the quotient of maximal phase and then of maximal dimension.
    """
    p, dims, _ = problem
    subs = _subs(problem, budget)
    phase = _phases(charge)
    cur = tuple(() for _ in dims)
    out = []
    cur_d = (0,) * len(dims)
    while _dims(cur) != tuple(dims):
        best = None
        for n in subs:
            d = _dims(n)
            if sum(d) <= sum(cur_d) or not _contains(n, cur, p):
                continue
            q = tuple(x - y for x, y in zip(d, cur_d))
            ph = phase(q)
            key_dim = sum(d)
            if best is None or ph > best[0] or (ph == best[0] and key_dim > best[1]):
                best = (ph, key_dim, n)
        if best is None:
            raise AssertionError("no subobject strictly contains the current step")
        out.append((best[2], best[0]))
        cur = best[2]
        cur_d = _dims(cur)
    return out


def chain_to_rref(p: int, bases) -> tuple:
    """Per-vertex column bases (Mats) to rref row tuples, comparable with the oracle."""
    out = []
    for b in bases:
        if b.cols == 0:
            out.append(())
            continue
        rows, _ = kernels.rref_mod_p([list(c) for c in b.columns()], b.rows, p)
        out.append(tuple(tuple(r) for r in rows))
    return tuple(out)


# ------------------------------------------------------------ universes


def _poly_mul(a, b, p):
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            out[i + j] = (out[i + j] + x * y) % p
    return tuple(out)


@lru_cache(maxsize=None)
def _monic(d: int, p: int):
    return [tuple(c) + (1,) for c in product(range(p), repeat=d)]


@lru_cache(maxsize=None)
def irreducible_polys(d: int, p: int) -> list:
    """Monic irreducible polynomials of degree d over GF(p), coefficients low to high."""
    if d == 1:
        return _monic(1, p)
    reducible = set()
    for k in range(1, d // 2 + 1):
        for a in _monic(k, p):
            for b in _monic(d - k, p):
                reducible.add(_poly_mul(a, b, p))
    return [f for f in _monic(d, p) if f not in reducible]


def indec_labels(qname: str, p: int | None, max_dim: int) -> list:
    """Labels of indecomposables of total dimension <= max_dim.

    Over Q (p None) the regular points are restricted to [1:0], [0:1], [1:1].
    """
    if qname == "pt":
        return [IndecLabel("pt", "k")] if max_dim >= 1 else []
    if qname == "A2":
        out = [IndecLabel("A2", "S1"), IndecLabel("A2", "S2"), IndecLabel("A2", "P12")]
        return [l for l in out if sum(l.dims) <= max_dim]
    out = []
    n = 0
    while 2 * n + 1 <= max_dim:
        out.append(IndecLabel("K2", "Preinj", n=n))
        out.append(IndecLabel("K2", "Preproj", n=n))
        n += 1
    if p is None:
        points = [("pt", 1, 0), ("pt", 0, 1), ("pt", 1, 1)]
    else:
        points = [("pt", 1, lam) for lam in range(p)] + [("pt", 0, 1)]
    for pt in points:
        l = 1
        while 2 * l <= max_dim:
            out.append(IndecLabel("K2", "Regular", point=pt, length=l))
            l += 1
    if p is not None:
        d = 2
        while 2 * d <= max_dim:
            for f in irreducible_polys(d, p):
                l = 1
                while 2 * l * d <= max_dim:
                    out.append(IndecLabel("K2", "Regular", point=("poly", f), length=l))
                    l += 1
            d += 1
    return out


def _multisets(items, budget):
    """Multisets of (label, size) with total size <= budget, as tuples of indices."""
    out = [()]

    def rec(start, left, acc):
        for i in range(start, len(items)):
            s = items[i][1]
            if s <= left:
                nxt = acc + (i,)
                out.append(nxt)
                rec(i, left - s, nxt)

    rec(0, budget, ())
    return out


def rep_universe(qname: str, field: Field, max_dim: int, include_zero: bool = False) -> list:
    """Isomorphism classes of representations with total dimension <= max_dim."""
    labels = indec_labels(qname, field.char or None, max_dim)
    items = [(l, sum(l.dims)) for l in labels]
    reps = [indecomposable(l, field) for l in labels]
    q = quiver(qname)
    out = []
    for ms in _multisets(items, max_dim):
        if not ms:
            if include_zero:
                out.append(zero_rep(q, field))
            continue
        if len(ms) == 1:
            out.append(reps[ms[0]])
        else:
            out.append(direct_sum([reps[i] for i in ms], q, field).total)
    return out


def pair_universe(qname: str, field: Field, max_dim: int, limit: int | None = None) -> list:
    """All delta: A -> B (A, B from the rep universe, dims adding up to <= max_dim).

    Over GF(p) every homomorphism is listed; ``limit`` truncates deterministically.
    """
    p = field.char
    if not p:
        raise ValueError("pair universes are enumerated over a finite field")
    reps = rep_universe(qname, field, max_dim, include_zero=True)
    out = []
    for a in reps:
        for b in reps:
            if a.total_dim + b.total_dim > max_dim or (a.is_zero() and b.is_zero()):
                continue
            hs = hom_space(a, b)
            for coeffs in product(range(p), repeat=hs.dim):
                out.append(hs.element(coeffs) if hs.dim else RepMap.zero(a, b))
                if limit is not None and len(out) >= limit:
                    return out
    return out
