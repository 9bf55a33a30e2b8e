"""Bounded complexes of quiver representations, Hom complexes, cones and resolutions.

Differentials raise degree: d_n : X_n -> X_{n+1}.  X[k]_n = X_{n+k} with
differential (-1)^k d.  A graded map of degree p has components
X_n -> Y_{n+p}; the Hom complex differential is d h - (-1)^p h d.

Derived Hom is computed as Map(P(X), Y) where P(X) is the standard
projective resolution of X (functorial, two-term per representation since
path algebras are hereditary).
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

from .linalg import QQ, Coordinates, Field, Mat, column_basis, kernel_basis, rank, solve_vector
from .quiverrep import (
    HomSpace,
    IndecLabel,
    Rep,
    RepMap,
    decompose_rep,
    direct_sum,
    hom_space,
    quiver,
    quotient_rep,
    restrict_rep,
    zero_rep,
    euler_form,
)

__all__ = [
    "DerivedObject",
    "GradedMap",
    "ChainMap",
    "stalk",
    "shift",
    "dsum",
    "cone",
    "Cone",
    "cohomology",
    "map_total_complex",
    "MapComplex",
    "hom_dim",
    "normalize_split",
    "k0_class",
    "resolve",
    "resolve_map",
    "nakayama",
    "nakayama_map",
    "serre",
    "serre_map",
    "is_quasi_iso",
    "is_acyclic",
    "stalk_map",
    "identity_map",
    "zero_map",
    "shift_map",
    "cone_map",
    "map_sum",
    "zero_object",
    "cohomology_dims",
    "euler_pairing",
    "cohomology_map",
    "cohomology_degrees",
]


class DerivedObject:
    """A bounded complex; only nonzero terms are stored."""

    __slots__ = ("quiver", "field", "terms", "diffs", "_h")

    def __init__(self, q, field: Field, terms: dict, diffs: dict | None = None, check: bool = True):
        self.quiver = quiver(q)
        self.field = field
        self.terms = {int(n): r for n, r in terms.items() if not r.is_zero()}
        diffs = diffs or {}
        self.diffs = {}
        for n, d in diffs.items():
            n = int(n)
            if n in self.terms and n + 1 in self.terms and not d.is_zero():
                self.diffs[n] = d
        self._h = None
        if check:
            for n, d in self.diffs.items():
                if d.src != self.terms[n] or d.tgt != self.terms[n + 1]:
                    raise ValueError(f"differential {n} has the wrong source or target")
                if n + 1 in self.diffs and not (self.diffs[n + 1] @ d).is_zero():
                    raise ValueError(f"d^2 != 0 at degree {n}")

    def term(self, n: int) -> Rep:
        r = self.terms.get(n)
        return r if r is not None else zero_rep(self.quiver, self.field)

    def diff(self, n: int) -> RepMap:
        d = self.diffs.get(n)
        if d is not None:
            return d
        return RepMap.zero(self.term(n), self.term(n + 1))

    def degrees(self) -> list[int]:
        return sorted(self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    def __eq__(self, other):
        return (isinstance(other, DerivedObject) and self.quiver == other.quiver
                and self.terms == other.terms and {n: d.comps for n, d in self.diffs.items()}
                == {n: d.comps for n, d in other.diffs.items()})

    def __hash__(self):
        if self._h is None:
            self._h = hash((self.quiver.name, tuple(sorted(self.terms.items())),
                            tuple(sorted((n, d.comps) for n, d in self.diffs.items()))))
        return self._h

    def __repr__(self):
        parts = ", ".join(f"{n}:{r.dims}" for n, r in sorted(self.terms.items()))
        return f"DerivedObject({self.quiver.name}; {parts})"

    def to_json(self) -> dict:
        return {"quiver": self.quiver.name, "field": self.field.name,
                "terms": {str(n): r.to_json() for n, r in sorted(self.terms.items())},
                "diffs": {str(n): {"components": [c.to_json() for c in d.comps]}
                          for n, d in sorted(self.diffs.items())}}

    @staticmethod
    def from_json(d) -> "DerivedObject":
        from .linalg import field_from_name
        f = field_from_name(d.get("field", "QQ"))
        terms = {int(n): Rep.from_json(r, f) for n, r in d["terms"].items()}
        q = d.get("quiver") or next(iter(terms.values())).quiver.name
        zero = zero_rep(q, f)
        diffs = {}
        for n, dd in d.get("diffs", {}).items():
            n = int(n)
            src, tgt = terms.get(n, zero), terms.get(n + 1, zero)
            diffs[n] = RepMap(src, tgt, [Mat.from_json(c, f) for c in dd["components"]])
        return DerivedObject(q, f, terms, diffs)


def stalk(m: Rep, n: int = 0) -> DerivedObject:
    """m placed in degree n, i.e. m[-n]."""
    return DerivedObject(m.quiver, m.field, {n: m})


def zero_object(q, field: Field = QQ) -> DerivedObject:
    return DerivedObject(q, field, {})


class GradedMap:
    """Family of representation maps X_n -> Y_{n+degree}."""

    __slots__ = ("src", "tgt", "degree", "comps")

    def __init__(self, src: DerivedObject, tgt: DerivedObject, comps: dict, degree: int = 0):
        self.src = src
        self.tgt = tgt
        self.degree = degree
        self.comps = {}
        for n, c in comps.items():
            if n in src.terms and n + degree in tgt.terms and not c.is_zero():
                self.comps[n] = c

    def comp(self, n: int) -> RepMap:
        c = self.comps.get(n)
        if c is not None:
            return c
        return RepMap.zero(self.src.term(n), self.tgt.term(n + self.degree))

    def __matmul__(self, other: "GradedMap") -> "GradedMap":
        """self after other: (u v)_n = u_{n+|v|} v_n."""
        comps = {}
        for n, c in other.comps.items():
            u = self.comps.get(n + other.degree)
            if u is not None:
                comps[n] = u @ c
        return GradedMap(other.src, self.tgt, comps, self.degree + other.degree)

    def __add__(self, other: "GradedMap") -> "GradedMap":
        comps = dict(self.comps)
        for n, c in other.comps.items():
            comps[n] = comps[n] + c if n in comps else c
        return GradedMap(self.src, self.tgt, comps, self.degree)

    def __neg__(self) -> "GradedMap":
        return GradedMap(self.src, self.tgt, {n: -c for n, c in self.comps.items()}, self.degree)

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c) -> "GradedMap":
        return GradedMap(self.src, self.tgt, {n: m.scale(c) for n, m in self.comps.items()}, self.degree)

    def is_zero(self) -> bool:
        return not self.comps

    def delta(self) -> "GradedMap":
        """d h - (-1)^p h d."""
        p = self.degree
        x, y = self.src, self.tgt
        sign = -1 if p % 2 == 0 else 1
        comps = {}
        for n in x.degrees():
            acc = None
            h = self.comps.get(n)
            dy = y.diffs.get(n + p)
            if h is not None and dy is not None:
                acc = dy @ h
            dx = x.diffs.get(n)
            h1 = self.comps.get(n + 1)
            if dx is not None and h1 is not None:
                t = (h1 @ dx).scale(x.field.red(sign))
                acc = t if acc is None else acc + t
            if acc is not None:
                comps[n] = acc
        return GradedMap(x, y, comps, p + 1)

    def is_chain_map(self) -> bool:
        return self.degree == 0 and self.delta().is_zero()

    def __repr__(self):
        return f"GradedMap(deg {self.degree}, {self.src!r} -> {self.tgt!r})"


def ChainMap(src: DerivedObject, tgt: DerivedObject, comps: dict, check: bool = True) -> GradedMap:
    g = GradedMap(src, tgt, comps, 0)
    if check and not g.is_chain_map():
        raise ValueError("components do not commute with the differentials")
    return g


def identity_map(x: DerivedObject) -> GradedMap:
    return GradedMap(x, x, {n: RepMap.identity(r) for n, r in x.terms.items()}, 0)


def zero_map(x: DerivedObject, y: DerivedObject, degree: int = 0) -> GradedMap:
    return GradedMap(x, y, {}, degree)


def stalk_map(g: RepMap, n: int = 0) -> GradedMap:
    return GradedMap(stalk(g.src, n), stalk(g.tgt, n), {n: g}, 0)


def shift(x: DerivedObject, k: int = 1) -> DerivedObject:
    sign = x.field.red(-1) if k % 2 else x.field.one
    terms = {n - k: r for n, r in x.terms.items()}
    diffs = {n - k: (d.scale(sign) if k % 2 else d) for n, d in x.diffs.items()}
    return DerivedObject(x.quiver, x.field, terms, diffs, check=False)


def shift_map(f: GradedMap, k: int = 1) -> GradedMap:
    """f[k] for a chain map (no sign on components)."""
    return GradedMap(shift(f.src, k), shift(f.tgt, k), {n - k: c for n, c in f.comps.items()}, f.degree)


@dataclass
class DSum:
    total: DerivedObject
    parts: list
    incl: list
    proj: list


def dsum(objs, q=None, field: Field | None = None) -> DSum:
    """Direct sum of complexes with inclusions and projections."""
    objs = list(objs)
    if not objs:
        z = zero_object(q, field or QQ)
        return DSum(z, [], [], [])
    q = objs[0].quiver
    f = objs[0].field
    degs = sorted(set(n for o in objs for n in o.terms))
    sums = {n: direct_sum([o.term(n) for o in objs]) for n in degs}
    terms = {n: s.total for n, s in sums.items()}
    diffs = {}
    for n in degs:
        if n + 1 not in sums:
            continue
        s0, s1 = sums[n], sums[n + 1]
        acc = RepMap.zero(s0.total, s1.total)
        for i, o in enumerate(objs):
            d = o.diffs.get(n)
            if d is not None:
                acc = acc + s1.incl[i] @ d @ s0.proj[i]
        diffs[n] = acc
    total = DerivedObject(q, f, terms, diffs, check=False)
    incl, proj = [], []
    for i, o in enumerate(objs):
        incl.append(GradedMap(o, total, {n: sums[n].incl[i] for n in o.terms}, 0))
        proj.append(GradedMap(total, o, {n: sums[n].proj[i] for n in o.terms}, 0))
    return DSum(total, objs, incl, proj)


def map_sum(maps) -> GradedMap:
    """Block-diagonal sum of chain maps."""
    maps = list(maps)
    s = dsum([m.src for m in maps])
    t = dsum([m.tgt for m in maps])
    acc = zero_map(s.total, t.total)
    for i, m in enumerate(maps):
        acc = acc + t.incl[i] @ m @ s.proj[i]
    return acc


@dataclass
class Cone:
    """cone(f) with the triangle maps Y -> cone -> X[1]."""

    obj: DerivedObject
    incl: GradedMap
    proj: GradedMap
    f: GradedMap


def cone(f: GradedMap) -> Cone:
    """cone(f)_n = X_{n+1} + Y_n, d(x, y) = (-d x, f x + d y)."""
    x, y = f.src, f.tgt
    fld = x.field
    degs = sorted(set([n - 1 for n in x.terms] + list(y.terms)))
    sums = {n: direct_sum([x.term(n + 1), y.term(n)]) for n in degs}
    terms = {n: s.total for n, s in sums.items()}
    diffs = {}
    m1 = fld.red(-1)
    for n in degs:
        if n + 1 not in sums:
            continue
        s0, s1 = sums[n], sums[n + 1]
        acc = RepMap.zero(s0.total, s1.total)
        dx = x.diffs.get(n + 1)
        if dx is not None:
            acc = acc + s1.incl[0] @ dx.scale(m1) @ s0.proj[0]
        fx = f.comps.get(n + 1)
        if fx is not None:
            acc = acc + s1.incl[1] @ fx @ s0.proj[0]
        dy = y.diffs.get(n)
        if dy is not None:
            acc = acc + s1.incl[1] @ dy @ s0.proj[1]
        diffs[n] = acc
    c = DerivedObject(x.quiver, fld, terms, diffs, check=False)
    x1 = shift(x, 1)
    incl = GradedMap(y, c, {n: sums[n].incl[1] for n in y.terms}, 0)
    proj = GradedMap(c, x1, {n: sums[n].proj[0] for n in x1.terms if n in sums}, 0)
    return Cone(c, incl, proj, f)


def cone_map(f: GradedMap, g: GradedMap, a: GradedMap, b: GradedMap, h: GradedMap | None = None) -> GradedMap:
    """Induced map cone(f) -> cone(g) from a square b f - g a = delta(h) (h of degree -1).

    (x, y) -> (a x, b y + h x).
    """
    cf, cg = cone(f), cone(g)
    comps = {}
    for n in cf.obj.terms:
        sx = direct_sum([f.src.term(n + 1), f.tgt.term(n)])
        sz = direct_sum([g.src.term(n + 1), g.tgt.term(n)])
        if n not in cg.obj.terms:
            continue
        acc = RepMap.zero(sx.total, sz.total)
        an = a.comps.get(n + 1)
        if an is not None:
            acc = acc + sz.incl[0] @ an @ sx.proj[0]
        bn = b.comps.get(n)
        if bn is not None:
            acc = acc + sz.incl[1] @ bn @ sx.proj[1]
        if h is not None:
            hn = h.comps.get(n + 1)
            if hn is not None:
                acc = acc + sz.incl[1] @ hn @ sx.proj[0]
        comps[n] = acc
    return GradedMap(cf.obj, cg.obj, comps, 0)


# ------------------------------------------------------------ cohomology


@dataclass
class Cohomology:
    """H^n = Z / B with Z -> X_n and Z -> H."""

    degree: int
    H: Rep
    Z: Rep
    z_incl: RepMap
    z_proj: RepMap


def cohomology(x: DerivedObject, n: int) -> Cohomology:
    xn = x.term(n)
    d = x.diff(n)
    zb = [kernel_basis(c) for c in d.comps]
    z, zi = restrict_rep(xn, zb)
    dprev = x.diff(n - 1)
    f = x.field
    bb = []
    for v, c in enumerate(dprev.comps):
        co = Coordinates(zb[v])
        img = column_basis(c)
        bb.append(Mat.from_columns(f, zb[v].cols, [co(col) for col in img.columns()]))
    h, hp = quotient_rep(z, bb)
    return Cohomology(n, h, z, zi, hp)


def cohomology_dims(x: DerivedObject) -> dict:
    out = {}
    for n in x.degrees():
        h = cohomology(x, n).H
        if not h.is_zero():
            out[n] = h.dims
    return out


def is_acyclic(x: DerivedObject) -> bool:
    for n in x.degrees():
        dn = x.diff(n)
        dp = x.diff(n - 1)
        for v, d in enumerate(x.term(n).dims):
            if d - rank(dn.comps[v]) - rank(dp.comps[v]) != 0:
                return False
    return True


def is_quasi_iso(f: GradedMap) -> bool:
    return is_acyclic(cone(f).obj)


def k0_class(x: DerivedObject) -> tuple:
    nv = x.quiver.nverts
    out = [0] * nv
    for n, r in x.terms.items():
        s = -1 if n % 2 else 1
        for v in range(nv):
            out[v] += s * r.dims[v]
    return tuple(out)


# ------------------------------------------------------------ Hom complexes


class MapComplex:
    """Map(x, y) with coordinates in each degree."""

    def __init__(self, x: DerivedObject, y: DerivedObject):
        if x.quiver != y.quiver:
            raise ValueError("quiver mismatch")
        self.x = x
        self.y = y
        self._blocks = {}
        self._delta = {}

    def degree_range(self):
        if self.x.is_zero() or self.y.is_zero():
            return range(0)
        xd, yd = self.x.degrees(), self.y.degrees()
        return range(yd[0] - xd[-1], yd[-1] - xd[0] + 1)

    def blocks(self, p: int):
        b = self._blocks.get(p)
        if b is None:
            b = []
            off = 0
            for n in self.x.degrees():
                if n + p in self.y.terms:
                    hs = hom_space(self.x.terms[n], self.y.terms[n + p])
                    if hs.dim:
                        b.append((n, hs, off))
                        off += hs.dim
            self._blocks[p] = (b, off)
        return self._blocks[p]

    def dim(self, p: int) -> int:
        return self.blocks(p)[1]

    def to_vec(self, g: GradedMap) -> tuple:
        p = g.degree
        blocks, total = self.blocks(p)
        out = []
        for n, hs, _ in blocks:
            c = g.comps.get(n)
            if c is None:
                out.extend([self.x.field.zero] * hs.dim)
            else:
                out.extend(hs.coords(c))
        return tuple(out)

    def from_vec(self, p: int, vec) -> GradedMap:
        blocks, _ = self.blocks(p)
        comps = {}
        for n, hs, off in blocks:
            comps[n] = hs.element(vec[off:off + hs.dim])
        return GradedMap(self.x, self.y, comps, p)

    def basis(self, p: int) -> list[GradedMap]:
        d = self.dim(p)
        f = self.x.field
        out = []
        for i in range(d):
            v = [f.zero] * d
            v[i] = f.one
            out.append(self.from_vec(p, v))
        return out

    def delta(self, p: int) -> Mat:
        m = self._delta.get(p)
        if m is None:
            f = self.x.field
            cols = [self.to_vec(b.delta()) for b in self.basis(p)]
            m = Mat.from_columns(f, self.dim(p + 1), cols)
            self._delta[p] = m
        return m

    def cohomology_dim(self, p: int) -> int:
        d = self.dim(p)
        if d == 0:
            return 0
        return d - rank(self.delta(p)) - rank(self.delta(p - 1))

    def cocycles(self, p: int) -> Mat:
        return kernel_basis(self.delta(p))

    def coboundaries(self, p: int) -> Mat:
        return column_basis(self.delta(p - 1))

    def is_null_homotopic(self, g: GradedMap) -> bool:
        v = self.to_vec(g)
        return solve_vector(self.delta(g.degree - 1), v) is not None

    def homotopy_for(self, g: GradedMap) -> GradedMap | None:
        """h with delta h = g, or None."""
        v = self.to_vec(g)
        sol = solve_vector(self.delta(g.degree - 1), v)
        if sol is None:
            return None
        return self.from_vec(g.degree - 1, sol)


@lru_cache(maxsize=2048)
def _map_complex(x: DerivedObject, y: DerivedObject) -> MapComplex:
    return MapComplex(x, y)


def map_total_complex(x: DerivedObject, y: DerivedObject, resolve_source: bool = True) -> MapComplex:
    """Map(P(x), y) by default; ``resolve_source=False`` gives the naive termwise complex."""
    if resolve_source:
        x = resolve(x).obj
    return _map_complex(x, y)


def hom_dim(x: DerivedObject, y: DerivedObject, n: int = 0) -> int:
    """dim Hom(x, y[n]) in the derived category."""
    if x.is_zero() or y.is_zero():
        return 0
    return map_total_complex(x, y).cohomology_dim(n)


# ------------------------------------------------------------ resolutions


@lru_cache(maxsize=None)
def _paths(qname: str):
    q = quiver(qname)
    return {v: q.paths_from(v) for v in range(q.nverts)}


class _FreeLayout:
    """Basis bookkeeping for sum_k P_{v_k} (x) k^{d_k}."""

    def __init__(self, q, gens):
        self.q = q
        self.gens = list(gens)  # (v, d, tag)
        paths = _paths(q.name)
        self.index = {}
        self.dims = [0] * q.nverts
        for g, (v, d, _) in enumerate(self.gens):
            for word in paths[v]:
                w = q.path_target(v, word)
                for j in range(d):
                    self.index[(g, word, j)] = (w, self.dims[w])
                    self.dims[w] += 1

    def rep(self, field: Field) -> Rep:
        q = self.q
        arrows = []
        for ai, (s, t) in enumerate(q.arrows):
            rows = [[field.zero] * self.dims[s] for _ in range(self.dims[t])]
            for (g, word, j), (w, i) in self.index.items():
                if w == s:
                    tw, ti = self.index[(g, word + (ai,), j)]
                    rows[ti][i] = field.one
            arrows.append(Mat(field, self.dims[t], self.dims[s], rows))
        return Rep(q, self.dims, arrows, field)


@dataclass
class RepResolution:
    """0 -> P1 -> P0 -> M -> 0 with P1 = sum_a P_{t(a)} (x) M_{s(a)}, P0 = sum_v P_v (x) M_v."""

    m: Rep
    p1: Rep
    p0: Rep
    d: RepMap
    eps: RepMap
    lay1: _FreeLayout
    lay0: _FreeLayout


@lru_cache(maxsize=4096)
def resolve_rep(m: Rep) -> RepResolution:
    q = m.quiver
    f = m.field
    lay0 = _FreeLayout(q, [(v, m.dims[v], v) for v in range(q.nverts)])
    lay1 = _FreeLayout(q, [(t, m.dims[s], ai) for ai, (s, t) in enumerate(q.arrows)])
    p0 = lay0.rep(f)
    p1 = lay1.rep(f)
    # differential
    comps = [[[f.zero] * lay1.dims[w] for _ in range(lay0.dims[w])] for w in range(q.nverts)]
    for (g, word, j), (w, i) in lay1.index.items():
        t, _, ai = lay1.gens[g]
        s = q.arrows[ai][0]
        # (a q) (x) e_j in component s
        w2, i2 = lay0.index[(s, (ai,) + word, j)]
        comps[w][i2][i] = f.red(comps[w][i2][i] + f.one)
        # - q (x) M_a e_j in component t
        col = m.arrows[ai].column(j)
        for r, c in enumerate(col):
            if c != 0:
                w3, i3 = lay0.index[(t, word, r)]
                comps[w][i3][i] = f.red(comps[w][i3][i] - c)
    d = RepMap(p1, p0, [Mat(f, lay0.dims[w], lay1.dims[w], comps[w]) for w in range(q.nverts)], False)
    # augmentation
    ecomps = [[[f.zero] * lay0.dims[w] for _ in range(m.dims[w])] for w in range(q.nverts)]
    for (g, word, j), (w, i) in lay0.index.items():
        v = g
        pm = m.path_matrix(v, word)
        for r in range(m.dims[w]):
            ecomps[w][r][i] = pm[r, j]
    eps = RepMap(p0, m, [Mat(f, m.dims[w], lay0.dims[w], ecomps[w]) for w in range(q.nverts)], False)
    return RepResolution(m, p1, p0, d, eps, lay1, lay0)


def _free_map(lay_s: _FreeLayout, lay_t: _FreeLayout, src: Rep, tgt: Rep, gen_maps: dict) -> RepMap:
    """Map of free modules given gen_maps[g] = matrix k^{d_g} -> k^{d_g} (same generator vertex)."""
    f = src.field
    q = src.quiver
    comps = [[[f.zero] * src.dims[w] for _ in range(tgt.dims[w])] for w in range(q.nverts)]
    for (g, word, j), (w, i) in lay_s.index.items():
        mat = gen_maps[g]
        col = mat.column(j)
        for r, c in enumerate(col):
            if c != 0:
                w2, i2 = lay_t.index[(g, word, r)]
                comps[w][i2][i] = f.red(comps[w][i2][i] + c)
    return RepMap(src, tgt, [Mat(f, tgt.dims[w], src.dims[w], comps[w]) for w in range(q.nverts)], False)


def resolve_rep_map(g: RepMap) -> tuple[RepMap, RepMap]:
    """(P1(g), P0(g)) for the standard resolution."""
    rs, rt = resolve_rep(g.src), resolve_rep(g.tgt)
    q = g.src.quiver
    m0 = {v: g.comps[v] for v in range(q.nverts)}
    m1 = {ai: g.comps[s] for ai, (s, t) in enumerate(q.arrows)}
    f0 = _free_map(rs.lay0, rt.lay0, rs.p0, rt.p0, m0)
    f1 = _free_map(rs.lay1, rt.lay1, rs.p1, rt.p1, m1)
    return f1, f0


@dataclass
class Resolution:
    """P(x) -> x, quasi-isomorphism from a complex of projectives."""

    x: DerivedObject
    obj: DerivedObject
    aug: GradedMap
    sums: dict


@lru_cache(maxsize=2048)
def resolve(x: DerivedObject) -> Resolution:
    """Totalization of the standard resolutions of the terms.

    P(x)_m = P0(x_m) + P1(x_{m+1}), D = P0(d) on the first summand and
    (-1)^{m+1} d_res + P1(d) on the second.
    """
    f = x.field
    q = x.quiver
    res = {n: resolve_rep(r) for n, r in x.terms.items()}
    zero = zero_rep(q, f)

    def p0(n):
        return res[n].p0 if n in res else zero

    def p1(n):
        return res[n].p1 if n in res else zero

    degs = sorted(set(list(x.terms) + [n - 1 for n in x.terms]))
    sums = {m: direct_sum([p0(m), p1(m + 1)]) for m in degs}
    lifted = {}
    for n, d in x.diffs.items():
        lifted[n] = resolve_rep_map(d)
    terms = {m: s.total for m, s in sums.items()}
    diffs = {}
    for m in degs:
        if m + 1 not in sums:
            continue
        s0, s1 = sums[m], sums[m + 1]
        acc = RepMap.zero(s0.total, s1.total)
        if m in lifted:
            acc = acc + s1.incl[0] @ lifted[m][1] @ s0.proj[0]
        if m + 1 in res:
            sign = f.one if (m + 1) % 2 == 0 else f.red(-1)
            acc = acc + s1.incl[0] @ res[m + 1].d.scale(sign) @ s0.proj[1]
        if m + 1 in lifted:
            acc = acc + s1.incl[1] @ lifted[m + 1][0] @ s0.proj[1]
        diffs[m] = acc
    obj = DerivedObject(q, f, terms, diffs, check=False)
    aug = GradedMap(obj, x, {m: res[m].eps @ sums[m].proj[0] for m in x.terms}, 0)
    return Resolution(x, obj, aug, sums)


def resolve_map(g: GradedMap) -> GradedMap:
    """P(g) : P(x) -> P(y) for a chain map g."""
    rx, ry = resolve(g.src), resolve(g.tgt)
    comps = {}
    for m in rx.obj.terms:
        if m not in ry.obj.terms:
            continue
        sx, sy = rx.sums[m], ry.sums[m]
        acc = RepMap.zero(sx.total, sy.total)
        c0 = g.comps.get(m)
        if c0 is not None:
            acc = acc + sy.incl[0] @ resolve_rep_map(c0)[1] @ sx.proj[0]
        c1 = g.comps.get(m + 1)
        if c1 is not None:
            acc = acc + sy.incl[1] @ resolve_rep_map(c1)[0] @ sx.proj[1]
        comps[m] = acc
    return GradedMap(rx.obj, ry.obj, comps, 0)


# ------------------------------------------------------------ Nakayama / Serre


@lru_cache(maxsize=None)
def projective(qname: str, v: int, field: Field) -> tuple[Rep, _FreeLayout]:
    q = quiver(qname)
    lay = _FreeLayout(q, [(v, 1, v)])
    return lay.rep(field), lay


@lru_cache(maxsize=None)
def _arrow_action(qname: str, ai: int, field: Field) -> RepMap:
    """P_{t(a)} -> P_{s(a)}, q -> a q."""
    q = quiver(qname)
    s, t = q.arrows[ai]
    pt, lt = projective(qname, t, field)
    ps, ls = projective(qname, s, field)
    comps = [[[field.zero] * pt.dims[w] for _ in range(ps.dims[w])] for w in range(q.nverts)]
    for (g, word, j), (w, i) in lt.index.items():
        w2, i2 = ls.index[(0, (ai,) + word, j)]
        comps[w][i2][i] = field.one
    return RepMap(pt, ps, [Mat(field, ps.dims[w], pt.dims[w], comps[w]) for w in range(q.nverts)], False)


@lru_cache(maxsize=4096)
def nakayama(m: Rep) -> Rep:
    """nu(M)_w = Hom(M, P_w)^*, arrow maps dual to postcomposition with P_t -> P_s."""
    q = m.quiver
    f = m.field
    spaces = [hom_space(m, projective(q.name, w, f)[0]) for w in range(q.nverts)]
    arrows = []
    for ai, (s, t) in enumerate(q.arrows):
        act = _arrow_action(q.name, ai, f)
        # Hom(M, P_t) -> Hom(M, P_s), h -> act h
        cols = [spaces[s].coords(act @ h) for h in spaces[t].basis]
        r = Mat.from_columns(f, spaces[s].dim, cols)
        arrows.append(r.transpose())
    return Rep(q, [sp.dim for sp in spaces], arrows, f)


def nakayama_rep_map(g: RepMap) -> RepMap:
    q = g.src.quiver
    f = g.src.field
    comps = []
    for w in range(q.nverts):
        pw = projective(q.name, w, f)[0]
        hs_t = hom_space(g.tgt, pw)
        hs_s = hom_space(g.src, pw)
        cols = [hs_s.coords(h @ g) for h in hs_t.basis]
        mt = Mat.from_columns(f, hs_s.dim, cols)
        comps.append(mt.transpose())
    return RepMap(nakayama(g.src), nakayama(g.tgt), comps, False)


def nakayama_complex(x: DerivedObject) -> DerivedObject:
    terms = {n: nakayama(r) for n, r in x.terms.items()}
    diffs = {n: nakayama_rep_map(d) for n, d in x.diffs.items()}
    return DerivedObject(x.quiver, x.field, terms, diffs, check=False)


def nakayama_map(g: GradedMap) -> GradedMap:
    src, tgt = nakayama_complex(g.src), nakayama_complex(g.tgt)
    return GradedMap(src, tgt, {n: nakayama_rep_map(c) for n, c in g.comps.items()}, g.degree)


@lru_cache(maxsize=1024)
def serre(x: DerivedObject) -> DerivedObject:
    """S(x) = nu(P(x))."""
    return nakayama_complex(resolve(x).obj)


def serre_map(g: GradedMap) -> GradedMap:
    return nakayama_map(resolve_map(g))


# ------------------------------------------------------------ splitting


@dataclass
class SplitResult:
    """x is quasi-isomorphic to sum_i H^i[-i]; labels as (IndecLabel, shift)."""

    decomposition: list
    cohomology: dict
    split: DerivedObject
    roof_left: GradedMap
    roof_right: GradedMap

    def multiset(self) -> dict:
        out: dict = {}
        for l, s in self.decomposition:
            out[(l, s)] = out.get((l, s), 0) + 1
        return out


def normalize_split(x: DerivedObject) -> SplitResult:
    """Decompose x as a sum of shifted indecomposables.

    Witness: a roof x <- P(x) -> sum H^i[-i] of quasi-isomorphisms.
    """
    f = x.field
    q = x.quiver
    res = resolve(x)
    p = res.obj
    coh = {}
    deco = []
    for n in x.degrees():
        c = cohomology(x, n)
        if c.H.is_zero():
            continue
        coh[n] = c
        for lab in decompose_rep(c.H).labels():
            deco.append((lab, -n))
    deco.sort(key=lambda t: (t[1], t[0].sort_key()))
    split = DerivedObject(q, f, {n: c.H for n, c in coh.items()})
    comps = {}
    for n, c in coh.items():
        # Z^n(P) -> Z^n(x) -> H^n(x), extended to P^n using that Z^n(P) is a summand
        zp = cohomology(p, n)
        aug = res.aug.comp(n)
        zx_co = [Coordinates(c.z_incl.comps[v]) for v in range(q.nverts)]
        psi_comps = []
        for v in range(q.nverts):
            img = aug.comps[v] @ zp.z_incl.comps[v]
            zcoords = Mat.from_columns(f, c.Z.dims[v], [zx_co[v](col) for col in img.columns()])
            psi_comps.append(c.z_proj.comps[v] @ zcoords)
        psi = RepMap(zp.Z, c.H, psi_comps, False)
        hs = hom_space(p.term(n), c.H)
        cols = [(b @ zp.z_incl).flat() for b in hs.basis]
        target = psi.flat()
        if not target:
            continue
        sol = solve_vector(Mat.from_columns(f, len(target), cols), target) if cols else None
        if sol is None:
            raise ArithmeticError("cocycle map does not extend; resolution is not split")
        comps[n] = hs.element(sol)
    right = GradedMap(p, split, comps, 0)
    return SplitResult(deco, coh, split, res.aug, right)


def euler_pairing(x: DerivedObject, y: DerivedObject) -> int:
    return euler_form(x.quiver, k0_class(x), k0_class(y))


def cohomology_map(g: GradedMap, n: int) -> tuple[Cohomology, Cohomology, RepMap]:
    """H^n(g) : H^n(src) -> H^n(tgt) in the bases chosen by ``cohomology``."""
    from .quiverrep import _section
    cs, ct = cohomology(g.src, n), cohomology(g.tgt, n)
    f = g.src.field
    q = g.src.quiver
    gc = g.comp(n)
    comps = []
    for v in range(q.nverts):
        sec = _section(cs.z_proj.comps[v])
        img = gc.comps[v] @ cs.z_incl.comps[v] @ sec
        co = Coordinates(ct.z_incl.comps[v])
        zt = Mat.from_columns(f, ct.Z.dims[v], [co(c) for c in img.columns()])
        comps.append(ct.z_proj.comps[v] @ zt)
    return cs, ct, RepMap(cs.H, ct.H, comps, False)


def cohomology_degrees(x: DerivedObject) -> list[int]:
    return sorted(cohomology_dims(x))
