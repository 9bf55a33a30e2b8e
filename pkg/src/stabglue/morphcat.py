"""The homotopy category of morphisms: objects are chain maps f: X -> Y.

Hom(f, g)[n] is H^n of the fiber complex

    F^p = Map^p(X, Z) + Map^p(Y, W) + Map^{p-1}(X, W)
    D(a, b, h) = (delta a, delta b, b f - g a - delta h)

computed with f replaced by its projective resolution P(f), so degree-0
cocycles are triples (tau1, tau0, h) with delta h = tau0 f - g tau1.
"""
from __future__ import annotations

import random
from dataclasses import dataclass
from functools import lru_cache

from .linalg import Mat, kernel_basis, rank, solve_vector
from .quiverrep import Rep, RepMap, decompose_rep, hom_space, quiver
from .derived import (
    DerivedObject,
    GradedMap,
    cohomology,
    cohomology_map,
    cone,
    cone_map,
    dsum,
    hom_dim,
    identity_map,
    is_quasi_iso,
    map_sum,
    map_total_complex,
    normalize_split,
    resolve,
    resolve_map,
    serre,
    serre_map,
    shift,
    shift_map,
    stalk,
    zero_map,
    zero_object,
    k0_class,
    _map_complex,
)

__all__ = [
    "MorphObject",
    "MorphHomElement",
    "project",
    "embed",
    "cof_fib",
    "hom_dim_morph",
    "FiberComplex",
    "sod_triangle",
    "serre_morph",
    "lift_square",
    "morph_shift",
    "morph_sum",
    "morph_cone",
    "find_iso_morph",
    "vect_classify",
    "pair_object",
    "heart_pair",
    "k0_pair",
]


class MorphObject:
    """[f: X -> Y]."""

    __slots__ = ("f",)

    def __init__(self, f: GradedMap):
        if f.degree != 0:
            raise ValueError("a morphism object needs a degree-0 map")
        self.f = f

    @property
    def src(self) -> DerivedObject:
        return self.f.src

    @property
    def tgt(self) -> DerivedObject:
        return self.f.tgt

    @property
    def quiver(self):
        return self.f.src.quiver

    @property
    def field(self):
        return self.f.src.field

    def __eq__(self, other):
        return (isinstance(other, MorphObject) and self.src == other.src and self.tgt == other.tgt
                and {n: c.comps for n, c in self.f.comps.items()} == {n: c.comps for n, c in other.f.comps.items()})

    def __hash__(self):
        return hash((self.src, self.tgt, tuple(sorted((n, c.comps) for n, c in self.f.comps.items()))))

    def __repr__(self):
        return f"MorphObject({self.src!r} -> {self.tgt!r})"

    def to_json(self) -> dict:
        return {"src": self.src.to_json(), "tgt": self.tgt.to_json(),
                "components": {str(n): [m.to_json() for m in c.comps] for n, c in sorted(self.f.comps.items())}}

    @staticmethod
    def from_json(d) -> "MorphObject":
        from .derived import ChainMap
        src = DerivedObject.from_json(d["src"])
        tgt = DerivedObject.from_json(d["tgt"])
        comps = {}
        for n, cs in d.get("components", {}).items():
            n = int(n)
            comps[n] = RepMap(src.term(n), tgt.term(n), [Mat.from_json(c, src.field) for c in cs])
        return MorphObject(ChainMap(src, tgt, comps))


@dataclass
class MorphHomElement:
    """(tau1, tau0, h) with delta h = tau0 f - g tau1."""

    src: MorphObject
    tgt: MorphObject
    tau1: GradedMap
    tau0: GradedMap
    h: GradedMap

    def check(self) -> bool:
        lhs = self.h.delta()
        rhs = self.tau0 @ self.src.f - self.tgt.f @ self.tau1
        return (lhs - rhs).is_zero()


def project(side: str, f: MorphObject) -> DerivedObject:
    if side == "d0":
        return f.tgt
    if side == "d1":
        return f.src
    raise ValueError(f"unknown side {side!r}")


def embed(kind: str, x: DerivedObject) -> MorphObject:
    """s(x) = [id], j_!(x) = [x -> 0], j_*(x) = [0 -> x]."""
    z = zero_object(x.quiver, x.field)
    if kind == "s":
        return MorphObject(identity_map(x))
    if kind in ("jShriek", "j!", "jshriek"):
        return MorphObject(zero_map(x, z))
    if kind in ("jStar", "j*", "jstar"):
        return MorphObject(zero_map(z, x))
    raise ValueError(f"unknown embedding {kind!r}")


@dataclass
class CofFib:
    cof: DerivedObject
    fib: DerivedObject
    u: GradedMap
    cone: object


def cof_fib(f: MorphObject) -> CofFib:
    c = cone(f.f)
    return CofFib(c.obj, shift(c.obj, -1), c.incl, c)


def fib_map(f: MorphObject) -> GradedMap:
    """The canonical fib f -> X."""
    c = cone(f.f)
    return shift_map(c.proj, -1)


def k0_pair(f: MorphObject) -> tuple:
    """(k0 d0 f, k0 cof f)."""
    y = k0_class(f.tgt)
    x = k0_class(f.src)
    return (y, tuple(a - b for a, b in zip(y, x)))


# ------------------------------------------------------------ Hom spaces


class FiberComplex:
    """The fiber complex computing Hom(f, g)[*]."""

    def __init__(self, f: MorphObject, g: MorphObject):
        self.f = f
        self.g = g
        self.pf = resolve_map(f.f)
        px, py = self.pf.src, self.pf.tgt
        self.m1 = _map_complex(px, g.src)
        self.m2 = _map_complex(py, g.tgt)
        self.m3 = _map_complex(px, g.tgt)
        self._d = {}

    def dims(self, p: int) -> tuple[int, int, int]:
        return self.m1.dim(p), self.m2.dim(p), self.m3.dim(p - 1)

    def dim(self, p: int) -> int:
        return sum(self.dims(p))

    def unpack(self, p: int, vec):
        a, b, _ = self.dims(p)
        va, vb, vh = vec[:a], vec[a:a + b], vec[a + b:]
        return self.m1.from_vec(p, va), self.m2.from_vec(p, vb), self.m3.from_vec(p - 1, vh)

    def D(self, p: int) -> Mat:
        m = self._d.get(p)
        if m is not None:
            return m
        f = self.f.field
        a0, b0, h0 = self.dims(p)
        a1, b1, h1 = self.dims(p + 1)
        rows = a1 + b1 + h1
        cols = []
        d1, d2, d3 = self.m1.delta(p), self.m2.delta(p), self.m3.delta(p - 1)
        z = f.zero
        for i, a in enumerate(self.m1.basis(p)):
            top = list(d1.column(i)) + [z] * b1
            third = self.m3.to_vec(-(self.g.f @ a))
            cols.append(top + list(third))
        for i, b in enumerate(self.m2.basis(p)):
            mid = [z] * a1 + list(d2.column(i))
            third = self.m3.to_vec(b @ self.pf)
            cols.append(mid + list(third))
        for i in range(h0):
            cols.append([z] * (a1 + b1) + [f.red(-x) for x in d3.column(i)])
        m = Mat.from_columns(f, rows, cols) if cols else Mat.zeros(f, rows, 0)
        self._d[p] = m
        return m

    def cohomology_dim(self, p: int) -> int:
        d = self.dim(p)
        if d == 0:
            return 0
        return d - rank(self.D(p)) - rank(self.D(p - 1))

    def cocycles(self, p: int = 0) -> list:
        k = kernel_basis(self.D(p))
        return [k.column(i) for i in range(k.cols)]

    def is_coboundary(self, p: int, vec) -> bool:
        return solve_vector(self.D(p - 1), vec) is not None

    def element(self, vec) -> MorphHomElement:
        """A degree-0 cocycle as a morphism P(f) -> g."""
        a, b, h = self.unpack(0, vec)
        return MorphHomElement(MorphObject(self.pf), self.g, a, b, h)


@lru_cache(maxsize=4096)
def _fiber(f: MorphObject, g: MorphObject) -> FiberComplex:
    return FiberComplex(f, g)


def hom_dim_morph(f: MorphObject, g: MorphObject, n: int = 0) -> int:
    """dim Hom(f, g[n]) in the morphism category."""
    return _fiber(f, g).cohomology_dim(n)


# ------------------------------------------------------------ structure


def morph_shift(f: MorphObject, k: int = 1) -> MorphObject:
    return MorphObject(shift_map(f.f, k))


def morph_sum(objs) -> MorphObject:
    return MorphObject(map_sum([o.f for o in objs]))


def morph_cone(e: MorphHomElement) -> MorphObject:
    """Cone of (tau1, tau0, h) : f -> g, i.e. [cone tau1 -> cone tau0]."""
    m = cone_map(e.tau1, e.tau0, e.src.f, e.tgt.f, -e.h)
    return MorphObject(m)


def lift_square(f: MorphObject, g: MorphObject, tau1: GradedMap, tau0: GradedMap) -> tuple[MorphHomElement, int]:
    """Solve delta h = tau0 f - g tau1 in Map^{-1}(X, W).

    Returns the element and the dimension of the solution space.
    """
    mc = _map_complex(f.src, g.tgt)
    diff = tau0 @ f.f - g.f @ tau1
    h = mc.homotopy_for(diff)
    if h is None:
        raise ValueError("square does not commute up to homotopy")
    ker = kernel_basis(mc.delta(-1))
    return MorphHomElement(f, g, tau1, tau0, h), ker.cols


@dataclass
class SODTriangle:
    left: MorphObject
    obj: MorphObject
    right: MorphObject
    to_obj: MorphHomElement
    from_obj: MorphHomElement


def sod_triangle(which: str, f: MorphObject) -> SODTriangle:
    """D0: j_!(fib f) -> f -> s(d0 f); D1: s(d1 f) -> f -> j_*(cof f)."""
    x, y = f.src, f.tgt
    c = cone(f.f)
    fld = f.field
    if which == "D0":
        fib = shift(c.obj, -1)
        left = embed("jShriek", fib)
        p = shift_map(c.proj, -1)  # fib -> X
        # h : fib -> Y of degree -1, the Y component; delta h = -f p
        comps = {}
        for n in fib.terms:
            s = _split_cone_term(f.f, n - 1)
            comps[n] = s.proj[1]
        h = GradedMap(fib, y, comps, -1)
        zy = zero_map(left.tgt, y)
        e1 = MorphHomElement(left, f, p, zy, h)
        right = embed("s", y)
        e2 = MorphHomElement(f, right, f.f, identity_map(y), GradedMap(x, y, {}, -1))
        return SODTriangle(left, f, right, e1, e2)
    if which == "D1":
        left = embed("s", x)
        e1 = MorphHomElement(left, f, identity_map(x), f.f, GradedMap(x, y, {}, -1))
        right = embed("jStar", c.obj)
        comps = {}
        for n in x.terms:
            s = _split_cone_term(f.f, n - 1)
            comps[n] = s.incl[0]
        h = GradedMap(x, c.obj, comps, -1)
        e2 = MorphHomElement(f, right, zero_map(x, right.src), c.incl, h)
        return SODTriangle(left, f, right, e1, e2)
    raise ValueError(f"unknown decomposition {which!r}")


def _split_cone_term(f: GradedMap, n: int):
    from .quiverrep import direct_sum
    return direct_sum([f.src.term(n + 1), f.tgt.term(n)])


def serre_morph(f: MorphObject, base: str | None = None) -> MorphObject:
    """S(f) = [S(u): S(d0 f) -> S(cof f)]."""
    q = f.quiver.name
    if base is not None and base not in (q, "vect"):
        raise ValueError(f"no Serre functor for base {base!r}")
    u = cof_fib(f).u
    return MorphObject(serre_map(u))


# ------------------------------------------------------------ isomorphism


def find_iso_morph(f: MorphObject, g: MorphObject, tries: int = 8, seed: int = 0) -> MorphHomElement | None:
    """A morphism P(f) -> g whose components are quasi-isomorphisms, or None."""
    if k0_pair(f) != k0_pair(g):
        return None
    fc = _fiber(f, g)
    cyc = fc.cocycles(0)
    fld = f.field
    rnd = random.Random(seed)
    cands = []
    if len(cyc) == 1:
        cands.append(cyc[0])
    for _ in range(tries):
        coeffs = [rnd.randint(-3, 3) for _ in cyc]
        vec = [fld.zero] * fc.dim(0)
        for c, v in zip(coeffs, cyc):
            if c:
                vec = [fld.red(a + fld.coerce(c) * b) for a, b in zip(vec, v)]
        cands.append(vec)
    for vec in cands:
        e = fc.element(vec)
        if is_quasi_iso(e.tau1) and is_quasi_iso(e.tau0):
            return e
    return None


def vect_classify(f: MorphObject) -> dict:
    """Multiplicities of s(k[-n]), j_!(k[-n]) and j_*(k[-n]) for the vect base."""
    if f.quiver.name != "pt":
        raise ValueError("classification by ranks needs the vect base")
    out = {}
    degs = sorted(set(f.src.terms) | set(f.tgt.terms))
    for n in degs:
        cs, ct, hm = cohomology_map(f.f, n)
        r = rank(hm.comps[0])
        kx = cs.H.dims[0] - r
        cy = ct.H.dims[0] - r
        for kind, m in (("s", r), ("jShriek", kx), ("jStar", cy)):
            if m:
                out[(kind, -n)] = m
    return out


# ------------------------------------------------------------ heart pairs


def pair_object(side: str, delta: RepMap) -> MorphObject:
    """Heart object from delta.

    D0: delta: Y -> C gives [fib delta -> Y] with cof = C (up to sign on u).
    D1: eps: F -> X gives [X -> cone eps] with fib ~ F.
    """
    src, tgt = delta.src, delta.tgt
    fld = src.field
    if side == "D0":
        m1 = fld.red(-1)
        fib = DerivedObject(src.quiver, fld, {0: src, 1: tgt}, {0: delta.scale(m1)}, check=False)
        y = stalk(src, 0)
        return MorphObject(GradedMap(fib, y, {0: RepMap.identity(src)}, 0))
    if side == "D1":
        c = DerivedObject(src.quiver, fld, {-1: src, 0: tgt}, {-1: delta}, check=False)
        x = stalk(tgt, 0)
        return MorphObject(GradedMap(x, c, {0: RepMap.identity(tgt)}, 0))
    raise ValueError(f"unknown side {side!r}")


@dataclass
class HeartPair:
    side: str
    degree: int
    delta: RepMap


@lru_cache(maxsize=8192)
def heart_pair(f: MorphObject, side: str) -> HeartPair | None:
    """(A, B, delta) when f sits in the shifted standard glued heart, else None.

    D0: A = H^m(d0 f), B = H^m(cof f), delta = H^m(u);
    D1: A = H^m(fib f), B = H^m(d1 f), delta = H^m(fib f -> d1 f).
    f then lies in the heart shifted by -m.
    """
    from .derived import cohomology_dims
    if side == "D0":
        g = cof_fib(f).u
    elif side == "D1":
        g = fib_map(f)
    else:
        raise ValueError(side)
    ds = set(cohomology_dims(g.src)) | set(cohomology_dims(g.tgt))
    if len(ds) > 1:
        return None
    if not ds:
        ds = {0}
    m = ds.pop()
    _, _, hm = cohomology_map(g, m)
    return HeartPair(side, m, hm)
