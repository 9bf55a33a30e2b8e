"""Representations of the quivers A2 (1 -> 2), K2 (1 => 2) and the one-point quiver.

Conventions (fixed here once, used everywhere):

* A2: S1 = (k, 0), S2 = (0, k), P12 = (k -> k, id); 0 -> S2 -> P12 -> S1 -> 0.
* K2 (arrows alpha, beta from vertex 1 to vertex 2):
  Preproj(n) has dimension vector (n, n+1), Preinj(n) has (n+1, n) and
  Regular(x, l) has (l deg x, l deg x).  So S2 = P2 = Preproj(0),
  P1 = Preproj(1), S1 = Preinj(0).  A regular point [p:q] is where
  q alpha - p beta fails to be invertible; Regular([1:0], 1) is (k, k, 1, 0).
* pt: a single vertex, used as the base ``vect``.

Vertex indices are 0-based internally; labels use the 1-based names.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import product

from .linalg import (
    QQ,
    Coordinates,
    Field,
    GF,
    Mat,
    block_diag,
    canonical_block,
    column_basis,
    field_from_name,
    image_cokernel,
    inverse,
    kernel_basis,
    pencil_decompose,
    rank,
    Block,
)
from . import kernels

__all__ = [
    "Quiver",
    "QUIVERS",
    "quiver",
    "Rep",
    "RepMap",
    "IndecLabel",
    "hom_basis",
    "hom_space",
    "euler_form",
    "decompose_rep",
    "ker_coker_im",
    "enumerate_subreps",
    "indecomposable",
    "direct_sum",
    "zero_rep",
]


class Quiver:
    """Finite acyclic quiver with vertices 0..n-1 in topological order."""

    def __init__(self, name: str, nverts: int, arrows):
        self.name = name
        self.nverts = nverts
        self.arrows = tuple(arrows)
        for s, t in self.arrows:
            if not s < t:
                raise ValueError("arrows must go from lower to higher vertex index")

    def paths_from(self, v: int):
        """All paths starting at v as tuples of arrow indices (trivial path first)."""
        out = [()]
        frontier = [((), v)]
        while frontier:
            nxt = []
            for word, end in frontier:
                for i, (s, t) in enumerate(self.arrows):
                    if s == end:
                        out.append(word + (i,))
                        nxt.append((word + (i,), t))
            frontier = nxt
        return out

    def path_target(self, v: int, word) -> int:
        for i in word:
            v = self.arrows[i][1]
        return v

    def __repr__(self):
        return f"Quiver({self.name})"

    def __eq__(self, other):
        return isinstance(other, Quiver) and self.name == other.name

    def __hash__(self):
        return hash(self.name)


QUIVERS = {
    "A2": Quiver("A2", 2, [(0, 1)]),
    "K2": Quiver("K2", 2, [(0, 1), (0, 1)]),
    "pt": Quiver("pt", 1, []),
}


def quiver(name) -> Quiver:
    if isinstance(name, Quiver):
        return name
    try:
        return QUIVERS[name]
    except KeyError:
        raise ValueError(f"unknown quiver {name!r}") from None


class Rep:
    """A representation: one vector space dimension per vertex, one matrix per arrow."""

    __slots__ = ("quiver", "dims", "arrows", "field", "_h")

    def __init__(self, q, dims, arrows, field: Field = QQ):
        q = quiver(q)
        self.quiver = q
        self.dims = tuple(int(d) for d in dims)
        self.arrows = tuple(arrows)
        self.field = field
        self._h = None
        if len(self.dims) != q.nverts:
            raise ValueError(f"{q.name} needs {q.nverts} dimensions")
        if len(self.arrows) != len(q.arrows):
            raise ValueError(f"{q.name} needs {len(q.arrows)} arrow matrices")
        for (s, t), m in zip(q.arrows, self.arrows):
            if m.shape != (self.dims[t], self.dims[s]):
                raise ValueError(f"arrow matrix has shape {m.shape}, expected {(self.dims[t], self.dims[s])}")

    def __eq__(self, other):
        return (isinstance(other, Rep) and self.quiver == other.quiver and self.dims == other.dims
                and self.arrows == other.arrows and self.field is other.field)

    def __hash__(self):
        if self._h is None:
            self._h = hash((self.quiver.name, self.dims, self.arrows))
        return self._h

    def __repr__(self):
        return f"Rep({self.quiver.name}, {self.dims})"

    @property
    def total_dim(self) -> int:
        return sum(self.dims)

    def is_zero(self) -> bool:
        return self.total_dim == 0

    def to_json(self) -> dict:
        return {"quiver": self.quiver.name, "dims": list(self.dims),
                "arrows": [m.to_json() for m in self.arrows]}

    @staticmethod
    def from_json(d, field: Field = QQ) -> "Rep":
        if "field" in d:
            field = field_from_name(d["field"])
        return Rep(d["quiver"], d["dims"], [Mat.from_json(m, field) for m in d["arrows"]], field)

    def convert(self, field: Field) -> "Rep":
        return Rep(self.quiver, self.dims, [m.convert(field) for m in self.arrows], field)

    def path_matrix(self, v: int, word) -> Mat:
        m = Mat.identity(self.field, self.dims[v])
        for i in word:
            m = self.arrows[i] @ m
        return m


def zero_rep(q, field: Field = QQ) -> Rep:
    q = quiver(q)
    return Rep(q, [0] * q.nverts, [Mat.zeros(field, 0, 0) for _ in q.arrows], field)


class RepMap:
    """Morphism of representations, one matrix per vertex."""

    __slots__ = ("src", "tgt", "comps", "_h")

    def __init__(self, src: Rep, tgt: Rep, comps, check: bool = True):
        if src.quiver != tgt.quiver:
            raise ValueError("quiver mismatch")
        self.src = src
        self.tgt = tgt
        self.comps = tuple(comps)
        self._h = None
        for v, c in enumerate(self.comps):
            if c.shape != (tgt.dims[v], src.dims[v]):
                raise ValueError(f"component {v} has shape {c.shape}")
        if check and not self.is_intertwining():
            raise ValueError("components do not intertwine the arrows")

    def is_intertwining(self) -> bool:
        for (s, t), ma, na in zip(self.src.quiver.arrows, self.src.arrows, self.tgt.arrows):
            if na @ self.comps[s] != self.comps[t] @ ma:
                return False
        return True

    @staticmethod
    def zero(src: Rep, tgt: Rep) -> "RepMap":
        f = src.field
        return RepMap(src, tgt, [Mat.zeros(f, tgt.dims[v], src.dims[v]) for v in range(len(src.dims))], False)

    @staticmethod
    def identity(m: Rep) -> "RepMap":
        return RepMap(m, m, [Mat.identity(m.field, d) for d in m.dims], False)

    def __matmul__(self, other: "RepMap") -> "RepMap":
        """self after other."""
        if other.tgt.dims != self.src.dims:
            raise ValueError("composition of incompatible maps")
        return RepMap(other.src, self.tgt, [a @ b for a, b in zip(self.comps, other.comps)], False)

    def __add__(self, other: "RepMap") -> "RepMap":
        return RepMap(self.src, self.tgt, [a + b for a, b in zip(self.comps, other.comps)], False)

    def __sub__(self, other: "RepMap") -> "RepMap":
        return RepMap(self.src, self.tgt, [a - b for a, b in zip(self.comps, other.comps)], False)

    def __neg__(self) -> "RepMap":
        return RepMap(self.src, self.tgt, [-a for a in self.comps], False)

    def scale(self, c) -> "RepMap":
        return RepMap(self.src, self.tgt, [a.scale(c) for a in self.comps], False)

    def is_zero(self) -> bool:
        return all(c.is_zero() for c in self.comps)

    def __eq__(self, other):
        return isinstance(other, RepMap) and self.comps == other.comps and self.src == other.src and self.tgt == other.tgt

    def __hash__(self):
        if self._h is None:
            self._h = hash(self.comps)
        return self._h

    def __repr__(self):
        return f"RepMap({self.src!r} -> {self.tgt!r})"

    def flat(self) -> tuple:
        return tuple(x for c in self.comps for r in c.data for x in r)

    def rank(self) -> int:
        return sum(rank(c) for c in self.comps)

    def to_json(self) -> dict:
        return {"src": self.src.to_json(), "tgt": self.tgt.to_json(),
                "components": [c.to_json() for c in self.comps]}

    @staticmethod
    def from_json(d, field: Field = QQ) -> "RepMap":
        src = Rep.from_json(d["src"], field)
        tgt = Rep.from_json(d["tgt"], field)
        return RepMap(src, tgt, [Mat.from_json(c, src.field) for c in d["components"]])


def _unflatten(src: Rep, tgt: Rep, vec) -> RepMap:
    comps = []
    k = 0
    for v in range(len(src.dims)):
        r, c = tgt.dims[v], src.dims[v]
        comps.append(Mat(src.field, r, c, [vec[k + i * c:k + (i + 1) * c] for i in range(r)]))
        k += r * c
    return RepMap(src, tgt, comps, False)


class HomSpace:
    """Hom(m, n) with a fixed basis and fast coordinates."""

    def __init__(self, m: Rep, n: Rep):
        if m.quiver != n.quiver:
            raise ValueError("quiver mismatch")
        self.src = m
        self.tgt = n
        f = m.field
        q = m.quiver
        offs = []
        k = 0
        for v in range(q.nverts):
            offs.append(k)
            k += n.dims[v] * m.dims[v]
        nunk = k
        rows = []
        z = f.zero
        red = f.red
        for (s, t), ma, na in zip(q.arrows, m.arrows, n.arrows):
            # (na f_s - f_t ma)_{ij}, i < n_t, j < m_s
            for i in range(n.dims[t]):
                for j in range(m.dims[s]):
                    r = [z] * nunk
                    for l in range(n.dims[s]):
                        c = na[i, l]
                        if c != 0:
                            idx = offs[s] + l * m.dims[s] + j
                            r[idx] = red(r[idx] + c)
                    for l in range(m.dims[t]):
                        c = ma[l, j]
                        if c != 0:
                            idx = offs[t] + i * m.dims[t] + l
                            r[idx] = red(r[idx] - c)
                    rows.append(r)
        if nunk == 0:
            vecs = []
        elif rows:
            from .linalg import kernel_vectors
            vecs = kernel_vectors(Mat(f, len(rows), nunk, rows))
        else:
            o = f.one
            vecs = [tuple(o if i == j else z for i in range(nunk)) for j in range(nunk)]
        self.nunk = nunk
        self.vectors = vecs
        self.basis = [_unflatten(m, n, v) for v in vecs]
        self._coords = Coordinates(Mat.from_columns(f, nunk, vecs)) if vecs else None

    @property
    def dim(self) -> int:
        return len(self.vectors)

    def coords(self, g: RepMap) -> tuple:
        if not self.vectors:
            return ()
        return self._coords(g.flat())

    def element(self, coeffs) -> RepMap:
        f = self.src.field
        z = f.zero
        vec = [z] * self.nunk
        for c, v in zip(coeffs, self.vectors):
            if c != 0:
                vec = [f.red(a + c * b) for a, b in zip(vec, v)]
        return _unflatten(self.src, self.tgt, vec)


@lru_cache(maxsize=4096)
def hom_space(m: Rep, n: Rep) -> HomSpace:
    return HomSpace(m, n)


def hom_basis(m: Rep, n: Rep) -> list[RepMap]:
    """Basis of Hom(m, n)."""
    return list(hom_space(m, n).basis)


def euler_form(q, d, e) -> int:
    q = quiver(q)
    out = sum(a * b for a, b in zip(d, e))
    for s, t in q.arrows:
        out -= d[s] * e[t]
    return out


def dim_vector(m: Rep) -> tuple:
    return m.dims


# ------------------------------------------------------------ labels


@dataclass(frozen=True)
class IndecLabel:
    """Name of an indecomposable.

    kind is one of: "S1", "S2", "P12" (A2); "Preproj", "Preinj", "Regular" (K2);
    "k" (pt).  For Regular, ``point`` is ("pt", p, q) for a rational point
    [p:q] or ("poly", coeffs) for a closed point of higher degree, coeffs
    low-to-high of a monic irreducible polynomial in the affine coordinate.
    """

    quiver: str
    kind: str
    n: int = 0
    point: tuple | None = None
    length: int = 1

    @property
    def degree(self) -> int:
        if self.point is None or self.point[0] == "pt":
            return 1
        return len(self.point[1]) - 1

    @property
    def dims(self) -> tuple:
        k = self.kind
        if k == "S1":
            return (1, 0)
        if k == "S2":
            return (0, 1)
        if k == "P12":
            return (1, 1)
        if k == "k":
            return (1,)
        if k == "Preproj":
            return (self.n, self.n + 1)
        if k == "Preinj":
            return (self.n + 1, self.n)
        d = self.length * self.degree
        return (d, d)

    def __str__(self):
        if self.kind in ("Preproj", "Preinj"):
            return f"{self.kind}({self.n})"
        if self.kind == "Regular":
            return f"Regular({point_str(self.point)},{self.length})"
        return self.kind

    def sort_key(self):
        order = {"S1": 0, "S2": 1, "P12": 2, "k": 0, "Preinj": 0, "Regular": 1, "Preproj": 2}[self.kind]
        return (order, self.n, point_str(self.point) if self.point else "", self.length)

    def to_json(self):
        return str(self)


def point_str(pt) -> str:
    if pt is None:
        return ""
    if pt[0] == "pt":
        return f"[{pt[1]}:{pt[2]}]"
    if pt[0] == "block":
        return "block(" + ",".join(str(c) for c in pt[1]) + ")"
    terms = []
    for i, c in enumerate(pt[1]):
        if c == 0:
            continue
        mono = "" if i == 0 else ("x" if i == 1 else f"x^{i}")
        if i == 0:
            terms.append(str(c))
        elif c == 1:
            terms.append(mono)
        else:
            terms.append(f"{c}*{mono}")
    return "+".join(reversed(terms)) if terms else "0"


def parse_label(text: str, q=None) -> IndecLabel:
    import re
    text = text.strip()
    if text in ("S1", "S2", "P12"):
        return IndecLabel("A2", text)
    if text == "k":
        return IndecLabel("pt", "k")
    m = re.fullmatch(r"(Preproj|Preinj)\((\d+)\)", text)
    if m:
        return IndecLabel("K2", m.group(1), n=int(m.group(2)))
    m = re.fullmatch(r"Regular\(\[(-?[\d/]+):(-?[\d/]+)\],(\d+)\)", text)
    if m:
        p, qq = Fraction(m.group(1)), Fraction(m.group(2))
        return IndecLabel("K2", "Regular", point=("pt", p, qq), length=int(m.group(3)))
    raise ValueError(f"unknown indecomposable label {text!r}")


def _companion(field: Field, poly) -> Mat:
    """Companion matrix of a monic polynomial (low-to-high coefficients)."""
    d = len(poly) - 1
    z, o = field.zero, field.one
    rows = [[z] * d for _ in range(d)]
    for i in range(1, d):
        rows[i][i - 1] = o
    for i in range(d):
        rows[i][d - 1] = field.red(-field.coerce(poly[i]))
    return Mat(field, d, d, rows)


def _poly_power(poly, l, field):
    out = [field.one]
    for _ in range(l):
        new = [field.zero] * (len(out) + len(poly) - 1)
        for i, a in enumerate(out):
            for j, b in enumerate(poly):
                new[i + j] = field.red(new[i + j] + a * field.coerce(b))
        out = new
    return out


def indecomposable(label, field: Field = QQ) -> Rep:
    """Canonical representative of an indecomposable."""
    if isinstance(label, str):
        label = parse_label(label)
    z, o = field.zero, field.one
    k = label.kind
    if k == "S1":
        return Rep("A2", (1, 0), [Mat.zeros(field, 0, 1)], field)
    if k == "S2":
        return Rep("A2", (0, 1), [Mat.zeros(field, 1, 0)], field)
    if k == "P12":
        return Rep("A2", (1, 1), [Mat.identity(field, 1)], field)
    if k == "k":
        return Rep("pt", (1,), [], field)
    if k == "Preinj":
        a, b = canonical_block(field, Block("L", label.n))
        return Rep("K2", label.dims, [a, b], field)
    if k == "Preproj":
        a, b = canonical_block(field, Block("LT", label.n))
        return Rep("K2", label.dims, [a, b], field)
    if k == "Regular":
        pt = label.point
        if pt[0] == "pt":
            p, q = field.coerce(pt[1]), field.coerce(pt[2])
            if p != 0:
                lam = field.red(q * field.inv(p))
                a, b = canonical_block(field, Block("J", label.length, lam=lam))
            else:
                a, b = canonical_block(field, Block("Inf", label.length))
            return Rep("K2", label.dims, [a, b], field)
        cm = _companion(field, _poly_power(pt[1], label.length, field))
        return Rep("K2", label.dims, [Mat.identity(field, cm.rows), cm], field)
    raise ValueError(f"cannot build {label}")


@dataclass
class DirectSum:
    """The parts of a direct sum with inclusions and projections."""

    total: Rep
    parts: list
    incl: list
    proj: list


def direct_sum(reps, q=None, field: Field | None = None) -> DirectSum:
    reps = list(reps)
    if not reps:
        if q is None:
            raise ValueError("empty direct sum needs a quiver")
        zr = zero_rep(q, field or QQ)
        return DirectSum(zr, [], [], [])
    q = reps[0].quiver
    f = reps[0].field
    dims = [sum(r.dims[v] for r in reps) for v in range(q.nverts)]
    arrows = [block_diag(f, [r.arrows[i] for r in reps]) for i in range(len(q.arrows))]
    total = Rep(q, dims, arrows, f)
    incl, proj = [], []
    offs = [0] * q.nverts
    for r in reps:
        ic, pc = [], []
        for v in range(q.nverts):
            i0 = offs[v]
            e = [[f.one if i == i0 + j else f.zero for j in range(r.dims[v])] for i in range(dims[v])]
            m = Mat(f, dims[v], r.dims[v], e)
            ic.append(m)
            pc.append(m.transpose())
            offs[v] += r.dims[v]
        incl.append(RepMap(r, total, ic, False))
        proj.append(RepMap(total, r, pc, False))
    return DirectSum(total, reps, incl, proj)


def restrict_rep(m: Rep, bases) -> tuple[Rep, RepMap]:
    """Subrepresentation spanned by per-vertex column bases (must be closed)."""
    f = m.field
    q = m.quiver
    coords = [Coordinates(b) for b in bases]
    arrows = []
    for (s, t), a in zip(q.arrows, m.arrows):
        img = a @ bases[s]
        cols = [coords[t](c) for c in img.columns()]
        arrows.append(Mat.from_columns(f, bases[t].cols, cols))
    sub = Rep(q, [b.cols for b in bases], arrows, f)
    return sub, RepMap(sub, m, list(bases), False)


def quotient_rep(m: Rep, bases) -> tuple[Rep, RepMap]:
    """m / sub, where sub is given by per-vertex column bases, with the projection."""
    f = m.field
    q = m.quiver
    projs = []
    for v in range(q.nverts):
        _, pr = image_cokernel(bases[v]) if bases[v].cols else (None, Mat.identity(f, m.dims[v]))
        projs.append(pr)
    arrows = []
    for (s, t), a in zip(q.arrows, m.arrows):
        # induced map: pick sections of the projections
        sec = _section(projs[s])
        arrows.append(projs[t] @ a @ sec)
    quo = Rep(q, [p.rows for p in projs], arrows, f)
    return quo, RepMap(m, quo, projs, False)


def _section(p: Mat) -> Mat:
    """A right inverse of a surjective matrix p."""
    from .linalg import solve
    if p.rows == 0:
        return Mat.zeros(p.field, p.cols, 0)
    s = solve(p, Mat.identity(p.field, p.rows))
    if s is None:
        raise ValueError("matrix is not surjective")
    return s


@dataclass
class KerCokerIm:
    ker: Rep
    ker_incl: RepMap
    im: Rep
    im_from_src: RepMap
    im_incl: RepMap
    coker: Rep
    coker_proj: RepMap


def ker_coker_im(g: RepMap) -> KerCokerIm:
    m, n = g.src, g.tgt
    kb = [kernel_basis(c) for c in g.comps]
    ker, ki = restrict_rep(m, kb)
    ib = [column_basis(c) for c in g.comps]
    im, ii = restrict_rep(n, ib)
    # src -> im: coordinates of g(x) in the image basis
    f = m.field
    comps = []
    for v, c in enumerate(g.comps):
        co = Coordinates(ib[v])
        comps.append(Mat.from_columns(f, ib[v].cols, [co(col) for col in c.columns()]))
    src_to_im = RepMap(m, im, comps, False)
    coker, cp = quotient_rep(n, ib)
    return KerCokerIm(ker, ki, im, src_to_im, ii, coker, cp)


# ------------------------------------------------------------ decomposition


@dataclass
class Decomposition:
    """m = sum of summands; ``basis`` per vertex has the summands' columns in order.

    ``pieces`` lists (labels, column ranges per vertex); an opaque piece (a
    regular block at a point whose summands were not separated) carries
    several labels.
    """

    rep: Rep
    pieces: list
    basis: list

    def labels(self) -> list:
        return [l for p in self.pieces for l in p[0]]

    def multiset(self) -> dict:
        out: dict = {}
        for l in self.labels():
            out[l] = out.get(l, 0) + 1
        return out

    def sorted_labels(self) -> list:
        return sorted(self.labels(), key=lambda l: l.sort_key())

    def check(self) -> bool:
        """Change of basis is invertible and the transformed arrows are block diagonal."""
        m = self.rep
        f = m.field
        try:
            inv = [inverse(b) for b in self.basis]
        except ZeroDivisionError:
            return False
        q = m.quiver
        for (s, t), a in zip(q.arrows, m.arrows):
            ta = inv[t] @ a @ self.basis[s]
            for labels, ranges in self.pieces:
                rs, rt = ranges[s], ranges[t]
                for i in range(ta.rows):
                    for j in range(rs[0], rs[1]):
                        inside = rt[0] <= i < rt[1]
                        if not inside and ta[i, j] != 0:
                            return False
        for v in range(q.nverts):
            if inv[v] @ self.basis[v] != Mat.identity(f, m.dims[v]):
                return False
        for v in range(q.nverts):
            if sum(p[1][v][1] - p[1][v][0] for p in self.pieces) != m.dims[v]:
                return False
        return True

    def summand(self, i: int) -> tuple[Rep, RepMap]:
        """The i-th piece as a subrepresentation with its inclusion."""
        ranges = self.pieces[i][1]
        bases = [self.basis[v].select_columns(range(*ranges[v])) for v in range(len(ranges))]
        return restrict_rep(self.rep, bases)


def _point_of_block(field, blk: Block):
    if blk.kind == "J":
        return ("pt", 1, blk.lam)
    if blk.kind == "Inf":
        return ("pt", 0, 1)
    return ("poly", tuple(blk.poly))


def decompose_rep(m: Rep) -> Decomposition:
    f = m.field
    q = m.quiver
    name = q.name
    if name == "pt":
        d = m.dims[0]
        pieces = [([IndecLabel("pt", "k")], [(i, i + 1)]) for i in range(d)]
        return Decomposition(m, pieces, [Mat.identity(f, d)])
    if name == "A2":
        a = m.arrows[0]
        d1, d2 = m.dims
        # V1 = C + ker a with a|C injective; V2 = a C + complement
        kb = kernel_basis(a)
        comp = _complement_cols(kb)
        ac = a @ comp
        im_comp = _complement_cols(ac)
        r = comp.cols
        b1 = comp.hstack(kb)
        b2 = ac.hstack(im_comp)
        pieces = []
        for i in range(r):
            pieces.append(([IndecLabel("A2", "P12")], [(i, i + 1), (i, i + 1)]))
        for i in range(d1 - r):
            pieces.append(([IndecLabel("A2", "S1")], [(r + i, r + i + 1), (d2, d2)]))
        for i in range(d2 - r):
            pieces.append(([IndecLabel("A2", "S2")], [(d1, d1), (r + i, r + i + 1)]))
        return Decomposition(m, pieces, [b1, b2])
    if name == "K2":
        alpha, beta = m.arrows
        pf = pencil_decompose(alpha, beta)
        bx = pf.Q
        by = inverse(pf.P) if pf.P.rows else pf.P
        pieces = []
        i0 = j0 = 0  # i0 over W (vertex 2), j0 over V (vertex 1)
        for blk in pf.blocks:
            r, c = blk.shape
            if blk.kind == "L":
                labels = [IndecLabel("K2", "Preinj", n=blk.size)]
            elif blk.kind == "LT":
                labels = [IndecLabel("K2", "Preproj", n=blk.size)]
            elif blk.kind in ("J", "Inf"):
                labels = [IndecLabel("K2", "Regular", point=_point_of_block(f, blk), length=blk.size)]
            else:
                if blk.partition is not None:
                    pt = _point_of_block(f, blk)
                    labels = [IndecLabel("K2", "Regular", point=pt, length=l) for l in blk.partition]
                else:
                    # not split further over Q: one opaque block carrying its char poly
                    labels = [IndecLabel("K2", "Regular", point=("block", tuple(blk.poly)), length=1)]
            pieces.append((labels, [(j0, j0 + c), (i0, i0 + r)]))
            i0 += r
            j0 += c
        return Decomposition(m, pieces, [bx, by])
    raise ValueError(f"no decomposition for quiver {name}")


def _complement_cols(m: Mat) -> Mat:
    from .linalg import left_complement
    if m.cols == 0:
        return Mat.identity(m.field, m.rows)
    img = column_basis(m)
    return left_complement(img)


# ------------------------------------------------------------ subobjects


def _edges(m: Rep):
    return [(s, t, [list(r) for r in a.data]) for (s, t), a in zip(m.quiver.arrows, m.arrows)]


def enumerate_subspaces_raw(m: Rep, budget: int = 200000):
    """All subrepresentations as tuples of per-vertex rref row bases (GF(p) only)."""
    p = m.field.char
    if not p:
        raise ValueError("subrepresentation enumeration needs a finite field")
    return kernels.enumerate_subobjects(p, list(m.dims), _edges(m), budget)


def enumerate_subreps(m: Rep, budget: int = 200000, max_total_dim: int = 6):
    """All subrepresentations of m with their inclusions (GF(p) only)."""
    if m.total_dim > max_total_dim:
        raise kernels.BudgetExceeded(_estimate(m), budget)
    out = []
    f = m.field
    for bases in enumerate_subspaces_raw(m, budget):
        mats = [Mat.from_columns(f, m.dims[v], list(b)) for v, b in enumerate(bases)]
        out.append(restrict_rep(m, mats))
    return out


def _estimate(m: Rep) -> int:
    """Upper bound on the number of subspace tuples (product of Grassmannian sizes)."""
    p = m.field.char or 2
    total = 1
    for d in m.dims:
        total *= sum(_gauss_binom(d, k, p) for k in range(d + 1))
    return total


def _gauss_binom(n: int, k: int, p: int) -> int:
    num = den = 1
    for i in range(k):
        num *= p ** (n - i) - 1
        den *= p ** (i + 1) - 1
    return num // den
