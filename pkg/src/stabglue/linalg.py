"""Dense exact linear algebra over Q, Q(sqrt3) and GF(p), and Kronecker pencils."""
from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from functools import lru_cache
from itertools import product
from typing import Iterable, Sequence

from .exact import QuadRat
from . import kernels

__all__ = [
    "Field",
    "QQ",
    "QQ3",
    "GF",
    "Mat",
    "rref",
    "rank",
    "kernel_basis",
    "image_cokernel",
    "solve",
    "inverse",
    "det",
    "Block",
    "PencilForm",
    "pencil_decompose",
    "canonical_block",
]


class Field:
    """Scalar field descriptor; entries are plain Python scalars."""

    name: str
    char: int

    def red(self, x):
        return x

    def coerce(self, x):
        raise NotImplementedError

    def inv(self, x):
        raise NotImplementedError

    def is_zero(self, x) -> bool:
        return x == 0

    def elements(self):
        raise TypeError(f"{self.name} is infinite")

    def to_json(self, x):
        raise NotImplementedError

    def from_json(self, s):
        raise NotImplementedError

    def __repr__(self):
        return self.name


class _Rationals(Field):
    name = "QQ"
    char = 0
    zero = Fraction(0)
    one = Fraction(1)

    def coerce(self, x):
        if isinstance(x, QuadRat):
            if x.b != 0:
                raise ValueError(f"{x!r} is not rational")
            return x.a
        return Fraction(x)

    def inv(self, x):
        return 1 / x

    def to_json(self, x):
        return str(x)

    def from_json(self, s):
        return Fraction(str(s))


class _QuadField(Field):
    name = "QQ3"
    char = 0
    zero = QuadRat(0)
    one = QuadRat(1)

    def coerce(self, x):
        if isinstance(x, str):
            return QuadRat.from_str(x)
        return QuadRat.coerce(x)

    def inv(self, x):
        return x.inverse()

    def to_json(self, x):
        return x.to_str()

    def from_json(self, s):
        return QuadRat.from_str(str(s))


class _PrimeField(Field):
    def __init__(self, p: int):
        if p < 2 or any(p % d == 0 for d in range(2, int(p**0.5) + 1)):
            raise ValueError(f"{p} is not prime")
        self.p = p
        self.char = p
        self.name = f"GF({p})"
        self.zero = 0
        self.one = 1

    def red(self, x):
        return x % self.p

    def coerce(self, x):
        if isinstance(x, Fraction):
            if x.denominator % self.p == 0:
                raise ZeroDivisionError(f"{x} has denominator divisible by {self.p}")
            return (x.numerator * pow(x.denominator, self.p - 2, self.p)) % self.p
        return int(x) % self.p

    def inv(self, x):
        if x % self.p == 0:
            raise ZeroDivisionError("inverse of 0 in GF(p)")
        return pow(x, self.p - 2, self.p)

    def elements(self):
        return range(self.p)

    def to_json(self, x):
        return int(x)

    def from_json(self, s):
        return int(s) % self.p


QQ = _Rationals()
QQ3 = _QuadField()


@lru_cache(maxsize=None)
def GF(p: int) -> Field:
    return _PrimeField(p)


def field_from_name(name: str) -> Field:
    if name == "QQ":
        return QQ
    if name == "QQ3":
        return QQ3
    if name.startswith("GF(") and name.endswith(")"):
        return GF(int(name[3:-1]))
    raise ValueError(f"unknown field {name!r}")


class Mat:
    """Immutable dense matrix, rows stored as tuples."""

    __slots__ = ("rows", "cols", "data", "field", "_h")

    def __init__(self, field: Field, rows: int, cols: int, data: Sequence[Sequence]):
        self.field = field
        self.rows = rows
        self.cols = cols
        self.data = tuple(tuple(r) for r in data)
        self._h = None
        if len(self.data) != rows or any(len(r) != cols for r in self.data):
            raise ValueError(f"shape mismatch building a {rows}x{cols} matrix")

    # -- constructors
    @staticmethod
    def from_rows(field: Field, rows, cols: int | None = None) -> "Mat":
        rows = [[field.coerce(x) for x in r] for r in rows]
        if cols is None:
            cols = len(rows[0]) if rows else 0
        return Mat(field, len(rows), cols, rows)

    @staticmethod
    def zeros(field: Field, rows: int, cols: int) -> "Mat":
        z = field.zero
        return Mat(field, rows, cols, [[z] * cols for _ in range(rows)])

    @staticmethod
    def identity(field: Field, n: int) -> "Mat":
        z, o = field.zero, field.one
        return Mat(field, n, n, [[o if i == j else z for j in range(n)] for i in range(n)])

    @staticmethod
    def from_columns(field: Field, nrows: int, cols: Sequence[Sequence]) -> "Mat":
        return Mat(field, nrows, len(cols), [[c[i] for c in cols] for i in range(nrows)])

    # -- basics
    def __getitem__(self, ij):
        i, j = ij
        return self.data[i][j]

    def __eq__(self, other):
        if not isinstance(other, Mat):
            return NotImplemented
        return self.rows == other.rows and self.cols == other.cols and self.data == other.data

    def __hash__(self):
        if self._h is None:
            self._h = hash((self.rows, self.cols, self.data))
        return self._h

    def __repr__(self):
        return f"Mat({self.field}, {self.rows}x{self.cols}, {[list(r) for r in self.data]})"

    @property
    def shape(self):
        return (self.rows, self.cols)

    def column(self, j: int) -> tuple:
        return tuple(r[j] for r in self.data)

    def columns(self) -> list[tuple]:
        return [self.column(j) for j in range(self.cols)]

    def is_zero(self) -> bool:
        f = self.field
        return all(f.is_zero(x) for r in self.data for x in r)

    def transpose(self) -> "Mat":
        return Mat(self.field, self.cols, self.rows, list(zip(*self.data)) if self.rows else [[] for _ in range(self.cols)])

    T = property(transpose)

    def __add__(self, other: "Mat") -> "Mat":
        if self.shape != other.shape:
            raise ValueError("shape mismatch in addition")
        red = self.field.red
        return Mat(self.field, self.rows, self.cols,
                   [[red(a + b) for a, b in zip(r, s)] for r, s in zip(self.data, other.data)])

    def __sub__(self, other: "Mat") -> "Mat":
        if self.shape != other.shape:
            raise ValueError("shape mismatch in subtraction")
        red = self.field.red
        return Mat(self.field, self.rows, self.cols,
                   [[red(a - b) for a, b in zip(r, s)] for r, s in zip(self.data, other.data)])

    def __neg__(self) -> "Mat":
        red = self.field.red
        return Mat(self.field, self.rows, self.cols, [[red(-a) for a in r] for r in self.data])

    def scale(self, c) -> "Mat":
        red = self.field.red
        return Mat(self.field, self.rows, self.cols, [[red(c * a) for a in r] for r in self.data])

    def __matmul__(self, other: "Mat") -> "Mat":
        if self.cols != other.rows:
            raise ValueError(f"cannot multiply {self.shape} by {other.shape}")
        f = self.field
        if other.cols == 0 or self.rows == 0:
            return Mat.zeros(f, self.rows, other.cols)
        if self.cols == 0:
            return Mat.zeros(f, self.rows, other.cols)
        red = f.red
        ocols = list(zip(*other.data))
        z = f.zero
        out = []
        for r in self.data:
            nz = [(k, a) for k, a in enumerate(r) if a != 0]
            if not nz:
                out.append([z] * other.cols)
                continue
            row = []
            for c in ocols:
                s = z
                for k, a in nz:
                    b = c[k]
                    if b != 0:
                        s = s + a * b
                row.append(red(s))
            out.append(row)
        return Mat(f, self.rows, other.cols, out)

    def apply(self, vec: Sequence) -> tuple:
        f = self.field
        red = f.red
        z = f.zero
        out = []
        for r in self.data:
            s = z
            for a, b in zip(r, vec):
                if a != 0 and b != 0:
                    s = s + a * b
            out.append(red(s))
        return tuple(out)

    def hstack(self, other: "Mat") -> "Mat":
        if self.rows != other.rows:
            raise ValueError("row mismatch in hstack")
        return Mat(self.field, self.rows, self.cols + other.cols,
                   [a + b for a, b in zip(self.data, other.data)])

    def vstack(self, other: "Mat") -> "Mat":
        if self.cols != other.cols:
            raise ValueError("column mismatch in vstack")
        return Mat(self.field, self.rows + other.rows, self.cols, self.data + other.data)

    def submatrix(self, rows: Iterable[int], cols: Iterable[int]) -> "Mat":
        rows = list(rows)
        cols = list(cols)
        return Mat(self.field, len(rows), len(cols), [[self.data[i][j] for j in cols] for i in rows])

    def select_columns(self, cols: Iterable[int]) -> "Mat":
        return self.submatrix(range(self.rows), cols)

    def rank(self) -> int:
        return rank(self)

    def to_json(self) -> dict:
        tj = self.field.to_json
        return {"rows": self.rows, "cols": self.cols,
                "entries": [tj(x) for r in self.data for x in r]}

    @staticmethod
    def from_json(d: dict, field: Field) -> "Mat":
        r, c = int(d["rows"]), int(d["cols"])
        ent = [field.from_json(x) for x in d["entries"]]
        if len(ent) != r * c:
            raise ValueError("entries length does not match rows*cols")
        return Mat(field, r, c, [ent[i * c:(i + 1) * c] for i in range(r)])

    def convert(self, field: Field) -> "Mat":
        return Mat(field, self.rows, self.cols, [[field.coerce(x) for x in r] for r in self.data])


def block_diag(field: Field, blocks: Sequence[Mat]) -> Mat:
    r = sum(b.rows for b in blocks)
    c = sum(b.cols for b in blocks)
    z = field.zero
    data = [[z] * c for _ in range(r)]
    i0 = j0 = 0
    for b in blocks:
        for i in range(b.rows):
            data[i0 + i][j0:j0 + b.cols] = b.data[i]
        i0 += b.rows
        j0 += b.cols
    return Mat(field, r, c, data)


# ---------------------------------------------------------------- elimination


def _rref_generic(field: Field, data, ncols):
    m = [list(r) for r in data]
    inv = field.inv
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
        pv = row[c]
        if pv != 1:
            iv = inv(pv)
            row = [x * iv for x in row]
            m[r] = row
        for i in range(nrows):
            if i != r:
                f = m[i][c]
                if f != 0:
                    mi = m[i]
                    m[i] = [a - f * b if b != 0 else a for a, b in zip(mi, row)]
        piv.append(c)
        r += 1
    return [tuple(x) for x in m[:r]], piv


def rref_rows(field: Field, data, ncols):
    """(nonzero rref rows, pivot columns) of a list of rows."""
    if not data or ncols == 0:
        return [], []
    if field.char:
        return kernels.rref_mod_p([list(r) for r in data], ncols, field.char)
    return _rref_generic(field, data, ncols)


def rref(m: Mat) -> tuple[Mat, list[int]]:
    rows, piv = rref_rows(m.field, m.data, m.cols)
    return Mat(m.field, len(rows), m.cols, rows), piv


def rank(m: Mat) -> int:
    return len(rref_rows(m.field, m.data, m.cols)[1])


def _kernel_from_rref(field: Field, rows, piv, ncols) -> list[tuple]:
    red = field.red
    z, o = field.zero, field.one
    pivset = set(piv)
    basis = []
    for fcol in range(ncols):
        if fcol in pivset:
            continue
        v = [z] * ncols
        v[fcol] = o
        for r, pc in zip(rows, piv):
            a = r[fcol]
            if a != 0:
                v[pc] = red(-a)
        basis.append(tuple(v))
    return basis


def kernel_vectors(m: Mat) -> list[tuple]:
    rows, piv = rref_rows(m.field, m.data, m.cols)
    return _kernel_from_rref(m.field, rows, piv, m.cols)


def kernel_basis(m: Mat) -> Mat:
    """Columns spanning ker m (cols - rank of them)."""
    vecs = kernel_vectors(m)
    return Mat.from_columns(m.field, m.cols, vecs)


def column_basis(m: Mat) -> Mat:
    """An independent subset of the columns of m spanning its image (leftmost choice)."""
    _, piv = rref_rows(m.field, m.data, m.cols)
    return m.select_columns(piv)


def left_complement(m: Mat) -> Mat:
    """Unit vectors completing the column span of m to the full space."""
    f = m.field
    t = m.transpose()
    _, piv = rref_rows(f, t.data, t.cols)
    pivset = set(piv)
    z, o = f.zero, f.one
    cols = []
    for j in range(m.rows):
        if j not in pivset:
            cols.append(tuple(o if i == j else z for i in range(m.rows)))
    return Mat.from_columns(f, m.rows, cols)


def image_cokernel(m: Mat) -> tuple[Mat, Mat]:
    """(basis of im m as columns, surjection whose kernel is exactly im m)."""
    img = column_basis(m)
    comp = left_complement(img)
    # express the target in the basis [img | comp]; keep the comp coordinates
    full = img.hstack(comp)
    finv = inverse(full)
    proj = finv.submatrix(range(img.cols, full.cols), range(full.rows))
    return img, proj


def solve(a: Mat, b: Mat) -> Mat | None:
    """A particular X with a X = b, or None when inconsistent."""
    f = a.field
    aug = a.hstack(b)
    rows, piv = rref_rows(f, aug.data, aug.cols)
    if any(p >= a.cols for p in piv):
        return None
    z = f.zero
    x = [[z] * b.cols for _ in range(a.cols)]
    for r, pc in zip(rows, piv):
        for j in range(b.cols):
            x[pc][j] = r[a.cols + j]
    return Mat(f, a.cols, b.cols, x)


def solve_vector(a: Mat, v: Sequence) -> tuple | None:
    x = solve(a, Mat.from_columns(a.field, a.rows, [tuple(v)]))
    return None if x is None else x.column(0)


def inverse(m: Mat) -> Mat:
    if m.rows != m.cols:
        raise ValueError("inverse of a non-square matrix")
    x = solve(m, Mat.identity(m.field, m.rows))
    if x is None or rank(m) != m.rows:
        raise ZeroDivisionError("matrix is singular")
    return x


def det(m: Mat):
    if m.rows != m.cols:
        raise ValueError("determinant of a non-square matrix")
    f = m.field
    a = [list(r) for r in m.data]
    n = m.rows
    d = f.one
    for c in range(n):
        k = c
        while k < n and a[k][c] == 0:
            k += 1
        if k == n:
            return f.zero
        if k != c:
            a[c], a[k] = a[k], a[c]
            d = f.red(-d)
        pv = a[c][c]
        d = f.red(d * pv)
        iv = f.inv(pv)
        for i in range(c + 1, n):
            fct = f.red(a[i][c] * iv)
            if fct != 0:
                a[i] = [f.red(x - fct * y) for x, y in zip(a[i], a[c])]
    return d


class Coordinates:
    """Solve B c = v quickly for a fixed full-column-rank B."""

    __slots__ = ("basis", "piv", "pinv", "field")

    def __init__(self, basis: Mat):
        self.basis = basis
        self.field = basis.field
        if basis.cols == 0:
            self.piv = []
            self.pinv = None
            return
        t = basis.transpose()
        _, piv = rref_rows(basis.field, t.data, t.cols)
        if len(piv) != basis.cols:
            raise ValueError("basis columns are dependent")
        self.piv = piv
        self.pinv = inverse(basis.submatrix(piv, range(basis.cols)))

    def __call__(self, v: Sequence) -> tuple:
        if self.basis.cols == 0:
            return ()
        return self.pinv.apply([v[i] for i in self.piv])


# ---------------------------------------------------------------- pencils


@dataclass(frozen=True)
class Block:
    """One canonical pencil block.

    kind: "L" (L_eps, eps x (eps+1)), "LT" (L_eta transpose, (eta+1) x eta),
    "J" (Jordan(lam, k) with a = I, b = lam I + N), "Inf" (a = N, b = I),
    "H" (opaque regular block at a point of degree > 1; ``poly`` holds the
    monic irreducible minimal polynomial of a^{-1} b restricted to the block,
    low to high coefficients, and ``partition`` the block lengths).
    """

    kind: str
    size: int
    lam: object = None
    poly: tuple | None = None
    partition: tuple | None = None

    @property
    def shape(self) -> tuple[int, int]:
        """(rows, cols) of the block."""
        if self.kind == "L":
            return (self.size, self.size + 1)
        if self.kind == "LT":
            return (self.size + 1, self.size)
        return (self.size, self.size)

    def sort_key(self):
        order = {"L": 0, "LT": 1, "J": 2, "Inf": 3, "H": 4}[self.kind]
        lam = self.lam
        lamkey = (0,) if lam is None else (1, str(lam))
        return (order, lamkey, str(self.poly), self.size)


def canonical_block(field: Field, blk: Block) -> tuple[Mat, Mat]:
    """Canonical (a, b) for a block; "H" blocks have no canonical form."""
    z, o = field.zero, field.one
    k = blk.size
    if blk.kind == "L":
        a = [[o if j == i else z for j in range(k + 1)] for i in range(k)]
        b = [[o if j == i + 1 else z for j in range(k + 1)] for i in range(k)]
        return Mat(field, k, k + 1, a), Mat(field, k, k + 1, b)
    if blk.kind == "LT":
        a = [[o if i == j else z for j in range(k)] for i in range(k + 1)]
        b = [[o if i == j + 1 else z for j in range(k)] for i in range(k + 1)]
        return Mat(field, k + 1, k, a), Mat(field, k + 1, k, b)
    if blk.kind == "J":
        lam = blk.lam
        a = Mat.identity(field, k)
        b = [[lam if i == j else (o if j == i + 1 else z) for j in range(k)] for i in range(k)]
        return a, Mat(field, k, k, b)
    if blk.kind == "Inf":
        a = [[o if j == i + 1 else z for j in range(k)] for i in range(k)]
        return Mat(field, k, k, a), Mat.identity(field, k)
    raise ValueError("opaque blocks have no canonical matrices")


@dataclass
class PencilForm:
    """P (a + t b) Q = block diagonal; stored as (blocks, P, Q, transformed a, b)."""

    blocks: list
    P: Mat
    Q: Mat
    a_form: Mat
    b_form: Mat
    field: Field = dc_field(repr=False, default=None)

    def check(self, a: Mat, b: Mat) -> bool:
        """Reconstruction: P a Q and P b Q equal the stored block forms, which are
        block diagonal with the canonical blocks in place."""
        if (self.P @ a @ self.Q) != self.a_form or (self.P @ b @ self.Q) != self.b_form:
            return False
        if det(self.P) == 0 or det(self.Q) == 0:
            return False
        i0 = j0 = 0
        f = self.field
        for blk in self.blocks:
            r, c = blk.shape
            # off-block entries must vanish
            for i in range(i0, i0 + r):
                for j in range(self.a_form.cols):
                    if j0 <= j < j0 + c:
                        continue
                    if self.a_form[i, j] != 0 or self.b_form[i, j] != 0:
                        return False
            if blk.kind != "H":
                ca, cb = canonical_block(f, blk)
                if self.a_form.submatrix(range(i0, i0 + r), range(j0, j0 + c)) != ca:
                    return False
                if self.b_form.submatrix(range(i0, i0 + r), range(j0, j0 + c)) != cb:
                    return False
            i0 += r
            j0 += c
        return i0 == self.a_form.rows and j0 == self.a_form.cols

    def multiset(self) -> list:
        return sorted((b.kind, str(b.lam), b.poly, b.partition, b.size) for b in self.blocks)


def _pencil_hom(field, a1, b1, a2, b2):
    """Basis of pairs (X, Y), X: V1 -> V2, Y: W1 -> W2, with Y a_i = a_i' X."""
    n1, m1 = a1.cols, a1.rows
    n2, m2 = a2.cols, a2.rows
    nx = n2 * n1
    ny = m2 * m1
    nunk = nx + ny
    if nunk == 0:
        return []
    red = field.red
    z, o = field.zero, field.one
    rows = []
    for mat1, mat2 in ((a1, a2), (b1, b2)):
        # (Y mat1)_{ij} - (mat2 X)_{ij} = 0 for i < m2, j < n1
        for i in range(m2):
            for j in range(n1):
                r = [z] * nunk
                for k in range(m1):
                    c = mat1[k, j]
                    if c != 0:
                        r[nx + i * m1 + k] = red(r[nx + i * m1 + k] + c)
                for k in range(n2):
                    c = mat2[i, k]
                    if c != 0:
                        r[k * n1 + j] = red(r[k * n1 + j] - c)
                rows.append(r)
    if rows:
        vecs = kernel_vectors(Mat(field, len(rows), nunk, rows))
    else:
        vecs = [tuple(o if i == j else z for i in range(nunk)) for j in range(nunk)]
    out = []
    for v in vecs:
        x = Mat(field, n2, n1, [v[i * n1:(i + 1) * n1] for i in range(n2)])
        y = Mat(field, m2, m1, [v[nx + i * m1: nx + (i + 1) * m1] for i in range(m2)])
        out.append((x, y))
    return out


def _first_diag(mx: Mat, my: Mat):
    if mx.rows:
        return mx[0, 0]
    return my[0, 0]


def _split_schurian(field, a, b, ca, cb):
    """Try to split off a summand isomorphic to the Schurian pencil (ca, cb).

    Returns (Xi, Yi, Xc, Yc) column bases: image of the summand and a complement
    that is a sub-pencil, or None.
    """
    into = _pencil_hom(field, ca, cb, a, b)
    if not into:
        return None
    out = _pencil_hom(field, a, b, ca, cb)
    for (xi, yi), (xr, yr) in product(into, out):
        c = _first_diag(xr @ xi, yr @ yi)
        if c != 0:
            ci = field.inv(c)
            xr = xr.scale(ci)
            yr = yr.scale(ci)
            return xi, yi, kernel_basis(xr), kernel_basis(yr)
    return None


def _restrict(field, a, b, xbasis: Mat, ybasis: Mat):
    """Matrices of the pencil restricted to V' = span xbasis, W' = span ybasis."""
    cy = Coordinates(ybasis)
    ra = Mat.from_columns(field, ybasis.cols, [cy(v) for v in (a @ xbasis).columns()])
    rb = Mat.from_columns(field, ybasis.cols, [cy(v) for v in (b @ xbasis).columns()])
    return ra, rb


def _mat_pow(m: Mat, k: int) -> Mat:
    r = Mat.identity(m.field, m.rows)
    for _ in range(k):
        r = r @ m
    return r


def _jordan_chains(field, nil: Mat):
    """Jordan chains [e1..ek] of a nilpotent matrix, N e1 = 0 and N e_i = e_{i-1}."""
    n = nil.rows
    if n == 0:
        return []
    kers = [Mat.zeros(field, n, 0)]
    p = Mat.identity(field, n)
    while kers[-1].cols < n:
        p = p @ nil
        kers.append(kernel_basis(p))
        if len(kers) > n + 1:
            raise ValueError("matrix is not nilpotent")
    h = len(kers) - 1
    tops: list[tuple[int, tuple]] = []
    for j in range(h, 0, -1):
        cur = list(kers[j - 1].columns())
        for lvl, v in tops:
            w = v
            for _ in range(lvl - j):
                w = nil.apply(w)
            cur.append(w)
        r = rank(Mat.from_columns(field, n, cur)) if cur else 0
        for cand in kers[j].columns():
            rr = rank(Mat.from_columns(field, n, cur + [cand]))
            if rr > r:
                cur.append(cand)
                r = rr
                tops.append((j, cand))
    chains = []
    for lvl, v in tops:
        chain = [v]
        for _ in range(lvl - 1):
            chain.append(nil.apply(chain[-1]))
        chains.append(list(reversed(chain)))
    return chains


def _poly_eval_mat(coeffs, m: Mat) -> Mat:
    f = m.field
    r = Mat.zeros(f, m.rows, m.cols)
    for c in reversed(coeffs):
        r = r @ m + Mat.identity(f, m.rows).scale(c)
    return r


def _monic_irreducibles(p: int, deg: int):
    """Monic irreducible polynomials of the given degree over GF(p), low-to-high."""
    out = []
    for tail in product(range(p), repeat=deg):
        poly = tuple(tail) + (1,)
        if deg > 1 and poly[0] == 0:
            continue
        if _is_irreducible(poly, p):
            out.append(poly)
    return out


def _poly_mod(a, b, p):
    a = list(a)
    while a and a[-1] % p == 0:
        a.pop()
    db = len(b) - 1
    inv = pow(b[-1], p - 2, p)
    while len(a) - 1 >= db and a:
        c = (a[-1] * inv) % p
        sh = len(a) - 1 - db
        for i, bc in enumerate(b):
            a[sh + i] = (a[sh + i] - c * bc) % p
        while a and a[-1] % p == 0:
            a.pop()
    return a


def _is_irreducible(poly, p):
    deg = len(poly) - 1
    if deg == 1:
        return True
    for d in range(1, deg // 2 + 1):
        for tail in product(range(p), repeat=d):
            q = tuple(tail) + (1,)
            if not _poly_mod(poly, q, p):
                return False
    return True


def _fitting_split(field, b_op: Mat, lam_poly):
    """Generalized kernel and Fitting complement of q(b_op) for a polynomial q."""
    n = b_op.rows
    q = _poly_eval_mat(lam_poly, b_op)
    qn = _mat_pow(q, n)
    return kernel_basis(qn), column_basis(qn)


def _wong_limit(field, l_sing: Mat, l_other: Mat) -> Mat:
    """Limit of V_{i+1} = l_sing^{-1}(l_other V_i), V_0 = 0, as a column basis."""
    n = l_sing.cols
    cur = Mat.zeros(field, n, 0)
    while True:
        img = l_other @ cur
        # preimage under l_sing of span(img)
        m = l_sing.rows
        big = l_sing.hstack(img.scale(field.red(-1)) if img.cols else Mat.zeros(field, m, 0))
        ker = kernel_basis(big)
        pre = ker.submatrix(range(n), range(ker.cols))
        nxt = column_basis(pre) if pre.cols else pre
        if nxt.cols == cur.cols:
            return cur
        cur = nxt


def _rational_roots_qq(coeffs):
    """Rational roots of a polynomial with rational coefficients (low to high)."""
    from math import gcd
    c = [Fraction(x) for x in coeffs]
    while c and c[-1] == 0:
        c.pop()
    if len(c) <= 1:
        return []
    l = 1
    for x in c:
        l = l * x.denominator // gcd(l, x.denominator)
    ints = [int(x * l) for x in c]
    roots = set()
    if ints[0] == 0:
        roots.add(Fraction(0))
        k = 0
        while ints[k] == 0:
            k += 1
        ints = ints[k:]
    if len(ints) <= 1:
        return sorted(roots)

    def divisors(m):
        m = abs(m)
        return [d for d in range(1, m + 1) if m % d == 0]

    for pnum in divisors(ints[0]):
        for q in divisors(ints[-1]):
            for s in (1, -1):
                r = Fraction(s * pnum, q)
                val = Fraction(0)
                for a in reversed(ints):
                    val = val * r + a
                if val == 0:
                    roots.add(r)
    return sorted(roots)


def _charpoly(m: Mat):
    """Characteristic polynomial (low to high) by the division-free Berkowitz recursion."""
    f = m.field
    n = m.rows
    if n == 0:
        return (f.one,)
    red = f.red
    # Berkowitz: build Toeplitz vectors
    vect = [f.one, red(-m[0, 0])]
    for r in range(1, n):
        a = m.submatrix(range(r), range(r))
        rowv = [m[r, j] for j in range(r)]
        colv = [m[i, r] for i in range(r)]
        c = [f.one, red(-m[r, r])]
        # Toeplitz first column entries: 1, -m_rr, -R C, -R A C, ...
        w = colv
        for _ in range(r):
            s = f.zero
            for x, y in zip(rowv, w):
                s = s + x * y
            c.append(red(-s))
            w = list(a.apply(w))
        # multiply the lower-triangular Toeplitz (r+2 x r+1) by vect
        newv = []
        for i in range(r + 2):
            s = f.zero
            for j in range(min(i, r) + 1):
                if j < len(vect):
                    s = s + c[i - j] * vect[j]
            newv.append(red(s))
        vect = newv
    # vect holds coefficients high to low of det(xI - m)
    return tuple(reversed(vect))


def _regular_decompose(field, a: Mat, b: Mat):
    """Decompose a regular square pencil into (kind, lam, Xbasis, Ybasis, extras) pieces."""
    n = a.cols
    pieces = []
    if n == 0:
        return pieces
    # part where a is singular: the point [0:1]
    vinf = _wong_limit(field, a, b)
    if vinf.cols:
        winf = column_basis(b @ vinf)
        ra, rb = _restrict(field, a, b, vinf, winf)
        split = _retraction_complement(field, a, b, vinf, winf, ra, rb)
        xc, yc = split
        pieces.append(("Inf", None, vinf, winf))
        if xc.cols == 0:
            return pieces
        ra2, rb2 = _restrict(field, a, b, xc, yc)
        for kind, lam, xs, ys in _regular_decompose(field, ra2, rb2):
            pieces.append((kind, lam, xc @ xs, yc @ ys))
        return pieces
    # a invertible: B = a^{-1} b
    ainv = inverse(a)
    bop = ainv @ b
    rest_x = Mat.identity(field, n)
    if field.char:
        lams = list(field.elements())
    else:
        cp = _charpoly(bop)
        if field is QQ:
            lams = _rational_roots_qq(cp)
        else:
            lams = _rational_roots_qq([x.a for x in cp]) if all(x.b == 0 for x in cp) else []
        lams = [field.coerce(x) for x in lams]
    cur_b = bop
    for lam in lams:
        if cur_b.rows == 0:
            break
        q = (field.red(-lam), field.one)
        kb, cb = _fitting_split(field, cur_b, q)
        if kb.cols == 0:
            continue
        pieces.append(("J", lam, rest_x @ kb, None))
        if cb.cols == 0:
            rest_x = Mat.zeros(field, n, 0)
            cur_b = Mat.zeros(field, 0, 0)
            break
        cc = Coordinates(cb)
        cur_b = Mat.from_columns(field, cb.cols, [cc(v) for v in (cur_b @ cb).columns()])
        rest_x = rest_x @ cb
    if rest_x.cols:
        if field.char:
            deg = 2
            while rest_x.cols and deg <= rest_x.cols:
                for poly in _monic_irreducibles(field.char, deg):
                    if cur_b.rows == 0:
                        break
                    kb, cb = _fitting_split(field, cur_b, poly)
                    if kb.cols == 0:
                        continue
                    pieces.append(("H", poly, rest_x @ kb, None))
                    if cb.cols == 0:
                        rest_x = Mat.zeros(field, n, 0)
                        cur_b = Mat.zeros(field, 0, 0)
                        break
                    cc = Coordinates(cb)
                    cur_b = Mat.from_columns(field, cb.cols, [cc(v) for v in (cur_b @ cb).columns()])
                    rest_x = rest_x @ cb
                deg += 1
        else:
            pieces.append(("H", tuple(_charpoly(cur_b)), rest_x, None))
    out = []
    for kind, lam, xs, _ in pieces:
        out.append((kind, lam, xs, a @ xs))
    return out


def _retraction_complement(field, a, b, xs: Mat, ys: Mat, ra: Mat, rb: Mat):
    """Given a summand sub-pencil (xs, ys), return a complementary sub-pencil."""
    homs = _pencil_hom(field, a, b, ra, rb)
    if not homs:
        raise ArithmeticError("sub-pencil is not a summand")
    # find a combination r with r o incl = id (linear in the coefficients)
    nx, ny = xs.cols, ys.cols
    target = []
    cols = []
    for x, y in homs:
        comp_x = x @ xs
        comp_y = y @ ys
        cols.append([v for r in comp_x.data for v in r] + [v for r in comp_y.data for v in r])
    ident = Mat.identity(field, nx)
    identy = Mat.identity(field, ny)
    target = [v for r in ident.data for v in r] + [v for r in identy.data for v in r]
    system = Mat.from_columns(field, len(target), cols)
    coef = solve_vector(system, target)
    if coef is None:
        raise ArithmeticError("sub-pencil is not a summand")
    rx = Mat.zeros(field, nx, a.cols)
    ry = Mat.zeros(field, ny, a.rows)
    for c, (x, y) in zip(coef, homs):
        if c != 0:
            rx = rx + x.scale(c)
            ry = ry + y.scale(c)
    return kernel_basis(rx), kernel_basis(ry)


def pencil_decompose(a: Mat, b: Mat) -> PencilForm:
    """Kronecker decomposition of a + t b (a, b : V -> W, shape m x n)."""
    if a.shape != b.shape:
        raise ValueError("pencil matrices must have the same shape")
    field = a.field
    m, n = a.shape
    pieces = []  # (Block, Xcols, Ycols)
    cur_a, cur_b = a, b
    basis_x = Mat.identity(field, n)
    basis_y = Mat.identity(field, m)

    def peel(kind: str):
        nonlocal cur_a, cur_b, basis_x, basis_y
        limit = (cur_a.cols if kind == "L" else cur_a.rows)
        eps = 0
        while eps <= limit:
            blk = Block(kind, eps)
            r, c = blk.shape
            if r > cur_a.rows or c > cur_a.cols:
                break
            ca, cb = canonical_block(field, blk)
            res = _split_schurian(field, cur_a, cur_b, ca, cb)
            if res is None:
                eps += 1
                continue
            xi, yi, xc, yc = res
            pieces.append((blk, basis_x @ xi, basis_y @ yi))
            if xc.cols == 0 and yc.cols == 0:
                cur_a = Mat.zeros(field, 0, 0)
                cur_b = cur_a
                basis_x = Mat.zeros(field, n, 0)
                basis_y = Mat.zeros(field, m, 0)
                return
            na, nb = _restrict(field, cur_a, cur_b, xc, yc)
            cur_a, cur_b = na, nb
            basis_x = basis_x @ xc
            basis_y = basis_y @ yc
            limit = (cur_a.cols if kind == "L" else cur_a.rows)

    peel("L")
    peel("LT")
    if cur_a.rows != cur_a.cols:
        raise ArithmeticError("singular part not exhausted")
    for kind, lam, xs, ys in _regular_decompose(field, cur_a, cur_b):
        ra, rb = _restrict(field, cur_a, cur_b, xs, ys)
        if kind == "J":
            nil = rb - ra.scale(lam)
            nil = inverse(ra) @ nil
            chains = _jordan_chains(field, nil)
            for ch in chains:
                xcols = Mat.from_columns(field, xs.cols, ch)
                xb = xs @ xcols
                yb = cur_a @ xb
                pieces.append((Block("J", len(ch), lam=lam), basis_x @ xb, basis_y @ yb))
        elif kind == "Inf":
            nil = inverse(rb) @ ra
            chains = _jordan_chains(field, nil)
            for ch in chains:
                xcols = Mat.from_columns(field, xs.cols, ch)
                xb = xs @ xcols
                yb = cur_b @ xb
                pieces.append((Block("Inf", len(ch)), basis_x @ xb, basis_y @ yb))
        else:
            poly = tuple(lam)
            part = _higher_partition(field, ra, rb, poly) if field.char else None
            pieces.append((Block("H", xs.cols, poly=poly, partition=part), basis_x @ xs, basis_y @ ys))
    pieces.sort(key=lambda t: t[0].sort_key())
    blocks = [p[0] for p in pieces]
    qm = Mat.from_columns(field, n, [c for p in pieces for c in p[1].columns()])
    ym = Mat.from_columns(field, m, [c for p in pieces for c in p[2].columns()])
    pm = inverse(ym) if m else Mat.zeros(field, 0, 0)
    if n == 0:
        qm = Mat.zeros(field, 0, 0)
    a_form = pm @ a @ qm
    b_form = pm @ b @ qm
    return PencilForm(blocks, pm, qm, a_form, b_form, field)


def _higher_partition(field, ra: Mat, rb: Mat, poly):
    """Block lengths at a point of degree d from ranks of q(A)^j."""
    bop = inverse(ra) @ rb
    d = len(poly) - 1
    n = bop.rows
    q = _poly_eval_mat(poly, bop)
    ranks = [n]
    p = Mat.identity(field, n)
    while ranks[-1] > 0:
        p = p @ q
        ranks.append(rank(p))
    # number of blocks of length >= j is (r_{j-1} - r_j) / d
    ge = [(ranks[j - 1] - ranks[j]) // d for j in range(1, len(ranks))]
    part = []
    for j in range(len(ge)):
        cnt = ge[j] - (ge[j + 1] if j + 1 < len(ge) else 0)
        part.extend([j + 1] * cnt)
    return tuple(sorted(part, reverse=True))
