"""Stability conditions on the base and on the morphism category.

Conventions:
  * sigma . g for g = GroupElt(t, r, n) multiplies charges by exp(-i pi (t+n))/r
    and moves phases by -(t+n).  [k]sigma means sigma . g_k.
  * d0*(theta) sigma = glue(sigma, [-1] sigma g_theta) on D0 = <s(D), j_!(D)>,
    d1*(theta) sigma = glue([1] sigma, sigma g_theta) on D1 = <j_*(D), s(D)>.
  * Whenever the glued heart is the standard one (theta = 0, or a (Deg) base),
    objects of the heart are pairs delta: A -> B of base modules, with
    A = H(d0 f), B = H(cof f) on D0 and A = H(fib f), B = H(d1 f) on D1.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from functools import lru_cache

from . import oracle
from .derived import DerivedObject, cohomology, cohomology_dims, k0_class, shift, stalk
from .exact import EQ, GT, LT, ExactComplex, Phase, QuadRat, as_theta, phase_of, phase_shift, unit_from_theta
from .linalg import Coordinates, GF, Mat, column_basis, kernel_basis
from .morphcat import MorphObject, embed, heart_pair, hom_dim_morph, k0_pair, morph_shift, pair_object
from .quiverrep import IndecLabel, Rep, RepMap, decompose_rep, indecomposable, quotient_rep, restrict_rep, _section

__all__ = [
    "GroupElt",
    "g_theta",
    "shift_elt",
    "StabCond",
    "HeartRule",
    "HNResult",
    "Undecidable",
    "GluingRefused",
    "mk_heart_stab",
    "act_group",
    "glue_stab",
    "d0_star",
    "d1_star",
    "pull_theta",
    "is_semistable",
    "is_semistable_glued",
    "component_phase",
    "hn_base",
    "hn_glued",
    "check_hn",
    "charge_eval",
    "check_reasonable_support",
    "SupportReport",
    "induced_pull",
    "image_membership",
    "stab_equal",
    "torsion_pair_check",
    "glue_mode",
]


class Undecidable(Exception):
    """No exact decision procedure for this condition/object combination."""


class GluingRefused(ValueError):
    def __init__(self, msg, witness=None):
        super().__init__(msg)
        self.witness = witness


# ------------------------------------------------------------ group


@dataclass(frozen=True)
class GroupElt:
    t: Fraction = Fraction(0)
    r: Fraction = Fraction(1)
    n: int = 0

    def __post_init__(self):
        object.__setattr__(self, "t", as_theta(self.t))
        object.__setattr__(self, "r", Fraction(self.r))
        if self.r <= 0:
            raise ValueError("scale must be positive")

    @property
    def total(self) -> Fraction:
        return self.t + self.n

    def __mul__(self, other: "GroupElt") -> "GroupElt":
        return GroupElt(self.t + other.t, self.r * other.r, self.n + other.n)

    def inverse(self) -> "GroupElt":
        return GroupElt(-self.t, 1 / self.r, -self.n)

    def factor(self) -> ExactComplex:
        return unit_from_theta(-self.total) * ExactComplex(QuadRat(1 / self.r))

    def act_phase(self, phi: Phase) -> Phase:
        return phase_shift(phi, -self.total)

    def is_identity(self) -> bool:
        return self.total == 0 and self.r == 1

    def to_json(self):
        return {"t": str(self.t), "r": str(self.r), "n": self.n}


IDENTITY = GroupElt()


def g_theta(theta) -> GroupElt:
    return GroupElt(as_theta(theta))


def shift_elt(k: int) -> GroupElt:
    return GroupElt(0, 1, k)


# ------------------------------------------------------------ heart rules


def _cz(x) -> ExactComplex:
    return ExactComplex.coerce(x)


def _lin(Z, dims) -> ExactComplex:
    out = ExactComplex(0)
    for z, d in zip(Z, dims):
        if d:
            out = out + z * d
    return out


def _is_simple(lab: IndecLabel) -> bool:
    return lab.kind in ("S1", "S2", "k") or (lab.kind in ("Preproj", "Preinj") and lab.n == 0)


class HeartRule:
    """Semistability on the standard heart of mod kQ for charges on simples.

    chamber compares phase(Z(S1)) with phase(Z(S2)): GT and EQ make every
    indecomposable semistable, LT leaves only the simples.
    """

    def __init__(self, qname: str, Z):
        self.qname = qname
        self.Z = tuple(_cz(z) for z in Z)
        if qname == "pt":
            self.chamber = EQ
        else:
            self.chamber = phase_of(self.Z[0]).cmp(phase_of(self.Z[1]))

    def charge(self, dims) -> ExactComplex:
        return _lin(self.Z, dims)

    def phase_dims(self, dims) -> Phase:
        return phase_of(self.charge(dims))

    def label_ss(self, lab: IndecLabel) -> bool:
        return _is_simple(lab) or self.chamber != LT

    def label_stable(self, lab: IndecLabel):
        if _is_simple(lab):
            return True
        if self.chamber != GT:
            return False
        if lab.kind == "Regular":
            if lab.point[0] == "block":
                return None
            return lab.length == 1
        return True

    def _pieces(self, H: Rep):
        dec = decompose_rep(H)
        out = []
        for labels, ranges in dec.pieces:
            dims = tuple(r[1] - r[0] for r in ranges)
            ss = all(self.label_ss(l) for l in labels)
            out.append((labels, ranges, dims, ss))
        return dec, out

    def phase(self, H: Rep):
        """Phase in (0, 1] when H is semistable, else None."""
        if H.is_zero():
            return None
        if self.chamber == LT and H.dims[0] and H.dims[1]:
            # (0, H2) is a proper subobject of bigger phase
            return None
        _, pieces = self._pieces(H)
        phi = None
        for labels, ranges, dims, ss in pieces:
            if not ss:
                return None
            p = self.phase_dims(dims)
            if phi is None:
                phi = p
            elif p != phi:
                return None
        return phi

    def stable(self, H: Rep):
        if self.phase(H) is None:
            return False
        dec = decompose_rep(H)
        labels = dec.labels()
        if len(labels) != 1:
            return False
        return self.label_stable(labels[0])

    def hn(self, H: Rep) -> list:
        """HN chain [(bases, phase)] with bases per vertex (column Mats in H coordinates)."""
        f = H.field
        nv = H.quiver.nverts
        if H.is_zero():
            return []
        if self.chamber == LT and H.dims[0] and H.dims[1]:
            sub = (Mat.zeros(f, H.dims[0], 0), Mat.identity(f, H.dims[1]))
            full = tuple(Mat.identity(f, d) for d in H.dims)
            return [(sub, self.phase_dims((0, H.dims[1]))), (full, self.phase_dims((H.dims[0], 0)))]
        dec, pieces = self._pieces(H)
        groups: list = []
        for labels, ranges, dims, ss in pieces:
            p = self.phase_dims(dims)
            for g in groups:
                if g[0] == p:
                    g[1].append(ranges)
                    break
            else:
                groups.append([p, [ranges]])
        _sort_desc(groups)
        out = []
        cols = [[] for _ in range(nv)]
        for p, rs in groups:
            for ranges in rs:
                for v in range(nv):
                    cols[v].extend(range(*ranges[v]))
            bases = tuple(dec.basis[v].select_columns(sorted(cols[v])) for v in range(nv))
            out.append((bases, p))
        return out

    def to_json(self):
        fam = []
        if self.qname == "pt":
            fam.append({"family": "k[n]", "phase": "phase(Z(k)) + n"})
        elif self.qname == "A2":
            fam.append({"family": "S1[n]", "phase": "phase(Z1) + n"})
            fam.append({"family": "S2[n]", "phase": "phase(Z2) + n"})
            if self.chamber != LT:
                fam.append({"family": "P12[n]", "phase": "phase(Z1+Z2) + n"})
        else:
            fam.append({"family": "S1[n]", "phase": "phase(Z1) + n"})
            fam.append({"family": "S2[n]", "phase": "phase(Z2) + n"})
            if self.chamber != LT:
                fam.append({"family": "Preproj(m)[n]", "phase": "phase(m Z1 + (m+1) Z2) + n"})
                fam.append({"family": "Preinj(m)[n]", "phase": "phase((m+1) Z1 + m Z2) + n"})
                fam.append({"family": "Regular(x,l)[n]", "phase": "phase(Z1+Z2) + n"})
        return fam


def _sort_desc(groups):
    # Phase only has a comparison, not a key; insertion sort is fine at this size
    for i in range(1, len(groups)):
        j = i
        while j > 0 and groups[j][0] > groups[j - 1][0]:
            groups[j], groups[j - 1] = groups[j - 1], groups[j]
            j -= 1


# ------------------------------------------------------------ conditions


@dataclass(frozen=True)
class StabCond:
    """A stability condition.

    kind "heart": standard heart of mod kQ with charges on simples;
    kind "glue": glued from s1, s2 along sod ("D0" or "D1");
    kind "pulled": functor^{-1} of a condition on the morphism category.
    Every kind carries a trailing group element g.
    """

    base: str
    kind: str
    charges: tuple = ()
    g: GroupElt = IDENTITY
    s1: "StabCond | None" = None
    s2: "StabCond | None" = None
    sod: str | None = None
    functor: str | None = None
    source: "StabCond | None" = None
    note: str = dc_field(default="", compare=False)

    @property
    def is_morph(self) -> bool:
        return self.kind == "glue"

    @property
    def cat(self) -> str:
        return f"Mor({self.base})" if self.is_morph else self.base

    @property
    def nverts(self) -> int:
        return {"pt": 1, "A2": 2, "K2": 2}[self.base]

    def k0_rank(self) -> int:
        return self.nverts * (2 if self.is_morph else 1)

    def rule(self) -> HeartRule:
        if self.kind != "heart":
            raise TypeError("only heart conditions carry a heart rule")
        return _rule(self.base, self.charges)

    # charges

    def charge_k0(self, vec) -> ExactComplex:
        vec = tuple(vec)
        if self.kind == "heart":
            z = _lin(self.charges, vec)
        elif self.kind == "glue":
            n = self.nverts
            y, c = vec[:n], vec[n:]
            if self.sod == "D0":
                z = self.s1.charge_k0(y) + self.s2.charge_k0(tuple(-x for x in c))
            else:
                z = self.s1.charge_k0(c) + self.s2.charge_k0(tuple(a - b for a, b in zip(y, c)))
        else:
            z = self.source.charge_k0(_functor_k0(self.functor, vec))
        return z * self.g.factor()

    def charge(self, obj) -> ExactComplex:
        if isinstance(obj, MorphObject):
            y, c = k0_pair(obj)
            return self.charge_k0(tuple(y) + tuple(c))
        if isinstance(obj, Rep):
            return self.charge_k0(obj.dims)
        return self.charge_k0(k0_class(obj))

    def charge_values(self) -> list:
        n = self.k0_rank()
        return [self.charge_k0(tuple(int(i == j) for j in range(n))) for i in range(n)]

    # flags

    def is_deg(self) -> bool:
        if self.kind != "heart":
            return False
        return all(z.is_real() and z.re.sign() < 0 for z in (c * self.g.factor() for c in self.charges))

    def act(self, g: GroupElt) -> "StabCond":
        return act_group(self, g)

    def is_semistable(self, obj):
        return is_semistable(self, obj)

    def to_json(self) -> dict:
        d = {
            "cat": self.cat,
            "kind": self.kind,
            "charge": [z.to_json() for z in self.charge_values()],
            "g": self.g.to_json(),
            "flags": {"isDeg": self.is_deg()},
        }
        if self.kind == "heart":
            d["rule"] = {"families": self.rule().to_json()}
            rep = check_reasonable_support(self)
            d["flags"]["isReasonable"] = rep.reasonable
            d["flags"]["isFull"] = rep.support_c2 is not None
        elif self.kind == "glue":
            d["sod"] = self.sod
            d["parts"] = [self.s1.to_json(), self.s2.to_json()]
            try:
                m = glue_mode(self)
                d["rule"] = {"families": [{"mode": m.kind, "theta": str(m.theta)}]}
            except Undecidable:
                d["rule"] = {"families": []}
        else:
            d["functor"] = self.functor
            d["source"] = self.source.to_json()
            d["rule"] = {"families": [{"pulled": self.functor}]}
        return d


@lru_cache(maxsize=None)
def _rule(base, charges) -> HeartRule:
    return HeartRule(base, charges)


def _functor_k0(functor, vec):
    x = tuple(vec)
    if functor == "s":
        return x + (0,) * len(x)
    if functor == "jShriek":
        return (0,) * len(x) + tuple(-a for a in x)
    if functor == "jStar":
        return x + x
    raise ValueError(functor)


def _upper_or_negative(z: ExactComplex) -> bool:
    return z.im.sign() > 0 or (z.im.sign() == 0 and z.re.sign() < 0)


def mk_heart_stab(base: str, charges) -> StabCond:
    """Standard-heart condition on mod kQ from the charges of the simples."""
    cs = tuple(_cz(z) for z in charges)
    n = {"pt": 1, "A2": 2, "K2": 2}.get(base)
    if n is None:
        raise ValueError(f"unknown base {base!r}")
    if len(cs) != n:
        raise ValueError(f"{base} needs {n} charges, got {len(cs)}")
    for z in cs:
        if not _upper_or_negative(z):
            raise ValueError(f"charge {z!r} of a simple is not in the upper half-plane or the negative reals")
    return StabCond(base, "heart", cs)


def act_group(sigma: StabCond, g: GroupElt) -> StabCond:
    return StabCond(sigma.base, sigma.kind, sigma.charges, sigma.g * g, sigma.s1, sigma.s2,
                    sigma.sod, sigma.functor, sigma.source, sigma.note)


# ------------------------------------------------------------ gluing


_EMB = {"D0": ("s", "jShriek"), "D1": ("jStar", "s")}


def _window_objects(sigma: StabCond, lo: Phase, labels, field) -> list:
    """Semistable (label, shift, phase) with phase in (lo, lo + 1]."""
    out = []
    hi = lo + 1
    for lab in labels:
        rep = indecomposable(lab, field)
        for k in range(-3, 4):
            x = shift(stalk(rep, 0), k)
            ph = is_semistable(sigma, x)
            if ph is not None and lo < ph <= hi:
                out.append((lab, k, x, ph))
    return out


def _hom_vanishes(sod, wins1, wins2):
    e1, e2 = _EMB[sod]
    for lab1, k1, x, _ in wins1:
        for lab2, k2, y, _ in wins2:
            fx, gy = embed(e1, x), embed(e2, y)
            for n in range(-3, 1):
                if hom_dim_morph(fx, gy, n):
                    return (str(lab1), k1, str(lab2), k2, n)
    return None


@lru_cache(maxsize=256)
def _gluing_conditions(s1: StabCond, s2: StabCond, sod: str, max_dim: int):
    from .linalg import QQ
    labels = oracle.indec_labels(s1.base, None, max_dim)
    zero = Phase.from_rational(0)
    bad = _hom_vanishes(sod, _window_objects(s1, zero, labels, QQ), _window_objects(s2, zero, labels, QQ))
    if bad is not None:
        return ("(1)", bad)
    # twelfths: when stable phases sit on the 1/6 grid every open gap gets a cut point
    cands = sorted((Fraction(k, 12) for k in range(1, 12)), key=lambda a: (abs(a - Fraction(1, 2)), a))
    last = None
    for a in cands:
        lo = Phase.from_twelfth(a)
        last = _hom_vanishes(sod, _window_objects(s1, lo, labels, QQ), _window_objects(s2, lo, labels, QQ))
        if last is None:
            return None
    return ("(2)", last)


def glue_stab(s1: StabCond, s2: StabCond, sod: str, check: bool = True, max_dim: int = 2) -> StabCond:
    """Glued condition on the morphism category.

    The two gluing conditions are tested on indecomposables of total
    dimension <= max_dim and shifts in [-3, 3] via Hom in the morphism category.
    """
    if sod not in _EMB:
        raise ValueError(f"unknown semiorthogonal decomposition {sod!r}")
    if s1.is_morph or s2.is_morph or s1.base != s2.base:
        raise ValueError("gluing needs two conditions on the same base")
    if check:
        bad = _gluing_conditions(s1, s2, sod, max_dim)
        if bad is not None:
            cond, (l1, k1, l2, k2, n) = bad
            raise GluingRefused(
                f"gluing condition {cond} fails: Hom^{n}({_EMB[sod][0]}({l1}[{k1}]), {_EMB[sod][1]}({l2}[{k2}])) != 0",
                bad,
            )
    return StabCond(s1.base, "glue", (), IDENTITY, s1, s2, sod)


def d0_star(sigma: StabCond, check: bool = True) -> StabCond:
    return glue_stab(sigma, act_group(sigma, shift_elt(-1)), "D0", check)


def d1_star(sigma: StabCond, check: bool = True) -> StabCond:
    return glue_stab(act_group(sigma, shift_elt(1)), sigma, "D1", check)


def pull_theta(side: str, sigma: StabCond, theta, check: bool = True) -> StabCond:
    t = as_theta(theta)
    if not 0 <= t < 1:
        raise ValueError(f"theta={t} outside [0, 1): the gluing conditions fail at theta = 1")
    if sigma.kind != "heart":
        raise ValueError("pull_theta needs a base heart condition")
    if t != 0 and not sigma.is_deg():
        raise ValueError("pull_theta with theta != 0 needs a (Deg) base condition")
    if side == "d0":
        return glue_stab(sigma, act_group(sigma, GroupElt(t, 1, -1)), "D0", check)
    if side == "d1":
        return glue_stab(act_group(sigma, shift_elt(1)), act_group(sigma, g_theta(t)), "D1", check)
    raise ValueError(f"unknown side {side!r}")


@dataclass(frozen=True)
class GlueMode:
    """How the glued heart looks: kind in pull0, deg, std, general.

    offset is subtracted from heart-level phases; B-charges are multiplied by w.
    """

    kind: str
    theta: Fraction
    Za: tuple
    Zb: tuple
    w: ExactComplex
    offset: Fraction


@lru_cache(maxsize=None)
def glue_mode(sg: StabCond) -> GlueMode:
    s1, s2 = sg.s1, sg.s2
    if s1.kind != "heart" or s2.kind != "heart":
        return GlueMode("general", Fraction(0), (), (), ExactComplex(1), Fraction(0))
    ta, tb = s1.g.total, s2.g.total
    za = tuple(z / ExactComplex(QuadRat(s1.g.r)) for z in s1.charges)
    zb = tuple(z / ExactComplex(QuadRat(s2.g.r)) for z in s2.charges)
    theta = tb - ta + 1
    offset = ta + (0 if sg.sod == "D0" else -1) + sg.g.total
    if theta == 0:
        kind = "pull0" if za == zb else "std"
        return GlueMode(kind, theta, za, zb, ExactComplex(1), offset)
    deg = all(z.is_real() and z.re.sign() < 0 for z in za)
    if za == zb and deg and 0 < theta < 1:
        return GlueMode("deg", theta, za, zb, unit_from_theta(-theta), offset)
    return GlueMode("general", theta, za, zb, ExactComplex(1), offset)


@lru_cache(maxsize=None)
def _pair_charge(mode: GlueMode, nv: int):
    memo = {}

    def charge(d):
        z = memo.get(d)
        if z is None:
            z = memo[d] = _lin(mode.Za, d[:nv]) + mode.w * _lin(mode.Zb, d[nv:])
        return z
    return charge


def _is_iso(delta: RepMap) -> bool:
    return all(c.rows == c.cols and c.rank() == c.rows for c in delta.comps)


def pair_phase(mode: GlueMode, base: str, delta: RepMap):
    """Heart-level phase of the pair delta: A -> B when semistable, else None."""
    a, b = delta.src, delta.tgt
    nv = a.quiver.nverts
    charge = _pair_charge(mode, nv)
    if a.is_zero() and b.is_zero():
        return None
    if mode.kind == "pull0":
        rule = _rule(base, mode.Za)
        pa = rule.phase(a) if not a.is_zero() else None
        pb = rule.phase(b) if not b.is_zero() else None
        if (not a.is_zero() and pa is None) or (not b.is_zero() and pb is None):
            return None
        if pa is not None and pb is not None and pa != pb:
            return None
        return pa if pa is not None else pb
    if mode.kind == "deg":
        if b.is_zero() or a.is_zero() or _is_iso(delta):
            return phase_of(charge(tuple(a.dims) + tuple(b.dims)))
        return None
    if mode.kind == "std" and a.field.char:
        return oracle.brute_semistable(oracle.pair_problem(delta), charge)
    raise Undecidable(f"no exact semistability procedure for glue mode {mode.kind} over {a.field}")


def _pair_hn_chain(mode: GlueMode, base: str, delta: RepMap) -> list:
    """HN chain of a heart pair as [((A bases), (B bases), phase)]."""
    a, b = delta.src, delta.tgt
    f = a.field
    nv = a.quiver.nverts
    charge = _pair_charge(mode, nv)
    if mode.kind == "pull0":
        rule = _rule(base, mode.Za)
        ca, cb = rule.hn(a), rule.hn(b)
        phases = [p for _, p in ca]
        for _, p in cb:
            if all(p != q for q in phases):
                phases.append(p)
        groups = [[p] for p in phases]
        _sort_desc(groups)
        out = []
        for (p,) in groups:
            out.append((_upto(ca, p, a), _upto(cb, p, b), p))
        return out
    if mode.kind == "deg":
        kb = tuple(kernel_basis(c) for c in delta.comps)
        ib = tuple(column_basis(c) for c in delta.comps)
        za = tuple(Mat.zeros(f, d, 0) for d in a.dims)
        zb = tuple(Mat.zeros(f, d, 0) for d in b.dims)
        fa = tuple(Mat.identity(f, d) for d in a.dims)
        fb = tuple(Mat.identity(f, d) for d in b.dims)
        steps = [(kb, zb), (fa, ib), (fa, fb)]
        out = []
        prev = (0,) * (2 * nv)
        for sa, sb in steps:
            d = tuple(m.cols for m in sa) + tuple(m.cols for m in sb)
            if sum(d) == sum(prev):
                continue
            q = tuple(x - y for x, y in zip(d, prev))
            out.append((sa, sb, phase_of(charge(q))))
            prev = d
        return out
    if mode.kind == "std" and f.char:
        p = f.char
        chain = oracle.brute_hn(oracle.pair_problem(delta), charge)
        out = []
        for sub, ph in chain:
            bases = [Mat.from_columns(f, d, list(rows)) for d, rows in zip(list(a.dims) + list(b.dims), sub)]
            out.append((tuple(bases[:nv]), tuple(bases[nv:]), ph))
        return out
    raise Undecidable(f"no exact HN procedure for glue mode {mode.kind} over {f}")


def _upto(chain, p, m: Rep):
    """Largest step of a heart HN chain whose phase is >= p."""
    best = None
    for bases, q in chain:
        if q >= p:
            best = bases
    if best is None:
        return tuple(Mat.zeros(m.field, d, 0) for d in m.dims)
    return best


# ------------------------------------------------------------ semistability


def _phase_out(ph: Phase, m: int, extra) -> Phase:
    out = ph - m
    return phase_shift(out, -Fraction(extra)) if extra else out


def is_semistable(sigma: StabCond, obj):
    """Phase if obj is sigma-semistable, else None."""
    if sigma.kind == "glue":
        return is_semistable_glued(sigma, obj)
    if sigma.kind == "pulled":
        if isinstance(obj, Rep):
            obj = stalk(obj, 0)
        return _shifted(is_semistable_glued(sigma.source, embed(sigma.functor, obj)), sigma.g)
    if isinstance(obj, Rep):
        obj = stalk(obj, 0)
    cd = cohomology_dims(obj)
    if len(cd) != 1:
        return None
    (m,) = cd
    ph = sigma.rule().phase(cohomology(obj, m).H)
    if ph is None:
        return None
    return _phase_out(ph, m, sigma.g.total)


def _shifted(ph, g: GroupElt):
    return None if ph is None else g.act_phase(ph)


def is_semistable_glued(sg: StabCond, f: MorphObject):
    if sg.kind != "glue":
        raise TypeError("expected a glued condition")
    mode = glue_mode(sg)
    if mode.kind == "general":
        ph = component_phase(sg, f)
        if ph is not None or _component_kind(sg, f) is not None:
            return ph
        raise Undecidable("glued heart is not the standard one for this condition")
    hp = heart_pair(f, sg.sod)
    if hp is None:
        return None
    ph = pair_phase(mode, sg.base, hp.delta)
    if ph is None:
        return None
    return _phase_out(ph, hp.degree, mode.offset)


def _component_kind(sg: StabCond, f: MorphObject):
    from .derived import is_acyclic
    from .morphcat import cof_fib
    if sg.sod == "D0":
        if is_acyclic(cof_fib(f).cof):
            return "s"
        if is_acyclic(f.tgt):
            return "jShriek"
    else:
        if is_acyclic(cof_fib(f).cof):
            return "s"
        if is_acyclic(f.src):
            return "jStar"
    return None


def component_phase(sg: StabCond, f: MorphObject):
    """Phase of an object of one SOD component, read off the component's condition."""
    from .morphcat import cof_fib
    kind = _component_kind(sg, f)
    if kind is None:
        return None
    if sg.sod == "D0":
        ph = is_semistable(sg.s1, f.tgt) if kind == "s" else is_semistable(sg.s2, cof_fib(f).fib)
    else:
        ph = is_semistable(sg.s2, f.src) if kind == "s" else is_semistable(sg.s1, cof_fib(f).cof)
    return _shifted(ph, sg.g)


def charge_eval(sg: StabCond, f) -> ExactComplex:
    return sg.charge(f)


# ------------------------------------------------------------ HN


@dataclass
class HNResult:
    """factors: [(object, phase)] with strictly decreasing phases.

    witness: per heart degree m, the chain of subobjects in cohomology
    coordinates (bases per vertex; for pairs, (A bases, B bases)).
    """

    factors: list
    witness: list

    @property
    def phases(self) -> list:
        return [p for _, p in self.factors]

    def to_json(self):
        return {
            "phases": [p.to_json() for p in self.phases],
            "factors": [o.to_json() for o, _ in self.factors],
        }


def _subquot_rep(m: Rep, big, small):
    """big/small as a representation, with the matrices needed to induce maps."""
    sub, _ = restrict_rep(m, list(big))
    f = m.field
    small_in_big = []
    for v in range(m.quiver.nverts):
        co = Coordinates(big[v])
        small_in_big.append(Mat.from_columns(f, big[v].cols, [co(c) for c in small[v].columns()]))
    quo, proj = quotient_rep(sub, small_in_big)
    return quo, proj


def hn_base(sigma: StabCond, x) -> HNResult:
    if sigma.kind != "heart":
        raise TypeError("hn_base needs a heart condition")
    if isinstance(x, Rep):
        x = stalk(x, 0)
    rule = sigma.rule()
    factors, witness = [], []
    for m in sorted(cohomology_dims(x)):
        H = cohomology(x, m).H
        chain = rule.hn(H)
        witness.append((m, chain))
        prev = tuple(Mat.zeros(H.field, d, 0) for d in H.dims)
        for bases, ph in chain:
            quo, _ = _subquot_rep(H, bases, prev)
            factors.append((stalk(quo, m), _phase_out(ph, m, sigma.g.total)))
            prev = bases
    return HNResult(factors, witness)


def _pair_factor(delta: RepMap, big, small):
    """Induced map of delta on the subquotient pair big/small."""
    a, b = delta.src, delta.tgt
    f = a.field
    (ba, bb), (sa, sb) = big, small
    qa, pa = _subquot_rep(a, ba, sa)
    qb, pb = _subquot_rep(b, bb, sb)
    comps = []
    for v in range(a.quiver.nverts):
        co = Coordinates(bb[v])
        img = delta.comps[v] @ ba[v]
        in_big = Mat.from_columns(f, bb[v].cols, [co(c) for c in img.columns()])
        sec = _section(pa.comps[v]) if pa.comps[v].rows else Mat.zeros(f, ba[v].cols, 0)
        comps.append(pb.comps[v] @ in_big @ sec)
    return RepMap(qa, qb, comps, False)


def hn_glued(sg: StabCond, f: MorphObject) -> HNResult:
    mode = glue_mode(sg)
    if mode.kind == "general":
        raise Undecidable("glued heart is not the standard one for this condition")
    hp = heart_pair(f, sg.sod)
    if hp is None:
        raise ValueError("object is not in a shift of the glued heart")
    delta = hp.delta
    chain = _pair_hn_chain(mode, sg.base, delta)
    fa = delta.src.field
    prev = (tuple(Mat.zeros(fa, d, 0) for d in delta.src.dims), tuple(Mat.zeros(fa, d, 0) for d in delta.tgt.dims))
    factors = []
    for sa, sb, ph in chain:
        fac = _pair_factor(delta, (sa, sb), prev)
        obj = morph_shift(pair_object(sg.sod, fac), -hp.degree)
        factors.append((obj, _phase_out(ph, hp.degree, mode.offset)))
        prev = (sa, sb)
    return HNResult(factors, [(hp.degree, chain)])


def check_hn(sigma: StabCond, x, hn: HNResult) -> list:
    """Violated HN invariants (empty when all hold)."""
    bad = []
    ph = hn.phases
    for p, q in zip(ph, ph[1:]):
        if not p > q:
            bad.append(f"phases not strictly decreasing: {p} then {q}")
    total = ExactComplex(0)
    for obj, p in hn.factors:
        got = is_semistable(sigma, obj)
        if got is None or got != p:
            bad.append(f"factor {obj!r} not semistable of phase {p} (got {got})")
        total = total + sigma.charge(obj)
    if total != sigma.charge(x):
        bad.append("factor charges do not add up")
    return bad


# ------------------------------------------------------------ reasonableness and support


@dataclass
class SupportReport:
    """inf |Z|^2 over stable objects, sup ||v||^2/|Z(v)|^2 (support constant squared)."""

    reasonable: bool | None
    inf_abs2: QuadRat | None
    support_c2: QuadRat | None
    detail: dict = dc_field(default_factory=dict)

    def to_json(self):
        return {
            "reasonable": self.reasonable,
            "inf_abs2": None if self.inf_abs2 is None else self.inf_abs2.to_str(),
            "support_c2": None if self.support_c2 is None else self.support_c2.to_str(),
        }


def _q(x) -> QuadRat:
    return QuadRat.coerce(x)


def _family_extrema(za: ExactComplex, zb: ExactComplex, na, nb, nc):
    """Charge za*n + zb and squared norm na n^2 + nb n + nc over n >= 0.

    Returns (min |Z|^2, sup ||v||^2/|Z|^2) exactly; the sup may be the limit.
    """
    a = za.abs2()
    b = _q(2) * (za.re * zb.re + za.im * zb.im)
    c = zb.abs2()
    na, nb, nc = _q(na), _q(nb), _q(nc)

    def z2(n):
        return a * _q(n * n) + b * _q(n) + c

    def ratio(n):
        return (na * _q(n * n) + nb * _q(n) + nc) / z2(n)

    cands = {0, 1}
    if a:
        v = -float(b) / (2 * float(a))
        for k in range(math.floor(v) - 1, math.floor(v) + 3):
            if k >= 0:
                cands.add(k)
    # critical points of the ratio: (2 na n + nb) z2 - (na n^2 + nb n + nc)(2 a n + b) = 0
    qa = na * b - nb * a
    qb = _q(2) * (na * c - nc * a)
    qc = nb * c - nc * b
    fa, fb, fc = float(qa), float(qb), float(qc)
    roots = []
    if abs(fa) > 1e-12:
        disc = fb * fb - 4 * fa * fc
        if disc >= 0:
            roots = [(-fb + s * math.sqrt(disc)) / (2 * fa) for s in (1, -1)]
    elif abs(fb) > 1e-12:
        roots = [-fc / fb]
    for r in roots:
        for k in range(math.floor(r) - 1, math.floor(r) + 3):
            if k >= 0:
                cands.add(k)
    mn = min(z2(n) for n in cands)
    sup = max(ratio(n) for n in cands)
    if a:
        lim = na / a
        if lim > sup:
            sup = lim
    return mn, sup


def _base_support(sigma: StabCond):
    rule = sigma.rule()
    g = sigma.g.factor()
    Z = tuple(z * g for z in rule.Z)
    fam = []  # (min |Z|^2, sup ratio) per stable family
    for v, z in enumerate(Z):
        fam.append((z.abs2(), _q(1) / z.abs2()))
    if rule.qname == "A2" and rule.chamber == GT:
        w = Z[0] + Z[1]
        fam.append((w.abs2(), _q(2) / w.abs2()))
    if rule.qname == "K2" and rule.chamber == GT:
        w = Z[0] + Z[1]
        if w.is_zero():
            return None
        fam.append(_family_extrema(w, Z[1], 2, 2, 1))  # Preproj(n): (n, n+1)
        fam.append(_family_extrema(w, Z[0], 2, 2, 1))  # Preinj(n): (n+1, n)
        fam.append((w.abs2(), _q(2) / w.abs2()))       # Regular(x, 1) of any degree
    return fam


def check_reasonable_support(sigma: StabCond) -> SupportReport:
    if sigma.kind == "heart":
        fam = _base_support(sigma)
        if fam is None:
            return SupportReport(False, _q(0), None)
        inf = min(f[0] for f in fam)
        sup = max(f[1] for f in fam)
        return SupportReport(bool(inf), inf, sup, {"families": len(fam)})
    if sigma.kind == "glue":
        mode = glue_mode(sigma)
        if mode.kind not in ("pull0", "deg"):
            return SupportReport(None, None, None, {"mode": mode.kind})
        base = check_reasonable_support(mk_heart_stab(sigma.base, mode.Za))
        r = sigma.g.r
        scale = _q(1 / (r * r))
        inf, c2 = base.inf_abs2 * scale, base.support_c2 / scale
        if mode.kind == "deg":
            u = mode.w
            one_u = (ExactComplex(1) + u).abs2()
            inf = min(inf, inf * one_u)
            c2 = max(c2, _q(2) * c2 / one_u)
        return SupportReport(bool(inf), inf, c2, {"mode": mode.kind})
    return SupportReport(None, None, None, {"kind": sigma.kind})


def reasonable_from_values(values) -> SupportReport:
    """Support data from explicit (||v||^2, |Z(v)|^2) pairs of stable classes."""
    values = [(_q(n), _q(z)) for n, z in values]
    inf = min(z for _, z in values)
    if not inf:
        return SupportReport(False, inf, None)
    return SupportReport(True, inf, max(n / z for n, z in values))


# ------------------------------------------------------------ pulling back


def _pulled(functor: str, sg: StabCond) -> StabCond:
    return StabCond(sg.base, "pulled", (), IDENTITY, functor=functor, source=sg)


def _pulled_hn_ok(sp: StabCond, universe) -> tuple[bool, str]:
    """HN property of a pulled condition on heart objects, by brute force.

    Rotating the pulled charge by a sign puts the simples in the upper
    half-plane; the heart HN chain for that charge must then consist of
    pulled-semistable factors with strictly decreasing phases.
    """
    nv = sp.nverts
    zs = [sp.charge_k0(tuple(int(i == j) for j in range(nv))) for i in range(nv)]
    sign = None
    for s in (1, -1):
        if all(_upper_or_negative(z * ExactComplex(s)) for z in zs):
            sign = s
            break
    if sign is None:
        return False, "no shift of the standard heart carries the pulled charge"
    for m in universe:
        if m.is_zero():
            continue

        def charge(d):
            return _lin(zs, d) * ExactComplex(sign)

        chain = oracle.brute_hn(oracle.rep_problem(m), charge)
        prev = None
        prev_bases = tuple(Mat.zeros(m.field, d, 0) for d in m.dims)
        for sub, _ in chain:
            bases = tuple(Mat.from_columns(m.field, d, list(rows)) for d, rows in zip(m.dims, sub))
            quo, _ = _subquot_rep(m, bases, prev_bases)
            ph = is_semistable(sp, stalk(quo, 0))
            if ph is None:
                return False, f"HN factor of {m!r} is not pulled-semistable"
            if prev is not None and not prev > ph:
                return False, f"HN phases of {m!r} do not decrease"
            prev, prev_bases = ph, bases
    return True, "passed-at-scale"


def induced_pull(functor: str, sg: StabCond, universe=None, max_dim: int = 3):
    """functor^{-1} sg on the base, or None when the HN property fails on the universe."""
    if functor not in ("s", "jShriek", "jStar"):
        raise ValueError(functor)
    sp = _pulled(functor, sg)
    if universe is None:
        universe = oracle.rep_universe(sg.base, GF(2), max_dim)
    ok, note = _pulled_hn_ok(sp, universe)
    if not ok:
        return None
    return StabCond(sp.base, sp.kind, (), IDENTITY, functor=functor, source=sg, note=note)


def _base_test_set(base: str, max_dim: int = 3):
    out = []
    for m in oracle.rep_universe(base, GF(2), max_dim):
        for k in (-1, 0, 1):
            out.append(shift(stalk(m, 0), k))
    return out


def stab_equal(a: StabCond, b: StabCond, test_set=None):
    """Exact comparison: charges on the K0 basis, then verdicts and phases on test_set."""
    if a.cat != b.cat:
        return False, {"reason": "category", "a": a.cat, "b": b.cat}
    for i, (x, y) in enumerate(zip(a.charge_values(), b.charge_values())):
        if x != y:
            return False, {"reason": "charge", "basis": i, "a": x.to_json(), "b": y.to_json()}
    if test_set is None:
        test_set = _base_test_set(a.base) if not a.is_morph else []
    for obj in test_set:
        pa, pb = is_semistable(a, obj), is_semistable(b, obj)
        if (pa is None) != (pb is None) or (pa is not None and pa != pb):
            return False, {"reason": "verdict", "object": obj.to_json(),
                           "a": None if pa is None else pa.to_json(),
                           "b": None if pb is None else pb.to_json()}
    return True, {"reason": "equal", "objects": len(test_set)}


def image_membership(sg: StabCond, universe=None, max_dim: int = 3):
    """("InImD0" | "InImD1" | "Neither", certificate)."""
    if universe is None:
        universe = oracle.rep_universe(sg.base, GF(2), max_dim)
    tests = [shift(stalk(m, 0), k) for m in universe for k in (-1, 0, 1)]
    certs = {}

    def check(other: str, k: int):
        sp = _pulled("s", sg)
        oth = act_group(_pulled(other, sg), shift_elt(k))
        ok, cert = stab_equal(sp, oth, [])
        if not ok:
            return False, cert
        for fn in ("s", other):
            got = induced_pull(fn, sg, universe)
            if got is None:
                return False, {"reason": "HN property fails", "functor": fn}
        return stab_equal(sp, oth, tests)

    in0, certs["D0"] = check("jShriek", 1)
    in1, certs["D1"] = check("jStar", -1)
    if in0 and in1:
        raise AssertionError("a glued condition lies in both images")
    verdict = "InImD0" if in0 else ("InImD1" if in1 else "Neither")
    return verdict, certs


def torsion_pair_check(sg: StabCond, pairs, hom_sample: int = 6):
    """Torsion pair (T, F) on the heart of d0*(theta) sigma for theta != 0.

    T = {s(x)}, F = {pairs with injective delta}; every heart object f has
    t = s(ker delta) -> f -> e = (A/ker delta, B).
    """
    mode = glue_mode(sg)
    if mode.kind != "deg" or sg.sod != "D0":
        raise ValueError("torsion pair check needs d0*(theta) sigma with theta != 0 and a (Deg) base")
    bad = []
    ts, es = [], []
    for delta in pairs:
        a, b = delta.src, delta.tgt
        f = a.field
        kb = tuple(kernel_basis(c) for c in delta.comps)
        zb = tuple(Mat.zeros(f, d, 0) for d in b.dims)
        fa = tuple(Mat.identity(f, d) for d in a.dims)
        fb = tuple(Mat.identity(f, d) for d in b.dims)
        za = tuple(Mat.zeros(f, d, 0) for d in a.dims)
        tdelta = _pair_factor(delta, (kb, zb), (za, zb))
        edelta = _pair_factor(delta, (fa, fb), (kb, zb))
        if any(c.rank() != c.cols for c in edelta.comps):
            bad.append({"object": delta.to_json(), "reason": "quotient delta not injective"})
        if not tdelta.tgt.is_zero():
            bad.append({"object": delta.to_json(), "reason": "torsion part has nonzero B"})
        t = embed("s", stalk(tdelta.src, 0))
        e = pair_object("D0", edelta)
        if not tdelta.src.is_zero():
            ts.append(t)
        if not (edelta.src.is_zero() and edelta.tgt.is_zero()):
            es.append(e)
        for obj, want in ((t, "T"), (e, "F")):
            hp = heart_pair(obj, "D0")
            if hp is None or hp.degree != 0:
                bad.append({"object": delta.to_json(), "reason": f"{want} part outside the heart"})
    # Hom(T, F) = 0 through the morphism category itself
    ts_u = _dedupe(ts)[:hom_sample]
    es_u = _dedupe(es)[: hom_sample * 4]
    homs = 0
    for t in ts_u:
        for e in es_u:
            homs += 1
            if hom_dim_morph(t, e, 0):
                bad.append({"reason": "Hom(T, F) != 0", "t": t.to_json(), "e": e.to_json()})
    return not bad, {"objects": len(pairs), "hom_checks": homs, "failures": bad[:5]}


def _dedupe(objs):
    seen, out = set(), []
    for o in objs:
        key = (k0_pair(o), repr(o.to_json()))
        if key not in seen:
            seen.add(key)
            out.append(o)
    return out
