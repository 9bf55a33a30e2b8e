"""Exact scalars: Q(sqrt3), its Gaussian extension, and exact phases.

Every central charge value and every phase comparison in the package goes
through these types.  Floats only serve as a filter in front of exact
sign tests: a comparison is answered from floats when they are clearly
apart and computed exactly otherwise.
"""
from __future__ import annotations

import math
from functools import lru_cache
import re
from fractions import Fraction
from typing import Union

Rational = Union[int, Fraction]

__all__ = [
    "QuadRat",
    "ExactComplex",
    "Phase",
    "LT",
    "EQ",
    "GT",
    "unit_from_theta",
    "phase_of",
    "phase_shift",
    "phase_cmp",
    "as_theta",
]

LT, EQ, GT = -1, 0, 1


def _frac(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x)
    raise TypeError(f"not a rational: {x!r}")


def as_theta(theta) -> Fraction:
    """Coerce to a Fraction and insist on a multiple of 1/6."""
    t = _frac(theta)
    if (6 * t).denominator != 1:
        raise ValueError(f"theta={t} is not a multiple of 1/6")
    return t


class QuadRat:
    """a + b*sqrt(3) with a, b rational."""

    __slots__ = ("a", "b")

    def __init__(self, a: Rational = 0, b: Rational = 0):
        object.__setattr__(self, "a", _frac(a))
        object.__setattr__(self, "b", _frac(b))

    def __setattr__(self, name, value):
        raise AttributeError("QuadRat is immutable")

    @staticmethod
    def coerce(x) -> "QuadRat":
        if isinstance(x, QuadRat):
            return x
        if isinstance(x, (int, Fraction)):
            return QuadRat(x, 0)
        raise TypeError(f"cannot coerce {x!r} to QuadRat")

    def __add__(self, other):
        try:
            o = QuadRat.coerce(other)
        except TypeError:
            return NotImplemented
        return QuadRat(self.a + o.a, self.b + o.b)

    __radd__ = __add__

    def __neg__(self):
        return QuadRat(-self.a, -self.b)

    def __sub__(self, other):
        try:
            o = QuadRat.coerce(other)
        except TypeError:
            return NotImplemented
        return QuadRat(self.a - o.a, self.b - o.b)

    def __rsub__(self, other):
        try:
            o = QuadRat.coerce(other)
        except TypeError:
            return NotImplemented
        return o - self

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return QuadRat(self.a * other, self.b * other)
        try:
            o = QuadRat.coerce(other)
        except TypeError:
            return NotImplemented
        return QuadRat(self.a * o.a + 3 * self.b * o.b, self.a * o.b + self.b * o.a)

    __rmul__ = __mul__

    def conj(self) -> "QuadRat":
        """Galois conjugate a - b*sqrt3."""
        return QuadRat(self.a, -self.b)

    def norm(self) -> Fraction:
        return self.a * self.a - 3 * self.b * self.b

    def inverse(self) -> "QuadRat":
        n = self.norm()
        if n == 0:
            raise ZeroDivisionError("QuadRat zero has no inverse")
        return QuadRat(self.a / n, -self.b / n)

    def __truediv__(self, other):
        try:
            o = QuadRat.coerce(other)
        except TypeError:
            return NotImplemented
        return self * o.inverse()

    def __rtruediv__(self, other):
        try:
            o = QuadRat.coerce(other)
        except TypeError:
            return NotImplemented
        return o * self.inverse()

    def is_zero(self) -> bool:
        return self.a == 0 and self.b == 0

    def __bool__(self):
        return not self.is_zero()

    def sign(self) -> int:
        """Exact sign of a + b*sqrt3 as a real number."""
        sa = (self.a > 0) - (self.a < 0)
        sb = (self.b > 0) - (self.b < 0)
        if sb == 0:
            return sa
        if sa == 0 or sa == sb:
            return sb
        # opposite signs: compare a^2 with 3 b^2
        d = self.a * self.a - 3 * self.b * self.b
        if d == 0:
            return 0
        return sa if d > 0 else sb

    def __eq__(self, other):
        try:
            o = QuadRat.coerce(other)
        except TypeError:
            return NotImplemented
        return self.a == o.a and self.b == o.b

    def __hash__(self):
        if self.b == 0:
            return hash(self.a)
        return hash((self.a, self.b))

    def __lt__(self, other):
        return (self - other).sign() < 0

    def __le__(self, other):
        return (self - other).sign() <= 0

    def __gt__(self, other):
        return (self - other).sign() > 0

    def __ge__(self, other):
        return (self - other).sign() >= 0

    def __float__(self):
        return float(self.a) + float(self.b) * math.sqrt(3.0)

    def __repr__(self):
        return f"QuadRat({self.to_str()})"

    def to_str(self) -> str:
        """Canonical serialization "p/q+r/s*sqrt3"."""
        return f"{_fstr(self.a)}+{_fstr(self.b)}*sqrt3"

    @staticmethod
    def from_str(text: str) -> "QuadRat":
        m = _QR_RE.fullmatch(text.replace(" ", ""))
        if m is None:
            if _RAT_RE.fullmatch(text.strip()):
                return QuadRat(Fraction(text.strip()))
            raise ValueError(f"bad QuadRat literal {text!r}")
        a = Fraction(m.group(1)) if m.group(1) else Fraction(0)
        b = Fraction(m.group(2))
        return QuadRat(a, b)


def _fstr(x: Fraction) -> str:
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


_QR_RE = re.compile(r"([-+]?\d+(?:/\d+)?)?\+?([-+]?\d+(?:/\d+)?)\*sqrt3")
_RAT_RE = re.compile(r"[-+]?\d+(?:/\d+)?")

SQRT3 = QuadRat(0, 1)


class ExactComplex:
    """re + i*im with re, im in Q(sqrt3)."""

    __slots__ = ("re", "im")

    def __init__(self, re=0, im=0):
        object.__setattr__(self, "re", QuadRat.coerce(re))
        object.__setattr__(self, "im", QuadRat.coerce(im))

    def __setattr__(self, name, value):
        raise AttributeError("ExactComplex is immutable")

    @staticmethod
    def coerce(x) -> "ExactComplex":
        if isinstance(x, ExactComplex):
            return x
        return ExactComplex(QuadRat.coerce(x), 0)

    def __add__(self, other):
        try:
            o = ExactComplex.coerce(other)
        except TypeError:
            return NotImplemented
        return ExactComplex(self.re + o.re, self.im + o.im)

    __radd__ = __add__

    def __neg__(self):
        return ExactComplex(-self.re, -self.im)

    def __sub__(self, other):
        try:
            o = ExactComplex.coerce(other)
        except TypeError:
            return NotImplemented
        return ExactComplex(self.re - o.re, self.im - o.im)

    def __rsub__(self, other):
        return ExactComplex.coerce(other) - self

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return ExactComplex(self.re * other, self.im * other)
        try:
            o = ExactComplex.coerce(other)
        except TypeError:
            return NotImplemented
        return ExactComplex(self.re * o.re - self.im * o.im, self.re * o.im + self.im * o.re)

    __rmul__ = __mul__

    def conj(self) -> "ExactComplex":
        return ExactComplex(self.re, -self.im)

    def abs2(self) -> QuadRat:
        return self.re * self.re + self.im * self.im

    def inverse(self) -> "ExactComplex":
        n = self.abs2()
        if n.is_zero():
            raise ZeroDivisionError("ExactComplex zero has no inverse")
        ninv = n.inverse()
        return ExactComplex(self.re * ninv, -self.im * ninv)

    def __truediv__(self, other):
        return self * ExactComplex.coerce(other).inverse()

    def __rtruediv__(self, other):
        return ExactComplex.coerce(other) * self.inverse()

    def is_zero(self) -> bool:
        return self.re.is_zero() and self.im.is_zero()

    def __bool__(self):
        return not self.is_zero()

    def is_real(self) -> bool:
        return self.im.is_zero()

    def __eq__(self, other):
        try:
            o = ExactComplex.coerce(other)
        except TypeError:
            return NotImplemented
        return self.re == o.re and self.im == o.im

    def __hash__(self):
        if self.im.is_zero():
            return hash(self.re)
        return hash((self.re, self.im))

    def __complex__(self):
        return complex(float(self.re), float(self.im))

    def __repr__(self):
        return f"ExactComplex({self.re.to_str()}, {self.im.to_str()})"

    def to_json(self) -> dict:
        return {"re": self.re.to_str(), "im": self.im.to_str()}

    @staticmethod
    def from_json(d) -> "ExactComplex":
        if isinstance(d, (int, str)):
            return ExactComplex(QuadRat.from_str(str(d)))
        return ExactComplex(QuadRat.from_str(str(d["re"])), QuadRat.from_str(str(d["im"])))


I = ExactComplex(0, 1)

# cos and sin of k*pi/6, k = 0..11
_HALF = Fraction(1, 2)
_COS6 = [
    QuadRat(1),
    QuadRat(0, _HALF),
    QuadRat(_HALF),
    QuadRat(0),
    QuadRat(-_HALF),
    QuadRat(0, -_HALF),
    QuadRat(-1),
    QuadRat(0, -_HALF),
    QuadRat(-_HALF),
    QuadRat(0),
    QuadRat(_HALF),
    QuadRat(0, _HALF),
]
_SIN6 = [_COS6[(k - 3) % 12] for k in range(12)]


def unit_from_theta(theta) -> ExactComplex:
    """exp(i*pi*theta) for theta a multiple of 1/6."""
    t = as_theta(theta)
    k = int(6 * t) % 12
    return ExactComplex(_COS6[k], _SIN6[k])


def _upper(v: ExactComplex) -> bool:
    """arg(v) in (0, pi]."""
    s = v.im.sign()
    return s > 0 or (s == 0 and v.re.sign() < 0)


def _cross_sign(v: ExactComplex, w: ExactComplex) -> int:
    """Sign of im(v * conj(w)), i.e. of the 2d cross product w x v."""
    # float filter first; the exact test only runs when the value is near 0
    approx = float(v.im) * float(w.re) - float(v.re) * float(w.im)
    if abs(approx) > 1e-9:
        return 1 if approx > 0 else -1
    return _cross_exact(v, w)


@lru_cache(maxsize=65536)
def _cross_exact(v: ExactComplex, w: ExactComplex) -> int:
    return (v.im * w.re - v.re * w.im).sign()


class Phase:
    """Exact real number level + arg(dir)/pi with arg(dir) in (0, pi]."""

    __slots__ = ("level", "dir", "_ang")

    def __init__(self, level: int, dir: ExactComplex):
        dir = ExactComplex.coerce(dir)
        if dir.is_zero():
            raise ValueError("phase direction must be nonzero")
        if not _upper(dir):
            raise ValueError(f"direction {dir!r} is not in the upper half-plane convention")
        object.__setattr__(self, "level", int(level))
        object.__setattr__(self, "dir", dir)
        object.__setattr__(self, "_ang", math.atan2(float(dir.im), float(dir.re)))

    def __setattr__(self, name, value):
        raise AttributeError("Phase is immutable")

    @staticmethod
    def from_rational(q) -> "Phase":
        """Phase for a rational multiple of 1/6 (exact direction exists)."""
        q = as_theta(q)
        n = math.ceil(q) - 1
        return Phase(n, unit_from_theta(q - n))

    @staticmethod
    def from_twelfth(q) -> "Phase":
        """Phase for a multiple of 1/12; tan(pi/12) = 2 - sqrt3 keeps it exact."""
        q = _frac(q)
        if (12 * q).denominator != 1:
            raise ValueError(f"{q} is not a multiple of 1/12")
        n = math.ceil(q) - 1
        k = int(12 * (q - n))
        return Phase(n, dict(_DIR12)[k])

    def cmp(self, other: "Phase") -> int:
        if self.level != other.level:
            return LT if self.level < other.level else GT
        # same level: larger arg means larger phase; floats decide unless close
        gap = self._ang - other._ang
        if gap > 1e-9:
            return GT
        if gap < -1e-9:
            return LT
        s = _cross_exact(self.dir, other.dir)
        if s == 0:
            return EQ
        return GT if s > 0 else LT

    def __eq__(self, other):
        if not isinstance(other, Phase):
            return NotImplemented
        return self.cmp(other) == EQ

    def __lt__(self, other):
        return self.cmp(other) == LT

    def __le__(self, other):
        return self.cmp(other) != GT

    def __gt__(self, other):
        return self.cmp(other) == GT

    def __ge__(self, other):
        return self.cmp(other) != LT

    def __hash__(self):
        # scale-invariant: hash the rational fraction when the direction is on the 1/12 grid
        q = self.as_fraction()
        return hash(q) if q is not None else hash(self.level)

    def __add__(self, n: int) -> "Phase":
        if isinstance(n, int):
            return Phase(self.level + n, self.dir)
        return phase_shift(self, n)

    def __sub__(self, n):
        if isinstance(n, int):
            return Phase(self.level - n, self.dir)
        return phase_shift(self, -_frac(n))

    def as_fraction(self) -> Fraction | None:
        """The exact rational value when arg(dir)/pi is a multiple of 1/12, else None."""
        for k, d in _DIR12:
            if _cross_sign(self.dir, d) == 0 and (self.dir.re * d.re + self.dir.im * d.im).sign() > 0:
                return self.level + Fraction(k, 12)
        return None

    def __float__(self):
        return self.level + math.atan2(float(self.dir.im), float(self.dir.re)) / math.pi

    def __repr__(self):
        q = self.as_fraction()
        if q is not None:
            return f"Phase({q})"
        return f"Phase(level={self.level}, dir={self.dir!r}, ~{float(self):.4f})"

    def to_json(self):
        q = self.as_fraction()
        return {
            "level": self.level,
            "dir": self.dir.to_json(),
            "value": None if q is None else _fstr(q),
        }


_TAN12 = QuadRat(2, -1)  # tan(pi/12)
_DIR12 = [
    (1, ExactComplex(1, _TAN12)),
    (2, ExactComplex(SQRT3, 1)),
    (3, ExactComplex(1, 1)),
    (4, ExactComplex(1, SQRT3)),
    (5, ExactComplex(_TAN12, 1)),
    (6, ExactComplex(0, 1)),
    (7, ExactComplex(-_TAN12, 1)),
    (8, ExactComplex(-1, SQRT3)),
    (9, ExactComplex(-1, 1)),
    (10, ExactComplex(-SQRT3, 1)),
    (11, ExactComplex(-1, _TAN12)),
    (12, ExactComplex(-1, 0)),
]


def phase_of(z) -> Phase:
    """Phase of a nonzero charge value: in (0, 1] for the upper branch, (-1, 0] otherwise."""
    z = ExactComplex.coerce(z)
    if z.is_zero():
        raise ValueError("phase of zero is undefined")
    if _upper(z):
        return Phase(0, z)
    return Phase(-1, -z)


def phase_shift(phi: Phase, theta) -> Phase:
    """phi + theta for theta a multiple of 1/6."""
    t = as_theta(theta)
    n = math.floor(t)
    frac = t - n
    level = phi.level + n
    d = phi.dir * unit_from_theta(frac)
    if not _upper(d):
        d = -d
        level += 1
    return Phase(level, d)


def phase_cmp(p: Phase, q: Phase) -> int:
    return p.cmp(q)
