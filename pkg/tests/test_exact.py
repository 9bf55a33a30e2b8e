import math
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from stabglue.exact import (
    EQ, GT, LT, ExactComplex, Phase, QuadRat, as_theta, phase_of, phase_shift, unit_from_theta,
)

fracs = st.fractions(min_value=-20, max_value=20, max_denominator=12)
quads = st.builds(QuadRat, fracs, fracs)
cplx = st.builds(ExactComplex, quads, quads)
sixths = st.integers(-18, 18).map(lambda k: Fraction(k, 6))


@given(quads, quads, quads)
def test_quadrat_ring_axioms(x, y, z):
    assert (x + y) + z == x + (y + z)
    assert x * (y + z) == x * y + x * z
    assert x * y == y * x
    assert x - x == QuadRat(0)


@given(quads)
def test_quadrat_inverse_and_sign(x):
    if x.is_zero():
        return
    assert x * x.inverse() == QuadRat(1)
    f = float(x)
    assert x.sign() == (1 if f > 0 else -1)


@given(quads)
def test_quadrat_str_roundtrip(x):
    assert QuadRat.from_str(x.to_str()) == x


def test_sqrt3_squares_to_three():
    r = QuadRat(0, 1)
    assert r * r == QuadRat(3)
    assert QuadRat(7, -4).sign() == 1  # 7 > 4 sqrt3
    assert QuadRat(-7, 4).sign() == -1


@given(sixths, sixths)
def test_units_multiply(a, b):
    assert unit_from_theta(a) * unit_from_theta(b) == unit_from_theta(a + b)
    assert unit_from_theta(a).abs2() == QuadRat(1)


def test_unit_values():
    assert unit_from_theta(Fraction(1, 2)) == ExactComplex(0, 1)
    assert unit_from_theta(1) == ExactComplex(-1)
    u = unit_from_theta(Fraction(1, 3))
    assert u.re == QuadRat(Fraction(1, 2)) and u.im == QuadRat(0, Fraction(1, 2))


def test_theta_must_be_sixths():
    with pytest.raises(ValueError):
        as_theta(Fraction(1, 4))
    with pytest.raises(ValueError):
        unit_from_theta(Fraction(1, 5))


@given(st.integers(-5, 6))
def test_phase_of_units(k):
    t = Fraction(k, 6)
    ph = phase_of(unit_from_theta(t) * ExactComplex(3))
    want = t if -1 < t <= 1 else None
    if want is not None:
        assert ph.as_fraction() == want


@given(cplx, cplx)
def test_phase_order_matches_floats(z, w):
    if z.is_zero() or w.is_zero():
        return
    p, q = phase_of(z), phase_of(w)
    fp, fq = float(p), float(q)
    if abs(fp - fq) > 1e-7:
        assert (p > q) == (fp > fq)
    c = p.cmp(q)
    assert c in (LT, EQ, GT) and q.cmp(p) == -c


@given(cplx, sixths)
def test_phase_shift_adds(z, t):
    if z.is_zero():
        return
    p = phase_of(z)
    assert math.isclose(float(phase_shift(p, t)), float(p) + float(t), abs_tol=1e-9)
    assert phase_shift(phase_shift(p, t), -t) == p


@given(cplx, st.integers(1, 9))
def test_phase_scale_invariant(z, m):
    if z.is_zero():
        return
    assert phase_of(z) == phase_of(z * ExactComplex(m))


def test_phase_from_rational():
    assert Phase.from_rational(Fraction(5, 3)).as_fraction() == Fraction(5, 3)
    assert Phase.from_rational(1) == phase_of(ExactComplex(-1))


def test_complex_json_roundtrip():
    z = ExactComplex(QuadRat(Fraction(1, 2), -3), QuadRat(0, Fraction(2, 7)))
    assert ExactComplex.from_json(z.to_json()) == z
