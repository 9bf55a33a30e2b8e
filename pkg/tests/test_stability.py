import math
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from stabglue import oracle
from stabglue.derived import ChainMap, shift, stalk
from stabglue.exact import ExactComplex as C, QuadRat, phase_of, unit_from_theta
from stabglue.linalg import GF
from stabglue.morphcat import MorphObject, embed, heart_pair, k0_pair, pair_object
from stabglue.quiverrep import decompose_rep, direct_sum, hom_basis, indecomposable
from stabglue.scenarios import _glued_conditions, sample_conditions
from stabglue.stability import (
    GluingRefused, GroupElt, Undecidable, act_group, check_hn, check_reasonable_support, component_phase,
    d0_star, d1_star, g_theta, glue_mode, glue_stab, hn_base, hn_glued, is_semistable, mk_heart_stab,
    pull_theta, shift_elt, stab_equal,
)

F2 = GF(2)
PAIRS = {q: oracle.pair_universe(q, F2, 4) for q in ("A2", "K2")}
REPS = {q: oracle.rep_universe(q, F2, 4) for q in ("A2", "K2")}
GLUED = {q: _glued_conditions(q, (Fraction(0), Fraction(1, 3), Fraction(2, 3)), check=False) for q in ("A2", "K2")}
HEARTS = {q: sample_conditions(q) + [mk_heart_stab(q, [C(1, 1), C(-1, 1)])] for q in ("A2", "K2")}
quivers = st.sampled_from(["A2", "K2"])


def test_p12_semistable_with_phase():
    s = mk_heart_stab("A2", [C(-1, 1), C(0, 1)])
    ph = is_semistable(s, indecomposable("P12"))
    assert math.isclose(float(ph), 0.6476, abs_tol=1e-4)


def test_hn_of_simple_sum():
    s = mk_heart_stab("A2", [C(-1, 1), C(0, 1)])
    m = direct_sum([indecomposable("S1"), indecomposable("S2")]).total
    hn = hn_base(s, m)
    assert [p.as_fraction() for p in hn.phases] == [Fraction(3, 4), Fraction(1, 2)]
    assert check_hn(s, stalk(m), hn) == []


def test_deg_condition_and_rotation():
    deg = mk_heart_stab("A2", [-1, -1])
    assert deg.is_deg()
    p12 = indecomposable("P12")
    assert is_semistable(deg, p12).as_fraction() == 1
    assert is_semistable(act_group(deg, g_theta(Fraction(2, 3))), p12).as_fraction() == Fraction(1, 3)
    rep = check_reasonable_support(deg)
    assert rep.reasonable and rep.inf_abs2 == QuadRat(1) and rep.support_c2 == QuadRat(1)


def test_pulled_phases_at_two_thirds():
    deg = mk_heart_stab("A2", [-1, -1])
    sg = pull_theta("d0", deg, Fraction(2, 3))
    x = stalk(indecomposable("S1"))
    assert is_semistable(sg, embed("s", x)).as_fraction() == 1
    assert sg.charge(embed("s", x)) == C(-1)
    assert is_semistable(sg, embed("jStar", x)).as_fraction() == Fraction(2, 3)
    assert is_semistable(sg, embed("jShriek", shift(x, -1))).as_fraction() == Fraction(1, 3)


def test_hn_of_inclusion_in_deformed_heart():
    deg = mk_heart_stab("A2", [-1, -1])
    sg = pull_theta("d0", deg, Fraction(2, 3))
    s2, p12 = indecomposable("S2"), indecomposable("P12")
    f = MorphObject(ChainMap(stalk(s2), stalk(p12), {0: hom_basis(s2, p12)[0]}))
    hn = hn_glued(sg, f)
    assert [p.as_fraction() for p in hn.phases] == [1, Fraction(2, 3)]
    assert check_hn(sg, f, hn) == []


@pytest.mark.parametrize("q", ["A2", "K2"])
def test_endpoint_identity(q):
    deg = mk_heart_stab(q, [-1, -1])
    t = Fraction(2, 3)
    a = pull_theta("d1", deg, t)
    b = act_group(pull_theta("d0", deg, t), g_theta(t))
    objs = [embed(k, shift(stalk(m), j)) for k in ("s", "jStar", "jShriek") for m in REPS[q][:8] for j in (-1, 0, 1)]
    ok, cert = stab_equal(a, b, objs)
    assert ok, cert


@given(quivers, st.data())
def test_glued_hn_invariants(q, data):
    name, sg = data.draw(st.sampled_from(GLUED[q]))
    delta = data.draw(st.sampled_from(PAIRS[q]))
    k = data.draw(st.integers(-1, 1))
    from stabglue.morphcat import morph_shift
    f = morph_shift(pair_object(sg.sod, delta), k)
    assert check_hn(sg, f, hn_glued(sg, f)) == [], name


@given(quivers, st.data())
def test_base_hn_invariants(q, data):
    s = data.draw(st.sampled_from(HEARTS[q]))
    m = data.draw(st.sampled_from(REPS[q]))
    assert check_hn(s, stalk(m), hn_base(s, m)) == []


@given(quivers, st.data())
def test_semistable_matches_brute_force(q, data):
    s = data.draw(st.sampled_from(HEARTS[q]))
    m = data.draw(st.sampled_from(REPS[q]))
    z = [s.charge_k0(tuple(int(i == j) for j in range(2))) for i in range(2)]
    want = oracle.brute_semistable(oracle.rep_problem(m), lambda d: z[0] * d[0] + z[1] * d[1])
    assert is_semistable(s, m) == want


@pytest.mark.parametrize("q", ["A2", "K2"])
def test_stable_implies_indecomposable(q):
    for s in HEARTS[q]:
        rule = s.rule()
        for m in REPS[q]:
            if rule.stable(m):
                assert len(decompose_rep(m).labels()) == 1
                z = [s.charge_k0(tuple(int(i == j) for j in range(2))) for i in range(2)]
                assert oracle.brute_stable(oracle.rep_problem(m), lambda d: z[0] * d[0] + z[1] * d[1])


@given(quivers, st.data())
def test_gluing_restricts_to_components(q, data):
    name, sg = data.draw(st.sampled_from(GLUED[q]))
    m = data.draw(st.sampled_from(REPS[q]))
    kind = data.draw(st.sampled_from(["s", "jShriek", "jStar"]))
    f = embed(kind, shift(stalk(m), data.draw(st.integers(-1, 1))))
    if heart_pair(f, sg.sod) is None and kind != "s":
        return
    expect = component_phase(sg, f)
    if expect is None and ((sg.sod == "D0" and kind == "jStar") or (sg.sod == "D1" and kind == "jShriek")):
        return
    assert is_semistable(sg, f) == expect, name


@given(quivers, st.data())
def test_group_action_moves_phases(q, data):
    s = data.draw(st.sampled_from(HEARTS[q]))
    g = GroupElt(Fraction(data.draw(st.integers(-6, 6)), 6), Fraction(data.draw(st.integers(1, 4)), 2),
                 data.draw(st.integers(-1, 1)))
    m = data.draw(st.sampled_from(REPS[q]))
    x = shift(stalk(m), data.draw(st.integers(-1, 1)))
    a, b = is_semistable(s, x), is_semistable(act_group(s, g), x)
    assert (a is None) == (b is None)
    if a is not None:
        assert b == g.act_phase(a)
    assert act_group(s, g).charge(x) == s.charge(x) * g.factor()


def test_group_law():
    a, b = GroupElt(Fraction(1, 3), 2, 1), GroupElt(Fraction(-1, 6), Fraction(1, 3), 0)
    assert (a * b) * a.inverse() == b * (a * a.inverse())
    assert (a * a.inverse()).is_identity()


@pytest.mark.parametrize("q", ["A2", "K2"])
@pytest.mark.parametrize("theta", [Fraction(1, 6), Fraction(1, 3), Fraction(1, 2), Fraction(2, 3), Fraction(5, 6)])
def test_support_transfer(q, theta):
    deg = mk_heart_stab(q, [-1, -1])
    base = check_reasonable_support(deg)
    sg = pull_theta("d0", deg, theta)
    rep = check_reasonable_support(sg)
    one_u = (C(1) + unit_from_theta(-theta)).abs2()
    assert rep.reasonable
    assert rep.support_c2 <= QuadRat(2) * base.support_c2 / min(QuadRat(1), one_u)
    # every semistable heart pair obeys the reported bounds
    for delta in PAIRS[q]:
        f = pair_object("D0", delta)
        if is_semistable(sg, f) is None:
            continue
        z2 = sg.charge(f).abs2()
        y, c = k0_pair(f)
        norm = QuadRat(sum(v * v for v in y) + sum(v * v for v in c))
        assert z2 >= rep.inf_abs2
        assert norm <= rep.support_c2 * z2


@pytest.mark.parametrize("q", ["A2", "K2"])
def test_base_support_bounds(q):
    for s in HEARTS[q]:
        rep = check_reasonable_support(s)
        for m in REPS[q]:
            if m.is_zero() or is_semistable(s, m) is None:
                continue
            z2 = s.charge(stalk(m)).abs2()
            assert z2 >= rep.inf_abs2
            assert QuadRat(sum(d * d for d in m.dims)) <= rep.support_c2 * z2


def test_gluing_refused_with_witness():
    a = mk_heart_stab("A2", [C(0, 1), C(-1, 1)])
    b = mk_heart_stab("A2", [C(-1, 1), C(0, 1)])
    with pytest.raises(GluingRefused) as e:
        glue_stab(a, act_group(b, GroupElt(Fraction(1, 2), 1, -1)), "D0")
    assert "gluing condition" in str(e.value)


def test_general_mode_is_undecidable():
    a = mk_heart_stab("A2", [C(-1, 1), C(0, 1)])
    sg = glue_stab(a, act_group(a, GroupElt(Fraction(-1, 2), 1, -1)), "D0", check=False)
    assert glue_mode(sg).kind == "general"
    delta = next(d for d in PAIRS["A2"] if not d.src.is_zero() and not d.tgt.is_zero())
    with pytest.raises(Undecidable):
        is_semistable(sg, pair_object("D0", delta))


def test_pull_theta_preconditions():
    s = mk_heart_stab("A2", [C(-1, 1), C(0, 1)])
    with pytest.raises(ValueError):
        pull_theta("d0", s, Fraction(1, 3))
    with pytest.raises(ValueError):
        pull_theta("d0", mk_heart_stab("A2", [-1, -1]), 1)
    with pytest.raises(ValueError):
        mk_heart_stab("A2", [C(0, -1), C(-1)])


def test_pullbacks_are_distinct_from_each_other():
    s = mk_heart_stab("A2", [C(-1, 1), C(0, 1)])
    ok, cert = stab_equal(d0_star(s), d1_star(s))
    assert not ok and cert["reason"] == "charge"
