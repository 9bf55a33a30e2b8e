import pytest
from hypothesis import given, strategies as st

from stabglue.derived import hom_dim, stalk
from stabglue.linalg import GF, QQ
from stabglue.quiverrep import (
    IndecLabel, decompose_rep, direct_sum, euler_form, hom_space, indecomposable, parse_label,
)

from helpers import conjugate, rng, universe

REPS = {q: universe(q, 4) for q in ("A2", "K2")}


def _labels(m):
    return sorted(str(l) for l in decompose_rep(m).labels())


@pytest.mark.parametrize("q", ["A2", "K2"])
@given(data=st.data())
def test_decomposition_is_basis_invariant(q, data):
    m = data.draw(st.sampled_from(REPS[q]))
    seed = data.draw(st.integers(0, 10 ** 6))
    c = conjugate(m, rng(seed))
    d = decompose_rep(c)
    assert d.check()
    assert _labels(c) == _labels(m)


@pytest.mark.parametrize("q", ["A2", "K2"])
def test_dims_add_up(q):
    for m in REPS[q]:
        labs = decompose_rep(m).labels()
        assert tuple(map(sum, zip(*[l.dims for l in labs]))) == m.dims


@pytest.mark.parametrize("q", ["A2", "K2"])
def test_euler_form_is_hom_minus_ext(q):
    reps = REPS[q][:14]
    for m in reps:
        for n in reps:
            h0 = hom_space(m, n).dim
            h1 = hom_dim(stalk(m), stalk(n), 1)
            assert h0 - h1 == euler_form(q, m.dims, n.dims)
            assert hom_dim(stalk(m), stalk(n), 0) == h0


def test_kronecker_endomorphisms():
    for n in range(3):
        for kind in ("Preproj", "Preinj"):
            m = indecomposable(IndecLabel("K2", kind, n=n))
            assert hom_space(m, m).dim == 1
    reg = indecomposable(IndecLabel("K2", "Regular", point=("pt", 1, 1), length=2))
    assert hom_space(reg, reg).dim == 2
    assert sorted(map(str, decompose_rep(reg).labels())) == ["Regular([1:1],2)"]


def test_higher_degree_points_over_gf2():
    f = GF(2)
    lab = IndecLabel("K2", "Regular", point=("poly", (1, 1, 1)), length=1)
    m = indecomposable(lab, f)
    assert m.dims == (2, 2)
    assert [str(l) for l in decompose_rep(m).labels()] == [str(lab)]


@pytest.mark.parametrize("text", ["S1", "S2", "P12", "k", "Preproj(2)", "Preinj(0)", "Regular([1:0],2)"])
def test_label_roundtrip(text):
    assert str(parse_label(text)) == text


def test_bad_label():
    with pytest.raises(ValueError):
        parse_label("S3")


def test_direct_sum_splits():
    s = direct_sum([indecomposable("S1"), indecomposable("P12"), indecomposable("S2")])
    assert s.total.dims == (2, 2)
    assert _labels(s.total) == ["P12", "S1", "S2"]
    assert hom_space(s.total, s.total).dim == 5
