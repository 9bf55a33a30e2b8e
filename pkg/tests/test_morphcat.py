import pytest
from hypothesis import given, strategies as st

from stabglue.derived import ChainMap, hom_dim, k0_class, shift, stalk
from stabglue.linalg import GF
from stabglue.morphcat import (
    MorphObject, cof_fib, embed, find_iso_morph, heart_pair, hom_dim_morph, k0_pair, morph_shift, morph_sum,
    pair_object, serre_morph, sod_triangle,
)
from stabglue import oracle
from stabglue.quiverrep import hom_basis, indecomposable

from helpers import universe

KINDS = ("s", "jShriek", "jStar")


def base_obj(q):
    return st.tuples(st.sampled_from(universe(q, 2)), st.integers(-1, 1)).map(lambda t: shift(stalk(t[0]), t[1]))


def morph_obj(q):
    inc = MorphObject(ChainMap(stalk(indecomposable("S2")), stalk(indecomposable("P12")),
                               {0: hom_basis(indecomposable("S2"), indecomposable("P12"))[0]}))
    simple = st.tuples(st.sampled_from(KINDS), base_obj(q)).map(lambda t: embed(*t))
    if q == "A2":
        simple = st.one_of(simple, st.just(inc))
    return st.lists(simple, min_size=1, max_size=2).map(lambda fs: fs[0] if len(fs) == 1 else morph_sum(fs))


@pytest.mark.parametrize("q", ["A2", "K2"])
@given(data=st.data())
def test_adjunctions(q, data):
    x = data.draw(base_obj(q))
    g = data.draw(morph_obj(q))
    cf = cof_fib(g)
    for n in (-1, 0, 1):
        assert hom_dim_morph(embed("s", x), g, n) == hom_dim(x, g.src, n)
        assert hom_dim_morph(g, embed("s", x), n) == hom_dim(g.tgt, x, n)
        assert hom_dim_morph(embed("jShriek", x), g, n) == hom_dim(x, cf.fib, n)
        assert hom_dim_morph(g, embed("jStar", x), n) == hom_dim(cf.cof, x, n)


@pytest.mark.parametrize("q", ["A2", "K2"])
@given(data=st.data())
def test_semiorthogonality(q, data):
    x, y = data.draw(base_obj(q)), data.draw(base_obj(q))
    for n in (-1, 0, 1):
        # Hom(j_!, s) = 0 and Hom(s, j_*) = 0
        assert hom_dim_morph(embed("jShriek", x), embed("s", y), n) == 0
        assert hom_dim_morph(embed("s", x), embed("jStar", y), n) == 0


@pytest.mark.parametrize("q", ["A2", "K2"])
@given(data=st.data())
def test_sod_triangles(q, data):
    g = data.draw(morph_obj(q))
    for which in ("D0", "D1"):
        t = sod_triangle(which, g)
        assert t.to_obj.check() and t.from_obj.check()
        (ya, ca), (yb, cb), (y, c) = k0_pair(t.left), k0_pair(t.right), k0_pair(g)
        assert tuple(map(sum, zip(ya, yb))) == tuple(y)
        assert tuple(map(sum, zip(ca, cb))) == tuple(c)


@pytest.mark.parametrize("q", ["A2", "K2"])
@given(data=st.data())
def test_serre_duality_morph(q, data):
    f, g = data.draw(morph_obj(q)), data.draw(morph_obj(q))
    sf = serre_morph(f)
    assert hom_dim_morph(f, g, 0) == hom_dim_morph(g, sf, 0)


@pytest.mark.parametrize("kind", KINDS)
@pytest.mark.parametrize("n", [-1, 0, 2])
def test_vect_fractional_cy(kind, n):
    k = stalk(indecomposable("k"))
    f = embed(kind, shift(k, n))
    s3 = serre_morph(serre_morph(serre_morph(f)))
    assert find_iso_morph(s3, morph_shift(f, 1)) is not None
    assert find_iso_morph(serre_morph(f), morph_shift(f, 1)) is None


def test_cof_of_inclusion():
    s2, p12 = indecomposable("S2"), indecomposable("P12")
    f = MorphObject(ChainMap(stalk(s2), stalk(p12), {0: hom_basis(s2, p12)[0]}))
    cf = cof_fib(f)
    assert k0_class(cf.cof) == (1, 0)
    assert find_iso_morph(embed("s", cf.cof), embed("s", stalk(indecomposable("S1")))) is not None


@pytest.mark.parametrize("side", ["D0", "D1"])
def test_heart_pair_roundtrip(side):
    for delta in oracle.pair_universe("A2", GF(2), 3):
        f = pair_object(side, delta)
        hp = heart_pair(f, side)
        assert hp is not None and hp.degree == 0
        assert hp.delta.src.dims == delta.src.dims and hp.delta.tgt.dims == delta.tgt.dims
        assert [c.rank() for c in hp.delta.comps] == [c.rank() for c in delta.comps]
        sh = heart_pair(morph_shift(f, 1), side)
        assert sh is not None and sh.degree == -1
