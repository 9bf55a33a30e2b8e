import pytest
from hypothesis import given, strategies as st

from stabglue.derived import (
    cohomology_dims, cone, dsum, euler_pairing, hom_dim, identity_map, is_acyclic, k0_class, serre, shift, stalk,
)
from stabglue.quiverrep import euler_form, indecomposable

from helpers import universe


def objects(q, max_dim=3):
    reps = universe(q, max_dim)
    return st.lists(st.tuples(st.sampled_from(reps), st.integers(-1, 1)), min_size=1, max_size=2).map(
        lambda items: dsum([shift(stalk(m), k) for m, k in items]).total)


@pytest.mark.parametrize("q", ["A2", "K2"])
@given(data=st.data())
def test_serre_duality(q, data):
    x, y = data.draw(objects(q)), data.draw(objects(q))
    sx = serre(x)
    for n in (-1, 0, 1):
        assert hom_dim(x, y, n) == hom_dim(y, sx, -n)


@pytest.mark.parametrize("q", ["A2", "K2"])
@given(data=st.data())
def test_shift_invariance_and_euler(q, data):
    x, y = data.draw(objects(q)), data.draw(objects(q))
    for n in (-1, 0, 1):
        assert hom_dim(shift(x, 1), shift(y, 1), n) == hom_dim(x, y, n)
        assert hom_dim(shift(x, 1), y, n) == hom_dim(x, y, n - 1)
    assert euler_pairing(x, y) == euler_form(q, k0_class(x), k0_class(y))


@given(objects("A2"))
def test_cone_of_identity_is_acyclic(x):
    assert is_acyclic(cone(identity_map(x)).obj)


def test_serre_of_simples_a2():
    # S2 is projective and S sends it to its injective hull P12
    sp = serre(stalk(indecomposable("S2")))
    assert cohomology_dims(sp) == {0: (1, 1)}
