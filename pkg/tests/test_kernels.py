import random

import pytest
from hypothesis import given, strategies as st

from stabglue import _kernels_py, kernels

try:
    from stabglue import _gfkernels
except ImportError:  # pure build
    _gfkernels = None

needs_compiled = pytest.mark.skipif(_gfkernels is None, reason="compiled kernels not built")


def gauss_binom(n, k, p):
    num = den = 1
    for i in range(k):
        num *= p ** (n - i) - 1
        den *= p ** (i + 1) - 1
    return num // den


@given(st.sampled_from([2, 3, 5]), st.integers(0, 4), st.integers(0, 5), st.randoms(use_true_random=False))
def test_rref_backends_agree(p, r, c, rnd):
    rows = [[rnd.randrange(p) for _ in range(c)] for _ in range(r)]
    ref = _kernels_py.rref_mod_p(rows, c, p)
    assert kernels.rref_mod_p(rows, c, p) == ref
    if _gfkernels is not None:
        assert _gfkernels.rref_mod_p(rows, c, p) == ref


@pytest.mark.parametrize("p,n", [(2, 3), (3, 2), (2, 4)])
def test_subspace_counts(p, n):
    subs = kernels.enumerate_subobjects(p, [n], [])
    assert len(subs) == sum(gauss_binom(n, k, p) for k in range(n + 1))


@needs_compiled
def test_subobject_backends_agree():
    rnd = random.Random(5)
    for _ in range(20):
        p = rnd.choice([2, 3])
        dims = [rnd.randint(0, 2), rnd.randint(0, 2)]
        edges = [(0, 1, [[rnd.randrange(p) for _ in range(dims[0])] for _ in range(dims[1])])]
        a = _kernels_py.enumerate_subobjects(p, dims, edges)
        b = _gfkernels.enumerate_subobjects(p, dims, edges)
        assert sorted(a) == sorted(b)


def test_budget_is_enforced():
    with pytest.raises(kernels.BudgetExceeded):
        kernels.enumerate_subobjects(2, [6], [], budget=10)


def test_backend_name():
    assert kernels.BACKEND in ("cython", "python")
