import pytest

from stabglue import oracle
from stabglue.exact import ExactComplex
from stabglue.linalg import GF, QQ
from stabglue.quiverrep import direct_sum, indecomposable


@pytest.mark.parametrize("q,n,reps,pairs", [
    ("A2", 3, 12, 64), ("A2", 4, 21, 230), ("K2", 3, 20, 92), ("K2", 4, 48, 386), ("pt", 4, 4, 50),
])
def test_universe_sizes(q, n, reps, pairs):
    assert len(oracle.rep_universe(q, GF(2), n)) == reps
    assert len(oracle.pair_universe(q, GF(2), n)) == pairs


def test_irreducible_counts():
    # necklace counts over GF(2): 2, 1, 2, 3 monic irreducibles in degrees 1..4
    assert [len(oracle.irreducible_polys(d, 2)) for d in (1, 2, 3, 4)] == [2, 1, 2, 3]
    assert len(oracle.irreducible_polys(2, 3)) == 3


def test_brute_hn_of_split_sum():
    f = GF(2)
    m = direct_sum([indecomposable("S1", f), indecomposable("S2", f)]).total
    z = [ExactComplex(-1, 1), ExactComplex(0, 1)]

    def charge(d):
        return z[0] * ExactComplex(d[0]) + z[1] * ExactComplex(d[1])

    chain = oracle.brute_hn(oracle.rep_problem(m), charge)
    assert [str(p) for _, p in chain] == [str(p) for p in sorted((p for _, p in chain), reverse=True)]
    assert len(chain) == 2
    assert oracle.brute_semistable(oracle.rep_problem(m), charge) is None


def test_oracle_needs_finite_field():
    with pytest.raises(ValueError):
        oracle.rep_problem(indecomposable("S1", QQ))
