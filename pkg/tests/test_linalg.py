from fractions import Fraction

import pytest
import sympy
from hypothesis import given, strategies as st

from stabglue.linalg import (
    GF, QQ, Mat, column_basis, det, image_cokernel, inverse, kernel_basis, pencil_decompose, rank, solve,
)


def mats(field, max_r=4, max_c=4, lo=-3, hi=3):
    def build(shape, data):
        r, c = shape
        return Mat.from_rows(field, [data[i * c:(i + 1) * c] for i in range(r)], c)

    return st.tuples(st.integers(0, max_r), st.integers(0, max_c)).flatmap(
        lambda s: st.lists(st.integers(lo, hi), min_size=s[0] * s[1], max_size=s[0] * s[1]).map(
            lambda d: build(s, d)))


fields = st.sampled_from([QQ, GF(2), GF(3)])


@given(mats(QQ))
def test_rank_matches_sympy(m):
    ref = sympy.Matrix(m.rows, m.cols, [sympy.Rational(x.numerator, x.denominator) for r in m.data for x in r])
    assert rank(m) == ref.rank()


@given(fields.flatmap(lambda f: mats(f)))
def test_rank_nullity(m):
    k = kernel_basis(m)
    assert k.cols == m.cols - rank(m)
    assert (m @ k).is_zero()


@given(fields.flatmap(lambda f: mats(f)))
def test_image_cokernel(m):
    im, cok = image_cokernel(m)
    assert im.cols == rank(m)
    assert (cok @ m).is_zero()
    assert cok.rows == m.rows - rank(m)
    assert column_basis(m).cols == rank(m)


@given(fields.flatmap(lambda f: mats(f, 3, 3)), st.data())
def test_solve_recovers(m, data):
    x = data.draw(mats(m.field, m.cols, 2).filter(lambda x: x.rows == m.cols))
    b = m @ x
    y = solve(m, b)
    assert y is not None and m @ y == b


@given(st.integers(1, 4).flatmap(lambda n: mats(QQ, n, n).filter(lambda m: m.rows == m.cols == n)))
def test_det_and_inverse(m):
    ref = sympy.Matrix(m.rows, m.cols, [int(x) for r in m.data for x in r]).det()
    assert det(m) == Fraction(int(ref))
    if ref != 0:
        assert m @ inverse(m) == Mat.identity(QQ, m.rows)


@given(fields.flatmap(lambda f: st.tuples(mats(f, 3, 3), st.just(f))).flatmap(
    lambda t: st.tuples(st.just(t[0]), mats(t[1], t[0].rows, t[0].cols).filter(lambda b: b.shape == t[0].shape))))
def test_pencil_decomposition_reconstructs(ab):
    a, b = ab
    form = pencil_decompose(a, b)
    assert form.check(a, b)
    assert sum(blk.shape[0] for blk in form.blocks) == a.rows
    assert sum(blk.shape[1] for blk in form.blocks) == a.cols


def test_pencil_known_blocks():
    # a + t b with a = [1 0], b = [0 1]: a single L_1 block
    a = Mat.from_rows(QQ, [[1, 0]])
    b = Mat.from_rows(QQ, [[0, 1]])
    form = pencil_decompose(a, b)
    assert [blk.kind for blk in form.blocks] == ["L"]
    with pytest.raises(ValueError):
        pencil_decompose(a, Mat.from_rows(QQ, [[1]]))
