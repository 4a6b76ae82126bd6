from fractions import Fraction

import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import lower_hull_slopes
from phinforge.scalars import (
    INF,
    FieldParams,
    PiScalar,
    ScalarMatrix,
    newton_slopes,
    val_p,
)


def pi(k, p=2, e=2, c=1):
    return PiScalar.pi_power(k, p, e, c)


def test_field_params_rejects_composite():
    with pytest.raises(ValueError):
        FieldParams(4)
    assert FieldParams(3, 2, 2).n == 4


def test_valuation_examples():
    assert val_p(PiScalar.of(2, 2, 1)) == 1
    assert val_p(pi(1)) == Fraction(1, 2)
    assert val_p(PiScalar.of(Fraction(3, 4), 2, 2) * pi(2)) == -1
    assert val_p(PiScalar.of(0, 5, 3)) == INF


def test_pi_relation_reduces():
    assert pi(2) == 2
    assert pi(-2) == Fraction(1, 2)
    assert (pi(1) * pi(1) * pi(1)).coeffs == pi(3).coeffs


coeff = st.fractions(min_value=-20, max_value=20, max_denominator=9)


@st.composite
def scalars(draw, p=3, e=2):
    cs = draw(st.lists(coeff, min_size=e, max_size=e))
    return PiScalar(cs, p, e)


@settings(max_examples=60, deadline=None)
@given(scalars(), scalars())
def test_valuation_is_additive(x, y):
    if x.is_zero() or y.is_zero():
        return
    assert val_p(x * y) == val_p(x) + val_p(y)


@settings(max_examples=60, deadline=None)
@given(scalars())
def test_inverse(x):
    if x.is_zero():
        return
    assert x * x.inverse() == 1


def test_json_round_trip():
    x = PiScalar([Fraction(1, 3), Fraction(-2, 5)], 3, 2)
    assert PiScalar.from_json(x.to_json(), 3, 2) == x
    m = ScalarMatrix.from_rows([[x, 1], [0, pi(1, 3, 2)]], 3, 2)
    assert ScalarMatrix.from_json(m.to_json(), 3, 2) == m


def test_newton_examples():
    assert newton_slopes(ScalarMatrix.identity(2, 2)) == [0, 0]
    diag = ScalarMatrix.from_rows([[2, 0], [0, 4]], 2)
    assert sorted(newton_slopes(diag)) == [1, 2]
    cyc = ScalarMatrix.from_rows([[0, 2], [1, 0]], 2)
    assert newton_slopes(cyc, 2) == [Fraction(1, 2), Fraction(1, 2)]


def test_singular_frobenius_rejected():
    with pytest.raises(ValueError, match="non-bijective Frobenius"):
        newton_slopes(ScalarMatrix.from_rows([[1, 1], [1, 1]], 2))


small = st.integers(-6, 6)


@settings(max_examples=40, deadline=None)
@given(st.lists(st.lists(small, min_size=3, max_size=3), min_size=3, max_size=3))
def test_slopes_against_sympy_charpoly(rows):
    p = 3
    if sympy.Matrix(rows).det() == 0:
        return
    a = ScalarMatrix.from_rows(rows, p)
    poly = sympy.Matrix(rows).charpoly().all_coeffs()[::-1]
    pts = [(k, Fraction(int(sympy.multiplicity(p, abs(c))))) for k, c in enumerate(poly) if c != 0]
    assert sorted(newton_slopes(a)) == sorted(-s for s in lower_hull_slopes(pts))
    assert sum(newton_slopes(a)) == val_p(a.det())


@settings(max_examples=30, deadline=None)
@given(st.lists(st.integers(0, 4), min_size=1, max_size=3), st.lists(st.integers(0, 4), min_size=1, max_size=3))
def test_block_diagonal_slopes_are_union(va, vb):
    p = 2
    n, m = len(va), len(vb)

    def cyclic(vals):
        k = len(vals)
        rows = [[0] * k for _ in range(k)]
        for i, v in enumerate(vals):
            rows[(i + 1) % k][i] = p**v
        return rows

    a, b = cyclic(va), cyclic(vb)
    block = [r + [0] * m for r in a] + [[0] * n + r for r in b]
    got = sorted(newton_slopes(ScalarMatrix.from_rows(block, p)))
    want = sorted(newton_slopes(ScalarMatrix.from_rows(a, p)) + newton_slopes(ScalarMatrix.from_rows(b, p)))
    assert got == want
