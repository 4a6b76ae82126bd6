import itertools
from fractions import Fraction

import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

from phinforge.residue import (
    LaurentWindow,
    LogForm,
    WindowError,
    annulus_top_cohomology_dim,
    dform,
    dlog_of_unit,
    residue,
    twist_coordinates,
    unit_twist_invariance,
    wedge,
)

coeff = st.fractions(min_value=-6, max_value=6, max_denominator=5)


def window(d, W, max_terms=5):
    expo = st.tuples(*[st.integers(-W, W)] * d)
    return st.dictionaries(expo, coeff, max_size=max_terms).map(lambda c: LaurentWindow(d, W, c))


def unit(d, W):
    expo = st.tuples(*[st.integers(0, W)] * d).filter(any)
    return st.tuples(coeff.filter(bool), st.dictionaries(expo, coeff, max_size=3)).map(
        lambda t: LaurentWindow(d, W, {(0,) * d: t[0], **t[1]})
    )


def sympy_residue(f: LaurentWindow) -> sympy.Rational:
    """Iterated one-variable residues of f * dT_1/T_1 ^ ... ^ dT_d/T_d."""
    syms = sympy.symbols(f"t1:{f.d + 1}")
    expr = sum(sympy.Rational(c.numerator, c.denominator) * sympy.Mul(*[s**k for s, k in zip(syms, a)])
               for a, c in f.coeffs.items())
    expr = expr / sympy.Mul(*syms)
    for s in syms:
        expr = sympy.residue(expr, s, 0)
    return expr


def test_dlog_wedge_has_residue_one():
    for d in (1, 2, 3):
        assert residue(LogForm.dlog_wedge(d, 2)) == 1


def test_wedge_sign():
    a, b = LogForm.dlog(2, 2, 1), LogForm.dlog(2, 2, 2)
    assert wedge(a, b) == LogForm.dlog_wedge(2, 2)
    assert wedge(b, a) == LogForm.dlog_wedge(2, 2).scale(-1)
    assert wedge(a, a).is_zero()


def test_dform_frozen():
    f = LaurentWindow(2, 3, {(2, -1): 3})
    df = dform(LogForm.function(f))
    assert df.component((1,)).coeffs == {(2, -1): 6}
    assert df.component((2,)).coeffs == {(2, -1): -3}
    with pytest.raises(WindowError, match="overflows"):
        dform(LogForm.dlog_wedge(2, 3))


def test_residue_needs_top_degree():
    with pytest.raises(WindowError):
        residue(LogForm.dlog(2, 2, 1))


def test_window_truncation_flag():
    f = LaurentWindow(1, 2, {(3,): 1, (1,): 2})
    assert f.truncated and f.coeffs == {(1,): 2}
    g = LaurentWindow.monomial(1, 2, (2,)) * LaurentWindow.monomial(1, 2, (1,))
    assert g.truncated and g.is_zero()


def test_series_inverse_frozen():
    eps = LaurentWindow(1, 3, {(0,): 1, (1,): 1})
    assert eps.series_inverse().coeffs == {(0,): 1, (1,): -1, (2,): 1, (3,): -1}
    with pytest.raises(WindowError, match="non-unit"):
        LaurentWindow(1, 3, {(1,): 1}).series_inverse()
    with pytest.raises(WindowError, match="non-unit"):
        LaurentWindow(1, 3, {(0,): 1, (-1,): 1}).series_inverse()


def test_dlog_of_unit_has_no_residue():
    eps = LaurentWindow(1, 4, {(0,): 2, (1,): 3, (2,): -1})
    assert residue(dlog_of_unit(eps)) == 0


def test_json_round_trip():
    w = LogForm(2, 3, 1, {(1,): LaurentWindow(2, 3, {(1, -2): Fraction(1, 3)}), (2,): LaurentWindow(2, 3, {(0, 0): 5})})
    assert LogForm.from_json(w.to_json()) == w


@pytest.mark.parametrize("d,W", list(itertools.product((1, 2), (1, 2, 3, 4))))
def test_annulus_top_cohomology(d, W):
    assert annulus_top_cohomology_dim(d, W) == 1


def test_annulus_bounds():
    with pytest.raises(WindowError):
        annulus_top_cohomology_dim(4, 2)


@settings(max_examples=40, deadline=None)
@given(st.integers(1, 2).flatmap(lambda d: window(d, 3)))
def test_residue_matches_sympy(f):
    omega = LogForm(f.d, f.W, f.d, {tuple(range(1, f.d + 1)): f})
    assert residue(omega) == sympy_residue(f)


@settings(max_examples=60, deadline=None)
@given(st.integers(1, 3).flatmap(lambda d: st.tuples(st.just(d), st.lists(window(d, 3), min_size=d, max_size=d))))
def test_exact_forms_have_zero_residue(data):
    d, comps = data
    subsets = list(itertools.combinations(range(1, d + 1), d - 1))
    eta = LogForm(d, 3, d - 1, dict(zip(subsets, comps)))
    assert residue(dform(eta)) == 0


@settings(max_examples=30, deadline=None)
@given(st.integers(1, 2).flatmap(lambda d: st.tuples(unit(d, 3), window(d, 3))))
def test_unit_twist_invariance(data):
    eps, f = data
    d = f.d
    omega = LogForm(d, f.W, d, {tuple(range(1, d + 1)): f})
    assert unit_twist_invariance(eps, omega)


def test_twist_with_one_unit_per_coordinate():
    d, W = 2, 3
    units = [LaurentWindow(d, W, {(0, 0): 2, (1, 0): 1}), LaurentWindow(d, W, {(0, 0): -1, (1, 1): 3})]
    omega = LogForm.dlog_wedge(d, W).multiply(LaurentWindow(d, W, {(0, 0): 4, (-1, 0): 1, (1, -1): 2}))
    assert residue(twist_coordinates(omega, units)) == residue(omega) == 4
