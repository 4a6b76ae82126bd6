from fractions import Fraction

import pytest

from phinforge.drinfeld import (
    DrinfeldParams,
    RamifiedModelError,
    build_D,
    build_MM,
    build_dual_pair,
    expected_slope,
    graded_iterate_order,
    hodge_degree,
    jump_table,
    model_graded_orders,
    tilde_filtration,
    twist_level_valuations,
    verify_dual_pair,
    verify_module,
    verify_splitting,
)
from phinforge.phin import FilteredPhiNModule, is_weakly_admissible, monodromy_graded_dims, t_H, t_N
from phinforge.scalars import FieldParams, PiScalar, newton_slopes
from phinforge.weights import HighestWeight, weights_with_r

from oracles import jordan_graded_dims


def params(p=2, e=1, f=1):
    return FieldParams(p, e, f)


def test_small_module_frozen():
    m = build_D(DrinfeldParams(params(), HighestWeight((1, 0)), 2))
    assert m.dim == 8
    assert m.hodge == (2, 2, 0, 0, 2, 2, 0, 0)
    assert t_H(m) == t_N(m) == 8
    assert monodromy_graded_dims(m.n_lists()) == {-1: 4, 1: 4}


def test_monodromy_matches_jordan_oracle():
    dp = DrinfeldParams(params(f=2), HighestWeight((1, 1, 0)), 1)
    m = build_D(dp)
    blocks = [3] * (m.dim // 3)
    assert monodromy_graded_dims(m.n_lists()) == jordan_graded_dims(blocks)


def test_hodge_degrees_frozen():
    lam = HighestWeight((2, 1, 0))
    assert hodge_degree(lam, 0, 0) == 5
    assert hodge_degree(lam, 2, 0) == 1
    assert hodge_degree(lam, 1, 1) == 4


def test_ramified_slopes_frozen():
    dp = DrinfeldParams(params(e=2), HighestWeight((2, 1, 0)))
    mm, slope = build_MM(dp)
    assert slope == Fraction(5, 2)
    assert newton_slopes(mm) == [Fraction(5, 2)] * 3
    assert model_graded_orders(dp) == {0: 27, 1: 21, 2: 15}
    with pytest.raises(RamifiedModelError):
        build_D(dp)


@pytest.mark.parametrize("d,f,e,r", [(1, 1, 1, 0), (1, 2, 2, 3), (2, 2, 1, 2), (3, 1, 2, 1)])
def test_slope_formula(d, f, e, r):
    for lam in weights_with_r(d, r):
        dp = DrinfeldParams(params(3, e, f), lam)
        mm, slope = build_MM(dp)
        assert slope == expected_slope(dp)
        assert set(newton_slopes(mm)) == {slope}
        orders = model_graded_orders(dp)
        assert all(orders[s] == graded_iterate_order(dp, s) for s in range(d + 1))


@pytest.mark.parametrize("lam", [HighestWeight((1, 0)), HighestWeight((2, 1, 0)), HighestWeight((3, 0, 0))], ids=str)
@pytest.mark.parametrize("f", [1, 2])
def test_module_checks(lam, f):
    dp = DrinfeldParams(params(f=f), lam, 1)
    m = build_D(dp)
    checks = verify_module(m)
    assert all(checks.values()), checks
    assert verify_splitting(m, lam)
    assert verify_dual_pair(dp)


def test_tilde_filtration_dims():
    lam = HighestWeight((2, 1, 0))
    m = build_D(DrinfeldParams(params(f=2), lam, 1))
    dims = [len(tilde_filtration(m, j, lam)) for j in range(4)]
    assert dims == [m.dim * (3 - j) // 3 for j in range(3)] + [0]


def test_dual_pair_shapes():
    m, mdual, pairing = build_dual_pair(DrinfeldParams(params(), HighestWeight((1, 0)), 1))
    assert (pairing.rows, pairing.cols) == (m.dim, mdual.dim)
    entries = jump_table(HighestWeight((1, 0)), 1)
    assert [(x.m_degree, x.dual_degree) for x in entries[:3]] == [(0, 3), (2, 2), (3, 0)]


def test_twisted_module():
    alpha = PiScalar.of(3, 3)
    m = build_D(DrinfeldParams(params(3, 1, 2), HighestWeight((1, 0)), 1, (2, alpha)))
    assert m.dim == 8
    assert twist_level_valuations(m, 4) == {0: 5, 1: 1}
    checks = verify_module(m)
    assert all(checks.values())
    assert checks["splitting"].detail == {"skipped": "twisted model carries no Galois splitting"}
    with pytest.raises(ValueError):
        build_dual_pair(DrinfeldParams(params(3, 1, 2), HighestWeight((1, 0)), 1, (2, alpha)))


def test_params_validation():
    with pytest.raises(ValueError):
        DrinfeldParams(params(), HighestWeight((1, 0)), 0)
    with pytest.raises(ValueError):
        DrinfeldParams(params(), HighestWeight((1, 0)), 1, (0, PiScalar.of(1, 2)))
    with pytest.raises(ValueError):
        DrinfeldParams(params(), HighestWeight((1, 0)), 1, (1, PiScalar.of(0, 2)))


def test_json_round_trip_preserves_verdicts():
    m = build_D(DrinfeldParams(params(f=2), HighestWeight((2, 0, 0)), 2))
    back = FilteredPhiNModule.from_json(m.to_json())
    assert back == m
    assert is_weakly_admissible(back)[0]
