"""Explicit Frobenius models and the filtered (phi, N)-module of the period domain.

Basis vectors of the module are indexed by ``(i, j, s, t)`` with ``i`` in
Z/(d+1), ``j`` in Z/f, slope level ``s`` in 0..d and multiplicity index
``t`` in 1..mu.  The Galois component label ``delta`` of a vector is ``j``
(``delta = 0`` is the identity embedding).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from . import linalg
from .phin import (
    CheckResult,
    FilteredPhiNModule,
    JumpEntry,
    is_weakly_admissible,
    purity_check,
    slope_filtration,
    verify_pairing,
)
from .scalars import FieldParams, PiScalar, ScalarMatrix, newton_slopes, val_p
from .weights import HighestWeight, dual_weight, r_of


class RamifiedModelError(ValueError):
    pass


@dataclass(frozen=True)
class DrinfeldParams:
    params: FieldParams
    lam: HighestWeight
    mu_value: int = 1
    twist: tuple[int, PiScalar] | None = None

    def __post_init__(self) -> None:
        if self.mu_value < 1:
            raise ValueError("mu_value must be positive")
        if self.twist is not None:
            m, alpha = self.twist
            if m < 1:
                raise ValueError("twist exponent must be positive")
            if alpha.is_zero():
                raise ValueError("twist scalar must be non-zero")

    @property
    def d(self) -> int:
        return self.lam.d

    @property
    def r(self) -> int:
        return r_of(self.lam)


def expected_slope(dp: DrinfeldParams) -> Fraction:
    nd = dp.params.n * (dp.d + 1)
    return Fraction((nd - 1) * dp.r, nd)


def graded_iterate_order(dp: DrinfeldParams, s: int) -> int:
    nd = dp.params.n * (dp.d + 1)
    return nd * (dp.d - s) + (nd - 1) * dp.r


def _step(i: int, j: int, d: int, f: int) -> tuple[int, int, bool]:
    """Target cell of Frobenius and whether this is the wrap step."""
    if j != 0:
        return i, j - 1, False
    return (i + 1) % (d + 1), f - 1, i == d


def build_MM(dp: DrinfeldParams) -> tuple[ScalarMatrix, Fraction]:
    """Monomial Frobenius on the sum of f(d+1) copies (one dimension per cell)."""
    d, f, p, e, r = dp.d, dp.params.f, dp.params.p, dp.params.e, dp.r
    cells = [(j, i) for j in range(f) for i in range(d + 1)]
    pos = {c: k for k, c in enumerate(cells)}
    rows = [[PiScalar.of(0, p, e)] * len(cells) for _ in cells]
    for (j, i), col in pos.items():
        ti, tj, wrap = _step(i, j, d, f)
        entry = PiScalar.of(p**r, p, e)
        if wrap:
            entry = entry * PiScalar.pi_power(-r, p, e) if r else entry
        rows[pos[(tj, ti)]][col] = entry
    return ScalarMatrix.from_rows(rows, p, e), expected_slope(dp)


def frobenius_model(dp: DrinfeldParams) -> tuple[ScalarMatrix, list[tuple[int, int, int, int]]]:
    """Frobenius on basis (i, j, s, t): scale p^(r+d-s), extra pi^(-r) at the wrap.

    Valid for every ramification index; labels are (i, j, s, t).
    """
    d, f, p, e, r, mu = dp.d, dp.params.f, dp.params.p, dp.params.e, dp.r, dp.mu_value
    keys = list(itertools.product(range(d + 1), range(f), range(d + 1), range(1, mu + 1)))
    pos = {k: n for n, k in enumerate(keys)}
    zero = PiScalar.of(0, p, e)
    wrap_factor = PiScalar.pi_power(-r, p, e)
    rows = [[zero] * len(keys) for _ in keys]
    for (i, j, s, t), col in pos.items():
        ti, tj, wrap = _step(i, j, d, f)
        entry = PiScalar.of(Fraction(p) ** (r + d - s), p, e)
        if wrap:
            entry = entry * wrap_factor
        rows[pos[(ti, tj, s, t)]][col] = entry
    return ScalarMatrix.from_rows(rows, p, e), keys


def hodge_degree(lam: HighestWeight, s: int, delta: int) -> int:
    d, r = lam.d, r_of(lam)
    if delta == 0:
        return r - lam[d - s] + (d - s)
    return r + (d - s)


def build_D(dp: DrinfeldParams) -> FilteredPhiNModule:
    if dp.params.e != 1:
        raise RamifiedModelError("ramified (D, D_K) model unsupported")
    if dp.twist is not None:
        return build_twisted(dp)
    d, mu = dp.d, dp.mu_value
    phi, keys = frobenius_model(dp)
    pos = {k: n for n, k in enumerate(keys)}
    dim = len(keys)
    nmat = linalg.zeros(dim, dim)
    for (i, j, s, t), col in pos.items():
        if s < d:
            nmat[pos[(i, j, s + 1, t)]][col] = Fraction(1)
    hodge = [hodge_degree(dp.lam, s, j) for (i, j, s, t) in keys]
    labels = [(i, j, s, j) for (i, j, s, t) in keys]
    m = FilteredPhiNModule(dp.params, dim, phi, tuple(map(tuple, nmat)), tuple(hodge), tuple(labels))
    _check_postconditions(dp, m, keys)
    return m


def _check_postconditions(dp: DrinfeldParams, m: FilteredPhiNModule, keys: Sequence[tuple[int, ...]]) -> None:
    d, f, mu = dp.d, dp.params.f, dp.mu_value
    assert m.dim == (d + 1) * f * (d + 1) * mu
    for s in range(d + 1):
        if val_p(graded_scalar(m, s, dp.params.n * (d + 1))) != graded_iterate_order(dp, s):
            raise AssertionError(f"graded Frobenius order wrong at level {s}")
    for i, j, s in itertools.product(range(d + 1), range(f), range(d + 1)):
        if sum(1 for k in keys if k[:3] == (i, j, s)) != mu:
            raise AssertionError("graded piece of wrong dimension")


def level_indices(m: FilteredPhiNModule, s: int) -> list[int]:
    assert m.labels is not None
    return [k for k, lab in enumerate(m.labels) if lab[2] == s]


def graded_scalar(m: FilteredPhiNModule, s: int, iterate: int) -> PiScalar:
    """The scalar by which phi^iterate acts on the level-s piece (must be scalar)."""
    idx = level_indices(m, s)
    block = m.phi.submatrix(idx)
    power = block**iterate
    lead = power[0, 0]
    for a in range(len(idx)):
        for b in range(len(idx)):
            want = lead if a == b else 0
            if power[a, b] != want:
                raise AssertionError(f"phi^{iterate} is not scalar on level {s}")
    return lead


def model_graded_orders(dp: DrinfeldParams) -> dict[int, Fraction]:
    """Valuation of the n(d+1)-fold iterate on each level of the Frobenius model (any e)."""
    phi, keys = frobenius_model(DrinfeldParams(dp.params, dp.lam, 1))
    out = {}
    nd = dp.params.n * (dp.d + 1)
    for s in range(dp.d + 1):
        idx = [k for k, key in enumerate(keys) if key[2] == s]
        power = phi.submatrix(idx) ** nd
        diag = {power[a, a] for a in range(len(idx))}
        offdiag = any(not power[a, b].is_zero() for a in range(len(idx)) for b in range(len(idx)) if a != b)
        if len(diag) != 1 or offdiag:
            raise AssertionError(f"iterate not scalar on level {s}")
        out[s] = Fraction(val_p(diag.pop()))
    return out


def build_twisted(dp: DrinfeldParams) -> FilteredPhiNModule:
    """Module whose (m f)-fold Frobenius iterate on level s is alpha p^(m f (d-s)).

    Basis (j, s, t) with j in Z/(m f); the cycle carries alpha at the wrap step.
    """
    assert dp.twist is not None
    mexp, alpha = dp.twist
    d, f, p, e, mu = dp.d, dp.params.f, dp.params.p, dp.params.e, dp.mu_value
    if (alpha.p, alpha.e) != (p, e):
        raise ValueError("twist scalar lives over a different field")
    va = val_p(alpha)
    if Fraction(va).denominator != 1:
        raise ValueError("twist scalar needs integral valuation for an integral Hodge filtration")
    length = mexp * f
    keys = list(itertools.product(range(length), range(d + 1), range(1, mu + 1)))
    pos = {k: n for n, k in enumerate(keys)}
    zero = PiScalar.of(0, p, e)
    rows = [[zero] * len(keys) for _ in keys]
    nmat = linalg.zeros(len(keys), len(keys))
    for (j, s, t), col in pos.items():
        entry = PiScalar.of(Fraction(p) ** (d - s), p, e)
        if j == 0:
            entry = entry * alpha
        rows[pos[((j - 1) % length, s, t)]][col] = entry
        if s < d:
            nmat[pos[(j, s + 1, t)]][col] = Fraction(1)
    hodge = [(d - s) + (int(va) if j == 0 else 0) for (j, s, t) in keys]
    labels = [(0, j, s, 0) for (j, s, t) in keys]
    return FilteredPhiNModule(dp.params, len(keys), ScalarMatrix.from_rows(rows, p, e),
                              tuple(map(tuple, nmat)), tuple(hodge), tuple(labels))


def twist_level_valuations(m: FilteredPhiNModule, iterate: int) -> dict[int, Fraction]:
    levels = sorted({lab[2] for lab in m.labels or ()})
    return {s: Fraction(val_p(graded_scalar(m, s, iterate))) for s in levels}


# -- splitting and duality ---------------------------------------------------------


def _components(m: FilteredPhiNModule) -> dict[tuple[int, int], list[int]]:
    assert m.labels is not None
    out: dict[tuple[int, int], list[int]] = {}
    for k, (i, _j, _s, delta) in enumerate(m.labels):
        out.setdefault((i, delta), []).append(k)
    return out


def tilde_filtration(m: FilteredPhiNModule, j: int, lam: HighestWeight | None = None) -> list[int]:
    """Basis indices spanning the combined Hodge filtration step F~^j.

    With ``lam`` the thresholds are r - lam_j + j (delta = 0) and r + j
    (delta != 0).  Without it, the j-th smallest degree of each component is used.
    """
    out: list[int] = []
    for (i, delta), idx in _components(m).items():
        if lam is not None:
            d, r = lam.d, r_of(lam)
            if j > d:
                continue
            threshold = r - lam[j] + j if delta == 0 else r + j
        else:
            jumps = sorted({m.hodge[k] for k in idx})
            if j >= len(jumps):
                continue
            threshold = jumps[j]
        out.extend(k for k in idx if m.hodge[k] >= threshold)
    return sorted(out)


def verify_splitting(m: FilteredPhiNModule, lam: HighestWeight | None = None) -> CheckResult:
    if m.labels is None:
        raise ValueError("verify_splitting needs labels")
    d = max((lab[2] for lab in m.labels), default=0)
    for j in range(d):
        ftilde = set(tilde_filtration(m, j + 1, lam))
        slope = {k for k, lab in enumerate(m.labels) if lab[2] >= d - j}
        # both are spans of basis vectors, so direct sum = disjoint cover
        if ftilde & slope or len(ftilde) + len(slope) != m.dim:
            return CheckResult(False, {"first_failing_j": j, "dim_F": len(ftilde), "dim_S": len(slope)})
    return CheckResult(True, {})


def jump_table(lam: HighestWeight, f: int) -> list[JumpEntry]:
    d, r = lam.d, r_of(lam)
    dual = dual_weight(lam)
    rdual = r_of(dual)
    ext = list(lam.lam) + [0]
    ext_dual = list(dual.lam) + [0]
    out = []
    for i in range(d + 1):
        for delta in range(f):
            for j in range(d + 2):
                if delta == 0:
                    a = r + j - ext[j]
                    b = rdual + d + 1 - j - ext_dual[d - j + 1]
                else:
                    a, b = r + j, rdual + d + 1 - j
                out.append(JumpEntry((i, delta), a, b))
    return out


def build_dual_pair(dp: DrinfeldParams) -> tuple[FilteredPhiNModule, FilteredPhiNModule, ScalarMatrix]:
    if dp.twist is not None:
        raise ValueError("duality is only modelled for untwisted modules")
    m = build_D(dp)
    mdual = build_D(DrinfeldParams(dp.params, dual_weight(dp.lam), dp.mu_value))
    d = dp.d
    assert m.labels is not None and mdual.labels is not None
    dual_pos = {}
    for k, lab in enumerate(mdual.labels):
        dual_pos.setdefault(lab, []).append(k)
    p, e = dp.params.p, dp.params.e
    rows = [[PiScalar.of(0, p, e)] * mdual.dim for _ in range(m.dim)]
    used: dict[tuple[int, ...], int] = {}
    for a, (i, j, s, delta) in enumerate(m.labels):
        key = (i, j, d - s, delta)
        n_used = used.get(key, 0)
        rows[a][dual_pos[key][n_used]] = PiScalar.of(1, p, e)
        used[key] = n_used + 1
    return m, mdual, ScalarMatrix.from_rows(rows, p, e)


def verify_dual_pair(dp: DrinfeldParams) -> CheckResult:
    m, mdual, pairing = build_dual_pair(dp)
    return verify_pairing(m, mdual, pairing, jump_table(dp.lam, dp.params.f))


def verify_module(m: FilteredPhiNModule) -> dict[str, CheckResult]:
    """All checks that make sense for a labelled module read from disk."""
    checks: dict[str, CheckResult] = {}
    d = max((lab[2] for lab in m.labels or ()), default=0)
    ok, witness = is_weakly_admissible(m)
    checks["weakly_admissible"] = CheckResult(ok, witness)
    checks["purity"] = purity_check(m, slope_filtration(m), d)
    if _looks_twisted(m):
        checks["splitting"] = CheckResult(True, {"skipped": "twisted model carries no Galois splitting"})
    else:
        checks["splitting"] = verify_splitting(m)
    checks["slopes"] = _slope_check(m)
    return checks


def _looks_twisted(m: FilteredPhiNModule) -> bool:
    # untwisted models always have labels with delta == j
    return any(lab[1] != lab[3] for lab in m.labels or ())


def _slope_check(m: FilteredPhiNModule) -> CheckResult:
    """Each slope level must be isoclinic, with slopes decreasing in s by exactly 1."""
    levels = sorted({lab[2] for lab in m.labels or ()})
    slopes = {}
    for s in levels:
        vals = set(newton_slopes(m.phi.submatrix(level_indices(m, s))))
        if len(vals) != 1:
            return CheckResult(False, {"level": s, "reason": "not isoclinic"})
        slopes[s] = vals.pop()
    diffs = {slopes[s] - slopes[s + 1] for s in levels[:-1]}
    ok = diffs <= {Fraction(1)}
    return CheckResult(ok, {"slopes": {s: str(v) for s, v in slopes.items()}})
