"""Highest-weight combinatorics for GL(d+1)."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence


class NoPreimageError(ValueError):
    pass


@dataclass(frozen=True)
class HighestWeight:
    """Dominant weight (l_0 >= ... >= l_d), stored with l_d = 0."""

    lam: tuple[int, ...]

    def __post_init__(self) -> None:
        lam = tuple(int(x) for x in self.lam)
        if not lam:
            raise ValueError("empty weight")
        if any(a < b for a, b in zip(lam, lam[1:])):
            raise ValueError(f"weight {lam} is not dominant")
        if lam[-1] != 0:
            raise ValueError(f"weight {lam} is not normalized (last entry must be 0)")
        object.__setattr__(self, "lam", lam)

    @classmethod
    def normalized(cls, lam: Sequence[int]) -> "HighestWeight":
        """Twist by a power of det so that the last entry vanishes."""
        last = lam[-1]
        return cls(tuple(x - last for x in lam))

    @property
    def d(self) -> int:
        return len(self.lam) - 1

    def __getitem__(self, i: int) -> int:
        return self.lam[i]

    def to_json(self) -> dict:
        return {"d": self.d, "lambda": list(self.lam)}

    @classmethod
    def from_json(cls, obj: dict) -> "HighestWeight":
        w = cls(tuple(obj["lambda"]))
        if "d" in obj and int(obj["d"]) != w.d:
            raise ValueError("d does not match the length of lambda")
        return w


@dataclass(frozen=True)
class L1Weight:
    mu: tuple[int, ...]

    def __post_init__(self) -> None:
        mu = tuple(int(x) for x in self.mu)
        if any(a < b for a, b in zip(mu, mu[1:])):
            raise ValueError(f"{mu} is not weakly decreasing")
        object.__setattr__(self, "mu", mu)

    @property
    def d(self) -> int:
        return len(self.mu)


def r_of(lam: HighestWeight) -> int:
    return sum(lam.lam)


def dual_weight(lam: HighestWeight) -> HighestWeight:
    d = lam.d
    return HighestWeight(tuple(lam[0] - lam[d - i] for i in range(d + 1)))


def mu_of(lam: HighestWeight, j: int) -> L1Weight:
    d = lam.d
    if not 0 <= j <= d:
        raise ValueError(f"j = {j} out of range 0..{d}")
    head = [lam[i] - lam[j] + j + 1 for i in range(j)]
    tail = [lam[i] - lam[j] + j for i in range(j + 1, d + 1)]
    return L1Weight(tuple(head + tail))


def weight_from_mu(mu: L1Weight | Sequence[int]) -> tuple[HighestWeight, int]:
    m = mu if isinstance(mu, L1Weight) else L1Weight(tuple(mu))
    d = m.d
    vals = m.mu
    # 1-based access mu_s = vals[s-1]
    if any(vals[s - 1] == s for s in range(1, d + 1)):
        raise NoPreimageError("no preimage (condition (deraoc) fails)")
    j = max(jj for jj in range(d + 1) if jj == 0 or vals[jj - 1] >= jj + 1)
    # invert: head entries give l_i - l_j for i < j, tail entries for i > j
    diffs = [vals[i] - j - 1 for i in range(j)] + [0] + [vals[i - 1] - j for i in range(j + 1, d + 1)]
    lam = HighestWeight.normalized(diffs)
    if mu_of(lam, j).mu != vals:
        raise NoPreimageError("no preimage (condition (deraoc) fails)")
    return lam, j


def hodge_jumps(lam: HighestWeight) -> list[int]:
    r = r_of(lam)
    return [r - lam[j] + j for j in range(lam.d + 1)]


def gamma_filtration_dims(d: int, mu_value: int, i: int) -> int:
    # the source displays the same expression in both parity cases
    if mu_value < 1:
        raise ValueError("mu_value must be positive")
    if not 0 <= i <= d + 1:
        raise ValueError(f"i = {i} out of range 0..{d + 1}")
    return (d + 1 - i) * mu_value


def predicted_cohomology_table(lam: HighestWeight, mu_value: int) -> dict[int, tuple[int, int]]:
    """s -> (degree, dimension): only degree d - s is non-zero."""
    return {s: (lam.d - s, mu_value) for s in range(lam.d + 1)}


def weyl_dimension(lam: HighestWeight) -> int:
    from fractions import Fraction

    d = lam.d
    out = Fraction(1)
    for i in range(d + 1):
        for j in range(i + 1, d + 1):
            out *= Fraction(lam[i] - lam[j] + j - i, j - i)
    assert out.denominator == 1
    return int(out)


def all_weights(d: int, max_entry: int) -> list[HighestWeight]:
    """All normalized weights for GL(d+1) with entries at most ``max_entry``."""
    out: list[HighestWeight] = []

    def rec(prefix: list[int], bound: int) -> None:
        if len(prefix) == d:
            out.append(HighestWeight(tuple(prefix + [0])))
            return
        for x in range(bound, -1, -1):
            rec(prefix + [x], x)

    rec([], max_entry)
    return out


def weights_with_r(d: int, r: int) -> list[HighestWeight]:
    return [w for w in all_weights(d, r) if r_of(w) == r]
