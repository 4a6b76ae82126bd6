"""Exact arithmetic in Q(pi) with pi**e = p, valuations and Newton polygons."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Iterable, Sequence

import sympy

from . import linalg

INF = float("inf")  # only ever compared, never used in arithmetic


@dataclass(frozen=True)
class FieldParams:
    p: int
    e: int = 1
    f: int = 1

    def __post_init__(self) -> None:
        if not sympy.isprime(self.p):
            raise ValueError(f"p = {self.p} is not prime")
        if self.e < 1 or self.f < 1:
            raise ValueError("e and f must be at least 1")

    @property
    def n(self) -> int:
        return self.e * self.f

    def to_json(self) -> dict:
        return {"p": self.p, "e": self.e, "f": self.f}

    @classmethod
    def from_json(cls, obj: dict) -> "FieldParams":
        return cls(int(obj["p"]), int(obj.get("e", 1)), int(obj.get("f", 1)))


def vp_rational(x: Fraction | int, p: int) -> int | float:
    x = Fraction(x)
    if x == 0:
        return INF
    v = 0
    num, den = x.numerator, x.denominator
    while num % p == 0:
        num //= p
        v += 1
    while den % p == 0:
        den //= p
        v -= 1
    return v


def fraction_to_str(x: Fraction | int) -> str:
    x = Fraction(x)
    return f"{x.numerator}/{x.denominator}"


def fraction_from_str(s: str | int) -> Fraction:
    return Fraction(s) if not isinstance(s, str) else Fraction(s.strip())


class PiScalar:
    """Element c_0 + c_1 pi + ... + c_{e-1} pi^{e-1} of Q(pi), pi^e = p."""

    __slots__ = ("p", "e", "coeffs")

    def __init__(self, coeffs: Iterable[Fraction | int], p: int, e: int = 1) -> None:
        cs = [Fraction(c) for c in coeffs]
        # fold higher powers using pi^e = p
        red = [Fraction(0)] * e
        for k, c in enumerate(cs):
            q, r = divmod(k, e)
            red[r] += c * p**q
        object.__setattr__(self, "p", p)
        object.__setattr__(self, "e", e)
        object.__setattr__(self, "coeffs", tuple(red))

    def __setattr__(self, name: str, value: Any) -> None:
        raise AttributeError("PiScalar is immutable")

    @classmethod
    def of(cls, x: Fraction | int, p: int, e: int = 1) -> "PiScalar":
        return cls([x], p, e)

    @classmethod
    def pi_power(cls, k: int, p: int, e: int = 1, coeff: Fraction | int = 1) -> "PiScalar":
        q, r = divmod(k, e)
        cs = [Fraction(0)] * e
        cs[r] = Fraction(coeff) * Fraction(p) ** q
        return cls(cs, p, e)

    def _coerce(self, other: Any) -> "PiScalar":
        if isinstance(other, PiScalar):
            if (other.p, other.e) != (self.p, self.e):
                raise ValueError("mixing scalars from different fields")
            return other
        if isinstance(other, (int, Fraction)):
            return PiScalar([other], self.p, self.e)
        return NotImplemented  # type: ignore[return-value]

    def __add__(self, other: Any) -> "PiScalar":
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return PiScalar([a + b for a, b in zip(self.coeffs, o.coeffs)], self.p, self.e)

    __radd__ = __add__

    def __neg__(self) -> "PiScalar":
        return PiScalar([-a for a in self.coeffs], self.p, self.e)

    def __sub__(self, other: Any) -> "PiScalar":
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other: Any) -> "PiScalar":
        return (-self) + other

    def __mul__(self, other: Any) -> "PiScalar":
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        prod = [Fraction(0)] * (2 * self.e - 1)
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(o.coeffs):
                    if b:
                        prod[i + j] += a * b
        return PiScalar(prod, self.p, self.e)

    __rmul__ = __mul__

    def _mult_matrix(self) -> list[list[Fraction]]:
        cols = []
        for k in range(self.e):
            cols.append(list((self * PiScalar.pi_power(k, self.p, self.e)).coeffs))
        return linalg.columns_to_matrix(cols, self.e)

    def inverse(self) -> "PiScalar":
        if self.is_zero():
            raise ZeroDivisionError("division by zero in Q(pi)")
        rhs = [Fraction(int(k == 0)) for k in range(self.e)]
        sol = linalg.solve(self._mult_matrix(), rhs)
        assert sol is not None
        return PiScalar(sol, self.p, self.e)

    def __truediv__(self, other: Any) -> "PiScalar":
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return self * o.inverse()

    def __rtruediv__(self, other: Any) -> "PiScalar":
        return self._coerce(other) * self.inverse()

    def __pow__(self, k: int) -> "PiScalar":
        if k < 0:
            return self.inverse() ** (-k)
        out = PiScalar([1], self.p, self.e)
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def __eq__(self, other: Any) -> bool:
        if isinstance(other, (int, Fraction)):
            return self.coeffs[0] == other and not any(self.coeffs[1:])
        if isinstance(other, PiScalar):
            return (self.p, self.e, self.coeffs) == (other.p, other.e, other.coeffs)
        return NotImplemented

    def __ne__(self, other: Any) -> bool:
        eq = self.__eq__(other)
        return eq if eq is NotImplemented else not eq

    def __hash__(self) -> int:
        return hash((self.p, self.e, self.coeffs))

    def __repr__(self) -> str:
        terms = [f"{c}*pi^{k}" for k, c in enumerate(self.coeffs) if c]
        return f"PiScalar({' + '.join(terms) or '0'}; p={self.p}, e={self.e})"

    def to_json(self) -> list[str]:
        return [fraction_to_str(c) for c in self.coeffs]

    @classmethod
    def from_json(cls, obj: Sequence[str], p: int, e: int) -> "PiScalar":
        if len(obj) > e:
            raise ValueError(f"expected at most {e} coefficients, got {len(obj)}")
        return cls([fraction_from_str(c) for c in obj], p, e)


def val_p(x: PiScalar | Fraction | int, p: int | None = None) -> Fraction | float:
    """p-adic valuation normalised by val(p) = 1; +inf for zero."""
    if not isinstance(x, PiScalar):
        if p is None:
            raise ValueError("p required for rational input")
        v = vp_rational(x, p)
        return v if v == INF else Fraction(v)
    best: Fraction | float = INF
    for k, c in enumerate(x.coeffs):
        if c:
            v = Fraction(vp_rational(c, x.p)) + Fraction(k, x.e)
            if v < best:
                best = v
    return best


@dataclass(frozen=True)
class ScalarMatrix:
    """Immutable rectangular grid of PiScalar entries."""

    p: int
    e: int
    entries: tuple[tuple[PiScalar, ...], ...]

    @property
    def rows(self) -> int:
        return len(self.entries)

    @property
    def cols(self) -> int:
        return len(self.entries[0]) if self.entries else 0

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[Any]], p: int, e: int = 1) -> "ScalarMatrix":
        conv = []
        width = len(rows[0]) if rows else 0
        for r in rows:
            if len(r) != width:
                raise ValueError("ragged matrix")
            conv.append(tuple(x if isinstance(x, PiScalar) else PiScalar.of(x, p, e) for x in r))
        return cls(p, e, tuple(conv))

    @classmethod
    def zero(cls, n: int, m: int, p: int, e: int = 1) -> "ScalarMatrix":
        z = PiScalar.of(0, p, e)
        return cls(p, e, tuple(tuple(z for _ in range(m)) for _ in range(n)))

    @classmethod
    def identity(cls, n: int, p: int, e: int = 1) -> "ScalarMatrix":
        return cls.from_rows([[int(i == j) for j in range(n)] for i in range(n)], p, e)

    def to_lists(self) -> list[list[PiScalar]]:
        return [list(r) for r in self.entries]

    def __getitem__(self, ij: tuple[int, int]) -> PiScalar:
        return self.entries[ij[0]][ij[1]]

    def __matmul__(self, other: "ScalarMatrix") -> "ScalarMatrix":
        return ScalarMatrix.from_rows(linalg.matmul(self.to_lists(), other.to_lists()), self.p, self.e)

    def __pow__(self, k: int) -> "ScalarMatrix":
        one = PiScalar.of(1, self.p, self.e)
        return ScalarMatrix.from_rows(
            linalg.matpow(self.to_lists(), k, one * 0, one), self.p, self.e
        )

    def submatrix(self, idx: Sequence[int]) -> "ScalarMatrix":
        return ScalarMatrix(self.p, self.e, tuple(tuple(self.entries[i][j] for j in idx) for i in idx))

    def det(self) -> PiScalar:
        if self.rows != self.cols:
            raise ValueError("determinant of a non-square matrix")
        if self.rows == 0:
            return PiScalar.of(1, self.p, self.e)
        return linalg.bareiss_det(self.to_lists())

    def charpoly(self) -> list[PiScalar]:
        if self.rows == 0:
            return [PiScalar.of(1, self.p, self.e)]
        return linalg.charpoly(self.to_lists())

    def to_json(self) -> list[list[list[str]]]:
        return [[x.to_json() for x in r] for r in self.entries]

    @classmethod
    def from_json(cls, obj: Sequence[Sequence[Sequence[str]]], p: int, e: int) -> "ScalarMatrix":
        return cls.from_rows([[PiScalar.from_json(x, p, e) for x in r] for r in obj], p, e)


class NonBijectiveFrobenius(ValueError):
    pass


def newton_polygon_slopes(coeffs: Sequence[PiScalar]) -> list[Fraction]:
    """Root valuations (with multiplicity) of a polynomial c_0 + ... + c_n x^n."""
    pts = [(i, val_p(c)) for i, c in enumerate(coeffs) if not c.is_zero()]
    if not pts or pts[0][0] != 0:
        raise NonBijectiveFrobenius("non-bijective Frobenius")
    hull = [pts[0]]
    for pt in pts[1:]:
        while len(hull) >= 2:
            (x1, y1), (x2, y2) = hull[-2], hull[-1]
            # drop the middle point when it lies on or above the chord
            if (y2 - y1) * (pt[0] - x1) >= (pt[1] - y1) * (x2 - x1):
                hull.pop()
            else:
                break
        hull.append(pt)
    out: list[Fraction] = []
    for (x1, y1), (x2, y2) in zip(hull, hull[1:]):
        slope = -Fraction(y2 - y1) / (x2 - x1)
        out.extend([slope] * (x2 - x1))
    return sorted(out)


def newton_slopes(a: ScalarMatrix, iterate: int = 1) -> list[Fraction]:
    """Slopes of the Newton polygon of charpoly(a**iterate), divided by iterate."""
    if a.rows != a.cols:
        raise ValueError("Frobenius matrix must be square")
    if iterate < 1:
        raise ValueError("iterate must be positive")
    if a.det().is_zero():
        raise NonBijectiveFrobenius("non-bijective Frobenius")
    poly = (a**iterate).charpoly()
    return [s / iterate for s in newton_polygon_slopes(poly)]
