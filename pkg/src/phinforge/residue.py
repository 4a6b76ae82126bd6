"""Laurent windows on a generalized annulus and the top-degree residue.

Functions are finitely supported Laurent polynomials in T_1..T_d with every
exponent bounded by W in absolute value.  Differential forms are written in
the logarithmic frame dlog T_1, ..., dlog T_d, so that d(T^a) is
sum_i a_i T^a dlog T_i and the residue of a top form is its constant term.
Indices of dlog factors are 1-based, as in the notation T_1..T_d.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from .scalars import fraction_from_str, fraction_to_str

Exponent = tuple[int, ...]
Subset = tuple[int, ...]

MAX_D, MAX_W = 3, 6


class WindowError(ValueError):
    pass


@dataclass
class LaurentWindow:
    d: int
    W: int
    coeffs: dict[Exponent, Fraction] = field(default_factory=dict)
    truncated: bool = False

    def __post_init__(self) -> None:
        if self.W < 1:
            raise WindowError("window bound W must be at least 1")
        clean: dict[Exponent, Fraction] = {}
        for a, c in self.coeffs.items():
            a = tuple(int(x) for x in a)
            if len(a) != self.d:
                raise WindowError(f"exponent {a} has the wrong length for d = {self.d}")
            c = Fraction(c)
            if not c:
                continue
            if not self.inside(a):
                self.truncated = True
                continue
            clean[a] = clean.get(a, Fraction(0)) + c
        self.coeffs = {a: c for a, c in clean.items() if c}

    def inside(self, a: Exponent) -> bool:
        return all(abs(x) <= self.W for x in a)

    @classmethod
    def monomial(cls, d: int, W: int, a: Sequence[int], coeff: Fraction | int = 1) -> "LaurentWindow":
        return cls(d, W, {tuple(a): Fraction(coeff)})

    @classmethod
    def constant(cls, d: int, W: int, c: Fraction | int = 1) -> "LaurentWindow":
        return cls.monomial(d, W, (0,) * d, c)

    def is_zero(self) -> bool:
        return not self.coeffs

    def constant_term(self) -> Fraction:
        return self.coeffs.get((0,) * self.d, Fraction(0))

    def __add__(self, other: "LaurentWindow") -> "LaurentWindow":
        out = dict(self.coeffs)
        for a, c in other.coeffs.items():
            out[a] = out.get(a, Fraction(0)) + c
        return LaurentWindow(self.d, self.W, out, self.truncated or other.truncated)

    def __neg__(self) -> "LaurentWindow":
        return self.scale(-1)

    def __sub__(self, other: "LaurentWindow") -> "LaurentWindow":
        return self + (-other)

    def scale(self, c: Fraction | int) -> "LaurentWindow":
        return LaurentWindow(self.d, self.W, {a: c * x for a, x in self.coeffs.items()}, self.truncated)

    def __mul__(self, other: "LaurentWindow") -> "LaurentWindow":
        out: dict[Exponent, Fraction] = {}
        trunc = self.truncated or other.truncated
        for a, x in self.coeffs.items():
            for b, y in other.coeffs.items():
                e = tuple(i + j for i, j in zip(a, b))
                if all(abs(v) <= self.W for v in e):
                    out[e] = out.get(e, Fraction(0)) + x * y
                else:
                    trunc = True
        return LaurentWindow(self.d, self.W, out, trunc)

    def euler(self, i: int) -> "LaurentWindow":
        """T_i d/dT_i (1-based i)."""
        return LaurentWindow(self.d, self.W, {a: a[i - 1] * c for a, c in self.coeffs.items()}, self.truncated)

    def is_power_series(self) -> bool:
        return all(x >= 0 for a in self.coeffs for x in a)

    def series_inverse(self) -> "LaurentWindow":
        """Inverse of a power series with non-zero constant term, truncated to the window."""
        c0 = self.constant_term()
        if not self.is_power_series() or not c0:
            raise WindowError("non-unit power series")
        # 1/eps = (1/c0) * sum_k (-h)^k with h = eps/c0 - 1; h has positive total degree
        h = self.scale(1 / c0) - LaurentWindow.constant(self.d, self.W)
        term = LaurentWindow.constant(self.d, self.W)
        total = LaurentWindow.constant(self.d, self.W)
        for _ in range(self.d * self.W):
            term = (term * h).scale(-1)
            term.truncated = False
            if term.is_zero():
                break
            total = total + term
        return total.scale(1 / c0)

    def power(self, k: int) -> "LaurentWindow":
        base = self if k >= 0 else self.series_inverse()
        out = LaurentWindow.constant(self.d, self.W)
        for _ in range(abs(k)):
            out = out * base
        out.truncated = self.truncated
        return out

    def to_json(self) -> dict:
        return {",".join(map(str, a)): fraction_to_str(c) for a, c in sorted(self.coeffs.items())}

    @classmethod
    def from_json(cls, d: int, W: int, obj: Mapping[str, str]) -> "LaurentWindow":
        coeffs = {tuple(int(x) for x in k.split(",")) if k else (): fraction_from_str(v) for k, v in obj.items()}
        return cls(d, W, coeffs)


def _merge_sign(a: Subset, b: Subset) -> int:
    """Sign of sorting the concatenation a + b (a, b sorted, disjoint)."""
    inv = sum(1 for x in a for y in b if x > y)
    return -1 if inv % 2 else 1


@dataclass
class LogForm:
    """Sum of f_S * dlog T_S over subsets S of {1..d} of size ``degree``."""

    d: int
    W: int
    degree: int
    components: dict[Subset, LaurentWindow] = field(default_factory=dict)

    def __post_init__(self) -> None:
        clean = {}
        for s, f in self.components.items():
            s = tuple(sorted(s))
            if len(s) != self.degree or any(not 1 <= i <= self.d for i in s):
                raise WindowError(f"component {s} does not fit degree {self.degree} in d = {self.d}")
            if s in clean:
                f = clean[s] + f
            clean[s] = f
        self.components = {s: f for s, f in clean.items() if not f.is_zero() or f.truncated}

    @property
    def truncated(self) -> bool:
        return any(f.truncated for f in self.components.values())

    @classmethod
    def zero(cls, d: int, W: int, degree: int) -> "LogForm":
        return cls(d, W, degree, {})

    @classmethod
    def function(cls, f: LaurentWindow) -> "LogForm":
        return cls(f.d, f.W, 0, {(): f})

    @classmethod
    def dlog(cls, d: int, W: int, i: int) -> "LogForm":
        return cls(d, W, 1, {(i,): LaurentWindow.constant(d, W)})

    @classmethod
    def dlog_wedge(cls, d: int, W: int) -> "LogForm":
        return cls(d, W, d, {tuple(range(1, d + 1)): LaurentWindow.constant(d, W)})

    def component(self, s: Iterable[int]) -> LaurentWindow:
        return self.components.get(tuple(sorted(s)), LaurentWindow(self.d, self.W))

    def __add__(self, other: "LogForm") -> "LogForm":
        if other.degree != self.degree:
            raise WindowError("cannot add forms of different degrees")
        comps = dict(self.components)
        for s, f in other.components.items():
            comps[s] = comps[s] + f if s in comps else f
        return LogForm(self.d, self.W, self.degree, comps)

    def scale(self, c: Fraction | int) -> "LogForm":
        return LogForm(self.d, self.W, self.degree, {s: f.scale(c) for s, f in self.components.items()})

    def __sub__(self, other: "LogForm") -> "LogForm":
        return self + other.scale(-1)

    def multiply(self, g: LaurentWindow) -> "LogForm":
        return LogForm(self.d, self.W, self.degree, {s: f * g for s, f in self.components.items()})

    def is_zero(self) -> bool:
        return all(f.is_zero() for f in self.components.values())

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, LogForm):
            return NotImplemented
        return (self.d, self.degree) == (other.d, other.degree) and (self - other).is_zero()

    def to_json(self) -> dict:
        return {
            "d": self.d,
            "W": self.W,
            "degree": self.degree,
            "components": {",".join(map(str, s)): f.to_json() for s, f in sorted(self.components.items())},
        }

    @classmethod
    def from_json(cls, obj: Mapping) -> "LogForm":
        d, W = int(obj["d"]), int(obj["W"])
        comps = {
            tuple(int(x) for x in k.split(",")) if k else (): LaurentWindow.from_json(d, W, v)
            for k, v in obj["components"].items()
        }
        return cls(d, W, int(obj["degree"]), comps)


def wedge(a: LogForm, b: LogForm) -> LogForm:
    out = LogForm.zero(a.d, a.W, a.degree + b.degree)
    for s, f in a.components.items():
        for t, g in b.components.items():
            if set(s) & set(t):
                continue
            merged = tuple(sorted(s + t))
            out = out + LogForm(a.d, a.W, out.degree, {merged: (f * g).scale(_merge_sign(s, t))})
    return out


def dform(omega: LogForm) -> LogForm:
    if omega.degree >= omega.d:
        raise WindowError(f"dform of a degree-{omega.degree} form overflows d = {omega.d}")
    out = LogForm.zero(omega.d, omega.W, omega.degree + 1)
    for s, f in omega.components.items():
        for i in range(1, omega.d + 1):
            if i in s:
                continue
            g = f.euler(i)
            sign = _merge_sign((i,), s)
            out = out + LogForm(omega.d, omega.W, omega.degree + 1, {tuple(sorted(s + (i,))): g.scale(sign)})
    return out


def residue(omega: LogForm) -> Fraction:
    if omega.degree != omega.d:
        raise WindowError("residue is defined on top-degree forms")
    return omega.component(range(1, omega.d + 1)).constant_term()


def residue_vector(forms: Sequence[LogForm]) -> list[Fraction]:
    """Residue of a form with values in a coefficient space, one form per coordinate."""
    return [residue(w) for w in forms]


def dlog_of_unit(eps: LaurentWindow) -> LogForm:
    inv = eps.series_inverse()
    return LogForm(eps.d, eps.W, 1, {(k,): eps.euler(k) * inv for k in range(1, eps.d + 1)})


def twist_coordinates(omega: LogForm, eps: LaurentWindow | Sequence[LaurentWindow]) -> LogForm:
    """Rewrite omega after the substitution T_i -> eps_i * T_i (truncated to the window)."""
    d, W = omega.d, omega.W
    units = [eps] * d if isinstance(eps, LaurentWindow) else list(eps)
    for u in units:
        if not u.is_power_series() or not u.constant_term():
            raise WindowError("non-unit power series")
    new_dlogs = [LogForm.dlog(d, W, i + 1) + dlog_of_unit(u) for i, u in enumerate(units)]
    out = LogForm.zero(d, W, omega.degree)
    for s, f in omega.components.items():
        pulled = LaurentWindow(d, W)
        for a, c in f.coeffs.items():
            factor = LaurentWindow.constant(d, W, c)
            for u, k in zip(units, a):
                if k:
                    factor = factor * u.power(k)
            # multiply by T^a after the series factor so dropped terms stay off the constant term
            shifted = {tuple(x + y for x, y in zip(b, a)): v for b, v in factor.coeffs.items()}
            pulled = pulled + LaurentWindow(d, W, shifted)
        form = LogForm.function(pulled)
        for i in s:
            form = wedge(form, new_dlogs[i - 1])
        out = out + form
    return out


def unit_twist_invariance(eps: LaurentWindow | Sequence[LaurentWindow], omega: LogForm) -> bool:
    return residue(twist_coordinates(omega, eps)) == residue(omega)


def interior_exponents(d: int, W: int) -> list[Exponent]:
    return list(itertools.product(range(-(W - 1), W), repeat=d))


def annulus_top_cohomology_dim(d: int, W: int) -> int:
    """dim of interior top forms modulo exact forms, by exact rank computation."""
    from . import linalg

    if not (1 <= d <= MAX_D and 1 <= W <= MAX_W):
        raise WindowError(f"bounds exceeded: need 1 <= d <= {MAX_D}, 1 <= W <= {MAX_W}")
    interior = interior_exponents(d, W)
    pos = {a: k for k, a in enumerate(interior)}
    top = tuple(range(1, d + 1))
    images = []
    for s in itertools.combinations(range(1, d + 1), d - 1):
        for a in itertools.product(range(-W, W + 1), repeat=d):
            eta = LogForm(d, W, d - 1, {s: LaurentWindow.monomial(d, W, a)})
            f = dform(eta).component(top)
            if f.is_zero() or not all(b in pos for b in f.coeffs):
                continue
            vec = [Fraction(0)] * len(interior)
            for b, c in f.coeffs.items():
                vec[pos[b]] = c
            images.append(vec)
    return len(interior) - (linalg.rank(images) if images else 0)
