"""Finite models of the weight double complex and the monodromy operator.

A :class:`LogToyDatum` is a finite cochain complex ``omega_tilde`` with a
degree-one map ``theta`` (wedge with dlog of the uniformizer) and a weight
grading on its basis; ``P_j`` is the span of basis vectors of weight <= j.
From it we build

* the quotient complex ``omega = omega_tilde / theta omega_tilde``,
* the double complex ``A^{ij} = omega_tilde^{i+j+1} / P_j``,
* the operator ``nu`` of bidegree (-1, 1),
* the connecting map ``N`` of ``0 -> omega[-1] -> omega_tilde -> omega -> 0``.

Cech data are assembled over a finite simplicial complex whose simplices
carry integral affine lifts: every stratum contributes the exterior algebra
on ``x_1..x_g`` and ``theta`` with zero local differential, and restriction
from a face to a larger simplex sends ``x_m`` to ``x_m - lambda_m theta`` where
``lambda`` is the difference of the two lifts.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping, Sequence

from . import linalg
from .building import BuildingComplex, abstract_complex, cycle_graph
from .residue import LogForm, residue, wedge
from .scalars import fraction_from_str, fraction_to_str

Matrix = list[list[Fraction]]


class DatumError(ValueError):
    pass


class MissingStratificationError(DatumError):
    pass


def _zeros(r: int, c: int) -> Matrix:
    return [[Fraction(0)] * c for _ in range(r)]


def _mat(m: Matrix, r: int, c: int) -> Matrix:
    return m if r and c else _zeros(r, c)


def _compose(a: Matrix, b: Matrix, r: int, c: int) -> Matrix:
    if not r or not c or not b or not a or not a[0]:
        return _zeros(r, c)
    return linalg.matmul(a, b)


def _apply(a: Matrix, v: Sequence[Fraction], rows: int) -> list[Fraction]:
    if not rows:
        return []
    if not v:
        return [Fraction(0)] * rows
    return linalg.matvec(a, list(v))


def _kernel(a: Matrix, ncols: int) -> list[list[Fraction]]:
    if ncols == 0:
        return []
    if not a or linalg.is_zero(a):
        return [[Fraction(int(i == j)) for i in range(ncols)] for j in range(ncols)]
    return linalg.nullspace(a)


def _image(a: Matrix, nrows: int) -> list[list[Fraction]]:
    if nrows == 0 or not a or not a[0] or linalg.is_zero(a):
        return []
    return linalg.image_of(a)


# -- generic linear algebra of complexes --------------------------------------------------


@dataclass
class QuotientChart:
    """Coordinates on V / S: ``project`` maps V to the quotient, ``lift`` is a section."""

    ambient: int
    project: Matrix
    lift: Matrix

    @property
    def dim(self) -> int:
        return len(self.project)

    @classmethod
    def of(cls, ambient: int, sub: Sequence[Sequence[Fraction]]) -> "QuotientChart":
        sub = linalg.span_basis(sub, ambient) if sub else []
        units = [[Fraction(int(i == k)) for i in range(ambient)] for k in range(ambient)]
        pivots = linalg.independent_subset(list(sub) + units, ambient) if ambient else []
        comp = [k - len(sub) for k in pivots if k >= len(sub)]
        frame = list(sub) + [units[k] for k in comp]
        if not ambient:
            return cls(0, [], [])
        inv = linalg.inverse(linalg.columns_to_matrix(frame, ambient))
        project = inv[len(sub):]
        lift = linalg.columns_to_matrix([units[k] for k in comp], ambient)
        return cls(ambient, project, lift)


@dataclass
class Cohomology:
    """H = ker(d_next) / im(d_prev) with explicit representative cocycles."""

    dim_space: int
    boundaries: list[list[Fraction]]
    reps: list[list[Fraction]]

    @classmethod
    def of(cls, n: int, d_prev: Matrix | None, prev_dim: int, d_next: Matrix | None) -> "Cohomology":
        cocycles = _kernel(d_next, n) if d_next is not None else _kernel([], n)
        bounds = _image(d_prev, n) if d_prev is not None and prev_dim else []
        if not cocycles:
            return cls(n, bounds, [])
        pivots = linalg.independent_subset(bounds + cocycles, n)
        reps = [cocycles[k - len(bounds)] for k in pivots if k >= len(bounds)]
        return cls(n, bounds, reps)

    @property
    def dim(self) -> int:
        return len(self.reps)

    def coords(self, z: Sequence[Fraction]) -> list[Fraction]:
        if not self.reps:
            return []
        if not hasattr(self, "_solver"):
            self._solver = linalg.left_inverse(self.boundaries + self.reps, self.dim_space)
        rows, inv = self._solver
        sol = linalg.matvec(inv, [z[i] for i in rows])
        frame = self.boundaries + self.reps
        recon = [sum((c * f[i] for c, f in zip(sol, frame) if c), Fraction(0)) for i in range(self.dim_space)]
        if recon != list(z):
            raise DatumError("vector is not a cocycle")
        return sol[len(self.boundaries):]


def _induced(h_src: Cohomology, h_tgt: Cohomology, fn) -> Matrix:
    cols = [h_tgt.coords(fn(z)) for z in h_src.reps]
    return linalg.columns_to_matrix(cols, h_tgt.dim) if cols else _zeros(h_tgt.dim, 0)


# -- data ----------------------------------------------------------------------------------


@dataclass
class CechShadow:
    """Stratification data: simplices with integral lifts and basis labels."""

    complex: BuildingComplex
    ngens: int
    lifts: dict[tuple, dict[object, tuple[int, ...]]]
    labels: list[list[tuple]]  # per degree: (cech_degree, simplex, S, e, coefficient index)
    coeff_dim: int = 1

    def translation(self, tau: tuple, sigma: tuple) -> tuple[int, ...]:
        diffs = {tuple(a - b for a, b in zip(self.lifts[sigma][v], self.lifts[tau][v])) for v in tau}
        if len(diffs) != 1:
            raise DatumError(f"lifts of {tau} and {sigma} do not differ by a translation")
        return diffs.pop()


@dataclass
class LogToyDatum:
    dims: list[int]
    dtil: list[Matrix]
    theta: list[Matrix]
    weights: list[list[int]]
    cech: CechShadow | None = None
    name: str = "datum"

    @property
    def top(self) -> int:
        return len(self.dims) - 1

    def dim(self, k: int) -> int:
        return self.dims[k] if 0 <= k < len(self.dims) else 0

    def dmap(self, k: int) -> Matrix:
        return self.dtil[k] if 0 <= k < len(self.dtil) else _zeros(self.dim(k + 1), self.dim(k))

    def tmap(self, k: int) -> Matrix:
        return self.theta[k] if 0 <= k < len(self.theta) else _zeros(self.dim(k + 1), self.dim(k))

    def p_indices(self, k: int, j: int) -> list[int]:
        return [a for a, w in enumerate(self.weights[k]) if w <= j] if 0 <= k <= self.top else []

    def validate(self) -> None:
        """Raise :class:`DatumError` naming the first violated invariant."""
        for k in range(self.top):
            for name, m in (("dtil", self.dmap(k)), ("theta", self.tmap(k))):
                if self.dim(k) and self.dim(k + 1) and (len(m) != self.dim(k + 1) or len(m[0]) != self.dim(k)):
                    raise DatumError(f"{name}[{k}] has the wrong shape")
        for k in range(self.top - 1):
            r, c = self.dim(k + 2), self.dim(k)
            if not linalg.is_zero(_compose(self.dmap(k + 1), self.dmap(k), r, c)):
                raise DatumError("dtil o dtil != 0")
            if not linalg.is_zero(_compose(self.tmap(k + 1), self.tmap(k), r, c)):
                raise DatumError("theta o theta != 0")
            lhs = _compose(self.dmap(k + 1), self.tmap(k), r, c)
            rhs = _compose(self.tmap(k + 1), self.dmap(k), r, c)
            if lhs != rhs:
                raise DatumError("dtil does not commute with theta")
        for k in range(self.top):
            for a, w in enumerate(self.weights[k]):
                for b in range(self.dim(k + 1)):
                    if self.dmap(k)[b][a] and self.weights[k + 1][b] > w:
                        raise DatumError("dtil does not preserve the weight subspaces P_j")
                    if self.tmap(k)[b][a] and self.weights[k + 1][b] > w + 1:
                        raise DatumError("theta does not map P_j into P_(j+1)")
        # exactness of theta makes omega[-1] -> omega_tilde injective
        for k in range(1, self.top + 1):
            ker = _kernel(self.tmap(k), self.dim(k)) if k < self.top else _kernel([], self.dim(k))
            im = _image(self.tmap(k - 1), self.dim(k))
            if len(ker) != len(im):
                raise DatumError("theta is not exact, so omega[-1] -> omega_tilde is not injective")

    def to_json(self) -> dict:
        if self.cech is not None:
            cx = self.cech.complex
            return {
                "kind": "cech",
                "name": self.name,
                "ngens": self.cech.ngens,
                "coeff_dim": self.cech.coeff_dim,
                "d": cx.d,
                "simplices": [list(s) for k in sorted(cx.simplices) for s in cx.simplices[k]],
                "lifts": [
                    {"simplex": list(s), "lift": [list(self.cech.lifts[s][v]) for v in s]}
                    for k in sorted(cx.simplices) for s in cx.simplices[k]
                ],
            }
        return {
            "kind": "explicit",
            "name": self.name,
            "dims": self.dims,
            "dtil": [[[fraction_to_str(x) for x in row] for row in m] for m in self.dtil],
            "theta": [[[fraction_to_str(x) for x in row] for row in m] for m in self.theta],
            "weights": self.weights,
        }

    @classmethod
    def from_json(cls, obj: Mapping) -> "LogToyDatum":
        kind = obj.get("kind", "explicit")
        if kind == "cech":
            d = int(obj["d"])
            simplices = [tuple(s) for s in obj["simplices"]]
            cx = abstract_complex(d, simplices)
            lifts = {tuple(e["simplex"]): {v: tuple(x) for v, x in zip(e["simplex"], e["lift"])} for e in obj["lifts"]}
            return cech_datum(cx, int(obj["ngens"]), lifts, name=obj.get("name", "datum"),
                              coeff_dim=int(obj.get("coeff_dim", 1)))
        conv = lambda m: [[fraction_from_str(x) for x in row] for row in m]  # noqa: E731
        datum = cls(
            [int(x) for x in obj["dims"]],
            [conv(m) for m in obj["dtil"]],
            [conv(m) for m in obj["theta"]],
            [list(map(int, w)) for w in obj["weights"]],
            name=obj.get("name", "datum"),
        )
        datum.validate()
        return datum


# -- exterior algebra shadows ---------------------------------------------------------------


def _local_basis(ngens: int) -> list[tuple[tuple[int, ...], int]]:
    out = []
    for k in range(ngens + 1):
        for s in itertools.combinations(range(1, ngens + 1), k):
            out.extend([(s, 0), (s, 1)])
    return out


def _restrict_monomial(s: tuple[int, ...], e: int, shift: Sequence[int]) -> dict[tuple[tuple[int, ...], int], int]:
    """Image of x_S theta^e under x_m -> x_m - shift_m theta (theta written last)."""
    out = {(s, e): 1}
    if e == 1:
        return out
    k = len(s)
    for pos, m in enumerate(s):
        lam = shift[m - 1]
        if lam:
            rest = s[:pos] + s[pos + 1:]
            # move theta from slot pos past the k - pos - 1 later factors
            out[(rest, 1)] = out.get((rest, 1), 0) - lam * (-1) ** (k - pos - 1)
    return out


def cech_datum(cx: BuildingComplex, ngens: int, lifts: Mapping[tuple, Mapping[object, Sequence[int]]],
               name: str = "cech", coeff_dim: int = 1) -> LogToyDatum:
    """Assemble the Cech datum; coefficients form a constant ``coeff_dim``-dimensional factor on every stratum."""
    if coeff_dim < 1:
        raise DatumError("coeff_dim must be positive")
    lifts = {s: {v: tuple(int(x) for x in vec) for v, vec in lv.items()} for s, lv in lifts.items()}
    for k in cx.simplices:
        for s in cx.simplices[k]:
            if s not in lifts:
                raise DatumError(f"missing lift for simplex {s}")
            if any(len(vec) != ngens for vec in lifts[s].values()):
                raise DatumError(f"lift of {s} must have {ngens} coordinates")
    local = _local_basis(ngens)
    top = cx.d + ngens + 1
    labels: list[list[tuple]] = [[] for _ in range(top + 1)]
    for q in sorted(cx.simplices):
        for s in cx.simplices[q]:
            for mon, e in local:
                for c in range(coeff_dim):
                    labels[q + len(mon) + e].append((q, s, mon, e, c))
    while len(labels) > 1 and not labels[-1]:
        labels.pop()
    shadow = CechShadow(cx, ngens, lifts, labels, coeff_dim)
    index = [{lab: a for a, lab in enumerate(level)} for level in labels]
    dims = [len(level) for level in labels]
    dtil, theta = [], []
    for k in range(len(labels) - 1):
        dm = _zeros(dims[k + 1], dims[k])
        tm = _zeros(dims[k + 1], dims[k])
        for a, (q, s, mon, e, c) in enumerate(labels[k]):
            if e == 0:
                tm[index[k + 1][(q, s, mon, 1, c)]][a] += 1
            for sigma in cx.simplices.get(q + 1, []):
                if not set(s) <= set(sigma):
                    continue
                missing = next(v for v in sigma if v not in s)
                sign = (-1) ** sigma.index(missing)
                shift = shadow.translation(s, sigma)
                for (mon2, e2), coef in _restrict_monomial(mon, e, shift).items():
                    dm[index[k + 1][(q + 1, sigma, mon2, e2, c)]][a] += sign * coef
        dtil.append(dm)
        theta.append(tm)
    weights = [[len(mon) + e for (_, _, mon, e, _) in level] for level in labels]
    datum = LogToyDatum(dims, dtil, theta, weights, shadow, name)
    datum.validate()
    return datum


def annulus_datum(d: int) -> LogToyDatum:
    """A single stratum: the exterior algebra on u_1..u_d and theta."""
    cx = abstract_complex(0, [(0,)])
    return cech_datum(cx, d, {(0,): {0: (0,) * d}}, name=f"annulus-{d}")


def tate_datum(n: int, coeff_dim: int = 1) -> LogToyDatum:
    """Cycle of n projective lines; the closing double point carries the period."""
    cx = cycle_graph(n)
    lifts: dict = {(k,): {k: (k,)} for k in range(n)}
    for k in range(n - 1):
        lifts[(k, k + 1)] = {k: (k,), k + 1: (k + 1,)}
    lifts[(0, n - 1)] = {0: (n,), n - 1: (n - 1,)}
    return cech_datum(cx, 1, lifts, name=f"tate-{n}", coeff_dim=coeff_dim)


def split_datum(n: int) -> LogToyDatum:
    """Cycle of n strata with shadow spanned by 1 and theta only: the sequence splits."""
    cx = cycle_graph(n)
    lifts = {s: {v: () for v in s} for k in cx.simplices for s in cx.simplices[k]}
    return cech_datum(cx, 0, lifts, name=f"split-{n}")


def torus_datum(n: int, m: int, coeff_dim: int = 1) -> LogToyDatum:
    """Triangulated n x m torus, each square cut along its diagonal (d = 2)."""
    if n < 3 or m < 3:
        raise DatumError("torus datum needs n, m >= 3")
    vid = lambda i, j: (i % n) * m + (j % m)  # noqa: E731
    tri_lifts = []
    for i in range(n):
        for j in range(m):
            for corners in (((i, j), (i + 1, j), (i + 1, j + 1)), ((i, j), (i, j + 1), (i + 1, j + 1))):
                tri_lifts.append({vid(*c): c for c in corners})
    cx = abstract_complex(2, [tuple(t) for t in tri_lifts])
    base = {v: (v // m, v % m) for v in range(n * m)}
    lifts: dict = {}
    for t in tri_lifts:
        for k in range(1, 4):
            for face in itertools.combinations(sorted(t), k):
                if face in lifts:
                    continue
                v0 = face[0]
                off = tuple(a - b for a, b in zip(t[v0], base[v0]))
                lifts[face] = {v: tuple(a - b for a, b in zip(t[v], off)) for v in face}
    return cech_datum(cx, 2, lifts, name=f"torus-{n}x{m}", coeff_dim=coeff_dim)


# -- the double complex ------------------------------------------------------------------


@dataclass
class Bicomplex:
    datum: LogToyDatum
    spaces: dict[tuple[int, int], list[int]]  # (i, j) -> basis indices of omega_tilde^(i+j+1)
    horizontal: dict[tuple[int, int], Matrix] = field(default_factory=dict)
    vertical: dict[tuple[int, int], Matrix] = field(default_factory=dict)

    def dim(self, i: int, j: int) -> int:
        return len(self.spaces.get((i, j), []))

    def total_degrees(self) -> list[int]:
        return sorted({i + j for (i, j) in self.spaces}) if self.spaces else []

    def blocks(self, n: int) -> list[tuple[int, int]]:
        return sorted((i, j) for (i, j) in self.spaces if i + j == n)

    def offsets(self, n: int) -> dict[tuple[int, int], int]:
        out, pos = {}, 0
        for b in self.blocks(n):
            out[b] = pos
            pos += self.dim(*b)
        return out

    def total_dim(self, n: int) -> int:
        return sum(self.dim(*b) for b in self.blocks(n))

    def total_differential(self, n: int) -> Matrix:
        src, tgt = self.offsets(n), self.offsets(n + 1)
        out = _zeros(self.total_dim(n + 1), self.total_dim(n))
        for (i, j), off in src.items():
            for key, maps in (((i + 1, j), self.horizontal), ((i, j + 1), self.vertical)):
                if key in tgt and (i, j) in maps:
                    m = maps[(i, j)]
                    for r, row in enumerate(m):
                        for c, x in enumerate(row):
                            if x:
                                out[tgt[key] + r][off + c] += x
        return out

    def nu_matrix(self, n: int) -> Matrix:
        """nu on Tot^n: (-1)^(j+1) times the projection A^{ij} -> A^{(i-1)(j+1)}."""
        offs = self.offsets(n)
        out = _zeros(self.total_dim(n), self.total_dim(n))
        for (i, j), off in offs.items():
            key = (i - 1, j + 1)
            if key not in offs:
                continue
            pos = {a: r for r, a in enumerate(self.spaces[key])}
            for c, a in enumerate(self.spaces[(i, j)]):
                if a in pos:
                    out[offs[key] + pos[a]][off + c] = Fraction((-1) ** (j + 1))
        return out

    def check(self) -> None:
        for n in self.total_degrees():
            dn = self.total_differential(n)
            dn1 = self.total_differential(n + 1)
            if not linalg.is_zero(_compose(dn1, dn, self.total_dim(n + 2), self.total_dim(n))):
                raise DatumError("total differential does not square to zero")


def build_A(datum: LogToyDatum) -> Bicomplex:
    datum.validate()
    spaces = {}
    for k in range(1, datum.top + 1):
        for j in range(k):
            i = k - 1 - j
            idx = [a for a, w in enumerate(datum.weights[k]) if w > j]
            if idx:
                spaces[(i, j)] = idx
    b = Bicomplex(datum, spaces)
    for (i, j), idx in spaces.items():
        k = i + j + 1
        for key, mat, sign, store in (
            ((i + 1, j), datum.dmap(k), (-1) ** j, b.horizontal),
            ((i, j + 1), datum.tmap(k), 1, b.vertical),
        ):
            if key not in spaces:
                continue
            store[(i, j)] = [[Fraction(sign) * mat[r][c] for c in idx] for r in spaces[key]]
    b.check()
    return b


def nu(b: Bicomplex) -> dict[int, Matrix]:
    return {n: b.nu_matrix(n) for n in b.total_degrees()}


# -- cohomology of omega and of Tot A --------------------------------------------------------


@dataclass
class Reduced:
    """The quotient complex omega = omega_tilde / theta omega_tilde."""

    charts: list[QuotientChart]
    diffs: list[Matrix]
    cohomology: list[Cohomology]


def reduced_complex(datum: LogToyDatum) -> Reduced:
    charts = []
    for k in range(datum.top + 1):
        sub = [list(col) for col in zip(*datum.tmap(k - 1))] if k >= 1 and datum.dim(k - 1) else []
        sub = [v for v in sub if any(v)]
        charts.append(QuotientChart.of(datum.dim(k), sub))
    diffs = []
    for k in range(datum.top):
        c0, c1 = charts[k], charts[k + 1]
        if c0.dim and c1.dim:
            diffs.append(linalg.matmul(linalg.matmul(c1.project, datum.dmap(k)), c0.lift))
        else:
            diffs.append(_zeros(c1.dim, c0.dim))
    cohs = []
    for k in range(datum.top + 1):
        prev = diffs[k - 1] if k >= 1 else None
        nxt = diffs[k] if k < datum.top else None
        cohs.append(Cohomology.of(charts[k].dim, prev, charts[k - 1].dim if k >= 1 else 0, nxt))
    return Reduced(charts, diffs, cohs)


def total_cohomology(b: Bicomplex) -> dict[int, Cohomology]:
    out = {}
    degrees = b.total_degrees()
    for n in degrees:
        prev = b.total_differential(n - 1) if (n - 1) in degrees else None
        nxt = b.total_differential(n) if (n + 1) in degrees else None
        out[n] = Cohomology.of(b.total_dim(n), prev, b.total_dim(n - 1), nxt)
    return out


def total_cohomology_dims(datum: LogToyDatum) -> list[int]:
    red = reduced_complex(datum)
    return [h.dim for h in red.cohomology]


def monodromy_via_connecting(datum: LogToyDatum) -> dict[int, Matrix]:
    """N on H^k(omega) by lifting through theta: d(lift x) = y theta, N[x] = [y]."""
    red = reduced_complex(datum)
    out = {}
    for k, h in enumerate(red.cohomology):
        chart = red.charts[k]

        def connect(z, k=k, chart=chart):
            lifted = _apply(chart.lift, z, datum.dim(k))
            w = _apply(datum.dmap(k), lifted, datum.dim(k + 1))
            if not any(w):
                return [Fraction(0)] * chart.dim
            y = linalg.solve(datum.tmap(k), w)
            if y is None:
                raise DatumError("d(lift) is not divisible by theta")
            return _apply(chart.project, y, chart.dim)

        out[k] = _induced(h, h, connect)
    return out


def _comparison(datum: LogToyDatum, b: Bicomplex, red: Reduced, htot: dict[int, Cohomology], k: int):
    """psi: omega^k -> A^{k0}, x -> lift(x) theta, as a map of cochains."""
    chart = red.charts[k]
    offs = b.offsets(k)
    total = b.total_dim(k)

    def psi(z):
        out = [Fraction(0)] * total
        if (k, 0) not in offs:
            return out
        w = _apply(datum.tmap(k), _apply(chart.lift, z, datum.dim(k)), datum.dim(k + 1))
        for r, a in enumerate(b.spaces[(k, 0)]):
            out[offs[(k, 0)] + r] = w[a]
        return out

    return psi


def nu_induced(datum: LogToyDatum) -> dict[int, Matrix]:
    """nu on total cohomology, transported to H(omega) through psi."""
    b = build_A(datum)
    red = reduced_complex(datum)
    htot = total_cohomology(b)
    out = {}
    for k, h in enumerate(red.cohomology):
        if h.dim == 0:
            out[k] = []
            continue
        ht = htot.get(k)
        if ht is None or ht.dim != h.dim:
            raise DatumError(f"psi is not a quasi-isomorphism in degree {k}")
        psi = _comparison(datum, b, red, htot, k)
        phi = _induced(h, ht, psi)
        if linalg.rank(phi) != h.dim:
            raise DatumError(f"psi is not a quasi-isomorphism in degree {k}")
        numat = b.nu_matrix(k)
        nu_tot = _induced(ht, ht, lambda z: linalg.matvec(numat, z))
        out[k] = linalg.matmul(linalg.inverse(phi), linalg.matmul(nu_tot, phi))
    return out


def verify_nu_equals_N(datum: LogToyDatum) -> bool:
    n_conn = monodromy_via_connecting(datum)
    n_nu = nu_induced(datum)
    return all((n_conn[k] or []) == (n_nu[k] or []) for k in n_conn)


def _power(m: Matrix, e: int) -> Matrix:
    if not m:
        return m
    return linalg.matpow(m, e)


def is_nilpotent_of_order(matrices: Mapping[int, Matrix], order: int) -> bool:
    return all(not m or linalg.is_zero(_power(m, order)) for m in matrices.values())


# -- alpha o Res o beta ---------------------------------------------------------------------


def simplex_residue(shadow: CechShadow, sigma: tuple) -> Fraction:
    """Residue at a top stratum of x_1 ^ ... ^ x_d modulo theta.

    In the chart of sigma with vertices s_0..s_d, x_m equals
    sum_i (lift(s_i) - lift(s_0))_m dlog t_{s_i} modulo theta.
    """
    d = shadow.complex.d
    lift = shadow.lifts[sigma]
    w = 1
    form = None
    for m in range(d):
        comps = {}
        for i in range(1, d + 1):
            c = lift[sigma[i]][m] - lift[sigma[0]][m]
            if c:
                comps[(i,)] = c
        x_m = LogForm(d, w, 1, {s: _const(d, w, c) for s, c in comps.items()})
        form = x_m if form is None else wedge(form, x_m)
    return residue(form)


def _const(d: int, w: int, c: int):
    from .residue import LaurentWindow

    return LaurentWindow.constant(d, w, c)


@dataclass
class ResmonoReport:
    ok: bool
    sign: int  # +1 or -1 when N^d != 0, 0 when both sides vanish
    alpha_res_beta: Matrix
    n_power: Matrix


def alpha_res_beta(datum: LogToyDatum) -> Matrix:
    shadow = datum.cech
    if shadow is None:
        raise MissingStratificationError("missing stratification")
    d = shadow.complex.d
    red = reduced_complex(datum)
    h = red.cohomology[d] if d < len(red.cohomology) else None
    if h is None or h.dim == 0:
        return []
    chart = red.charts[d]
    labels = shadow.labels[d]
    index = {lab: a for a, lab in enumerate(labels)}
    full = tuple(range(1, d + 1))
    tops = shadow.complex.simplices.get(d, [])
    residues = {s: simplex_residue(shadow, s) for s in tops} if shadow.ngens == d else {}

    def arb(z):
        lifted = _apply(chart.lift, z, datum.dim(d))
        out = [Fraction(0)] * datum.dim(d)
        for sigma, c in itertools.product(tops, range(shadow.coeff_dim)):
            key = (0, (sigma[0],), full, 0, c)
            if shadow.ngens != d or key not in index:
                continue
            value = lifted[index[key]] * residues[sigma]
            if value:
                out[index[(d, sigma, (), 0, c)]] += value
        return _apply(chart.project, out, chart.dim)

    return _induced(h, h, arb)


def verify_resmono(datum: LogToyDatum, d: int | None = None) -> ResmonoReport:
    if datum.cech is None:
        raise MissingStratificationError("missing stratification")
    d = datum.cech.complex.d if d is None else d
    arb = alpha_res_beta(datum)
    n = monodromy_via_connecting(datum).get(d) or []
    nd = _power(n, d) if n else []
    if not arb and not nd:
        return ResmonoReport(True, 0, arb, nd)
    if linalg.is_zero(nd) and linalg.is_zero(arb):
        return ResmonoReport(True, 0, arb, nd)
    if arb == nd:
        return ResmonoReport(True, 1, arb, nd)
    if arb == linalg.scale(Fraction(-1), nd):
        return ResmonoReport(True, -1, arb, nd)
    return ResmonoReport(False, 0, arb, nd)


# -- spectral sequence bookkeeping ------------------------------------------------------------


def ss_degenerates_by_count(e1_dims: Mapping | Sequence[int], abutment_dims: Sequence[int]) -> bool:
    values = e1_dims.values() if isinstance(e1_dims, Mapping) else e1_dims
    for x in list(values) + list(abutment_dims):
        if int(x) < 0:
            raise ValueError("dimensions must be non-negative")
    return sum(int(x) for x in values) == sum(int(x) for x in abutment_dims)


def cech_e1_dims(datum: LogToyDatum) -> dict[tuple[int, int], int]:
    """E1^{q,m} of the Cech spectral sequence of omega: strata count times local dims."""
    shadow = datum.cech
    if shadow is None:
        raise MissingStratificationError("missing stratification")
    from math import comb

    out = {}
    for q, sims in sorted(shadow.complex.simplices.items()):
        for m in range(shadow.ngens + 1):
            out[(q, m)] = len(sims) * comb(shadow.ngens, m) * shadow.coeff_dim
    return out
