"""Truncated Bruhat-Tits buildings of PGL(d+1) over Q_p and cochains on them.

Vertices are homothety classes of Z_p-lattices in Q_p^(d+1), each stored as
the canonical lower-triangular Hermite form of a primitive basis matrix.
Two classes are adjacent when representatives satisfy pL < L' < L.

Cochains are alternating functions on ordered simplices.  The value on a
pointed simplex (sigma, v) is the value on sigma read in cyclic type order
starting at v; in top degree a one-step rotation therefore multiplies the
value by (-1)^d, which is the sign rule for pointed chambers.
"""

from __future__ import annotations

import itertools
from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

from . import linalg
from .scalars import vp_rational

MAX_D, MAX_P, MAX_RADIUS = 2, 5, 2

LatticeKey = tuple[tuple[int, ...], ...]
Simplex = tuple  # vertices in canonical cyclic order


class TruncationBoundaryError(ValueError):
    pass


# -- lattices -------------------------------------------------------------------------


def _unit_part(x: Fraction, p: int) -> tuple[int, Fraction]:
    v = vp_rational(x, p)
    return int(v), x / Fraction(p) ** v


def _mod_pk(x: Fraction, p: int, k: int) -> int:
    """Residue of a p-integral rational modulo p^k, in [0, p^k)."""
    mod = p**k
    return (x.numerator * pow(x.denominator, -1, mod)) % mod


def canonical_lattice(basis: Sequence[Sequence[Fraction | int]], p: int) -> LatticeKey:
    """Canonical representative of the homothety class spanned by the columns."""
    n = len(basis)
    cols = [[Fraction(basis[i][j]) for i in range(n)] for j in range(len(basis[0]))]
    cols = [c for c in cols if any(c)]
    content = min(vp_rational(x, p) for c in cols for x in c if x)
    scale = Fraction(p) ** (-content)
    cols = [[x * scale for x in c] for c in cols]
    out_cols: list[list[Fraction]] = []
    work = cols
    for row in range(n):
        cands = [(vp_rational(c[row], p), k) for k, c in enumerate(work) if c[row]]
        if not cands:
            raise ValueError("columns do not span a full lattice")
        v, k = min(cands)
        piv = work.pop(k)
        _, unit = _unit_part(piv[row], p)
        piv = [x / unit for x in piv]
        new_work = []
        for c in work:
            if c[row]:
                factor = c[row] / piv[row]
                c = [a - factor * b for a, b in zip(c, piv)]
            if any(c):
                new_work.append(c)
        work = new_work
        out_cols.append(piv)
    # reduce entries left of the diagonal modulo the diagonal entry of their row
    for i in range(n):
        v = vp_rational(out_cols[i][i], p)
        for j in range(i):
            x = out_cols[j][i]
            target = _mod_pk(x, p, int(v)) if v > 0 else 0
            factor = (x - target) / out_cols[i][i]
            out_cols[j] = [a - factor * b for a, b in zip(out_cols[j], out_cols[i])]
    return tuple(tuple(int(out_cols[j][i]) for j in range(n)) for i in range(n))


def lattice_type(key: LatticeKey, p: int) -> int:
    n = len(key)
    v = sum(vp_rational(key[i][i], p) for i in range(n))
    return int(v) % n


def standard_vertex(d: int) -> LatticeKey:
    return tuple(tuple(int(i == j) for j in range(d + 1)) for i in range(d + 1))


def subspaces(n: int, p: int) -> list[list[list[int]]]:
    """All proper non-zero subspaces of F_p^n, each as a list of RREF row vectors."""
    out = []
    for k in range(1, n):
        for pivots in itertools.combinations(range(n), k):
            free_slots = [(r, c) for r, pc in enumerate(pivots) for c in range(pc + 1, n) if c not in pivots]
            for vals in itertools.product(range(p), repeat=len(free_slots)):
                rows = [[0] * n for _ in range(k)]
                for r, pc in enumerate(pivots):
                    rows[r][pc] = 1
                for (r, c), x in zip(free_slots, vals):
                    rows[r][c] = x
                out.append(rows)
    return out


def neighbours(key: LatticeKey, p: int) -> list[LatticeKey]:
    n = len(key)
    base = [[Fraction(x) for x in row] for row in key]
    out = []
    for rows in subspaces(n, p):
        # generators of pL + lift(W), in coordinates of the basis of L
        gens = [list(r) for r in rows] + [[p * int(i == j) for i in range(n)] for j in range(n)]
        cols = [linalg.matvec(base, [Fraction(x) for x in g]) for g in gens]
        out.append(canonical_lattice(linalg.columns_to_matrix(cols, n), p))
    return out


def vertex_distance(key: LatticeKey, p: int) -> int:
    """Graph distance to the standard vertex: spread of the elementary divisor exponents."""
    n = len(key)
    mat = [[Fraction(x) for x in row] for row in key]

    def minor_valuation(k: int) -> int:
        vals = []
        for rows in itertools.combinations(range(n), k):
            for cols in itertools.combinations(range(n), k):
                det = linalg.bareiss_det([[mat[i][j] for j in cols] for i in rows])
                if det:
                    vals.append(vp_rational(det, p))
        return int(min(vals))

    smallest = minor_valuation(1)
    largest = minor_valuation(n) - minor_valuation(n - 1)
    return largest - smallest


# -- complexes -------------------------------------------------------------------------


@dataclass
class BuildingComplex:
    d: int
    vertices: list
    simplices: dict[int, list[Simplex]]
    p: int | None = None
    types: dict = field(default_factory=dict)
    radius: int | None = None

    def cyclic_order(self, simplex: Iterable) -> Simplex:
        verts = list(simplex)
        if self.types:
            return tuple(sorted(verts, key=lambda v: (self.types[v], v)))
        return tuple(sorted(verts))

    def index(self, k: int) -> dict[Simplex, int]:
        return {s: i for i, s in enumerate(self.simplices.get(k, []))}

    def pointed(self, k: int) -> list[tuple[Simplex, object]]:
        return [(s, v) for s in self.simplices.get(k, []) for v in s]

    def cofaces(self, tau: Simplex) -> list[Simplex]:
        ts = set(tau)
        return [s for s in self.simplices.get(len(tau), []) if ts <= set(s)]

    def counts(self) -> dict[int, int]:
        return {k: len(v) for k, v in sorted(self.simplices.items())}

    def to_json(self) -> dict:
        def enc(v):
            return [list(r) for r in v] if isinstance(v, tuple) and v and isinstance(v[0], tuple) else v

        return {"d": self.d, "p": self.p,
                "simplices": {str(k): [[enc(v) for v in s] for s in ss] for k, ss in self.simplices.items()}}


def _closure(d: int, maximal: Iterable[Sequence], order) -> dict[int, list[Simplex]]:
    found: dict[int, set] = {k: set() for k in range(d + 1)}
    for s in maximal:
        s = tuple(s)
        for k in range(1, len(s) + 1):
            for face in itertools.combinations(s, k):
                found[k - 1].add(order(face))
    return {k: sorted(v) for k, v in found.items()}


def abstract_complex(d: int, maximal: Iterable[Sequence[int]]) -> BuildingComplex:
    """Finite complex from its maximal simplices (cyclic order = sorted order)."""
    simp = _closure(d, maximal, lambda f: tuple(sorted(f)))
    return BuildingComplex(d, [v[0] for v in simp[0]], simp)


def cycle_graph(n: int) -> BuildingComplex:
    if n < 3:
        raise ValueError("cycle graphs need at least 3 vertices")
    return abstract_complex(1, [(i, (i + 1) % n) for i in range(n)])


def path_graph(n: int) -> BuildingComplex:
    return abstract_complex(1, [(i, i + 1) for i in range(n - 1)])


def _freeze(x):
    return tuple(_freeze(y) for y in x) if isinstance(x, list) else x


def complex_from_json(obj: dict) -> BuildingComplex:
    d = int(obj["d"])
    simp = obj["simplices"]
    maximal = simp[str(d)] if isinstance(simp, dict) else simp
    return abstract_complex(d, [tuple(_freeze(v) for v in s) for s in maximal])


def ball(d: int, p: int, radius: int) -> BuildingComplex:
    if not (1 <= d <= MAX_D and p <= MAX_P and 0 <= radius <= MAX_RADIUS):
        raise ValueError(f"ball bounds exceeded: need 1 <= d <= {MAX_D}, p <= {MAX_P}, radius <= {MAX_RADIUS}")
    if not all(p % q for q in range(2, p)) or p < 2:
        raise ValueError(f"p = {p} is not prime")
    start = standard_vertex(d)
    dist = {start: 0}
    nbrs: dict[LatticeKey, list[LatticeKey]] = {}
    queue = deque([start])
    while queue:
        v = queue.popleft()
        nbrs[v] = neighbours(v, p)
        if dist[v] == radius:
            continue
        for w in nbrs[v]:
            if w not in dist:
                dist[w] = dist[v] + 1
                queue.append(w)
    for v in dist:
        if v not in nbrs:
            nbrs[v] = neighbours(v, p)
    verts = sorted(dist)
    vset = set(verts)
    adj = {v: {w for w in nbrs[v] if w in vset} for v in verts}
    types = {v: lattice_type(v, p) for v in verts}
    simplices: dict[int, list] = {0: [(v,) for v in verts]}
    order = lambda s: tuple(sorted(s, key=lambda v: (types[v], v)))  # noqa: E731
    current = [frozenset([v]) for v in verts]
    for k in range(1, d + 1):
        nxt = set()
        for s in current:
            common = set.intersection(*(adj[v] for v in s))
            for w in common:
                nxt.add(s | {w})
        current = sorted(nxt, key=lambda s: sorted(s))
        simplices[k] = sorted(order(s) for s in current)
    return BuildingComplex(d, verts, simplices, p, types, radius)


# -- cochains -------------------------------------------------------------------------


@dataclass
class Cochain:
    """Alternating cochain: one vector per simplex in its canonical cyclic order."""

    degree: int
    coeff_dim: int
    values: dict[Simplex, list[Fraction]]

    def value(self, simplex: Simplex) -> list[Fraction]:
        return self.values.get(simplex, [Fraction(0)] * self.coeff_dim)

    def flat(self, complex_: BuildingComplex) -> list[Fraction]:
        out: list[Fraction] = []
        for s in complex_.simplices.get(self.degree, []):
            out.extend(self.value(s))
        return out

    @classmethod
    def from_flat(cls, complex_: BuildingComplex, degree: int, vec: Sequence[Fraction], coeff_dim: int = 1) -> "Cochain":
        sims = complex_.simplices.get(degree, [])
        vals = {s: [Fraction(x) for x in vec[k * coeff_dim:(k + 1) * coeff_dim]] for k, s in enumerate(sims)}
        return cls(degree, coeff_dim, vals)

    @classmethod
    def zero(cls, complex_: BuildingComplex, degree: int, coeff_dim: int = 1) -> "Cochain":
        return cls(degree, coeff_dim, {})

    @classmethod
    def from_pointed(cls, complex_: BuildingComplex, degree: int,
                     pointed_values: dict[tuple[Simplex, object], Sequence[Fraction] | Fraction | int],
                     coeff_dim: int = 1) -> "Cochain":
        """Build from values on pointed simplices, enforcing the rotation sign rule."""
        vals: dict[Simplex, list[Fraction]] = {}
        for (s, v), x in pointed_values.items():
            s = complex_.cyclic_order(s)
            vec = [Fraction(y) for y in (x if isinstance(x, (list, tuple)) else [x])]
            sign = rotation_sign(s, v, degree)
            canon = [sign * y for y in vec]
            if s in vals and vals[s] != canon:
                raise ValueError(f"pointed values on {s} violate the rotation sign rule")
            vals[s] = canon
        return cls(degree, coeff_dim, vals)

    def pointed_value(self, complex_: BuildingComplex, simplex: Iterable, v: object) -> list[Fraction]:
        s = complex_.cyclic_order(simplex)
        sign = rotation_sign(s, v, self.degree)
        return [sign * x for x in self.value(s)]


def rotation_sign(ordered: Simplex, v: object, degree: int) -> int:
    """Sign of the rotation taking the canonical order to the one starting at v."""
    k = ordered.index(v)
    return (-1) ** (degree * k)


def coboundary_matrix(complex_: BuildingComplex, degree: int, coeff_dim: int = 1) -> list[list[Fraction]]:
    """Matrix of C^degree -> C^(degree+1) on flat coordinates."""
    src = complex_.index(degree)
    tgt = complex_.simplices.get(degree + 1, [])
    rows = []
    for s in tgt:
        row = [Fraction(0)] * (len(src) * coeff_dim)
        for k in range(len(s)):
            face = s[:k] + s[k + 1:]
            # faces of a cyclically ordered tuple keep the inherited order, but the
            # canonical order of the face may be a rotation of it
            canon = complex_.cyclic_order(face)
            sign = (-1) ** k * _perm_sign_between(face, canon)
            col = src[canon]
            for c in range(coeff_dim):
                row[col * coeff_dim + c] += sign
        for c in range(coeff_dim):
            rows.append([x if (idx % coeff_dim) == c else Fraction(0) for idx, x in enumerate(row)])
    return rows


def _perm_sign_between(a: Sequence, b: Sequence) -> int:
    pos = {v: i for i, v in enumerate(b)}
    perm = [pos[v] for v in a]
    sign = 1
    for i in range(len(perm)):
        for j in range(i + 1, len(perm)):
            if perm[i] > perm[j]:
                sign = -sign
    return sign


def coboundary(c: Cochain, complex_: BuildingComplex) -> Cochain:
    if c.degree >= complex_.d:
        raise ValueError(f"coboundary of a degree-{c.degree} cochain overflows dimension {complex_.d}")
    mat = coboundary_matrix(complex_, c.degree, c.coeff_dim)
    vec = linalg.matvec(mat, c.flat(complex_)) if mat else []
    return Cochain.from_flat(complex_, c.degree + 1, vec, c.coeff_dim)


def interior_faces(complex_: BuildingComplex) -> list[Simplex]:
    """(d-1)-simplices with the full set of p+1 chambers in the truncation."""
    if complex_.p is None:
        return list(complex_.simplices.get(complex_.d - 1, []))
    full = complex_.p + 1
    return [t for t in complex_.simplices.get(complex_.d - 1, []) if len(complex_.cofaces(t)) == full]


def is_harmonic(f: Cochain, complex_: BuildingComplex, faces: Sequence[Simplex] | None = None) -> bool:
    """Sum over chambers through each pointed codimension-one face must vanish."""
    d = complex_.d
    if f.degree != d:
        raise ValueError("harmonicity is a condition on top-degree cochains")
    taus = list(complex_.simplices.get(d - 1, [])) if faces is None else [complex_.cyclic_order(t) for t in faces]
    if complex_.p is not None:
        for t in taus:
            if len(complex_.cofaces(t)) != complex_.p + 1:
                raise TruncationBoundaryError("truncation boundary; restrict to interior")
    for t in taus:
        for v in t:
            total = [Fraction(0)] * f.coeff_dim
            for s in complex_.cofaces(t):
                total = [a + b for a, b in zip(total, f.pointed_value(complex_, s, v))]
            if any(total):
                return False
    return True


# -- Hodge decomposition ------------------------------------------------------------------


def _positive_definite(g: list[list[Fraction]]) -> bool:
    return all(linalg.bareiss_det([row[:k] for row in g[:k]]) > 0 for k in range(1, len(g) + 1))


@dataclass
class HodgeDecomposition:
    harmonic: list[list[Fraction]]
    exact: list[list[Fraction]]
    ambient_dim: int

    def is_direct_sum(self) -> bool:
        both = self.harmonic + self.exact
        return len(both) == self.ambient_dim and linalg.rank(both) == self.ambient_dim if both else self.ambient_dim == 0


def hodge_decompose(complex_: BuildingComplex, inner_product: list[list[Fraction]] | None = None,
                    coeff_dim: int = 1) -> HodgeDecomposition:
    """C^d = harmonic (kernel of the adjoint coboundary) + image of the coboundary."""
    d = complex_.d
    n = len(complex_.simplices.get(d, [])) * coeff_dim
    g = inner_product if inner_product is not None else linalg.identity(n)
    if len(g) != n or not _positive_definite([[Fraction(x) for x in r] for r in g]):
        raise ValueError("degenerate inner product")
    dmat = coboundary_matrix(complex_, d - 1, coeff_dim) if d >= 1 else []
    exact = linalg.image_of(dmat) if dmat and dmat[0] else []
    if dmat and dmat[0]:
        adj = linalg.matmul(linalg.transpose(dmat), [[Fraction(x) for x in r] for r in g])
        harmonic = linalg.kernel_of(adj)
    else:
        harmonic = [[Fraction(int(i == j)) for i in range(n)] for j in range(n)]
    return HodgeDecomposition(harmonic, exact, n)


def top_cohomology_basis(complex_: BuildingComplex, coeff_dim: int = 1) -> tuple[list[list[Fraction]], list[int]]:
    """Exact part basis and the coordinate positions giving a complement (quotient chart)."""
    d = complex_.d
    n = len(complex_.simplices.get(d, [])) * coeff_dim
    dmat = coboundary_matrix(complex_, d - 1, coeff_dim)
    exact = linalg.image_of(dmat) if dmat and dmat[0] else []
    units = [[Fraction(int(i == j)) for i in range(n)] for j in range(n)]
    pivots = linalg.independent_subset(exact + units, n)
    complement = [k - len(exact) for k in pivots if k >= len(exact)]
    return exact, complement


def res_gamma_model(complex_: BuildingComplex, harmonic_class: Sequence[Fraction], coeff_dim: int = 1) -> list[Fraction]:
    """Class of a top cochain in C^d / image(coboundary), in a fixed quotient chart."""
    exact, complement = top_cohomology_basis(complex_, coeff_dim)
    n = len(harmonic_class)
    basis = exact + [[Fraction(int(i == k)) for i in range(n)] for k in complement]
    coords = linalg.solve(linalg.columns_to_matrix(basis, n), [Fraction(x) for x in harmonic_class])
    assert coords is not None
    return coords[len(exact):]


def res_gamma_is_bijective(complex_: BuildingComplex, coeff_dim: int = 1) -> bool:
    dec = hodge_decompose(complex_, coeff_dim=coeff_dim)
    images = [res_gamma_model(complex_, h, coeff_dim) for h in dec.harmonic]
    _, complement = top_cohomology_basis(complex_, coeff_dim)
    if len(images) != len(complement):
        return False
    return not images or linalg.rank(images) == len(complement)
