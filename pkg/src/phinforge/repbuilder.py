"""Irreducible GL(d+1)-modules cut out of tensor powers by a Young symmetrizer.

The module for a highest weight ``lam`` lives inside the ``r``-th tensor power
of the standard representation (``r`` = sum of ``lam``).  The projector is the
normalised Young symmetrizer of the shape ``(lam_0, ..., lam_{d-1})``.
Because permutations of tensor factors preserve the multiset of indices, the
projector is block diagonal with one block per weight (index content); all
work is done block by block with integer matrices.
"""

from __future__ import annotations

import itertools
import math
import os
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import numpy as np

from . import linalg
from .weights import HighestWeight, r_of, weyl_dimension

DEFAULT_SIZE_BOUND = 4096
SIZE_BOUND_ENV = "PHINFORGE_SIZE_BOUND"

Perm = tuple[int, ...]


class SizeBoundError(ValueError):
    pass


def size_bound() -> int:
    raw = os.environ.get(SIZE_BOUND_ENV)
    return int(raw) if raw else DEFAULT_SIZE_BOUND


def shape_of(lam: HighestWeight) -> list[int]:
    return [x for x in lam.lam[:-1] if x > 0]


def column_major_tableau(shape: Sequence[int]) -> list[list[int]]:
    """Standard filling 0..r-1 going down each column, columns left to right."""
    rows = [[-1] * n for n in shape]
    k = 0
    for c in range(shape[0] if shape else 0):
        for row in rows:
            if c < len(row):
                row[c] = k
                k += 1
    return rows


def _group_of_blocks(blocks: Sequence[Sequence[int]], r: int) -> list[Perm]:
    perms: list[Perm] = []
    choices = [list(itertools.permutations(b)) for b in blocks]
    for combo in itertools.product(*choices):
        img = list(range(r))
        for src, dst in zip(blocks, combo):
            for a, b in zip(src, dst):
                img[a] = b
        perms.append(tuple(img))
    return perms


def _sign(perm: Perm) -> int:
    seen = [False] * len(perm)
    sign = 1
    for i in range(len(perm)):
        if not seen[i]:
            j, length = i, 0
            while not seen[j]:
                seen[j] = True
                j = perm[j]
                length += 1
            if length % 2 == 0:
                sign = -sign
    return sign


def _compose(a: Perm, b: Perm) -> Perm:
    return tuple(a[b[k]] for k in range(len(b)))


def number_of_standard_tableaux(shape: Sequence[int]) -> int:
    r = sum(shape)
    hooks = 1
    for i, row in enumerate(shape):
        for j in range(row):
            arm = row - j - 1
            leg = sum(1 for k in range(i + 1, len(shape)) if shape[k] > j)
            hooks *= arm + leg + 1
    return math.factorial(r) // hooks


def young_symmetrizer(shape: Sequence[int]) -> tuple[dict[Perm, int], Fraction]:
    """Integer element b*a of Q[S_r] and the scalar making it idempotent."""
    r = sum(shape)
    tab = column_major_tableau(shape)
    row_blocks = [row for row in tab if len(row) > 1]
    col_blocks = []
    for c in range(shape[0] if shape else 0):
        col = [row[c] for row in tab if c < len(row)]
        if len(col) > 1:
            col_blocks.append(col)
    rows = _group_of_blocks(row_blocks, r)
    cols = _group_of_blocks(col_blocks, r)
    elem: dict[Perm, int] = {}
    for tau in cols:
        s = _sign(tau)
        for sigma in rows:
            g = _compose(tau, sigma)
            elem[g] = elem.get(g, 0) + s
    scale = Fraction(number_of_standard_tableaux(shape), math.factorial(r)) if r else Fraction(1)
    return elem, scale


def act_on_index(perm: Perm, x: Sequence[int]) -> tuple[int, ...]:
    # left action (g.x)_k = x_{g^{-1}(k)}
    out = [0] * len(x)
    for k, v in enumerate(x):
        out[perm[k]] = v
    return tuple(out)


@dataclass
class WeightBlock:
    content: tuple[int, ...]  # multiplicity of each basis index 0..d
    indices: list[int]  # flat positions in the tensor power
    qmat: np.ndarray  # integer block of the unnormalised symmetrizer
    rank: int
    basis: list[list[Fraction]] = field(default_factory=list)  # columns, block-local

    @property
    def zeros(self) -> int:
        return self.content[0]


@dataclass
class Irrep:
    lam: HighestWeight
    ambient_dim: int
    scale: Fraction
    blocks: list[WeightBlock]

    @property
    def d(self) -> int:
        return self.lam.d

    @property
    def r(self) -> int:
        return r_of(self.lam)

    @property
    def dim(self) -> int:
        return sum(b.rank for b in self.blocks)

    def projector_matrix(self) -> list[list[Fraction]]:
        n = self.ambient_dim
        out = linalg.zeros(n, n)
        for b in self.blocks:
            for a, i in enumerate(b.indices):
                for c, j in enumerate(b.indices):
                    if b.qmat[a, c]:
                        out[i][j] = self.scale * int(b.qmat[a, c])
        return out

    def is_idempotent(self) -> bool:
        num, den = self.scale.numerator, self.scale.denominator
        for b in self.blocks:
            q = b.qmat
            if not np.array_equal(num * (q @ q), den * q):
                return False
        return True

    def apply_projector(self, vec: Sequence[Fraction]) -> list[Fraction]:
        out = [Fraction(0)] * self.ambient_dim
        for b in self.blocks:
            local = [Fraction(vec[i]) for i in b.indices]
            if not any(local):
                continue
            for a, i in enumerate(b.indices):
                acc = Fraction(0)
                for c, x in enumerate(local):
                    if x and b.qmat[a, c]:
                        acc += int(b.qmat[a, c]) * x
                out[i] = self.scale * acc
        return out

    def basis_vectors(self) -> list[list[Fraction]]:
        out = []
        for b in self.blocks:
            for col in b.basis:
                v = [Fraction(0)] * self.ambient_dim
                for i, x in zip(b.indices, col):
                    v[i] = x
                out.append(v)
        return out

    def basis_by_grade(self) -> dict[int, list[list[Fraction]]]:
        out: dict[int, list[list[Fraction]]] = {}
        vecs = iter(self.basis_vectors())
        for b in self.blocks:
            s = self.r - b.zeros
            for _ in b.basis:
                out.setdefault(s, []).append(next(vecs))
        return out


def flat_index(x: Sequence[int], base: int) -> int:
    k = 0
    for v in x:
        k = k * base + v
    return k


def build_irrep(lam: HighestWeight, bound: int | None = None) -> Irrep:
    d, r = lam.d, r_of(lam)
    base = d + 1
    ambient = base**r
    limit = size_bound() if bound is None else bound
    if ambient > limit:
        raise SizeBoundError(
            f"tensor power needs dimension {ambient}, above the size bound {limit} "
            f"(raise it with {SIZE_BOUND_ENV})"
        )
    elem, scale = young_symmetrizer(shape_of(lam))
    if r == 0:
        elem = {(): 1}
    by_content: dict[tuple[int, ...], list[tuple[int, ...]]] = {}
    for x in itertools.product(range(base), repeat=r):
        content = tuple(x.count(i) for i in range(base))
        by_content.setdefault(content, []).append(x)
    blocks = []
    for content in sorted(by_content, key=lambda c: (-c[0], c)):
        xs = by_content[content]
        pos = {x: a for a, x in enumerate(xs)}
        q = np.zeros((len(xs), len(xs)), dtype=np.int64)
        for c, x in enumerate(xs):
            for g, coef in elem.items():
                q[pos[act_on_index(g, x)], c] += coef
        if not q.any():
            continue
        qlist = q.tolist()
        rk = linalg.rank(qlist)
        cols = linalg.column_space([[Fraction(v) for v in row] for row in qlist])
        blocks.append(
            WeightBlock(content, [flat_index(x, base) for x in xs], q, rk, [[scale * v for v in col] for col in cols])
        )
    rep = Irrep(lam, ambient, scale, blocks)
    expected = weyl_dimension(lam)
    if rep.dim != expected:
        raise AssertionError(f"image dimension {rep.dim} differs from Weyl dimension {expected}")
    return rep


def weight_grading(rep: Irrep) -> dict[int, int]:
    """s -> dim gr^s, where e_0(a) acts on gr^s by a^(r - s)."""
    out: dict[int, int] = {}
    for b in rep.blocks:
        s = rep.r - b.zeros
        out[s] = out.get(s, 0) + b.rank
    return dict(sorted(out.items()))


def unipotent_u(z: Sequence[Fraction]) -> list[list[Fraction]]:
    d = len(z)
    u = linalg.identity(d + 1)
    for k, zk in enumerate(z):
        u[0][k + 1] = -Fraction(zk)
    return u


def tensor_power_apply(g: Sequence[Sequence[Fraction]], vec: Sequence[Fraction], r: int) -> list[Fraction]:
    """Apply g^{(x) r} to a flat tensor vector."""
    base = len(g)
    if r == 0:
        return [Fraction(vec[0])]
    t = np.array(list(vec), dtype=object).reshape((base,) * r)
    gm = np.array([[Fraction(x) for x in row] for row in g], dtype=object)
    for axis in range(r):
        t = np.moveaxis(np.tensordot(gm, t, axes=([1], [axis])), 0, axis)
    return list(t.reshape(-1))


def filtration_basis(rep: Irrep, s: int) -> list[list[Fraction]]:
    """Basis of f^s M, the sum of the graded pieces of index >= s."""
    return [v for grade, vs in rep.basis_by_grade().items() if grade >= s for v in vs]


def twist_filtration(rep: Irrep, z: Sequence[Fraction | int]) -> dict[int, int]:
    """s -> dim of u(z) applied to f^s M, for s from r - l_0 to r + 1."""
    if len(z) != rep.d:
        raise ValueError(f"z must have {rep.d} entries")
    u = unipotent_u([Fraction(x) for x in z])
    lo = rep.r - rep.lam[0]
    out = {}
    for s in range(lo, rep.r + 2):
        vecs = [tensor_power_apply(u, v, rep.r) for v in filtration_basis(rep, s)]
        out[s] = linalg.rank(vecs) if vecs else 0
    return out
