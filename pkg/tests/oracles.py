"""Independent reference computations used to freeze and cross-check results.

Nothing here imports the package's own algorithms: dimensions come from
tableau counting, ranks from sympy, lattice counts from Hermite-form
enumeration, and monodromy data from Jordan block sizes.
"""

from __future__ import annotations

import itertools
from fractions import Fraction

import sympy


def count_semistandard_tableaux(shape: list[int], alphabet: int) -> int:
    """Brute-force count of semistandard fillings with entries 0..alphabet-1."""
    cells = [(i, j) for i, row in enumerate(shape) for j in range(row)]
    if not cells:
        return 1
    count = 0

    def fill(k: int, grid: dict) -> None:
        nonlocal count
        if k == len(cells):
            count += 1
            return
        i, j = cells[k]
        lo = 0
        if j > 0:
            lo = max(lo, grid[(i, j - 1)])
        if i > 0:
            lo = max(lo, grid[(i - 1, j)] + 1)
        for v in range(lo, alphabet):
            grid[(i, j)] = v
            fill(k + 1, grid)
        grid.pop((i, j), None)

    fill(0, {})
    return count


def irrep_dimension(lam: tuple[int, ...]) -> int:
    shape = [x for x in lam if x > 0]
    return count_semistandard_tableaux(shape, len(lam))


def sympy_rank(rows) -> int:
    if not rows or not rows[0]:
        return 0
    return sympy.Matrix([[sympy.Rational(x.numerator, x.denominator) if isinstance(x, Fraction) else x
                          for x in r] for r in rows]).rank()


def jordan_graded_dims(block_sizes: list[int]) -> dict[int, int]:
    """Graded dimensions of the monodromy filtration from Jordan block sizes."""
    out: dict[int, int] = {}
    for k in block_sizes:
        for level in range(-(k - 1), k, 2):
            out[level] = out.get(level, 0) + 1
    return dict(sorted(out.items()))


def jordan_block_matrix(block_sizes: list[int]) -> list[list[Fraction]]:
    n = sum(block_sizes)
    m = [[Fraction(0)] * n for _ in range(n)]
    pos = 0
    for k in block_sizes:
        for a in range(k - 1):
            m[pos + a + 1][pos + a] = Fraction(1)
        pos += k
    return m


def _vp(x: Fraction, p: int) -> int:
    num, den, v = x.numerator, x.denominator, 0
    while num % p == 0:
        num //= p
        v += 1
    while den % p == 0:
        den //= p
        v -= 1
    return v


def lower_hull_slopes(points: list[tuple[int, Fraction]]) -> list[Fraction]:
    """Slopes of the lower convex hull, by checking every candidate segment."""
    pts = sorted(points)
    out = []
    i = 0
    while i < len(pts) - 1:
        best = None
        for k in range(i + 1, len(pts)):
            slope = (pts[k][1] - pts[i][1]) / (pts[k][0] - pts[i][0])
            if all(pts[m][1] >= pts[i][1] + slope * (pts[m][0] - pts[i][0]) for m in range(len(pts))):
                best = k if best is None or k > best else best
        assert best is not None
        slope = (pts[best][1] - pts[i][1]) / (pts[best][0] - pts[i][0])
        out.extend([slope] * (pts[best][0] - pts[i][0]))
        i = best
    return out


def lattice_classes_within(d: int, p: int, radius: int) -> int:
    """Classes [L] at distance <= radius from the standard lattice.

    Every such class has a unique primitive representative p^R L0 < L < L0;
    enumerate lower-triangular Hermite forms with diagonal p^a_i, 0 <= a_i <= R.
    """
    n = d + 1
    count = 0
    for diag in itertools.product(range(radius + 1), repeat=n):
        slots = [(i, j) for i in range(n) for j in range(i)]
        ranges = [range(p ** diag[i]) for (i, j) in slots]
        for vals in itertools.product(*ranges):
            b = sympy.zeros(n, n)
            for i in range(n):
                b[i, i] = p ** diag[i]
            for (i, j), v in zip(slots, vals):
                b[i, j] = v
            if all(x % p == 0 for x in b):
                continue  # lies in p L0, so it is not the primitive representative
            inv = b.inv() * p**radius
            if all(sympy.Rational(x).q == 1 for x in inv):
                count += 1
    return count


def tree_ball_size(p: int, radius: int) -> int:
    return 1 + sum((p + 1) * p ** (k - 1) for k in range(1, radius + 1))


def cycle_rank(vertices: int, edges: int, components: int = 1) -> int:
    return edges - vertices + components


def betti_numbers(simplices: dict[int, list[tuple]]) -> list[int]:
    """Rational Betti numbers from sympy ranks of simplicial boundary matrices."""
    top = max(simplices)
    ranks = {}
    for k in range(1, top + 1):
        idx = {s: a for a, s in enumerate(simplices[k - 1])}
        mat = sympy.zeros(len(simplices[k - 1]), len(simplices[k]))
        for c, s in enumerate(simplices[k]):
            for pos in range(len(s)):
                face = s[:pos] + s[pos + 1:]
                mat[idx[face], c] += (-1) ** pos
        ranks[k] = mat.rank()
    return [len(simplices[k]) - ranks.get(k, 0) - ranks.get(k + 1, 0) for k in range(top + 1)]


def kunneth_with_exterior(betti: list[int], ngens: int) -> list[int]:
    """Dimensions of H(K) tensor the exterior algebra on ngens degree-one classes."""
    ext = [sympy.binomial(ngens, m) for m in range(ngens + 1)]
    out = [0] * (len(betti) + ngens)
    for q, b in enumerate(betti):
        for m, e in enumerate(ext):
            out[q + m] += int(b * e)
    return out
