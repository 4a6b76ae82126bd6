"""Exact linear algebra over fields of Python objects.

Every routine works for :class:`fractions.Fraction` entries and for any
other exact field element that supports ``+ - * /`` and comparison with 0
(for instance :class:`phinforge.scalars.PiScalar`).  Matrices are plain
lists of row lists; vectors are lists.  Nothing here touches floating point.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Any, Callable, Sequence

Matrix = list[list[Any]]
Vector = list[Any]


def as_fraction_matrix(rows: Sequence[Sequence[Any]]) -> Matrix:
    return [[Fraction(x) for x in row] for row in rows]


def zeros(n: int, m: int, zero: Any = Fraction(0)) -> Matrix:
    return [[zero] * m for _ in range(n)]


def identity(n: int, zero: Any = Fraction(0), one: Any = Fraction(1)) -> Matrix:
    out = zeros(n, n, zero)
    for i in range(n):
        out[i][i] = one
    return out


def shape(a: Matrix) -> tuple[int, int]:
    return len(a), (len(a[0]) if a else 0)


def transpose(a: Matrix) -> Matrix:
    return [list(col) for col in zip(*a)] if a else []


def matmul(a: Matrix, b: Matrix) -> Matrix:
    """Product that only visits non-zero entries (cheap for sparse inputs)."""
    if not a:
        return []
    inner = len(b)
    if len(a[0]) != inner:
        raise ValueError(f"shape mismatch {shape(a)} x {shape(b)}")
    cols = len(b[0]) if b else 0
    zero = _zero_like(a, b)
    sparse_b = [[(j, y) for j, y in enumerate(row) if y != 0] for row in b]
    out = []
    for row in a:
        acc = [zero] * cols
        for k, x in enumerate(row):
            if x != 0:
                for j, y in sparse_b[k]:
                    acc[j] = acc[j] + x * y
        out.append(acc)
    return out


def _zero_like(a: Matrix, b: Matrix) -> Any:
    for m in (a, b):
        for row in m:
            for x in row:
                if not isinstance(x, (int, Fraction)):
                    return x * 0
    return Fraction(0)


def matvec(a: Matrix, v: Vector) -> Vector:
    out = []
    for row in a:
        acc = Fraction(0)
        for x, y in zip(row, v):
            if x != 0 and y != 0:
                acc = x * y + acc
        out.append(acc)
    return out


def matpow(a: Matrix, k: int, zero: Any = Fraction(0), one: Any = Fraction(1)) -> Matrix:
    result = identity(len(a), zero, one)
    base = a
    while k:
        if k & 1:
            result = matmul(result, base)
        k >>= 1
        if k:
            base = matmul(base, base)
    return result


def add(a: Matrix, b: Matrix) -> Matrix:
    return [[x + y for x, y in zip(r, s)] for r, s in zip(a, b)]


def sub(a: Matrix, b: Matrix) -> Matrix:
    return [[x - y for x, y in zip(r, s)] for r, s in zip(a, b)]


def scale(c: Any, a: Matrix) -> Matrix:
    return [[c * x for x in row] for row in a]


def is_zero(a: Matrix) -> bool:
    return all(x == 0 for row in a for x in row)


def hstack(*blocks: Matrix) -> Matrix:
    rows = len(blocks[0])
    return [sum((list(b[i]) for b in blocks), []) for i in range(rows)]


def vstack(*blocks: Matrix) -> Matrix:
    out: Matrix = []
    for b in blocks:
        out.extend(list(r) for r in b)
    return out


def columns_to_matrix(cols: Sequence[Vector], nrows: int) -> Matrix:
    if not cols:
        return [[] for _ in range(nrows)]
    return [[c[i] for c in cols] for i in range(nrows)]


def rref(a: Matrix) -> tuple[Matrix, list[int]]:
    """Reduced row echelon form and pivot columns (Gauss-Jordan)."""
    m = [list(r) for r in a]
    nrows, ncols = shape(m)
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        if r == nrows:
            break
        piv = next((i for i in range(r, nrows) if m[i][c] != 0), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        inv = 1 / m[r][c]
        m[r] = [x * inv if x != 0 else x for x in m[r]]
        support = [(j, y) for j, y in enumerate(m[r]) if y != 0]
        for i in range(nrows):
            if i != r and m[i][c] != 0:
                f = m[i][c]
                row = m[i]
                for j, y in support:
                    row[j] = row[j] - f * y
        pivots.append(c)
        r += 1
    return m, pivots


def rank(a: Matrix) -> int:
    if not a or not a[0]:
        return 0
    if all(isinstance(x, (int, Fraction)) for row in a for x in row):
        return _fraction_free_rank(a)
    return len(rref(a)[1])


def _fraction_free_rank(a: Matrix) -> int:
    # clear denominators row by row, then Bareiss-style integer elimination
    rows = []
    for row in a:
        den = 1
        for x in row:
            if isinstance(x, Fraction) and x.denominator != 1:
                den = den * x.denominator // _gcd(den, x.denominator)
        rows.append([int(x * den) for x in row])
    nrows, ncols = len(rows), len(rows[0])
    r = 0
    prev = 1
    for c in range(ncols):
        if r == nrows:
            break
        piv = next((i for i in range(r, nrows) if rows[i][c] != 0), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        p = rows[r][c]
        for i in range(r + 1, nrows):
            q = rows[i][c]
            rows[i] = [(p * x - q * y) // prev for x, y in zip(rows[i], rows[r])]
        prev = p
        r += 1
    return r


def _gcd(a: int, b: int) -> int:
    while b:
        a, b = b, a % b
    return abs(a)


def nullspace(a: Matrix, ncols: int | None = None) -> list[Vector]:
    """Basis of {x : a x = 0}."""
    if not a:
        n = ncols or 0
        return [[Fraction(int(i == j)) for i in range(n)] for j in range(n)]
    r, pivots = rref(a)
    n = len(a[0])
    free = [c for c in range(n) if c not in pivots]
    basis = []
    zero = a[0][0] * 0
    for fc in free:
        v = [zero] * n
        v[fc] = zero + 1
        for row_idx, pc in enumerate(pivots):
            v[pc] = -r[row_idx][fc]
        basis.append(v)
    return basis


def column_space(a: Matrix) -> list[Vector]:
    """Basis (subset of the columns) of the column space."""
    if not a or not a[0]:
        return []
    _, pivots = rref(a)
    return [[row[c] for row in a] for c in pivots]


def independent_subset(vectors: Sequence[Vector], dim: int) -> list[int]:
    """Indices of a maximal independent prefix-greedy subset."""
    if not vectors:
        return []
    _, pivots = rref(columns_to_matrix(list(vectors), dim))
    return pivots


def solve(a: Matrix, b: Vector) -> Vector | None:
    """One solution of a x = b or ``None`` when inconsistent."""
    n = len(a[0]) if a else 0
    aug = [list(row) + [bi] for row, bi in zip(a, b)]
    r, pivots = rref(aug)
    if n in pivots:
        return None
    zero = b[0] * 0 if b else Fraction(0)
    x = [zero] * n
    for row_idx, pc in enumerate(pivots):
        x[pc] = r[row_idx][n]
    return x


def left_inverse(cols: Sequence[Vector], dim: int) -> tuple[list[int], Matrix]:
    """For independent columns F, rows R and matrix L with L @ z[R] = x whenever z = F x."""
    if not cols:
        return [], []
    _, rows = rref([list(c) for c in cols])
    square = [[c[i] for c in cols] for i in rows]
    return rows, inverse(square)


def inverse(a: Matrix) -> Matrix:
    n = len(a)
    zero = a[0][0] * 0
    aug = [list(row) + [zero + int(i == j) for j in range(n)] for i, row in enumerate(a)]
    r, pivots = rref(aug)
    if pivots[:n] != list(range(n)):
        raise ZeroDivisionError("singular matrix")
    return [row[n:] for row in r[:n]]


def bareiss_det(a: Matrix) -> Any:
    """Fraction-free determinant (exact divisions only)."""
    n = len(a)
    if n == 0:
        return Fraction(1)
    m = [list(r) for r in a]
    sign = 1
    prev = m[0][0] * 0 + 1
    for k in range(n - 1):
        if m[k][k] == 0:
            swap = next((i for i in range(k + 1, n) if m[i][k] != 0), None)
            if swap is None:
                return m[0][0] * 0
            m[k], m[swap] = m[swap], m[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) / prev
        prev = m[k][k]
    return m[n - 1][n - 1] if sign == 1 else -m[n - 1][n - 1]


def charpoly(a: Matrix) -> list[Any]:
    """Coefficients c_0..c_n of det(x I - a) by Berkowitz (division free)."""
    n = len(a)
    if n == 0:
        return [Fraction(1)]
    zero = a[0][0] * 0
    one = zero + 1
    # vect holds the coefficients from the leading term downwards
    vect = [one, -a[0][0]]
    for r in range(1, n):
        row = a[r][:r]
        col = [a[i][r] for i in range(r)]
        sub_m = [a[i][:r] for i in range(r)]
        diag = a[r][r]
        # Toeplitz column: 1, -a_rr, -R C, -R A C, ...
        t = [one, -diag]
        cur = col
        for _ in range(r):
            t.append(-sum((x * y for x, y in zip(row, cur)), zero))
            cur = [sum((sub_m[i][k] * cur[k] for k in range(r)), zero) for i in range(r)]
        new = []
        for i in range(r + 2):
            acc = zero
            for j in range(min(i, r) + 1):
                if i - j < len(t):
                    acc = acc + t[i - j] * vect[j]
            new.append(acc)
        vect = new
    return list(reversed(vect))


def span_basis(vectors: Sequence[Vector], dim: int) -> list[Vector]:
    """Echelon basis of the span of ``vectors`` in a space of size ``dim``."""
    if not vectors:
        return []
    r, pivots = rref([list(v) for v in vectors])
    return [r[i] for i in range(len(pivots))]


def subspace_equal(u: Sequence[Vector], v: Sequence[Vector], dim: int) -> bool:
    bu, bv = span_basis(u, dim), span_basis(v, dim)
    return bu == bv


def subspace_contains(big: Sequence[Vector], small: Sequence[Vector], dim: int) -> bool:
    rb = len(span_basis(big, dim))
    return len(span_basis(list(big) + list(small), dim)) == rb


def apply_map(fn: Callable[[Vector], Vector], basis: Sequence[Vector]) -> list[Vector]:
    return [fn(v) for v in basis]


def intersect(u: Sequence[Vector], v: Sequence[Vector], dim: int) -> list[Vector]:
    """Basis of span(u) intersected with span(v)."""
    u, v = span_basis(u, dim), span_basis(v, dim)
    if not u or not v:
        return []
    m = columns_to_matrix(list(u) + [[-x for x in w] for w in v], dim)
    combos = nullspace(m)
    out = []
    for c in combos:
        vec = [Fraction(0)] * dim
        for coef, w in zip(c[: len(u)], u):
            if coef != 0:
                vec = [a + coef * b for a, b in zip(vec, w)]
        out.append(vec)
    return span_basis(out, dim)


def kernel_of(a: Matrix) -> list[Vector]:
    return nullspace(a, ncols=len(a[0]) if a else 0)


def image_of(a: Matrix) -> list[Vector]:
    return span_basis(column_space(a), len(a))
