"""Filtered (phi, N)-modules: invariants, monodromy filtration, purity, admissibility.

Matrices follow the column convention: ``phi[i][j]`` is the coefficient of
basis vector ``i`` in ``phi(e_j)``.  The Frobenius is semilinear, but every
stored scalar is fixed by the residue-field Frobenius, so it is handled as a
plain matrix.  The Hodge filtration is split: basis vector ``k`` has degree
``hodge[k]`` and ``F^j`` is spanned by the vectors of degree at least ``j``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Iterable, Sequence

from . import linalg
from .scalars import FieldParams, PiScalar, ScalarMatrix, fraction_from_str, fraction_to_str, val_p

Label = tuple[int, int, int, int]  # (i, j, s, delta)

DEFAULT_SUBOBJECT_BUDGET = 200_000


class BudgetExceeded(RuntimeError):
    pass


@dataclass(frozen=True)
class FilteredPhiNModule:
    params: FieldParams
    dim: int
    phi: ScalarMatrix
    nmat: tuple[tuple[Fraction, ...], ...]
    hodge: tuple[int, ...]
    labels: tuple[Label, ...] | None = None

    def __post_init__(self) -> None:
        n = self.dim
        object.__setattr__(self, "nmat", tuple(tuple(Fraction(x) for x in row) for row in self.nmat))
        object.__setattr__(self, "hodge", tuple(int(h) for h in self.hodge))
        if self.labels is not None:
            object.__setattr__(self, "labels", tuple(tuple(int(x) for x in lab) for lab in self.labels))
            if len(self.labels) != n:
                raise ValueError("one label per basis vector required")
        if (self.phi.rows, self.phi.cols) != (n, n) or len(self.nmat) != n or len(self.hodge) != n:
            raise ValueError("dimension mismatch between dim, phi, nmat and hodge")
        if (self.phi.p, self.phi.e) != (self.params.p, self.params.e):
            raise ValueError("phi lives over a different field")
        if n and frobenius_det(self.phi).is_zero():
            raise ValueError("non-bijective Frobenius")
        if n and not is_nilpotent(self.n_lists()):
            raise ValueError("N is not nilpotent")
        phi = self.phi.to_lists()
        lhs = linalg.matmul(self.n_lists(), phi)
        rhs = linalg.scale(self.params.p, linalg.matmul(phi, self.n_lists()))
        if any(x != y for r, s in zip(lhs, rhs) for x, y in zip(r, s)):
            raise ValueError("relation N phi = p phi N fails")

    def n_lists(self) -> list[list[Fraction]]:
        return [list(r) for r in self.nmat]

    def with_hodge(self, hodge: Sequence[int]) -> "FilteredPhiNModule":
        return FilteredPhiNModule(self.params, self.dim, self.phi, self.nmat, tuple(hodge), self.labels)

    def with_n(self, nmat: Sequence[Sequence[Fraction]]) -> "FilteredPhiNModule":
        return FilteredPhiNModule(self.params, self.dim, self.phi, tuple(map(tuple, nmat)), self.hodge, self.labels)

    def hodge_filtration(self, j: int) -> list[list[Fraction]]:
        return [_unit(k, self.dim) for k in range(self.dim) if self.hodge[k] >= j]

    def to_json(self) -> dict:
        return {
            "params": self.params.to_json(),
            "dim": self.dim,
            "phi": self.phi.to_json(),
            "n": [[fraction_to_str(x) for x in row] for row in self.nmat],
            "hodge": list(self.hodge),
            "labels": [list(lab) for lab in self.labels] if self.labels is not None else None,
        }

    @classmethod
    def from_json(cls, obj: dict) -> "FilteredPhiNModule":
        params = FieldParams.from_json(obj["params"])
        dim = int(obj["dim"])
        phi = ScalarMatrix.from_json(obj["phi"], params.p, params.e) if dim else ScalarMatrix.zero(0, 0, params.p, params.e)
        nmat = tuple(tuple(fraction_from_str(x) for x in row) for row in obj["n"])
        labels = obj.get("labels")
        return cls(params, dim, phi, nmat, tuple(obj["hodge"]), tuple(map(tuple, labels)) if labels else None)


def _unit(k: int, n: int) -> list[Fraction]:
    v = [Fraction(0)] * n
    v[k] = Fraction(1)
    return v


def monomial_structure(phi: ScalarMatrix) -> list[tuple[int, PiScalar]] | None:
    """For a monomial matrix, column j -> (row, entry); otherwise ``None``."""
    out = []
    rows_hit = set()
    for j in range(phi.cols):
        nz = [(i, phi[i, j]) for i in range(phi.rows) if not phi[i, j].is_zero()]
        if len(nz) != 1 or nz[0][0] in rows_hit:
            return None
        rows_hit.add(nz[0][0])
        out.append(nz[0])
    return out


def _perm_sign(perm: Sequence[int]) -> int:
    seen = [False] * len(perm)
    sign = 1
    for i in range(len(perm)):
        j, length = i, 0
        while not seen[j]:
            seen[j] = True
            j = perm[j]
            length += 1
        if length and length % 2 == 0:
            sign = -sign
    return sign


def frobenius_det(phi: ScalarMatrix) -> PiScalar:
    mono = monomial_structure(phi)
    if mono is None:
        return phi.det()
    out = PiScalar.of(_perm_sign([i for i, _ in mono]), phi.p, phi.e)
    for _, x in mono:
        out = out * x
    return out


def is_nilpotent(nmat: Sequence[Sequence[Fraction]]) -> bool:
    n = len(nmat)
    return n == 0 or linalg.is_zero(linalg.matpow([list(r) for r in nmat], n))


def t_N(m: FilteredPhiNModule) -> Fraction:
    return Fraction(val_p(frobenius_det(m.phi)))


def t_H(m: FilteredPhiNModule) -> int:
    return sum(m.hodge)


# -- monodromy filtration -------------------------------------------------------


@dataclass
class Filtration:
    """Chain of subspaces indexed by integer levels."""

    dim: int
    levels: dict[int, list[list[Fraction]]]
    increasing: bool = True

    def graded_dims(self) -> dict[int, int]:
        keys = sorted(self.levels)
        out = {}
        for k in keys:
            here = len(self.levels[k])
            prev_key = k - 1 if self.increasing else k + 1
            prev = len(self.levels.get(prev_key, [])) if prev_key in self.levels else 0
            if here - prev:
                out[k] = here - prev
        return out


def _kernel(a: list[list[Fraction]]) -> list[list[Fraction]]:
    return linalg.kernel_of(a)


def _image(a: list[list[Fraction]]) -> list[list[Fraction]]:
    return linalg.image_of(a)


def monodromy_filtration(nmat: Sequence[Sequence[Fraction]]) -> Filtration:
    """Increasing filtration M_k = sum_j ker N^(k+j+1) cap im N^j, j >= max(0, -k)."""
    n = len(nmat)
    a = [[Fraction(x) for x in r] for r in nmat]
    if not is_nilpotent(a):
        raise ValueError("monodromy filtration needs a nilpotent operator")
    if n == 0:
        return Filtration(0, {0: []})
    powers = [linalg.identity(n)]
    for _ in range(2 * n + 1):
        powers.append(linalg.matmul(powers[-1], a))
    kers = [_kernel(pw) if not linalg.is_zero(pw) else [_unit(k, n) for k in range(n)] for pw in powers]
    ims = [_image(pw) for pw in powers]
    levels: dict[int, list[list[Fraction]]] = {}
    for k in range(-n, n + 1):
        gens: list[list[Fraction]] = []
        for j in range(max(0, -k), n + 1):
            if k + j + 1 < len(kers):
                gens.extend(linalg.intersect(kers[k + j + 1], ims[j], n))
        levels[k] = linalg.span_basis(gens, n)
    levels[-n - 1] = []
    return Filtration(n, levels, increasing=True)


def monodromy_graded_dims(nmat: Sequence[Sequence[Fraction]]) -> dict[int, int]:
    return monodromy_filtration(nmat).graded_dims()


# -- purity -----------------------------------------------------------------------


@dataclass
class CheckResult:
    ok: bool
    detail: dict[str, Any] = field(default_factory=dict)

    def __bool__(self) -> bool:
        return self.ok


def purity_check(m: FilteredPhiNModule, weight_filtration: Sequence[Sequence[Sequence[Fraction]]], d: int) -> CheckResult:
    """F^r = im N^r = ker N^(d+1-r) for 0 <= r <= d+1.

    ``weight_filtration[r]`` is a basis of F^r; missing trailing steps are 0.
    """
    n = m.dim
    nm = m.n_lists()
    for r in range(d + 2):
        fr = list(weight_filtration[r]) if r < len(weight_filtration) else []
        im = _image(linalg.matpow(nm, r)) if n else []
        pw = linalg.matpow(nm, d + 1 - r)
        ker = [_unit(k, n) for k in range(n)] if linalg.is_zero(pw) else _kernel(pw)
        if not (linalg.subspace_equal(fr, im, n) and linalg.subspace_equal(fr, ker, n)):
            return CheckResult(False, {"first_failing_r": r, "dim_F": len(linalg.span_basis(fr, n)),
                                       "dim_image": len(im), "dim_kernel": len(ker)})
    return CheckResult(True, {})


def slope_filtration(m: FilteredPhiNModule) -> list[list[list[Fraction]]]:
    """S^r spanned by the vectors whose label has level s >= r (labels required)."""
    if m.labels is None:
        raise ValueError("module carries no labels")
    top = max(lab[2] for lab in m.labels) if m.labels else -1
    return [[_unit(k, m.dim) for k, lab in enumerate(m.labels) if lab[2] >= r] for r in range(top + 2)]


# -- weak admissibility -------------------------------------------------------------


def _support_graph(m: FilteredPhiNModule) -> list[set[int]]:
    succ = [set() for _ in range(m.dim)]
    for i in range(m.dim):
        for j in range(m.dim):
            if not m.phi[i, j].is_zero() or m.nmat[i][j] != 0:
                succ[j].add(i)
    return succ


def _is_basis_preserving(m: FilteredPhiNModule) -> bool:
    if monomial_structure(m.phi) is None:
        return False
    return all(sum(1 for x in col if x != 0) <= 1 for col in zip(*m.nmat))


def _sccs(succ: list[set[int]]) -> list[list[int]]:
    """Tarjan's algorithm (iterative)."""
    index: dict[int, int] = {}
    low: dict[int, int] = {}
    on_stack: set[int] = set()
    stack: list[int] = []
    comps: list[list[int]] = []
    counter = 0
    for root in range(len(succ)):
        if root in index:
            continue
        work = [(root, iter(sorted(succ[root])))]
        index[root] = low[root] = counter
        counter += 1
        stack.append(root)
        on_stack.add(root)
        while work:
            v, it = work[-1]
            advanced = False
            for w in it:
                if w not in index:
                    index[w] = low[w] = counter
                    counter += 1
                    stack.append(w)
                    on_stack.add(w)
                    work.append((w, iter(sorted(succ[w]))))
                    advanced = True
                    break
                if w in on_stack:
                    low[v] = min(low[v], index[w])
            if advanced:
                continue
            work.pop()
            if work:
                low[work[-1][0]] = min(low[work[-1][0]], low[v])
            if low[v] == index[v]:
                comp = []
                while True:
                    w = stack.pop()
                    on_stack.discard(w)
                    comp.append(w)
                    if w == v:
                        break
                comps.append(sorted(comp))
    # Tarjan emits components in reverse topological order: successors first
    return comps


def closed_basis_subsets(m: FilteredPhiNModule, budget: int = DEFAULT_SUBOBJECT_BUDGET) -> Iterable[frozenset[int]]:
    """All subsets of the basis whose span is stable under phi and N (support closure)."""
    succ = _support_graph(m)
    comps = _sccs(succ)
    comp_of = {v: c for c, comp in enumerate(comps) for v in comp}
    comp_succ = [set() for _ in comps]
    for v, ws in enumerate(succ):
        for w in ws:
            if comp_of[w] != comp_of[v]:
                comp_succ[comp_of[v]].add(comp_of[w])
    count = 0
    chosen: list[bool] = [False] * len(comps)

    def rec(k: int) -> Iterable[frozenset[int]]:
        nonlocal count
        if k == len(comps):
            count += 1
            if count > budget:
                raise BudgetExceeded(f"subobject enumeration budget of {budget} exceeded")
            yield frozenset(v for c, on in enumerate(chosen) if on for v in comps[c])
            return
        chosen[k] = False
        yield from rec(k + 1)
        if all(chosen[c] for c in comp_succ[k]):
            chosen[k] = True
            yield from rec(k + 1)
            chosen[k] = False

    yield from rec(0)


def _t_n_subset(m: FilteredPhiNModule, subset: frozenset[int], mono: list[tuple[int, PiScalar]] | None) -> Fraction:
    if mono is not None:
        return sum((Fraction(val_p(mono[k][1])) for k in subset), Fraction(0))
    idx = sorted(subset)
    return Fraction(val_p(m.phi.submatrix(idx).det()))


def _restrict_phi(m: FilteredPhiNModule, basis: list[list[Fraction]]) -> list[list[Any]] | None:
    phi = m.phi.to_lists()
    cols = [[PiScalar.of(x, m.params.p, m.params.e) for x in v] for v in basis]
    bmat = linalg.columns_to_matrix(cols, m.dim)
    images = linalg.transpose(linalg.matmul(phi, bmat))
    coords = []
    for img in images:
        sol = linalg.solve(bmat, img)
        if sol is None:
            return None
        coords.append(sol)
    return linalg.transpose(coords)


def t_H_of_subspace(m: FilteredPhiNModule, basis: list[list[Fraction]]) -> int:
    """sum_j j * dim gr^j of the induced filtration on span(basis)."""
    n = m.dim
    u = linalg.span_basis(basis, n)
    if not u:
        return 0
    lo, hi = min(m.hodge), max(m.hodge)
    total = lo * len(u)
    for j in range(lo + 1, hi + 1):
        total += len(linalg.intersect(m.hodge_filtration(j), u, n))
    return total


def is_weakly_admissible(
    m: FilteredPhiNModule,
    extra_subobjects: Sequence[Sequence[Sequence[Fraction]]] = (),
    budget: int = DEFAULT_SUBOBJECT_BUDGET,
) -> tuple[bool, dict[str, Any]]:
    scope = "complete" if _is_basis_preserving(m) else "class-restricted"
    th, tn = t_H(m), t_N(m)
    if th != tn:
        return False, {"scope": scope, "reason": "t_H != t_N", "t_H": th, "t_N": tn, "subobject": list(range(m.dim))}
    mono = monomial_structure(m.phi)
    checked = 0
    for subset in closed_basis_subsets(m, budget):
        checked += 1
        sh = sum(m.hodge[k] for k in subset)
        sn = _t_n_subset(m, subset, mono)
        if sh > sn:
            return False, {"scope": scope, "reason": "t_H(sub) > t_N(sub)", "t_H": sh, "t_N": sn,
                           "subobject": sorted(subset)}
    nm = m.n_lists()
    for k, basis in enumerate(extra_subobjects):
        vecs = [[Fraction(x) for x in v] for v in basis]
        u = linalg.span_basis(vecs, m.dim)
        if not linalg.subspace_contains(u, [linalg.matvec(nm, v) for v in u], m.dim):
            raise ValueError(f"extra subobject {k} is not N-stable")
        restricted = _restrict_phi(m, u)
        if restricted is None:
            raise ValueError(f"extra subobject {k} is not phi-stable")
        sn = Fraction(val_p(linalg.bareiss_det(restricted))) if u else Fraction(0)
        sh = t_H_of_subspace(m, u)
        if sh > sn:
            return False, {"scope": scope, "reason": "t_H(sub) > t_N(sub)", "t_H": sh, "t_N": sn,
                           "extra_subobject": k}
    return True, {"scope": scope, "subobjects_checked": checked + len(extra_subobjects), "t_H": th, "t_N": tn}


# -- duality ------------------------------------------------------------------------


@dataclass(frozen=True)
class JumpEntry:
    """F^a of the component pairs to zero against F*^b of the dual component."""

    component: tuple[int, int]  # (i, delta)
    m_degree: int
    dual_degree: int

    def to_json(self) -> dict:
        return {"component": list(self.component), "m_degree": self.m_degree, "dual_degree": self.dual_degree}

    @classmethod
    def from_json(cls, obj: dict) -> "JumpEntry":
        return cls(tuple(obj["component"]), int(obj["m_degree"]), int(obj["dual_degree"]))


def _component(lab: Label) -> tuple[int, int]:
    return lab[0], lab[3]


def verify_pairing(
    m: FilteredPhiNModule,
    mdual: FilteredPhiNModule,
    pairing: ScalarMatrix,
    jump_table: Sequence[JumpEntry],
) -> CheckResult:
    """Orthogonality of listed filtration steps plus non-degeneracy on quotients.

    ``pairing[a][b]`` is the value on (basis a of m, basis b of mdual).
    """
    if (pairing.rows, pairing.cols) != (m.dim, mdual.dim):
        raise ValueError("pairing has the wrong shape")
    if m.dim != mdual.dim:
        raise ValueError("modules of different dimension cannot pair perfectly")
    full = linalg.rank(pairing.to_lists()) if m.dim else 0
    if full != m.dim:
        return CheckResult(False, {"reason": "pairing is degenerate", "rank": full})
    if m.labels is None or mdual.labels is None:
        raise ValueError("verify_pairing needs component labels")
    for entry in jump_table:
        rows = [a for a in range(m.dim) if _component(m.labels[a]) == entry.component and m.hodge[a] >= entry.m_degree]
        comp = [b for b in range(mdual.dim) if _component(mdual.labels[b]) == entry.component]
        high = [b for b in comp if mdual.hodge[b] >= entry.dual_degree]
        low = [b for b in comp if mdual.hodge[b] < entry.dual_degree]
        if any(not pairing[a, b].is_zero() for a in rows for b in high):
            return CheckResult(False, {"reason": "filtration steps not orthogonal", "entry": entry.to_json()})
        block = [[pairing[a, b] for b in low] for a in rows]
        rk = linalg.rank(block) if rows and low else 0
        if not (len(rows) == len(low) == rk):
            return CheckResult(False, {"reason": "induced pairing degenerate", "entry": entry.to_json(),
                                       "rows": len(rows), "cols": len(low), "rank": rk})
    return CheckResult(True, {"entries": len(jump_table)})
