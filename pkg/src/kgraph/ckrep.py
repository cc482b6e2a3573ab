"""The ∂Λ representation on finite boundary spaces and Cuntz-Krieger checks.

All algebraic identities are checked on int64 sparse matrices, so they are
exact. Floating point is only used for operator norms in ``qmap``.
"""
from __future__ import annotations

import cmath
import itertools
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np
import scipy.sparse as sp
import sympy

from . import boundary as B
from . import degree as dg
from . import paths as P
from .align import is_exhaustive, mce, min_extensions
from .aperiodicity import check_local_periodicity, periodicity_triple, separating_extension
from .paths import Path
from .skeleton import KGraph

NORM_TOL = 1e-9


class CkError(ValueError):
    pass


def _eq(a, b) -> bool:
    return (a != b).nnz == 0


def _is_zero(a) -> bool:
    return a.count_nonzero() == 0


class MatrixCK:
    """S_λ on span{ζ_x : x in basis}; S_λ ζ_x = ζ_{λx}."""

    def __init__(self, g: KGraph, basis: Sequence[B.BoundaryPath]):
        self.g = g
        self.basis = tuple(basis)
        self.index = {x: i for i, x in enumerate(self.basis)}
        if len(self.index) != len(self.basis):
            raise CkError("basis has repeated elements")
        if any(not x.exact for x in self.basis):
            raise CkError("basis elements must be genuine boundary paths")
        self._S: dict[Path, sp.csr_matrix] = {}

    @property
    def dimension(self) -> int:
        return len(self.basis)

    def zero(self) -> sp.csr_matrix:
        return sp.csr_matrix((self.dimension, self.dimension), dtype=np.int64)

    def S(self, lam: Path) -> sp.csr_matrix:
        if lam not in self._S:
            rows, cols = [], []
            for j, x in enumerate(self.basis):
                if x.range != lam.source:
                    continue
                y = B.prepend(self.g, lam, x)
                if y not in self.index:
                    raise CkError(f"{lam}·{x} = {y} is not in the basis")
                rows.append(self.index[y])
                cols.append(j)
            data = np.ones(len(rows), dtype=np.int64)
            self._S[lam] = sp.csr_matrix((data, (rows, cols)), shape=(self.dimension,) * 2)
        return self._S[lam]

    def Sstar(self, lam: Path) -> sp.csr_matrix:
        return self.S(lam).T.tocsr()

    def Sv(self, v: str) -> sp.csr_matrix:
        return self.S(P.vertex(self.g, v))

    def proj(self, lam: Path) -> sp.csr_matrix:
        return (self.S(lam) @ self.Sstar(lam)).tocsr()

    def to_coo_text(self, lam: Path) -> str:
        m = self.S(lam).tocoo()
        return "\n".join(f"{i} {j} {int(v)}" for i, j, v in sorted(zip(m.row, m.col, m.data)))


def build_matrix_rep(g: KGraph) -> MatrixCK:
    if not g.boundary_finite:
        raise CkError("∂Λ is not known to be finite and exactly listable")
    basis = []
    for v in g.vertices:
        basis.extend(sorted(B.boundary_paths(g, v).paths, key=str))
    return MatrixCK(g, basis)


# -- axiom verification -------------------------------------------------------

@dataclass
class CKReport:
    counts: dict[str, int] = field(default_factory=dict)
    violations: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations

    def _tick(self, name: str, good: bool, what: str) -> None:
        self.counts[name] = self.counts.get(name, 0) + 1
        if not good:
            self.violations.append(f"{name}: {what}")

    def to_json(self) -> dict:
        return {"ok": self.ok, "counts": self.counts, "violations": self.violations}


def _fe_subsets(g: KGraph, v: str, limit: int = 12):
    """Nonempty E ⊆ {λ ∈ vΛ : d(λ) <= (1,...,1)} that are certified exhaustive."""
    cands = P.paths_upto(g, v, dg.ones(g.rank))
    if len(cands) > limit:
        cands = cands[:limit]
    for r in range(1, len(cands) + 1):
        for E in itertools.combinations(cands, r):
            if is_exhaustive(g, v, E).is_holds:
                yield E


def verify_ck_axioms(rep: MatrixCK, cap: Sequence[int] | None = None) -> CKReport:
    g = rep.g
    cap = tuple(cap) if cap is not None else dg.ones(g.rank, 2)
    rpt = CKReport()
    lam_all = P.all_paths_upto(g, cap)
    Sv = {v: rep.Sv(v) for v in g.vertices}

    for v in g.vertices:
        p = Sv[v]
        rpt._tick("CK1", _eq(p @ p, p) and _eq(p.T, p), f"S_{v} is not a projection")
        for w in g.vertices:
            if w != v:
                rpt._tick("CK1", _is_zero(p @ Sv[w]), f"S_{v} S_{w} != 0")

    for mu in lam_all:
        for nu in lam_all:
            if mu.source == nu.range:
                rpt._tick("CK2", _eq(rep.S(mu) @ rep.S(nu), rep.S(P.compose(g, mu, nu))),
                          f"S_{mu} S_{nu} != S_{mu}{nu}")

    for mu in lam_all:
        for nu in lam_all:
            rhs = rep.zero()
            for a, b in min_extensions(g, mu, nu):
                rhs = rhs + rep.S(a) @ rep.Sstar(b)
            rpt._tick("CK3", _eq(rep.Sstar(mu) @ rep.S(nu), rhs), f"S_{mu}* S_{nu}")

    for v in g.vertices:
        for E in _fe_subsets(g, v):
            prod = Sv[v]
            for lam in E:
                prod = prod @ (Sv[v] - rep.proj(lam))
            rpt._tick("CK4", _is_zero(prod), f"product over {[str(x) for x in E]} at {v}")

    # range projections, isometries, and sums below S_v
    for mu in lam_all:
        for nu in lam_all:
            rhs = rep.zero()
            for lam in mce(g, mu, nu):
                rhs = rhs + rep.proj(lam)
            rpt._tick("range_projections", _eq(rep.proj(mu) @ rep.proj(nu), rhs), f"range projections of {mu}, {nu}")
            if mu.degree == nu.degree:
                lhs = rep.Sstar(mu) @ rep.S(nu)
                want = Sv[mu.source] if mu == nu else rep.zero()
                rpt._tick("isometry", _eq(lhs, want), f"S_{mu}* S_{nu}")
    for v in g.vertices:
        for n in dg.box(cap):
            total = rep.zero()
            for lam in P.paths_le(g, v, n):
                total = total + rep.proj(lam)
            d = (Sv[v] - total).tocoo()
            psd = all(i == j and val >= 0 for i, j, val in zip(d.row, d.col, d.data) if val != 0)
            rpt._tick("sum_below_vertex", psd, f"S_{v} - Σ over {v}Λ^<=({dg.fmt(n)}) is not positive")
    return rpt


def nonzero_vertices(rep: MatrixCK) -> dict[str, bool]:
    return {v: not _is_zero(rep.Sv(v)) for v in rep.g.vertices}


def span_dimension(rep: MatrixCK, cap: Sequence[int] | None = None) -> int:
    """dim span{S_μ S_ν* : d(μ), d(ν) <= cap}, by exact rank."""
    g = rep.g
    cap = tuple(cap) if cap is not None else dg.ones(g.rank, 2)
    lam_all = P.all_paths_upto(g, cap)
    rows = set()
    for mu in lam_all:
        for nu in lam_all:
            if mu.source == nu.source:
                m = (rep.S(mu) @ rep.Sstar(nu)).toarray().ravel()
                if m.any():
                    rows.add(tuple(int(c) for c in m))
    if not rows:
        return 0
    return sympy.Matrix(sorted(rows)).rank()


# -- Π E ------------------------------------------------------------------------

def pi_closure(g: KGraph, E: Iterable[Path], cap: int = 256) -> frozenset[Path]:
    """Least set containing E closed under the MCE exchange rule."""
    out = set(E)
    while True:
        new = set()
        items = sorted(out, key=Path.sort_key)
        for mu in items:
            for nu in items:
                exts = min_extensions(g, mu, nu)
                if not exts:
                    continue
                lams = [l for l in items if l.degree == mu.degree and l.source == mu.source]
                rhos = [r for r in items if r.degree == nu.degree and r.source == nu.source]
                for a, b in exts:
                    new.update(P.compose(g, l, a) for l in lams)
                    new.update(P.compose(g, r, b) for r in rhos)
        if new <= out:
            return frozenset(out)
        out |= new
        if len(out) > cap:
            raise CkError(f"Π E exceeded the size cap {cap}")


def core_span_closed(rep: MatrixCK, PE: Iterable[Path]) -> bool:
    """span{S_μ S_ν* : μ, ν ∈ ΠE, d(μ)=d(ν)} is closed under products."""
    PE = sorted(PE, key=Path.sort_key)
    gens = [(rep.S(m) @ rep.Sstar(n)).toarray() for m in PE for n in PE
            if m.degree == n.degree and m.source == n.source]
    gens = [x for x in gens if x.any()]
    if not gens:
        return True
    base = sympy.Matrix([list(map(int, x.ravel())) for x in gens])
    r = base.rank()
    for a in gens:
        for b in gens:
            c = a @ b
            if not c.any():
                continue
            if base.col_join(sympy.Matrix([list(map(int, c.ravel()))])).rank() != r:
                return False
    return True


# -- formal elements and the gauge action ----------------------------------------

class FormalElement:
    """Finite sum Σ a_{μν} s_μ s_ν*."""

    def __init__(self, terms: dict[tuple[Path, Path], complex] | None = None):
        self.terms: dict[tuple[Path, Path], complex] = {}
        for (mu, nu), c in (terms or {}).items():
            self._add(mu, nu, c)

    def _add(self, mu: Path, nu: Path, c) -> None:
        if mu.source != nu.source:
            raise CkError(f"s({mu}) != s({nu})")
        c = self.terms.get((mu, nu), 0) + c
        if c == 0:
            self.terms.pop((mu, nu), None)
        else:
            self.terms[(mu, nu)] = c

    @classmethod
    def term(cls, mu: Path, nu: Path, c=1) -> "FormalElement":
        return cls({(mu, nu): c})

    def __add__(self, other: "FormalElement") -> "FormalElement":
        out = FormalElement(self.terms)
        for (mu, nu), c in other.terms.items():
            out._add(mu, nu, c)
        return out

    def __neg__(self) -> "FormalElement":
        return FormalElement({k: -c for k, c in self.terms.items()})

    def __sub__(self, other: "FormalElement") -> "FormalElement":
        return self + (-other)

    def __rmul__(self, c) -> "FormalElement":
        return FormalElement({k: c * v for k, v in self.terms.items()})

    def __eq__(self, other) -> bool:
        return isinstance(other, FormalElement) and self.terms == other.terms

    def __repr__(self) -> str:
        parts = [f"{c}·s[{mu}]s[{nu}]*" for (mu, nu), c in sorted(
            self.terms.items(), key=lambda t: (t[0][0].sort_key(), t[0][1].sort_key()))]
        return " + ".join(parts) or "0"

    def is_zero(self) -> bool:
        return not self.terms

    def diagonal_part(self) -> "FormalElement":
        """a₀: the terms with d(μ) = d(ν)."""
        return FormalElement({(m, n): c for (m, n), c in self.terms.items() if m.degree == n.degree})

    def evaluate(self, rep: MatrixCK):
        """π_S(a). Integer coefficients give an exact int64 matrix."""
        exact = all(complex(c).imag == 0 and float(complex(c).real).is_integer() for c in self.terms.values())
        out = rep.zero() if exact else sp.csr_matrix((rep.dimension,) * 2, dtype=np.complex128)
        for (mu, nu), c in self.terms.items():
            coef = int(complex(c).real) if exact else complex(c)
            out = out + coef * (rep.S(mu) @ rep.Sstar(nu))
        return out.tocsr()


def _power(z: complex, e: int) -> complex:
    return z ** e if e >= 0 else z.conjugate() ** (-e)


def gauge_apply(a: FormalElement, z: Sequence[complex]) -> FormalElement:
    """γ_z: a_{μν} ↦ z^{d(μ)-d(ν)} a_{μν}."""
    z = tuple(complex(c) for c in z)
    if any(abs(abs(c) - 1) > 1e-12 for c in z):
        raise CkError("gauge parameters must lie on the unit circle")
    out = FormalElement()
    for (mu, nu), c in a.terms.items():
        factor = 1
        for zi, e in zip(z, dg.sub(mu.degree, nu.degree)):
            factor *= _power(zi, e)
        out._add(mu, nu, factor * c)
    return out


def root_of_minus_one(e: Sequence[int]) -> tuple[complex, ...]:
    """ω with ω^e = -1, using exact values when some |e_i| <= 2."""
    e = tuple(e)
    nz = [i for i, c in enumerate(e) if c != 0]
    if not nz:
        raise CkError("no ω satisfies ω^0 = -1")
    i = min(nz, key=lambda j: (abs(e[j]), j))
    exact = {1: -1 + 0j, 2: 1j}
    w = exact.get(abs(e[i]), cmath.exp(1j * cmath.pi / abs(e[i])))
    if e[i] < 0:
        w = w.conjugate()
    return tuple(w if j == i else 1 + 0j for j in range(len(e)))


# -- kernel witness -----------------------------------------------------------------

@dataclass
class KernelWitness:
    g: KGraph
    element: FormalElement
    mu: Path
    nu: Path
    alpha: Path
    omega: tuple
    image: sp.csr_matrix
    projection: sp.csr_matrix

    @property
    def in_kernel(self) -> bool:
        return _is_zero(self.image)

    def gauge_check(self) -> bool:
        ma = P.compose(self.g, self.mu, self.alpha)
        lhs = self.element + gauge_apply(self.element, self.omega)
        return lhs == FormalElement.term(ma, ma, 2)


def kernel_witness(g: KGraph, v: str, m: Sequence[int], n: Sequence[int],
                   rep: MatrixCK | None = None) -> KernelWitness:
    """a = s_{μα}s_{μα}* - s_{να}s_{μα}*, nonzero in C*(Λ) but killed by π_S."""
    m, n = tuple(m), tuple(n)
    if m == n or not check_local_periodicity(g, v, m, n).is_holds:
        raise CkError("LP not established")
    mu, nu, alpha = periodicity_triple(g, v, m, n)
    ma, na = P.compose(g, mu, alpha), P.compose(g, nu, alpha)
    a = FormalElement.term(ma, ma, 1) - FormalElement.term(na, ma, 1)
    omega = root_of_minus_one(dg.sub(nu.degree, mu.degree))
    rep = rep if rep is not None else build_matrix_rep(g)
    kw = KernelWitness(g, a, mu, nu, alpha, omega, a.evaluate(rep), rep.proj(ma))
    if not kw.in_kernel:
        raise AssertionError("π_S(a) is not zero")
    if not kw.gauge_check():
        raise AssertionError("(id + γ_ω)(a) != 2 s_{μα}s_{μα}*")
    if _is_zero(kw.projection):
        raise AssertionError("s_{μα}s_{μα}* vanishes in the representation")
    return kw


# -- the Q map --------------------------------------------------------------------

@dataclass
class QResult:
    Qa: np.ndarray
    Qa0: np.ndarray
    a_norm: float
    a0_norm: float
    Qa_norm: float
    Qa0_norm: float
    tau: Path


def _norm(m: np.ndarray) -> float:
    return float(np.linalg.norm(m, 2)) if m.size else 0.0


def qmap(rep: MatrixCK, H: Iterable[Path], N: Sequence[int], a: FormalElement,
         tau_bound: Sequence[int] | None = None) -> QResult:
    g = rep.g
    H = sorted(set(H), key=Path.sort_key)
    N = tuple(N)
    for mu, nu in a.terms:
        if mu not in H or nu not in H:
            raise CkError(f"term ({mu}, {nu}) is not supported on H x H")
        if not (P.in_le(g, mu, N) and P.in_le(g, nu, N)):
            raise CkError(f"term ({mu}, {nu}) is not in Λ^<=({dg.fmt(N)})")
    tau = separating_extension(g, H, tau_bound)
    Q = {}
    for rho in H:
        if P.in_le(g, rho, N):
            rt = P.compose(g, rho, tau)
            Q.setdefault(rho.degree, rep.zero())
            Q[rho.degree] = Q[rho.degree] + rep.proj(rt)

    def apply(b: np.ndarray) -> np.ndarray:
        out = np.zeros_like(b)
        for q in Q.values():
            qd = q.toarray()
            out = out + qd @ b @ qd
        return out

    A = a.evaluate(rep).toarray().astype(np.complex128)
    A0 = a.diagonal_part().evaluate(rep).toarray().astype(np.complex128)
    Qa, Qa0 = apply(A), apply(A0)
    return QResult(Qa, Qa0, _norm(A), _norm(A0), _norm(Qa), _norm(Qa0), tau)


def q_apply(rep: MatrixCK, H: Iterable[Path], N: Sequence[int], tau: Path, b: np.ndarray) -> np.ndarray:
    """Q(b) for an arbitrary matrix b, with a given τ."""
    g = rep.g
    out = np.zeros_like(b, dtype=np.complex128)
    by_degree: dict[tuple, np.ndarray] = {}
    for rho in set(H):
        if P.in_le(g, rho, tuple(N)):
            q = rep.proj(P.compose(g, rho, tau)).toarray()
            by_degree[rho.degree] = by_degree.get(rho.degree, 0) + q
    for q in by_degree.values():
        out = out + q @ b @ q
    return out


# -- restriction to a tail class -----------------------------------------------

def tail_class(rep: MatrixCK, x: B.BoundaryPath) -> list[B.BoundaryPath]:
    g = rep.g
    tx = B.tails(g, x)
    return [y for y in rep.basis if B.tails(g, y) & tx]


def restricted_rep(rep: MatrixCK, x: B.BoundaryPath) -> MatrixCK:
    """The subrepresentation on span{ζ_y : y tail-equivalent to x}."""
    if x not in rep.index:
        raise CkError(f"{x} is not in the basis")
    return MatrixCK(rep.g, tail_class(rep, x))
