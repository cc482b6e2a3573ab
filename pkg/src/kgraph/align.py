"""Common extensions: MCE, Λ^min pairs, Ext and exhaustive-set testing."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

from . import degree as dg
from . import paths as P
from .paths import Path
from .skeleton import KGraph
from .verdict import Verdict


def mce(g: KGraph, mu: Path, nu: Path) -> tuple[Path, ...]:
    """Minimal common extensions of mu and nu, in enumeration order."""
    if mu.range != nu.range:
        return ()
    if dg.leq(nu.degree, mu.degree):
        return (mu,) if P.is_prefix(g, nu, mu) else ()
    if dg.leq(mu.degree, nu.degree):
        return (nu,) if P.is_prefix(g, mu, nu) else ()
    top = dg.join(mu.degree, nu.degree)
    out = []
    for alpha in P.paths_of_degree(g, mu.source, dg.sub(top, mu.degree)):
        lam = P.compose(g, mu, alpha)
        if P.is_prefix(g, nu, lam):
            out.append(lam)
    return tuple(sorted(out, key=Path.sort_key))


def min_extensions(g: KGraph, mu: Path, nu: Path) -> list[tuple[Path, Path]]:
    """Pairs (α, β) with μα = νβ ∈ MCE(μ, ν)."""
    pairs = []
    for lam in mce(g, mu, nu):
        alpha = P.segment(g, lam, mu.degree, lam.degree)
        beta = P.segment(g, lam, nu.degree, lam.degree)
        pairs.append((alpha, beta))
    images = [P.compose(g, mu, a) for a, _ in pairs]
    if len(set(images)) != len(images):
        raise AssertionError("(α, β) -> μα is not injective")
    return pairs


def ext(g: KGraph, lam: Path, E: Iterable[Path]) -> list[Path]:
    """Ext(λ, E): the tails beyond λ of the minimal common extensions with E."""
    out: dict[Path, None] = {}
    for mu in E:
        if mu.range != lam.range:
            raise ValueError(f"{mu} does not have range r(λ)={lam.range}")
        top = dg.join(lam.degree, mu.degree)
        for nu in mce(g, lam, mu):
            out[P.segment(g, nu, lam.degree, top)] = None
    return sorted(out, key=Path.sort_key)


def max_mce_cardinality(g: KGraph) -> int:
    """Largest |MCE(μ, ν)| over paths of degree <= (1,...,1)."""
    best = 0
    for v in g.vertices:
        ps = P.paths_upto(g, v, dg.ones(g.rank))
        for i, mu in enumerate(ps):
            for nu in ps[i:]:
                best = max(best, len(mce(g, mu, nu)))
    return best


@dataclass(frozen=True)
class FiniteExhaustiveSet:
    vertex: str
    paths: tuple[Path, ...]
    certificate: str  # "boundary-oracle" | "bounded-search" | "by-construction"

    def __post_init__(self):
        if not self.paths:
            raise ValueError("exhaustive sets are non-empty")
        if any(p.range != self.vertex for p in self.paths):
            raise ValueError("all elements must have range v")

    def to_json(self) -> dict:
        return {"vertex": self.vertex, "paths": [str(p) for p in self.paths],
                "certificate": self.certificate}


def _fails_search(g: KGraph, v: str, E: Sequence[Path], bound) -> Path | None:
    for mu in P.paths_upto(g, v, bound):
        if all(not mce(g, mu, lam) for lam in E):
            return mu
    return None


def _finite_witness(g: KGraph, x, E: Sequence[Path]) -> Path | None:
    """A finite initial segment of x sharing no extension with E."""
    from .boundary import initial

    top = dg.zero(g.rank)
    for lam in E:
        top = dg.join(top, lam.degree)
    for extra in range(0, 4):
        cap = tuple(c if d == dg.INF else min(c, int(d)) for c, d in
                    zip(dg.add(top, dg.ones(g.rank, extra)), x.degree))
        mu = initial(g, x, cap)
        if all(not mce(g, mu, lam) for lam in E):
            return mu
    return None


def covers_boundary(g: KGraph, v: str, E: Sequence[Path]):
    """Check every x ∈ v∂Λ has an initial segment in E.

    Returns (True, None), (False, x) or (None, None) when v∂Λ is not exact.
    """
    from .boundary import boundary_paths, initial

    listing = boundary_paths(g, v)
    if not listing.exact:
        return None, None
    for x in listing.paths:
        if not any(dg.leq(lam.degree, x.degree) and initial(g, x, lam.degree) == lam for lam in E):
            return False, x
    return True, None


def is_exhaustive(g: KGraph, v: str, E: Iterable[Path], strategy: str = "auto",
                  bound: Sequence[int] | None = None) -> Verdict:
    """Decide whether finite E ⊆ vΛ is exhaustive.

    Holds is only emitted from the boundary oracle or when E contains the
    vertex v, or (locally convex graphs) when E is a whole vΛ^{<=n}.
    Bounded search can only refute.
    """
    E = sorted(set(E), key=Path.sort_key)
    if not E:
        raise ValueError("empty set is never exhaustive")
    for lam in E:
        if lam.range != v:
            raise ValueError(f"{lam} does not have range {v}")
    bound = tuple(bound) if bound is not None else dg.ones(g.rank, 2)
    fe = lambda cert: FiniteExhaustiveSet(v, tuple(E), cert)  # noqa: E731

    if any(lam.is_vertex for lam in E):
        return Verdict.holds(fe("by-construction"), "E contains the vertex")
    witness = _fails_search(g, v, E, bound)
    if witness is not None:
        return Verdict.fails(witness, "path with no common extension with any element of E")
    if strategy in ("auto", "boundary"):
        ok, x = covers_boundary(g, v, E)
        if ok:
            return Verdict.holds(fe("boundary-oracle"), "every boundary path from v meets E")
        if ok is False:
            mu = _finite_witness(g, x, E)
            if mu is not None:
                return Verdict.fails(mu, "prefix of a boundary path avoiding E", boundary_path=x)
    if strategy in ("auto", "construction") and g.locally_convex:
        top = bound
        for lam in E:
            top = dg.join(top, lam.degree)
        for n in dg.box(top):
            if set(P.paths_le(g, v, n)) == set(E):
                return Verdict.holds(fe("by-construction"), f"E = vΛ^<=({dg.fmt(n)})")
    return Verdict.unknown(bound, "bounded search exhausted")
