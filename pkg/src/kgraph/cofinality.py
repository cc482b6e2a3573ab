"""Cofinality through finite exhaustive sets, and its boundary-path counterpart."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import networkx as nx

from . import boundary as B
from . import degree as dg
from . import paths as P
from .align import FiniteExhaustiveSet, ext, is_exhaustive
from .paths import Path
from .skeleton import KGraph
from .verdict import Status, Verdict, conjoin


class CofinalityError(ValueError):
    pass


@dataclass(frozen=True)
class VertexSet:
    vertices: frozenset[str]
    role: str  # "reachable" | "K"

    def __contains__(self, v: str) -> bool:
        return v in self.vertices

    def __iter__(self):
        return iter(sorted(self.vertices))

    def __len__(self) -> int:
        return len(self.vertices)

    def __le__(self, other) -> bool:
        return self.vertices <= set(other)

    def to_json(self) -> dict:
        return {"role": self.role, "vertices": sorted(self.vertices)}


@dataclass
class PairResult:
    verdict: Verdict
    fe: FiniteExhaustiveSet | None = None
    path: B.BoundaryPath | None = None
    kset: VertexSet | None = None
    method: str = ""

    def to_json(self) -> dict:
        return {
            "verdict": self.verdict.status.value,
            "method": self.method,
            "fe": self.fe.to_json() if self.fe else None,
            "avoiding_path": str(self.path) if self.path else None,
            "k_set": self.kset.to_json() if self.kset else None,
        }


@dataclass
class CofinalityReport:
    verdict: Verdict
    pairs: dict[tuple[str, str], PairResult] = field(default_factory=dict)

    def failing_pair(self) -> tuple[str, str] | None:
        for key, res in self.pairs.items():
            if res.verdict.is_fails:
                return key
        return None

    def to_json(self) -> dict:
        return {"verdict": self.verdict.status.value, "reason": self.verdict.reason,
                "pairs": {f"{v},{w}": r.to_json() for (v, w), r in self.pairs.items()}}


def reachable_from(g: KGraph, v: str) -> VertexSet:
    """R(v) = {u : vΛu nonempty}."""
    if v not in g.vertices:
        raise CofinalityError(f"unknown vertex {v!r}")
    return VertexSet(g.reachable(v), "reachable")


# -- vertices met by a boundary path -------------------------------------------

def visited(g: KGraph, x: B.BoundaryPath) -> frozenset[str]:
    """{x(n)} for exact bodies; for truncations only the known prefix."""
    lam = x.prefix
    out = {P.segment(g, lam, dg.zero(g.rank), n).source for n in dg.box(lam.degree)}
    if x.kind == "periodic":
        out |= {g.edges[e].range for e in x.cycle.edges}
    elif x.kind == "rigid":
        out |= g.reachable(lam.source)
    return frozenset(out)


def avoiding_member(g: KGraph, v: str, w: str) -> B.BoundaryPath | None:
    """A genuine x ∈ w∂Λ with x(n) ∉ R(v) for every n."""
    R = g.reachable(v)
    for x in B.certified_members(g, w):
        if not visited(g, x) & R:
            return x
    return None


def cofinality_boundary_oracle(g: KGraph, v: str) -> Verdict:
    """Does every x ∈ ∂Λ pass through R(v)?"""
    R = g.reachable(v)
    open_bodies = []
    for w in g.vertices:
        listing = B.boundary_paths(g, w)
        for x in listing.paths:
            if visited(g, x) & R:
                continue
            if x.exact:
                return Verdict.fails(x, f"boundary path avoiding R({v})")
            open_bodies.append(x)
        if not listing.exact:
            x = avoiding_member(g, v, w)
            if x is not None:
                return Verdict.fails(x, f"boundary path avoiding R({v})")
    if open_bodies:
        return Verdict.unknown(tuple(open_bodies), "truncated bodies avoid R(v) to full depth")
    return Verdict.holds(None, f"every boundary path meets R({v})")


# -- exact iterations ------------------------------------------------------------

def _iterate(step, start: frozenset[str], R: frozenset[str]):
    """Run F_{t+1} = step(F_t) until F_t ⊆ R (returns t) or F_t repeats (returns the set)."""
    F, seen, t = start, set(), 0
    while True:
        if F <= R:
            return t, None
        if F in seen:
            return None, F
        seen.add(F)
        F, t = step(F), t + 1


def cofinality_lc_exact(g: KGraph, v: str, w: str) -> Verdict:
    """Exact test of ∃n: s(wΛ^{<=n}) ⊆ R(v) on locally convex graphs."""
    if not g.locally_convex:
        raise CofinalityError("cofinality_lc_exact needs a locally convex k-graph")
    one = dg.ones(g.rank)

    def step(F):
        return frozenset(lam.source for u in F for lam in P.paths_le(g, u, one))

    t, loop = _iterate(step, frozenset({w}), g.reachable(v))
    if t is not None:
        n = dg.ones(g.rank, t)
        E = FiniteExhaustiveSet(w, tuple(P.paths_le(g, w, n)), "by-construction")
        return Verdict.holds(E, f"s(wΛ^<=({dg.fmt(n)})) ⊆ R(v)", n=n)
    return Verdict.fails(VertexSet(loop, "K"), "the source sets repeat without entering R(v)")


def xn_paths(g: KGraph, w: str, n: int) -> list[Path]:
    """X_n at w: paths of length n, and shorter ones ending at a sink."""
    if g.rank != 1:
        raise CofinalityError("xn_paths is for rank 1")
    out = []
    for lam in P.paths_upto(g, w, (n,)):
        if lam.degree[0] == n or not g.edges_into(lam.source, 1):
            out.append(lam)
    return out


def check_cofinality_digraph(g: KGraph, v: str, w: str) -> Verdict:
    if g.rank != 1:
        raise CofinalityError("check_cofinality_digraph is for rank 1")
    R = frozenset(nx.descendants(g.digraph, v)) | {v}
    seen: set[frozenset[str]] = set()
    n = 0
    while True:
        X = xn_paths(g, w, n)
        S = frozenset(lam.source for lam in X)
        if S <= R:
            return Verdict.holds(tuple(X), f"s(X_{n}) ⊆ R(v)", n=n)
        if S in seen:
            return Verdict.fails(VertexSet(S, "K"), "source sets of X_n repeat outside R(v)")
        seen.add(S)
        n += 1


# -- general route ----------------------------------------------------------------

def _certified_fe(g: KGraph, u: str, bound: Sequence[int]) -> list[FiniteExhaustiveSet]:
    key = ("fe-family", u, tuple(bound))
    if key not in g._cache:
        out = []
        for n in dg.box(bound):
            E = P.paths_le(g, u, n)
            r = is_exhaustive(g, u, E)
            if r.is_holds:
                out.append(r.certificate)
        g._cache[key] = out
    return g._cache[key]


def k_set(g: KGraph, v: str, bound: Sequence[int]) -> VertexSet:
    """Greatest K ⊆ Λ^0 ∖ R(v) closed under predecessors in which every certified FE set meets K."""
    K = set(g.vertices) - g.reachable(v)
    changed = True
    while changed:
        changed = False
        for u in sorted(K):
            if u not in K:
                continue
            if any(not {lam.source for lam in E.paths} & K for E in _certified_fe(g, u, bound)):
                K -= g.reachable(u)
                changed = True
    return VertexSet(frozenset(K), "K")


def _general_pair(g: KGraph, v: str, w: str, bound: Sequence[int]) -> PairResult:
    R = g.reachable(v)
    for n in dg.box(bound):
        whole = P.paths_le(g, w, n)
        if all(lam.source in R for lam in whole):
            candidates = [whole]
        else:
            candidates = [[lam for lam in P.paths_upto(g, w, n) if lam.source in R]]
        for E in candidates:
            if not E:
                continue
            r = is_exhaustive(g, w, E)
            if r.is_holds:
                return PairResult(Verdict.holds(r.certificate, f"FE set at {w} with sources in R({v})"),
                                  fe=r.certificate, method="fe-search")
    x = avoiding_member(g, v, w)
    K = k_set(g, v, bound)
    if x is not None:
        return PairResult(Verdict.fails(x, f"boundary path from {w} avoiding R({v})"), path=x,
                          kset=K if w in K else None, method="boundary-oracle")
    return PairResult(Verdict.unknown(K if w in K else None, "no certificate either way"),
                      kset=K if w in K else None, method="fe-search")


def check_cofinality(g: KGraph, bound: Sequence[int] | None = None, method: str = "auto",
                     pairs: Sequence[tuple[str, str]] | None = None) -> CofinalityReport:
    """Every (v, w) needs E ∈ wFE(Λ) with vΛs(α) nonempty for all α ∈ E.

    ``method="auto"`` uses the exact iteration on locally convex graphs;
    ``method="general"`` always searches FE sets inside wΛ^{<=n}, n <= bound.
    """
    if method not in ("auto", "general"):
        raise ValueError(f"unknown method {method!r}")
    bound = tuple(bound) if bound is not None else dg.ones(g.rank, 3)
    todo = pairs if pairs is not None else [(v, w) for v in g.vertices for w in g.vertices]
    table: dict[tuple[str, str], PairResult] = {}
    for v, w in todo:
        if v not in g.vertices or w not in g.vertices:
            raise CofinalityError(f"unknown vertex in pair ({v}, {w})")
        if method == "auto" and g.locally_convex:
            r = cofinality_lc_exact(g, v, w)
            if r.is_holds:
                table[(v, w)] = PairResult(r, fe=r.certificate, method="lc-exact")
            else:
                x = avoiding_member(g, v, w)
                table[(v, w)] = PairResult(Verdict.fails(x, r.reason, k_set=r.certificate) if x is not None
                                           else Verdict.unknown(r.certificate, r.reason),
                                           path=x, kset=r.certificate, method="lc-exact")
        else:
            table[(v, w)] = _general_pair(g, v, w, bound)
    status = conjoin(*(r.verdict.status for r in table.values()))
    if status is Status.HOLDS:
        verdict = Verdict.holds(None, "every pair has an FE certificate")
    elif status is Status.FAILS:
        bad = next(k for k, r in table.items() if r.verdict.is_fails)
        verdict = Verdict.fails(bad, f"pair {bad} has a boundary path avoiding R({bad[0]})")
    else:
        verdict = Verdict.unknown(None, "some pairs are undecided")
    return CofinalityReport(verdict, table)


# -- boundary paths inside K -------------------------------------------------------

def diagonal_position(m: int, n: int) -> int:
    """Position of (m, n) in the listing (1,1), (1,2), (2,1), (1,3), ..."""
    if m < 1 or n < 1:
        raise ValueError("diagonal_position needs m, n >= 1")
    return (m + n - 1) * (m + n - 2) // 2 + m


def diagonal_term(l: int) -> tuple[int, int]:
    """Inverse of diagonal_position."""
    if l < 1:
        raise ValueError("positions start at 1")
    s = 2
    while diagonal_position(s - 1, 1) < l:
        s += 1
    m = l - (s - 1) * (s - 2) // 2
    return m, s - m


def _fe_listing(g: KGraph, u: str, cap: int) -> list[FiniteExhaustiveSet]:
    out = []
    for c in range(1, cap + 1):
        E = P.paths_le(g, u, dg.ones(g.rank, c))
        r = is_exhaustive(g, u, E)
        if not r.is_holds:
            raise CofinalityError(f"could not certify uΛ^<=({c}) at {u} as exhaustive")
        out.append(r.certificate)
    return out


def verify_k_hypotheses(g: KGraph, K: VertexSet | set, cap: int = 2) -> None:
    Kset = set(K.vertices if isinstance(K, VertexSet) else K)
    if not Kset:
        raise CofinalityError("K must be nonempty")
    for u in sorted(Kset):
        for p in g.vertices:
            if u in g.reachable(p) and p not in Kset:
                raise CofinalityError(f"hypothesis (2) fails: {p} reaches {u} but is not in K")
        for E in _fe_listing(g, u, cap):
            if not any(lam.source in Kset for lam in E.paths):
                raise CofinalityError(f"hypothesis (1) fails at {u}: {[str(p) for p in E.paths]}")


def k_chain(g: KGraph, K: VertexSet | set, v: str, steps: int, cap: int = 2) -> list[Path]:
    """λ_1 = v, λ_2, ... with each λ_l an initial segment of λ_{l+1}."""
    Kset = frozenset(K.vertices if isinstance(K, VertexSet) else K)
    if v not in Kset:
        raise CofinalityError(f"{v} is not in K")
    verify_k_hypotheses(g, Kset, cap)
    chain = [P.vertex(g, v)]
    for l in range(1, steps + 1):
        i, j = diagonal_term(l)
        lam_i, lam_l = chain[i - 1], chain[l - 1]
        listing = _fe_listing(g, lam_i.source, cap)
        target = listing[(j - 1) % len(listing)]
        mu = P.segment(g, lam_l, lam_i.degree, lam_l.degree)
        E = ext(g, mu, target.paths)
        good = [a for a in E if a.source in Kset]
        if not good:
            raise CofinalityError(f"no α in Ext({mu}, E) with source in K at round {l}")
        chain.append(P.compose(g, lam_l, good[0]))
    return chain


def build_boundary_in_K(g: KGraph, K: VertexSet | set, v: str, steps: int, cap: int = 2) -> B.BoundaryPath:
    lam = k_chain(g, K, v, steps, cap)[-1]
    return B.finite(g, lam) if g.is_total_source(lam.source) else B.truncated(lam)
