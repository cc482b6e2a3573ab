"""Aperiodicity via separating extensions, and local periodicity on ∂Λ.

Two independent routes are offered. ``check_aperiodicity`` scans reduced
pairs (μ, ν) and looks for τ with MCE(μτ, ντ) = ∅. ``check_no_local_periodicity``
works on boundary paths alone and never looks at MCE.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import networkx as nx

from . import boundary as B
from . import degree as dg
from . import paths as P
from .align import mce
from .paths import Path
from .skeleton import KGraph
from .verdict import Verdict


class AperiodicityError(ValueError):
    pass


def _colex(m: Sequence[int]) -> tuple:
    return tuple(reversed(tuple(m)))


def witness_key(m: Sequence[int], n: Sequence[int]) -> tuple:
    """Search order for reduced pairs and LP candidates.

    Disjoint supports first, then incomparable degrees, then small total size.
    """
    m, n = tuple(m), tuple(n)
    return (not dg.is_zero(dg.meet(m, n)), dg.comparable(m, n), dg.total(m) + dg.total(n),
            _colex(m), _colex(n))


def _orient(m, n):
    return (m, n) if _colex(m) <= _colex(n) else (n, m)


@dataclass(frozen=True)
class PeriodicityWitness:
    vertex: str
    m: tuple
    n: tuple
    evidence: str

    def to_json(self) -> dict:
        return {"vertex": self.vertex, "m": list(self.m), "n": list(self.n), "evidence": self.evidence}


@dataclass
class AperiodicityReport:
    verdict: Verdict
    witness_map: list[tuple[Path, Path, Path | None]] = field(default_factory=list)
    periodicity_witness: PeriodicityWitness | None = None
    pair_bound: tuple = ()
    tau_bound: tuple = ()
    method: str = ""

    @property
    def separated(self) -> bool:
        return all(t is not None for _, _, t in self.witness_map)

    def to_json(self) -> dict:
        return {
            "verdict": self.verdict.status.value,
            "reason": self.verdict.reason,
            "method": self.method,
            "pair_bound": list(self.pair_bound),
            "tau_bound": list(self.tau_bound),
            "periodicity_witness": self.periodicity_witness.to_json() if self.periodicity_witness else None,
            "witnesses": [{"mu": str(a), "nu": str(b), "tau": None if t is None else str(t)}
                          for a, b, t in self.witness_map],
        }


# -- reduced pairs and τ search ---------------------------------------------

def reduced_pairs(g: KGraph, pair_bound: Sequence[int]) -> list[tuple[Path, Path]]:
    """Distinct (μ, ν) with equal range and source and d(μ) ∧ d(ν) = 0."""
    out = []
    for v in g.vertices:
        ps = P.paths_upto(g, v, pair_bound)
        for i, a in enumerate(ps):
            for b in ps[i + 1:]:
                if a.source != b.source or not dg.is_zero(dg.meet(a.degree, b.degree)):
                    continue
                if _colex(b.degree) < _colex(a.degree):
                    a, b = b, a
                out.append((a, b))
    out.sort(key=lambda ab: (witness_key(ab[0].degree, ab[1].degree), ab[0].range,
                             ab[0].sort_key(), ab[1].sort_key()))
    return out


def find_separator(g: KGraph, mu: Path, nu: Path, tau_bound: Sequence[int]) -> Path | None:
    """First τ (by total degree, then degree, then word) with MCE(μτ, ντ) = ∅."""
    if mu.source != nu.source:
        raise AperiodicityError("paths must share a source")
    for tau in P.paths_upto(g, mu.source, tau_bound):
        if not mce(g, P.compose(g, mu, tau), P.compose(g, nu, tau)):
            return tau
    return None


def _full_bound(g: KGraph) -> tuple:
    top = dg.zero(g.rank)
    for v in g.vertices:
        for lam in B.all_paths_from(g, v):
            top = dg.join(top, lam.degree)
    return top


# -- k = 1 cross-check --------------------------------------------------------

def loop_entrance_test(g: KGraph) -> Verdict:
    """Condition (L): every cycle has a vertex receiving a second edge."""
    if g.rank != 1:
        raise AperiodicityError("the loop/entrance test is for rank 1")
    simple = nx.DiGraph()
    simple.add_nodes_from(g.vertices)
    for e in g.edges.values():
        simple.add_edge(e.range, e.source)
    for cyc in sorted(nx.simple_cycles(simple), key=lambda c: (len(c), sorted(c))):
        if all(len(g.edges_into(u, 1)) == 1 for u in cyc):
            return Verdict.fails(tuple(cyc), "cycle without an entrance")
    return Verdict.holds(None, "every cycle has an entrance")


# -- local periodicity ----------------------------------------------------------

def check_local_periodicity(g: KGraph, v: str, m: Sequence[int], n: Sequence[int]) -> Verdict:
    """Does σ^m(x) = σ^n(x) with m ∨ n <= d(x) hold for every x ∈ v∂Λ?"""
    m, n = tuple(m), tuple(n)
    if m == n:
        raise AperiodicityError("local periodicity needs m != n")
    top = dg.join(m, n)
    listing = B.boundary_paths(g, v)
    members = list(listing.paths) if listing.exact else B.certified_members(g, v)
    for x in members:
        if not dg.leq(top, x.degree):
            return Verdict.fails(x, "d(x) is not above m ∨ n", clause="NLP1")
        if B.shift(g, x, m) != B.shift(g, x, n):
            return Verdict.fails(x, "shifts by m and n differ", clause="NLP2")
    if listing.exact:
        return Verdict.holds((v, m, n), f"all {len(members)} boundary paths agree")
    return Verdict.unknown((v, m, n), "boundary listing is truncated")


def _covered(g: KGraph, members: Iterable[B.BoundaryPath]) -> set[int]:
    """Coordinates i for which some member has finite d(x)_i."""
    return {i for x in members for i in range(g.rank) if x.degree[i] != dg.INF}


def _lp_box(g: KGraph, listing: B.BoundaryListing) -> tuple:
    if g.rank == 1:
        pre = max(len(x.prefix.edges) for x in listing.paths)
        per = math.lcm(*(len(x.cycle.edges) for x in listing.paths if x.kind == "periodic"))
        return (pre + per,)
    return dg.ones(g.rank, len(g.vertices))


def lp_candidates(bound: Sequence[int]) -> list[tuple[tuple, tuple]]:
    pts = dg.box(bound)
    pairs = {_orient(a, b) for a in pts for b in pts if a != b}
    return sorted(pairs, key=lambda mn: witness_key(*mn))


def local_periodicity_at(g: KGraph, v: str) -> Verdict:
    """Decide whether some LP(m, n) holds at v.

    Holds means a witness (v, m, n) was found; Fails means none exists.
    """
    listing = B.boundary_paths(g, v)
    members = list(listing.paths) if listing.exact else B.certified_members(g, v)
    cov = _covered(g, members)
    if len(cov) == g.rank:
        return Verdict.fails(None, "every coordinate is finite on some boundary path")
    if not listing.exact:
        return Verdict.unknown(None, "boundary listing is truncated")
    for m, n in lp_candidates(_lp_box(g, listing)):
        if any(m[i] != n[i] for i in cov):
            continue
        if check_local_periodicity(g, v, m, n).is_holds:
            return Verdict.holds(PeriodicityWitness(v, m, n, "exact boundary listing"))
    return Verdict.fails(None, "no candidate in the sufficient box")


def check_no_local_periodicity(g: KGraph) -> Verdict:
    """Holds if no vertex carries a local periodicity; Fails with the first (v, m, n)."""
    unknown = []
    for v in g.vertices:
        r = local_periodicity_at(g, v)
        if r.is_holds:
            return Verdict.fails(r.certificate, f"local periodicity at {v}")
        if r.is_unknown:
            unknown.append(v)
    if unknown:
        return Verdict.unknown(tuple(unknown), "no exact decision at these vertices")
    return Verdict.holds(None, "no local periodicity at any vertex")


# -- the definition-based checker ------------------------------------------------

def check_aperiodicity(g: KGraph, pair_bound: Sequence[int] | None = None,
                       tau_bound: Sequence[int] | None = None) -> AperiodicityReport:
    pair_bound = tuple(pair_bound) if pair_bound is not None else dg.ones(g.rank, 2)
    tau_bound = tuple(tau_bound) if tau_bound is not None else dg.ones(g.rank, 4)
    if g.acyclic:
        # finitely many paths: scan them all
        top = _full_bound(g)
        pair_bound, tau_bound = dg.join(pair_bound, top), dg.join(tau_bound, top)

    wmap: list[tuple[Path, Path, Path | None]] = []
    candidates: dict[tuple, None] = {}
    for mu, nu in reduced_pairs(g, pair_bound):
        tau = find_separator(g, mu, nu, tau_bound)
        wmap.append((mu, nu, tau))
        if tau is None:
            candidates[(mu.range, mu.degree, nu.degree)] = None

    report = AperiodicityReport(Verdict.unknown(), wmap, None, pair_bound, tau_bound)
    for v, m, n in candidates:
        if check_local_periodicity(g, v, m, n).is_holds:
            report.periodicity_witness = PeriodicityWitness(v, m, n, "exact boundary listing")
            report.verdict = Verdict.fails((v, m, n), "reduced pair with no separating extension")
            report.method = "local-periodicity"
            return report

    if g.acyclic and report.separated:
        report.verdict = Verdict.holds(None, "all pairs separated; graph is acyclic")
        report.method = "full-enumeration"
        return report
    nlp = check_no_local_periodicity(g)
    if nlp.is_fails:
        report.periodicity_witness = nlp.certificate
        w = nlp.certificate
        report.verdict = Verdict.fails((w.vertex, w.m, w.n), "local periodicity found on ∂Λ")
        report.method = "local-periodicity"
    elif not report.separated:
        report.verdict = Verdict.unknown(None, "some reduced pair has no separator within the bound")
        report.method = "bounded-scan"
    elif g.rank == 1 and loop_entrance_test(g).is_holds:
        report.verdict = Verdict.holds(None, "all pairs separated; every cycle has an entrance")
        report.method = "loop-entrance"
    elif nlp.is_holds:
        report.verdict = Verdict.holds(None, "all pairs separated; no local periodicity")
        report.method = "no-local-periodicity"
    else:
        report.verdict = Verdict.unknown(None, "pairs separated within the bound only")
        report.method = "bounded-scan"
    return report


def _cached_report(g: KGraph) -> AperiodicityReport:
    key = ("aperiodicity",)
    if key not in g._cache:
        g._cache[key] = check_aperiodicity(g)
    return g._cache[key]


def separating_extension(g: KGraph, H: Iterable[Path], tau_bound: Sequence[int] | None = None,
                         allow_unknown: bool = False) -> Path:
    """τ with MCE(ατ, βτ) = ∅ for all distinct α, β ∈ H, built pair by pair."""
    H = sorted(set(H), key=Path.sort_key)
    sources = {p.source for p in H}
    if len(sources) > 1:
        raise AperiodicityError(f"paths in H have different sources: {sorted(sources)}")
    verdict = _cached_report(g).verdict
    if verdict.is_fails or (verdict.is_unknown and not allow_unknown):
        raise AperiodicityError(f"aperiodicity is {verdict.status.value}, not established")
    if len(H) <= 1:
        return P.vertex(g, H[0].source) if H else None
    tau_bound = tuple(tau_bound) if tau_bound is not None else dg.ones(g.rank, 4)
    tau = P.vertex(g, H[0].source)
    for i, a in enumerate(H):
        for b in H[i + 1:]:
            at, bt = P.compose(g, a, tau), P.compose(g, b, tau)
            if not mce(g, at, bt):
                continue
            step = find_separator(g, at, bt, tau_bound)
            if step is None:
                raise AperiodicityError(f"no separator for ({a}, {b}) within ({dg.fmt(tau_bound)})")
            tau = P.compose(g, tau, step)
    for i, a in enumerate(H):
        for b in H[i + 1:]:
            assert not mce(g, P.compose(g, a, tau), P.compose(g, b, tau))
    return tau


def periodicity_triple(g: KGraph, v: str, m: Sequence[int], n: Sequence[int]) -> tuple[Path, Path, Path]:
    """(μ, ν, α) = (x(0,m), x(0,n), x(m, m∨n)), with μαz = ναz checked on s(α)∂Λ."""
    m, n = tuple(m), tuple(n)
    lp = check_local_periodicity(g, v, m, n)
    if not lp.is_holds:
        raise AperiodicityError(f"LP({dg.fmt(m)}; {dg.fmt(n)}) at {v} is not established")
    x = B.boundary_paths(g, v).paths[0]
    top = dg.join(m, n)
    mu, nu = B.initial(g, x, m), B.initial(g, x, n)
    alpha = B.segment(g, x, m, top)
    mua, nua = P.compose(g, mu, alpha), P.compose(g, nu, alpha)
    zs = B.boundary_paths(g, alpha.source)
    if not zs.exact:
        raise AperiodicityError(f"boundary listing at {alpha.source} is not exact")
    for z in zs.paths:
        if B.prepend(g, mua, z) != B.prepend(g, nua, z):
            raise AssertionError(f"μαz != ναz for z = {z}")
    return mu, nu, alpha
