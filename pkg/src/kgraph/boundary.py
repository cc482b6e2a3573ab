"""Boundary paths: enumeration of v∂Λ, shift and prepend.

A finite path lies in ∂Λ exactly when its source receives no edges at
all: otherwise the edges into the source form a finite exhaustive set the
path cannot meet, and conversely a path ending at such a vertex cannot be
extended, so every exhaustive set at any of its vertices must contain one
of its segments.

Infinite boundary paths are stored in three shapes:

* ``periodic`` (k = 1): a prefix followed by a repeated cycle;
* ``rigid`` (k >= 2): a prefix ending in a region where every vertex
  receives exactly one edge of each color, so the continuation is forced;
* ``truncated``: a finite prefix of some boundary path, reached at the
  enumeration depth. Truncated bodies are not members; they only bound.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import networkx as nx

from . import degree as dg
from . import paths as P
from .paths import Path
from .skeleton import KGraph, Skeleton, validate


class BoundaryError(ValueError):
    pass


@dataclass(frozen=True)
class BoundaryPath:
    kind: str  # finite | periodic | rigid | truncated
    prefix: Path
    degree: tuple
    cycle: Path | None = None

    @property
    def range(self) -> str:
        return self.prefix.range

    @property
    def exact(self) -> bool:
        return self.kind != "truncated"

    def __str__(self) -> str:
        if self.kind == "finite":
            return str(self.prefix)
        if self.kind == "periodic":
            head = "" if self.prefix.is_vertex else f"{self.prefix}*"
            return f"{head}({self.cycle})^inf"
        if self.kind == "rigid":
            head = "" if self.prefix.is_vertex else f"{self.prefix}*"
            return f"{head}rigid[{self.prefix.source}]"
        return f"{self.prefix}..."

    def to_json(self) -> dict:
        out = {"kind": self.kind, "range": self.range, "degree": dg.to_json(self.degree),
               "prefix": str(self.prefix), "exact": self.exact}
        if self.cycle is not None:
            out["cycle"] = str(self.cycle)
        return out


@dataclass(frozen=True)
class BoundaryListing:
    vertex: str
    paths: tuple[BoundaryPath, ...]
    exact: bool


# -- constructors ------------------------------------------------------------

def finite(g: KGraph, lam: Path) -> BoundaryPath:
    if not g.is_total_source(lam.source):
        raise BoundaryError(f"{lam} ends at {lam.source}, which receives edges")
    return BoundaryPath("finite", lam, lam.degree)


def truncated(lam: Path) -> BoundaryPath:
    return BoundaryPath("truncated", lam, lam.degree)


def _primitive(word: tuple[str, ...]) -> tuple[str, ...]:
    n = len(word)
    for p in range(1, n + 1):
        if n % p == 0 and word[:p] * (n // p) == word:
            return word[:p]
    return word


def periodic(g: KGraph, prefix: Path, cycle: Path) -> BoundaryPath:
    """prefix·cycle·cycle·… in canonical form (shortest prefix, primitive cycle)."""
    if g.rank != 1:
        raise BoundaryError("periodic bodies are rank-1 only")
    if cycle.is_vertex or cycle.range != cycle.source or prefix.source != cycle.range:
        raise BoundaryError("cycle must be a nontrivial loop at s(prefix)")
    pre = list(prefix.edges)
    cyc = _primitive(cycle.edges)
    while pre and pre[-1] == cyc[-1]:
        pre.pop()
        cyc = (cyc[-1],) + cyc[:-1]
    start = prefix.range
    pre_path = P.from_word(g, pre, start)
    return BoundaryPath("periodic", pre_path, (dg.INF,), P.from_word(g, cyc))


def rigid(g: KGraph, prefix: Path) -> BoundaryPath:
    """prefix followed by the forced path from s(prefix)."""
    if not g.rigid(prefix.source):
        raise BoundaryError(f"{prefix.source} does not lie in a rigid region")
    if g.rigid(prefix.range):
        prefix = P.vertex(g, prefix.range)
    else:
        changed = True
        while changed and not prefix.is_vertex:
            changed = False
            for i in range(g.rank):
                if prefix.degree[i] == 0:
                    continue
                head, last = P.factorize(g, prefix, dg.sub(prefix.degree, dg.unit(g.rank, i + 1)))
                if g.rigid(last.range):
                    prefix, changed = head, True
                    break
    return BoundaryPath("rigid", prefix, (dg.INF,) * g.rank)


def _forced(g: KGraph, u: str, n: Sequence[int]) -> Path:
    (lam,) = P.paths_of_degree(g, u, n)
    return lam


# -- segments ----------------------------------------------------------------

def initial(g: KGraph, x: BoundaryPath, n: Sequence[int]) -> Path:
    """x(0, n) for finite n <= d(x)."""
    n = tuple(n)
    if not dg.leq(n, x.degree):
        raise BoundaryError(f"({dg.fmt(n)}) exceeds d(x)=({dg.fmt(x.degree)})")
    if x.kind in ("finite", "truncated"):
        return P.segment(g, x.prefix, dg.zero(g.rank), n)
    if x.kind == "periodic":
        length = n[0]
        word = list(x.prefix.edges)
        while len(word) < length:
            word.extend(x.cycle.edges)
        return P.from_word(g, word[:length], x.range)
    top = dg.join(n, x.prefix.degree)
    full = P.compose(g, x.prefix, _forced(g, x.prefix.source, dg.sub(top, x.prefix.degree)))
    return P.segment(g, full, dg.zero(g.rank), n)


def segment(g: KGraph, x: BoundaryPath, p: Sequence[int], q: Sequence[int]) -> Path:
    return P.segment(g, initial(g, x, q), p, q)


def vertex_at(g: KGraph, x: BoundaryPath, n: Sequence[int]) -> str:
    return initial(g, x, n).source


def shift(g: KGraph, x: BoundaryPath, m: Sequence[int]) -> BoundaryPath:
    """σ^m(x)."""
    m = tuple(m)
    if not dg.leq(m, x.degree):
        raise BoundaryError(f"cannot shift by ({dg.fmt(m)}): d(x)=({dg.fmt(x.degree)})")
    if x.kind == "finite":
        return BoundaryPath("finite", P.segment(g, x.prefix, m, x.degree), dg.sub(x.degree, m))
    if x.kind == "truncated":
        return truncated(P.segment(g, x.prefix, m, x.prefix.degree))
    if x.kind == "periodic":
        steps = m[0]
        pre, cyc = x.prefix.edges, x.cycle.edges
        if steps <= len(pre):
            head = P.from_word(g, pre[steps:], initial(g, x, m).source)
            return periodic(g, head, x.cycle)
        off = (steps - len(pre)) % len(cyc)
        rot = cyc[off:] + cyc[:off]
        start = g.edges[rot[0]].range
        return periodic(g, P.vertex(g, start), P.from_word(g, rot))
    top = dg.join(m, x.prefix.degree)
    full = P.compose(g, x.prefix, _forced(g, x.prefix.source, dg.sub(top, x.prefix.degree)))
    return rigid(g, P.segment(g, full, m, top))


def prepend(g: KGraph, lam: Path, x: BoundaryPath) -> BoundaryPath:
    """λx."""
    if lam.source != x.range:
        raise BoundaryError(f"cannot prepend {lam}: s(λ)={lam.source} != r(x)={x.range}")
    head = P.compose(g, lam, x.prefix)
    if x.kind == "finite":
        return BoundaryPath("finite", head, head.degree)
    if x.kind == "truncated":
        return truncated(head)
    if x.kind == "periodic":
        return periodic(g, head, x.cycle)
    return rigid(g, head)


def tails(g: KGraph, x: BoundaryPath) -> set[BoundaryPath]:
    """{σ^m(x) : m <= d(x) finite}; finite for exact bodies."""
    if not x.exact:
        raise BoundaryError("tails of a truncated body are not determined")
    seen = {x}
    todo = [x]
    while todo:
        y = todo.pop()
        for i in range(g.rank):
            if y.degree[i] >= 1:
                z = shift(g, y, dg.unit(g.rank, i + 1))
                if z not in seen:
                    seen.add(z)
                    todo.append(z)
    return seen


# -- enumeration -------------------------------------------------------------

def _cycle_vertices(g: KGraph) -> frozenset[str]:
    key = ("cyclic-vertices",)
    if key not in g._cache:
        out = set()
        for comp in nx.strongly_connected_components(g.digraph):
            if len(comp) > 1:
                out |= comp
            else:
                (u,) = comp
                if g.digraph.has_edge(u, u):
                    out.add(u)
        g._cache[key] = frozenset(out)
    return g._cache[key]


def all_paths_from(g: KGraph, v: str) -> list[Path]:
    seen = {P.vertex(g, v)}
    todo = list(seen)
    while todo:
        lam = todo.pop()
        for c in range(1, g.rank + 1):
            for e in g.edges_into(lam.source, c):
                mu = P.compose(g, lam, P.edge(g, e))
                if mu not in seen:
                    seen.add(mu)
                    todo.append(mu)
    return sorted(seen, key=Path.sort_key)


def _periodic_members(g: KGraph, v: str) -> list[BoundaryPath]:
    cyclic = _cycle_vertices(g)
    out: list[BoundaryPath] = []

    def walk(word: list[str], u: str) -> None:
        if u in cyclic:
            cyc, w = [], u
            while True:
                (e,) = g.edges_into(w, 1)
                cyc.append(e)
                w = g.edges[e].source
                if w == u:
                    break
            out.append(periodic(g, P.from_word(g, word, v), P.from_word(g, cyc)))
        elif g.is_total_source(u):
            out.append(finite(g, P.from_word(g, word, v)))
        else:
            for e in g.edges_into(u, 1):
                walk(word + [e], g.edges[e].source)

    walk([], v)
    return out


def default_depth(g: KGraph) -> tuple[int, ...]:
    return dg.ones(g.rank, 4)


def boundary_paths(g: KGraph, v: str, depth: Sequence[int] | None = None) -> BoundaryListing:
    """v∂Λ when it can be listed exactly, otherwise truncations to ``depth``."""
    if v not in g.vertices:
        raise BoundaryError(f"unknown vertex {v!r}")
    depth = tuple(depth) if depth is not None else default_depth(g)
    key = ("boundary", v) if g.boundary_regime(v) else ("boundary", v, depth)
    if key in g._cache:
        return g._cache[key]
    regime = g.boundary_regime(v)
    if regime == "acyclic":
        members = [finite(g, lam) for lam in all_paths_from(g, v) if g.is_total_source(lam.source)]
        listing = BoundaryListing(v, tuple(members), True)
    elif regime == "periodic":
        listing = BoundaryListing(v, tuple(_periodic_members(g, v)), True)
    elif regime == "rigid":
        listing = BoundaryListing(v, (rigid(g, P.vertex(g, v)),), True)
    else:
        out = []
        for lam in P.paths_le(g, v, depth):
            out.append(finite(g, lam) if g.is_total_source(lam.source) else truncated(lam))
        listing = BoundaryListing(v, tuple(out), False)
    g._cache[key] = listing
    return listing


def _simple_cycles_at(g: KGraph, u: str, limit: int) -> list[list[str]]:
    out: list[list[str]] = []

    def walk(word: list[str], w: str, seen: set[str]) -> None:
        if len(out) >= limit:
            return
        for e in g.edges_into(w, 1):
            s = g.edges[e].source
            if s == u:
                out.append(word + [e])
            elif s not in seen:
                walk(word + [e], s, seen | {s})

    walk([], u, {u})
    return out


def certified_members(g: KGraph, v: str, depth: Sequence[int] | None = None,
                      limit: int = 256) -> list[BoundaryPath]:
    """Genuine elements of v∂Λ (never truncations).

    Exact regimes return all of v∂Λ. Otherwise: finite members found by the
    depth-bounded walk, plus eventually periodic paths (k = 1) built from a
    simple prefix and a simple cycle, or forced continuations into rigid
    regions (k >= 2).
    """
    listing = boundary_paths(g, v, depth)
    if listing.exact:
        return list(listing.paths)
    depth = tuple(depth) if depth is not None else default_depth(g)
    out: dict[BoundaryPath, None] = {x: None for x in listing.paths if x.exact}
    for lam in P.paths_upto(g, v, depth):
        if g.is_total_source(lam.source):
            out[finite(g, lam)] = None
    if g.rank == 1:
        cyclic = _cycle_vertices(g)

        def walk(word: list[str], u: str, seen: set[str]) -> None:
            if len(out) >= limit:
                return
            if u in cyclic:
                for cyc in _simple_cycles_at(g, u, limit):
                    out[periodic(g, P.from_word(g, word, v), P.from_word(g, cyc))] = None
            for e in g.edges_into(u, 1):
                s = g.edges[e].source
                if s not in seen:
                    walk(word + [e], s, seen | {s})

        walk([], v, {v})
    else:
        for lam in P.paths_upto(g, v, depth):
            if g.rigid(lam.source):
                out[rigid(g, lam)] = None
    return list(out)


def is_member(x: BoundaryPath) -> bool:
    return x.exact


# -- Ω_{k,m} -------------------------------------------------------------------

def _qname(q: Sequence[int]) -> str:
    return "v" + "_".join(str(c) for c in q)


def _ename(i: int, q: Sequence[int]) -> str:
    return f"c{i}_" + "_".join(str(c) for c in q)


def omega_skeleton(k: int, m: Sequence) -> Skeleton:
    m = tuple(m)
    if len(m) != k:
        raise ValueError("degree cap must have k coordinates")
    if not dg.is_finite(m):
        raise BoundaryError("Ω_{k,m} can only be materialized for finite m")
    sk = Skeleton(rank=k)
    pts = dg.box(m)
    for q in sorted(pts):
        sk.add_vertex(_qname(q))
    for q in sorted(pts):
        for i in range(1, k + 1):
            nq = dg.add(q, dg.unit(k, i))
            if dg.leq(nq, m):
                sk.add_edge(_ename(i, q), i, _qname(q), _qname(nq))
    for q in sorted(pts):
        for i in range(1, k + 1):
            for j in range(i + 1, k + 1):
                qi, qj = dg.add(q, dg.unit(k, i)), dg.add(q, dg.unit(k, j))
                if dg.leq(dg.add(qi, dg.unit(k, j)), m):
                    sk.add_square((_ename(i, q), _ename(j, qi)), (_ename(j, q), _ename(i, qj)))
    return sk


def omega(k: int, m: Sequence) -> KGraph:
    """Ω_{k,m}: vertices q <= m and one morphism (p, q) for each p <= q."""
    return validate(omega_skeleton(k, m), name=f"omega{k}_{dg.fmt(m)}")
