"""Finite k-graph presentations: colored graphs plus commuting squares.

A skeleton lists vertices, colored edges and, for each composable pair
(color-i edge, color-j edge) with i < j, the pair (color-j edge,
color-i edge) it equals. :func:`validate` turns a skeleton into a
:class:`KGraph`, the object every other module works with.

File format::

    rank 2
    vertex u
    edge f 1 u v        # id, color, range, source
    square f.g = g.f    # first f then g equals first g then f
"""
from __future__ import annotations

import itertools
import re
from collections import defaultdict
from dataclasses import dataclass, field
from functools import cached_property

import networkx as nx

from . import degree as dg

_ID = re.compile(r"^[A-Za-z0-9_\-\[\]()@:+']+$")


class SkeletonError(ValueError):
    """Syntax or reference error in a presentation, with a source location."""

    def __init__(self, message: str, line: int | None = None, column: int | None = None):
        self.message = message
        self.line = line
        self.column = column
        where = f"line {line}, column {column}: " if line is not None else ""
        super().__init__(where + message)


class ValidationError(ValueError):
    """The skeleton does not present a k-graph."""


@dataclass(frozen=True)
class Edge:
    id: str
    color: int
    range: str
    source: str


@dataclass
class Skeleton:
    rank: int
    vertices: list[str] = field(default_factory=list)
    edges: dict[str, Edge] = field(default_factory=dict)
    # (color-i edge, color-j edge), i < j  ->  (color-j edge, color-i edge)
    squares: dict[tuple[str, str], tuple[str, str]] = field(default_factory=dict)

    def add_vertex(self, v: str) -> None:
        if v in self.vertices:
            raise SkeletonError(f"duplicate vertex {v!r}")
        self.vertices.append(v)

    def add_edge(self, eid: str, color: int, rng: str, src: str) -> None:
        if eid in self.edges or eid in self.vertices:
            raise SkeletonError(f"duplicate id {eid!r}")
        if not 1 <= color <= self.rank:
            raise SkeletonError(f"color {color} out of range 1..{self.rank}")
        for v in (rng, src):
            if v not in self.vertices:
                raise SkeletonError(f"unknown vertex {v!r}")
        self.edges[eid] = Edge(eid, color, rng, src)

    def add_square(self, left: tuple[str, str], right: tuple[str, str]) -> None:
        for e in (*left, *right):
            if e not in self.edges:
                raise SkeletonError(f"unknown edge {e!r}")
        f, g = (self.edges[e] for e in left)
        g2, f2 = (self.edges[e] for e in right)
        if f.color > g.color:
            # written with the higher color first on the left; flip sides
            f, g, g2, f2 = g2, f2, f, g
        if f.color == g.color:
            raise SkeletonError("square must mix two distinct colors")
        if (g2.color, f2.color) != (g.color, f.color):
            raise SkeletonError("square colors do not match")
        if f.source != g.range or g2.source != f2.range:
            raise SkeletonError("square endpoint mismatch")
        if g2.range != f.range or f2.source != g.source:
            raise SkeletonError("square endpoint mismatch")
        key = (f.id, g.id)
        if key in self.squares:
            raise SkeletonError(f"duplicate square for {f.id}.{g.id}")
        self.squares[key] = (g2.id, f2.id)


def _split_comment(line: str) -> str:
    return line.split("#", 1)[0]


def parse_skeleton(text: str) -> Skeleton:
    sk: Skeleton | None = None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        body = _split_comment(raw)
        if not body.strip():
            continue
        col = len(body) - len(body.lstrip()) + 1
        tokens = body.split()
        head = tokens[0]
        try:
            if head == "rank":
                if sk is not None:
                    raise SkeletonError("rank declared twice")
                if len(tokens) != 2 or not tokens[1].isdigit():
                    raise SkeletonError("expected 'rank <k>'")
                sk = Skeleton(rank=int(tokens[1]))
                continue
            if sk is None:
                raise SkeletonError("'rank' must come first")
            if head == "vertex":
                if len(tokens) != 2:
                    raise SkeletonError("expected 'vertex <id>'")
                _check_id(tokens[1])
                sk.add_vertex(tokens[1])
            elif head == "edge":
                if len(tokens) != 5:
                    raise SkeletonError("expected 'edge <id> <color> <range> <source>'")
                _check_id(tokens[1])
                if not tokens[2].isdigit():
                    raise SkeletonError(f"bad color {tokens[2]!r}")
                sk.add_edge(tokens[1], int(tokens[2]), tokens[3], tokens[4])
            elif head == "square":
                m = re.fullmatch(r"\s*square\s+(\S+)\.(\S+)\s*=\s*(\S+)\.(\S+)\s*", body)
                if not m:
                    raise SkeletonError("expected 'square a.b = c.d'")
                sk.add_square((m[1], m[2]), (m[3], m[4]))
            else:
                raise SkeletonError(f"unknown directive {head!r}")
        except SkeletonError as exc:
            if exc.line is None:
                raise SkeletonError(exc.message, lineno, col) from None
            raise
    if sk is None:
        raise SkeletonError("empty presentation: missing 'rank'")
    return sk


def _check_id(tok: str) -> None:
    if not _ID.match(tok):
        raise SkeletonError(f"bad identifier {tok!r}")


def serialize(sk: Skeleton) -> str:
    """Canonical text form: vertices, edges and squares sorted by id."""
    lines = [f"rank {sk.rank}"]
    lines += [f"vertex {v}" for v in sorted(sk.vertices)]
    for eid in sorted(sk.edges):
        e = sk.edges[eid]
        lines.append(f"edge {e.id} {e.color} {e.range} {e.source}")
    for (f, g) in sorted(sk.squares):
        g2, f2 = sk.squares[(f, g)]
        lines.append(f"square {f}.{g} = {g2}.{f2}")
    return "\n".join(lines) + "\n"


class KGraph:
    """A validated finite k-graph. Immutable; caches are write-once."""

    def __init__(self, sk: Skeleton, name: str = ""):
        self.skeleton = sk
        self.name = name
        self.rank = sk.rank
        self.vertices: tuple[str, ...] = tuple(sorted(sk.vertices))
        self.edges: dict[str, Edge] = dict(sorted(sk.edges.items()))
        into: dict[tuple[str, int], list[str]] = defaultdict(list)
        for e in self.edges.values():
            into[(e.range, e.color)].append(e.id)
        self._into = {key: tuple(sorted(ids)) for key, ids in into.items()}
        self._fwd = dict(sk.squares)
        self._bwd = {v: k for k, v in sk.squares.items()}
        self._cache: dict = {}
        self.max_mce = 0

    def __repr__(self) -> str:
        return f"KGraph({self.name or '?'}, rank={self.rank}, |V|={len(self.vertices)}, |E|={len(self.edges)})"

    # -- skeleton queries -------------------------------------------------

    def color(self, eid: str) -> int:
        return self.edges[eid].color

    def edges_into(self, v: str, color: int) -> tuple[str, ...]:
        """Edges of the given color with range v (the set vΛ^{e_color})."""
        return self._into.get((v, color), ())

    def receives(self, v: str, color: int) -> bool:
        return bool(self._into.get((v, color)))

    def is_total_source(self, v: str) -> bool:
        return not any(self.receives(v, c) for c in range(1, self.rank + 1))

    def swap(self, x: str, y: str) -> tuple[str, str]:
        """Exchange the colors of the composable bicolored pair x.y."""
        cx, cy = self.color(x), self.color(y)
        if cx < cy:
            return self._fwd[(x, y)]
        if cx > cy:
            return self._bwd[(x, y)]
        raise ValueError("swap needs two distinct colors")

    def successors(self, v: str) -> set[str]:
        return {self.edges[e].source for c in range(1, self.rank + 1) for e in self.edges_into(v, c)}

    def reachable(self, v: str) -> frozenset[str]:
        """R(v) = {u : vΛu nonempty}."""
        key = ("reach", v)
        if key not in self._cache:
            seen = {v}
            stack = [v]
            while stack:
                u = stack.pop()
                for w in self.successors(u):
                    if w not in seen:
                        seen.add(w)
                        stack.append(w)
            self._cache[key] = frozenset(seen)
        return self._cache[key]

    @cached_property
    def digraph(self) -> nx.MultiDiGraph:
        """Arcs point range -> source, the direction paths are read in."""
        dgr = nx.MultiDiGraph()
        dgr.add_nodes_from(self.vertices)
        for e in self.edges.values():
            dgr.add_edge(e.range, e.source, key=e.id)
        return dgr

    # -- flags --------------------------------------------------------------

    @cached_property
    def acyclic(self) -> bool:
        return nx.is_directed_acyclic_graph(self.digraph)

    @cached_property
    def has_sources(self) -> bool:
        return any(not self.receives(v, c) for v in self.vertices for c in range(1, self.rank + 1))

    @cached_property
    def locally_convex(self) -> bool:
        # imported definition: a color may not die at s(λ) while it was alive at r(λ)
        for e in self.edges.values():
            for j in range(1, self.rank + 1):
                if j != e.color and self.receives(e.range, j) and not self.receives(e.source, j):
                    return False
        return True

    def acyclic_from(self, v: str) -> bool:
        key = ("acyc", v)
        if key not in self._cache:
            sub = self.digraph.subgraph(self.reachable(v))
            self._cache[key] = nx.is_directed_acyclic_graph(sub)
        return self._cache[key]

    def rigid(self, v: str) -> bool:
        """Every vertex reachable from v receives exactly one edge of each color."""
        return all(
            len(self.edges_into(u, c)) == 1 for u in self.reachable(v) for c in range(1, self.rank + 1)
        )

    def entrance_free_cycles_only(self, v: str) -> bool:
        """k=1: every cycle reachable from v has no entrance."""
        sub = self.digraph.subgraph(self.reachable(v))
        for comp in nx.strongly_connected_components(sub):
            cyclic = len(comp) > 1 or any(self.edges[e].source == self.edges[e].range
                                          for u in comp for e in self.edges_into(u, 1))
            if cyclic and any(len(self.edges_into(u, 1)) != 1 for u in comp):
                return False
        return True

    def boundary_regime(self, v: str) -> str | None:
        """How v∂Λ is enumerated exactly: 'acyclic', 'periodic', 'rigid', or None."""
        key = ("regime", v)
        if key not in self._cache:
            if self.acyclic_from(v):
                regime = "acyclic"
            elif self.rank == 1 and self.entrance_free_cycles_only(v):
                regime = "periodic"
            elif self.rank > 1 and self.rigid(v):
                regime = "rigid"
            else:
                regime = None
            self._cache[key] = regime
        return self._cache[key]

    @cached_property
    def boundary_finite(self) -> bool:
        return all(self.boundary_regime(v) is not None for v in self.vertices)

    def flags(self) -> dict:
        return {
            "rank": self.rank,
            "locally_convex": self.locally_convex,
            "acyclic": self.acyclic,
            "has_sources": self.has_sources,
            "boundary_finite": self.boundary_finite,
            "finitely_aligned": True,
            "max_mce": self.max_mce,
        }


def _check_squares(sk: Skeleton) -> None:
    by_range = defaultdict(list)
    for e in sk.edges.values():
        by_range[(e.range, e.color)].append(e)
    left_needed = set()
    right_needed = set()
    for f in sk.edges.values():
        for j in range(1, sk.rank + 1):
            for g in by_range.get((f.source, j), ()):
                if f.color < j:
                    left_needed.add((f.id, g.id))
                elif f.color > j:
                    right_needed.add((f.id, g.id))
    left = set(sk.squares)
    right = list(sk.squares.values())
    if len(set(right)) != len(right):
        raise ValidationError("square table not bijective: a right-hand pair repeats")
    if left != left_needed or set(right) != right_needed:
        missing = sorted((left_needed - left) | (right_needed - set(right)))
        raise ValidationError(f"square table not total: missing {missing[:3]}")


def _check_hexagon(g: KGraph) -> None:
    k = g.rank
    for i, j, l in itertools.combinations(range(1, k + 1), 3):
        for a in (e for e in g.edges.values() if e.color == i):
            for b in g.edges_into(a.source, j):
                for c in g.edges_into(g.edges[b].source, l):
                    # (a b c) with colors (i j l) -> (l j i) along both routes
                    b1, a1 = g.swap(a.id, b)
                    c1, a2 = g.swap(a1, c)
                    c2, b2 = g.swap(b1, c1)
                    one = (c2, b2, a2)
                    c1_, b1_ = g.swap(b, c)
                    c2_, a1_ = g.swap(a.id, c1_)
                    b2_, a2_ = g.swap(a1_, b1_)
                    two = (c2_, b2_, a2_)
                    if one != two:
                        raise ValidationError(
                            f"hexagon violation on path {a.id}*{b}*{c}: {one} != {two}")


def validate(sk: Skeleton, name: str = "") -> KGraph:
    if sk.rank < 1:
        raise ValidationError("rank-0 graph")
    _check_squares(sk)
    g = KGraph(sk, name)
    if g.rank >= 3:
        _check_hexagon(g)
    from .align import max_mce_cardinality  # deferred: align builds on paths built on KGraph

    g.max_mce = max_mce_cardinality(g)
    return g


def load(text: str, name: str = "") -> KGraph:
    return validate(parse_skeleton(text), name)
