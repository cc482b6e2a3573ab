"""The path category of a k-graph.

Paths are stored in color-ascending normal form: all color-1 edges,
then all color-2 edges, and so on. By the factorisation property this
word is unique, so equality of paths is equality of words. Any other
color arrangement is reached by adjacent square moves.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

from . import degree as dg
from .skeleton import KGraph


class PathError(ValueError):
    pass


@dataclass(frozen=True)
class Path:
    range: str
    edges: tuple[str, ...]
    degree: tuple[int, ...]
    source: str

    @property
    def is_vertex(self) -> bool:
        return not self.edges

    def __str__(self) -> str:
        return self.range if not self.edges else "*".join(self.edges)

    def sort_key(self):
        return (sum(self.degree), self.degree, self.edges, self.range)

    def to_json(self) -> dict:
        return {"path": str(self), "range": self.range, "source": self.source,
                "degree": list(self.degree)}


def vertex(g: KGraph, v: str) -> Path:
    if v not in g.vertices:
        raise PathError(f"unknown vertex {v!r}")
    return Path(v, (), dg.zero(g.rank), v)


def _arrange(g: KGraph, word: Sequence[str], pattern: Sequence[int]) -> list[str]:
    """Rewrite a composable word by square moves so its colors follow ``pattern``."""
    w = list(word)
    for p, want in enumerate(pattern):
        q = p
        while g.color(w[q]) != want:
            q += 1
        while q > p:
            w[q - 1], w[q] = g.swap(w[q - 1], w[q])
            q -= 1
    return w


def _normal_pattern(deg: Sequence[int]) -> list[int]:
    return [c + 1 for c, n in enumerate(deg) for _ in range(n)]


def _word_degree(g: KGraph, word: Iterable[str]) -> tuple[int, ...]:
    deg = [0] * g.rank
    for e in word:
        deg[g.color(e) - 1] += 1
    return tuple(deg)


def from_word(g: KGraph, word: Sequence[str], start: str | None = None) -> Path:
    """Build a path from any composable edge word (range-to-source order)."""
    if not word:
        if start is None:
            raise PathError("empty word needs a vertex")
        return vertex(g, start)
    for e in word:
        if e not in g.edges:
            raise PathError(f"unknown edge {e!r}")
    for a, b in zip(word, word[1:]):
        if g.edges[a].source != g.edges[b].range:
            raise PathError(f"edges {a} and {b} are not composable")
    if start is not None and g.edges[word[0]].range != start:
        raise PathError("word does not start at the given vertex")
    deg = _word_degree(g, word)
    nf = _arrange(g, word, _normal_pattern(deg))
    return Path(g.edges[nf[0]].range, tuple(nf), deg, g.edges[nf[-1]].source)


def edge(g: KGraph, eid: str) -> Path:
    return from_word(g, [eid])


def parse_path(g: KGraph, text: str) -> Path:
    text = text.strip()
    if text in g.vertices:
        return vertex(g, text)
    return from_word(g, [t.strip() for t in text.split("*")])


def compose(g: KGraph, mu: Path, nu: Path) -> Path:
    if mu.source != nu.range:
        raise PathError(f"cannot compose {mu} and {nu}: s(mu)={mu.source} != r(nu)={nu.range}")
    if nu.is_vertex:
        return mu
    if mu.is_vertex:
        return nu
    return from_word(g, mu.edges + nu.edges)


def compose_all(g: KGraph, *parts: Path) -> Path:
    out = parts[0]
    for p in parts[1:]:
        out = compose(g, out, p)
    return out


def segment(g: KGraph, lam: Path, p: Sequence[int], q: Sequence[int]) -> Path:
    """λ(p, q): the middle factor of degree q - p. Out-of-range is an error."""
    p, q = tuple(p), tuple(q)
    if not (dg.leq(p, q) and dg.leq(q, lam.degree)):
        raise PathError(f"segment ({dg.fmt(p)}),({dg.fmt(q)}) out of range for degree ({dg.fmt(lam.degree)})")
    if p == dg.zero(g.rank) and q == lam.degree:
        return lam
    pattern = (_normal_pattern(p) + _normal_pattern(dg.sub(q, p))
               + _normal_pattern(dg.sub(lam.degree, q)))
    w = _arrange(g, lam.edges, pattern)
    a, b = sum(p), sum(q)
    middle = w[a:b]
    if not middle:
        v = lam.range if a == 0 else g.edges[w[a - 1]].source
        return vertex(g, v)
    return from_word(g, middle)


def factorize(g: KGraph, lam: Path, m: Sequence[int]) -> tuple[Path, Path]:
    m = tuple(m)
    if not dg.leq(m, lam.degree):
        raise PathError(f"degree ({dg.fmt(m)}) is not below d(λ)=({dg.fmt(lam.degree)})")
    return segment(g, lam, dg.zero(g.rank), m), segment(g, lam, m, lam.degree)


def is_prefix(g: KGraph, mu: Path, lam: Path) -> bool:
    """λ(0, d(μ)) = μ."""
    if mu.range != lam.range or not dg.leq(mu.degree, lam.degree):
        return False
    return segment(g, lam, dg.zero(g.rank), mu.degree) == mu


def paths_of_degree(g: KGraph, v: str, n: Sequence[int]) -> tuple[Path, ...]:
    """vΛ^n in deterministic order."""
    n = tuple(n)
    key = ("deg", v, n)
    cached = g._cache.get(key)
    if cached is not None:
        return cached
    pattern = _normal_pattern(n)
    words: list[tuple[str, ...]] = [()]
    ends = [v]
    for color in pattern:
        nw, ne = [], []
        for w, u in zip(words, ends):
            for e in g.edges_into(u, color):
                nw.append(w + (e,))
                ne.append(g.edges[e].source)
        words, ends = nw, ne
    if not pattern:
        out = (vertex(g, v),)
    else:
        out = tuple(sorted((Path(v, w, n, u) for w, u in zip(words, ends)), key=Path.sort_key))
    g._cache[key] = out
    return out


def paths_upto(g: KGraph, v: str, bound: Sequence[int]) -> list[Path]:
    """Every path in vΛ with degree <= bound, ordered by (degree, word)."""
    out: list[Path] = []
    for m in dg.box(bound):
        out.extend(paths_of_degree(g, v, m))
    return out


def all_paths_upto(g: KGraph, bound: Sequence[int]) -> list[Path]:
    out: list[Path] = []
    for v in g.vertices:
        out.extend(paths_upto(g, v, bound))
    return out


def in_le(g: KGraph, lam: Path, n: Sequence[int]) -> bool:
    """Membership in Λ^{<=n}."""
    if not dg.leq(lam.degree, n):
        return False
    return all(lam.degree[i] >= n[i] or not g.receives(lam.source, i + 1) for i in range(g.rank))


def paths_le(g: KGraph, v: str, n: Sequence[int]) -> list[Path]:
    """vΛ^{<=n}."""
    return [lam for lam in paths_upto(g, v, n) if in_le(g, lam, n)]


def factorize_le(g: KGraph, lam: Path, m: Sequence[int], n: Sequence[int],
                 check_unique: bool = False) -> tuple[Path, Path]:
    """Split λ ∈ Λ^{<=m+n} as μν with μ ∈ Λ^{<=m}, ν ∈ Λ^{<=n} (locally convex only)."""
    m, n = tuple(m), tuple(n)
    if not g.locally_convex:
        raise PathError("factorize_le needs a locally convex k-graph")
    if not in_le(g, lam, dg.add(m, n)):
        raise PathError(f"{lam} is not in Λ^<=({dg.fmt(dg.add(m, n))})")
    cut = dg.meet(m, lam.degree)
    mu, nu = factorize(g, lam, cut)
    if check_unique:
        splits = [(a, b) for c in dg.box(lam.degree) for a, b in [factorize(g, lam, c)]
                  if in_le(g, a, m) and in_le(g, b, n)]
        if splits != [(mu, nu)]:
            raise AssertionError(f"non-unique Λ^<=m x Λ^<=n split of {lam}: {splits}")
    return mu, nu
