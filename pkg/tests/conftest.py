from __future__ import annotations

import pytest
from hypothesis import strategies as st

from kgraph import corpus
from kgraph.skeleton import Skeleton, validate


@pytest.fixture(scope="session")
def G():
    cache = {}

    def get(name):
        if name not in cache:
            cache[name] = corpus.graph(name)
        return cache[name]

    return get


def digraph_skeleton(n: int, arcs: list[tuple[int, int]]) -> Skeleton:
    """Rank-1 skeleton on v0..v{n-1}; arc (r, s) is an edge with range r and source s."""
    sk = Skeleton(rank=1)
    for i in range(n):
        sk.add_vertex(f"v{i}")
    for j, (r, s) in enumerate(arcs):
        sk.add_edge(f"e{j}", 1, f"v{r}", f"v{s}")
    return sk


def product_skeleton(n1: int, arcs1, n2: int, arcs2) -> Skeleton:
    """The cartesian product 2-graph of two directed graphs."""
    sk = Skeleton(rank=2)
    for x in range(n1):
        for y in range(n2):
            sk.add_vertex(f"p{x}_{y}")
    for j, (r, s) in enumerate(arcs1):
        for y in range(n2):
            sk.add_edge(f"h{j}_{y}", 1, f"p{r}_{y}", f"p{s}_{y}")
    for j, (r, s) in enumerate(arcs2):
        for x in range(n1):
            sk.add_edge(f"k{x}_{j}", 2, f"p{x}_{r}", f"p{x}_{s}")
    for i, (r1, s1) in enumerate(arcs1):
        for j, (r2, s2) in enumerate(arcs2):
            sk.add_square((f"h{i}_{r2}", f"k{s1}_{j}"), (f"k{r1}_{j}", f"h{i}_{s2}"))
    return sk


@st.composite
def digraphs(draw, max_vertices=3, max_arcs=4):
    n = draw(st.integers(1, max_vertices))
    arcs = draw(st.lists(st.tuples(st.integers(0, n - 1), st.integers(0, n - 1)), max_size=max_arcs))
    return n, arcs


@st.composite
def rank1_graphs(draw, max_vertices=3, max_arcs=4):
    n, arcs = draw(digraphs(max_vertices, max_arcs))
    return validate(digraph_skeleton(n, arcs), name="random1")


@st.composite
def rank2_graphs(draw):
    n1, a1 = draw(digraphs(2, 2))
    n2, a2 = draw(digraphs(2, 2))
    return validate(product_skeleton(n1, a1, n2, a2), name="random2")
