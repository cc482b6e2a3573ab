import pytest
from hypothesis import given, settings

from conftest import rank1_graphs
from kgraph import boundary as B
from kgraph import paths as P
from kgraph.cofinality import (CofinalityError, VertexSet, build_boundary_in_K, check_cofinality,
                               check_cofinality_digraph, cofinality_boundary_oracle, cofinality_lc_exact,
                               diagonal_position, diagonal_term, k_chain, k_set, reachable_from,
                               verify_k_hypotheses, visited, xn_paths)
from kgraph.skeleton import Skeleton, validate
from kgraph.verdict import Status

CORPUS = ["omega22", "cycle2", "flipcomm", "cycle1_entrance", "parallel2", "disjoint2", "fliptwist"]


def test_reachable_from_examples(G):
    assert set(reachable_from(G("parallel2"), "u")) == {"u", "v"}
    assert set(reachable_from(G("parallel2"), "v")) == {"v"}
    assert set(reachable_from(G("cycle1_entrance"), "u")) == {"u", "t"}
    assert set(reachable_from(G("omega22"), "v1_1")) == {"v1_1"}
    with pytest.raises(CofinalityError):
        reachable_from(G("cycle2"), "nope")


@pytest.mark.parametrize("name", CORPUS)
def test_reachable_sets_are_source_closed(G, name):
    g = G(name)
    for v in g.vertices:
        R = reachable_from(g, v)
        assert v in R
        for u in R.vertices:
            for lam in P.paths_upto(g, u, (1,) * g.rank):
                assert lam.source in R


def test_lc_exact_examples(G):
    r = cofinality_lc_exact(G("parallel2"), "v", "u")
    assert r.is_holds and r.details["n"] == (1,)
    assert {str(p) for p in r.certificate.paths} == {"f", "g"}
    r = cofinality_lc_exact(G("cycle1_entrance"), "t", "u")
    assert r.is_fails and set(r.certificate) == {"u", "t"}
    assert cofinality_lc_exact(G("cycle2"), "u", "v").is_holds
    with pytest.raises(CofinalityError):
        cofinality_lc_exact(_corner(), "a", "a")


def _corner():
    sk = Skeleton(rank=2)
    for v in "abc":
        sk.add_vertex(v)
    sk.add_edge("f", 1, "a", "b")
    sk.add_edge("g", 2, "a", "c")
    return validate(sk, name="corner")


def test_general_route_without_local_convexity():
    g = _corner()
    assert not g.locally_convex
    rep = check_cofinality(g)
    assert rep.pairs[("b", "a")].method != "lc-exact"
    assert rep.verdict.is_fails


def test_digraph_route_examples(G):
    assert check_cofinality_digraph(G("parallel2"), "v", "u").is_holds
    assert check_cofinality_digraph(G("cycle1_entrance"), "t", "u").is_fails
    assert check_cofinality_digraph(G("disjoint2"), "w1", "w2").is_fails
    with pytest.raises(CofinalityError):
        check_cofinality_digraph(G("omega22"), "v0_0", "v0_0")


def test_xn_paths(G):
    assert {str(p) for p in xn_paths(G("parallel2"), "u", 2)} == {"f", "g"}
    X = xn_paths(G("cycle2"), "u", 3)
    assert len(X) == 1 and X[0].degree == (3,)
    assert xn_paths(G("cycle2"), "v", 0) == [P.vertex(G("cycle2"), "v")]
    with pytest.raises(CofinalityError):
        xn_paths(G("flipcomm"), "v", 1)


def test_boundary_oracle(G):
    assert cofinality_boundary_oracle(G("parallel2"), "v").is_holds
    r = cofinality_boundary_oracle(G("cycle1_entrance"), "t")
    assert r.is_fails and not visited(G("cycle1_entrance"), r.certificate) & {"t"}
    r = cofinality_boundary_oracle(G("disjoint2"), "w1")
    assert r.is_fails and str(r.certificate) == "w2"


@pytest.mark.parametrize("name, want", [
    ("omega22", Status.HOLDS), ("cycle2", Status.HOLDS), ("flipcomm", Status.HOLDS),
    ("cycle1_entrance", Status.FAILS), ("parallel2", Status.HOLDS), ("disjoint2", Status.FAILS),
    ("fliptwist", Status.HOLDS),
])
def test_corpus_verdicts_on_both_routes(G, name, want):
    g = G(name)
    auto = check_cofinality(g)
    general = check_cofinality(g, method="general")
    assert auto.verdict.status is want and general.verdict.status is want
    for v, w in auto.pairs:
        assert auto.pairs[(v, w)].verdict.status is general.pairs[(v, w)].verdict.status


def test_failing_pairs_carry_explicit_paths(G):
    rep = check_cofinality(G("disjoint2"))
    v, w = rep.failing_pair()
    res = rep.pairs[(v, w)]
    assert res.path is not None and res.path.exact
    assert not visited(G("disjoint2"), res.path) & set(reachable_from(G("disjoint2"), v))
    rep = check_cofinality(G("cycle1_entrance"))
    assert rep.failing_pair() == ("t", "u")
    assert str(rep.pairs[("t", "u")].path) == "(a)^inf"


def test_holding_pairs_carry_fe_sets(G):
    g = G("parallel2")
    for (v, w), res in check_cofinality(g, method="general").pairs.items():
        assert res.fe is not None and res.fe.vertex == w
        assert all(lam.source in reachable_from(g, v) for lam in res.fe.paths)


def test_check_cofinality_arguments(G):
    with pytest.raises(ValueError):
        check_cofinality(G("cycle2"), method="bogus")
    with pytest.raises(CofinalityError):
        check_cofinality(G("cycle2"), pairs=[("u", "zz")])
    rep = check_cofinality(G("disjoint2"), pairs=[("w1", "w1")])
    assert rep.verdict.is_holds


def test_k_set_lies_outside_reachable(G):
    g = G("cycle1_entrance")
    K = k_set(g, "t", (3,))
    assert K.vertices == {"u"} and not K.vertices & set(reachable_from(g, "t"))
    assert k_set(G("parallel2"), "v", (3,)).vertices == frozenset()


@settings(max_examples=80, deadline=None)
@given(rank1_graphs())
def test_rank1_routes_agree(g):
    for v in g.vertices:
        for w in g.vertices:
            lc = cofinality_lc_exact(g, v, w).status
            assert check_cofinality_digraph(g, v, w).status is lc
    auto = check_cofinality(g).verdict.status
    general = check_cofinality(g, method="general").verdict.status
    assert general in (auto, Status.UNKNOWN)
    oracle = [cofinality_boundary_oracle(g, v).status for v in g.vertices]
    if Status.UNKNOWN not in oracle:
        want = Status.FAILS if Status.FAILS in oracle else Status.HOLDS
        assert auto in (want, Status.UNKNOWN)


def test_diagonal_listing():
    order = [diagonal_term(l) for l in range(1, 11)]
    assert order[:6] == [(1, 1), (1, 2), (2, 1), (1, 3), (2, 2), (3, 1)]
    for l, (m, n) in enumerate(order, start=1):
        assert diagonal_position(m, n) == l
    with pytest.raises(ValueError):
        diagonal_position(0, 1)
    with pytest.raises(ValueError):
        diagonal_term(0)


def test_k_chain_is_increasing(G):
    g = G("cycle2")
    chain = k_chain(g, {"u", "v"}, "u", 10)
    assert chain[0] == P.vertex(g, "u")
    for a, b in zip(chain, chain[1:]):
        assert P.is_prefix(g, a, b)
        assert b.source in {"u", "v"}
    assert chain[-1].degree[0] > chain[0].degree[0]


def test_build_boundary_in_K(G):
    g = G("parallel2")
    x = build_boundary_in_K(g, {"u", "v"}, "u", 4)
    assert x.exact and B.is_member(x) and x.prefix.range == "u"
    x = build_boundary_in_K(G("cycle2"), VertexSet(frozenset({"u", "v"}), "K"), "u", 6)
    assert not x.exact and x.prefix.range == "u"


def test_k_hypotheses_rejected(G):
    g = G("parallel2")
    with pytest.raises(CofinalityError):
        verify_k_hypotheses(g, set())
    with pytest.raises(CofinalityError):
        verify_k_hypotheses(g, {"v"})  # v reaches nothing else, but u's FE set misses nothing: u not in K
    with pytest.raises(CofinalityError):
        verify_k_hypotheses(g, {"u"})  # u's FE set {f, g} has sources v only
    with pytest.raises(CofinalityError):
        k_chain(g, {"u", "v"}, "zz", 2)
