import pytest

from kgraph import boundary as B
from kgraph import corpus
from kgraph import degree as dg
from kgraph import paths as P


def test_omega_small():
    g = B.omega(1, (2,))
    assert len(g.vertices) == 3
    assert len(P.all_paths_upto(g, (2,))) == 6  # three identities, (0,1), (1,2), (0,2)
    g = B.omega(2, (1, 1))
    assert (len(g.vertices), len(g.edges), len(g.skeleton.squares)) == (4, 4, 1)
    assert g.locally_convex and g.acyclic


def test_omega_unique_morphisms():
    g = B.omega(2, (2, 1))
    for p in dg.box((2, 1)):
        v = B._qname(p)
        for q in dg.box((2, 1)):
            n = len(P.paths_of_degree(g, v, dg.sub(q, p))) if dg.leq(p, q) else 0
            assert n == (1 if dg.leq(p, q) else 0)


def test_omega_rejects_infinite_cap():
    with pytest.raises(B.BoundaryError):
        B.omega(1, (dg.INF,))


def test_omega22_corpus_matches_generator(G):
    from kgraph.skeleton import serialize

    assert serialize(G("omega22").skeleton) == serialize(B.omega_skeleton(2, (1, 1)))


def test_listings(G):
    assert [str(x) for x in B.boundary_paths(G("omega22"), "v0_0").paths] == ["c1_0_0*c2_1_0"]
    lst = B.boundary_paths(G("cycle2"), "u")
    assert lst.exact and [str(x) for x in lst.paths] == ["(a*b)^inf"]
    lst = B.boundary_paths(G("cycle1_entrance"), "u", (3,))
    assert not lst.exact
    assert sorted(str(x) for x in lst.paths) == ["a*a*a...", "a*a*e", "a*e", "e"]
    assert [str(x) for x in B.boundary_paths(G("parallel2"), "u").paths] == ["f", "g"]
    assert [str(x) for x in B.boundary_paths(G("flipcomm"), "v").paths] == ["rigid[v]"]


def test_unknown_vertex(G):
    with pytest.raises(B.BoundaryError):
        B.boundary_paths(G("cycle2"), "nowhere")


@pytest.mark.parametrize("name", corpus.NAMES)
def test_every_vertex_has_a_boundary_path(G, name):
    g = G(name)
    for v in g.vertices:
        assert B.boundary_paths(g, v).paths
        if g.boundary_finite:
            assert B.certified_members(g, v)


def test_no_sources_means_infinite(G):
    g = G("cycle2")
    for v in g.vertices:
        assert all(x.degree == (dg.INF,) for x in B.boundary_paths(g, v).paths)


def test_shift_examples(G):
    g = G("cycle2")
    (xu,) = B.boundary_paths(g, "u").paths
    (xv,) = B.boundary_paths(g, "v").paths
    assert B.shift(g, xu, (0,)) == xu
    assert B.shift(g, xu, (2,)) == xu
    assert B.shift(g, xu, (1,)) == xv
    g = G("omega22")
    (x,) = B.boundary_paths(g, "v0_0").paths
    assert str(B.shift(g, x, (1, 0))) == "c2_1_0"
    with pytest.raises(B.BoundaryError):
        B.shift(g, x, (2, 0))


def test_prepend_examples(G):
    g = G("cycle2")
    (xu,) = B.boundary_paths(g, "u").paths
    (xv,) = B.boundary_paths(g, "v").paths
    assert B.prepend(g, P.vertex(g, "u"), xu) == xu
    b = P.edge(g, "b")
    assert b.source == "u"
    y = B.prepend(g, b, xu)
    assert y == xv and B.shift(g, y, (1,)) == xu
    g = G("parallel2")
    (xv,) = B.boundary_paths(g, "v").paths
    assert B.prepend(g, P.edge(g, "f"), xv) == B.finite(g, P.edge(g, "f"))
    with pytest.raises(B.BoundaryError):
        B.prepend(g, P.edge(g, "f"), B.finite(g, P.edge(g, "g")))


@pytest.mark.parametrize("name", [n for n in corpus.NAMES if n != "fliptwist"])
def test_shift_undoes_prepend(G, name):
    g = G(name)
    for v in g.vertices:
        for x in B.boundary_paths(g, v).paths:
            for lam in P.all_paths_upto(g, dg.ones(g.rank, 2)):
                if lam.source == x.range:
                    y = B.prepend(g, lam, x)
                    assert B.initial(g, y, lam.degree) == lam
                    assert B.shift(g, y, lam.degree) == x
                    assert y.degree == dg.add(x.degree, lam.degree)


def test_truncated_bodies_are_not_members(G):
    g = G("fliptwist")
    lst = B.boundary_paths(g, "v", (1, 1))
    assert not lst.exact and not any(B.is_member(x) for x in lst.paths)
    with pytest.raises(B.BoundaryError):
        B.tails(g, lst.paths[0])


def test_certified_members_inexact(G):
    g = G("cycle1_entrance")
    got = {str(x) for x in B.certified_members(g, "u")}
    assert {"e", "a*e", "(a)^inf"} <= got
    assert all(B.is_member(x) for x in B.certified_members(G("fliptwist"), "v"))


def test_periodic_canonical_form(G):
    g = G("cycle2")
    x = B.periodic(g, P.parse_path(g, "a*b"), P.parse_path(g, "a*b*a*b"))
    assert str(x) == "(a*b)^inf"
    with pytest.raises(B.BoundaryError):
        B.finite(g, P.edge(g, "a"))


def test_tails_of_periodic_path(G):
    g = G("cycle2")
    (xu,) = B.boundary_paths(g, "u").paths
    assert {str(y) for y in B.tails(g, xu)} == {"(a*b)^inf", "(b*a)^inf"}
