import pytest
from hypothesis import given, settings

from conftest import rank1_graphs
from kgraph import boundary as B
from kgraph import paths as P
from kgraph.align import mce
from kgraph.aperiodicity import (AperiodicityError, check_aperiodicity, check_local_periodicity,
                                 check_no_local_periodicity, lp_candidates, loop_entrance_test,
                                 periodicity_triple, reduced_pairs, separating_extension)
from kgraph.verdict import Status


def _witness(r):
    w = r.periodicity_witness
    return (w.vertex, w.m, w.n)


def test_omega22_holds_vacuously(G):
    r = check_aperiodicity(G("omega22"))
    assert r.verdict.is_holds and r.witness_map == []


def test_cycle2_fails_at_u(G):
    r = check_aperiodicity(G("cycle2"))
    assert r.verdict.is_fails and _witness(r) == ("u", (0,), (2,))
    mu, nu, tau = r.witness_map[0]
    assert (str(mu), str(nu), tau) == ("u", "a*b", None)


def test_flipcomm_fails_at_unit_degrees(G):
    r = check_aperiodicity(G("flipcomm"))
    assert r.verdict.is_fails and _witness(r) == ("v", (1, 0), (0, 1))


@pytest.mark.parametrize("name", ["omega22", "parallel2", "cycle1_entrance", "disjoint2", "fliptwist"])
def test_recorded_separators_recheck(G, name):
    g = G(name)
    for mu, nu, tau in check_aperiodicity(g).witness_map:
        assert tau is not None and tau.range == mu.source == nu.source
        assert not mce(g, P.compose(g, mu, tau), P.compose(g, nu, tau))


def test_reduced_pairs_are_reduced(G):
    g = G("fliptwist")
    for mu, nu in reduced_pairs(g, (2, 2)):
        assert mu != nu and mu.source == nu.source and mu.range == nu.range
        assert all(min(a, b) == 0 for a, b in zip(mu.degree, nu.degree))


def test_local_periodicity_examples(G):
    g = G("cycle2")
    assert check_local_periodicity(g, "u", (0,), (2,)).is_holds
    r = check_local_periodicity(g, "u", (0,), (1,))
    assert r.is_fails and r.details["clause"] == "NLP2"
    r = check_local_periodicity(G("parallel2"), "u", (0,), (1,))
    assert r.is_fails
    r = check_local_periodicity(G("parallel2"), "u", (0,), (2,))
    assert r.is_fails and r.details["clause"] == "NLP1"
    with pytest.raises(AperiodicityError):
        check_local_periodicity(g, "u", (1,), (1,))


def test_inexact_local_periodicity_is_unknown_or_refuted(G):
    g = G("fliptwist")
    assert check_local_periodicity(g, "v", (1, 0), (0, 1)).status is Status.UNKNOWN
    g = G("cycle1_entrance")
    assert check_local_periodicity(g, "u", (0,), (1,)).is_fails


@pytest.mark.parametrize("name", ["cycle2", "flipcomm"])
def test_finite_coordinates_force_equality(G, name):
    g = G(name)
    for v in g.vertices:
        xs = B.boundary_paths(g, v).paths
        for m, n in lp_candidates((2,) * g.rank):
            if check_local_periodicity(g, v, m, n).is_holds:
                for x in xs:
                    for i, d in enumerate(x.degree):
                        if d != float("inf"):
                            assert m[i] == n[i]


def test_local_periodicity_oracle_on_corpus(G):
    assert check_no_local_periodicity(G("omega22")).is_holds
    assert check_no_local_periodicity(G("cycle1_entrance")).is_holds
    r = check_no_local_periodicity(G("cycle2"))
    assert r.is_fails and (r.certificate.vertex, r.certificate.m, r.certificate.n) == ("u", (0,), (2,))
    assert check_no_local_periodicity(G("fliptwist")).is_unknown


def test_loop_entrance(G):
    assert loop_entrance_test(G("cycle2")).is_fails
    assert loop_entrance_test(G("cycle1_entrance")).is_holds
    with pytest.raises(AperiodicityError):
        loop_entrance_test(G("flipcomm"))


@settings(max_examples=80, deadline=None)
@given(rank1_graphs())
def test_rank1_agrees_with_loop_entrance(g):
    want = loop_entrance_test(g).status
    got = check_aperiodicity(g).verdict.status
    assert got in (want, Status.UNKNOWN)
    if want is Status.FAILS:
        assert got is Status.FAILS
    nlp = check_no_local_periodicity(g).status
    assert nlp in (want, Status.UNKNOWN)


def test_separating_extension_examples(G):
    g = G("parallel2")
    assert separating_extension(g, [P.edge(g, "f")]) == P.vertex(g, "v")
    assert separating_extension(g, [P.edge(g, "f"), P.edge(g, "g")]) == P.vertex(g, "v")
    with pytest.raises(AperiodicityError):
        separating_extension(g, [P.edge(g, "f"), P.vertex(g, "u")])


def test_separating_extension_on_fliptwist(G):
    g = G("fliptwist")
    H = [P.parse_path(g, w) for w in ("f1", "f2", "g1")]
    with pytest.raises(AperiodicityError):
        separating_extension(g, H)
    tau = separating_extension(g, H, allow_unknown=True)
    for i, a in enumerate(H):
        for b in H[i + 1:]:
            assert not mce(g, P.compose(g, a, tau), P.compose(g, b, tau))


def test_separating_extension_refuses_periodic_graphs(G):
    g = G("cycle2")
    with pytest.raises(AperiodicityError):
        separating_extension(g, [P.vertex(g, "u"), P.parse_path(g, "a*b")], allow_unknown=True)


def test_periodicity_triples(G):
    g = G("cycle2")
    mu, nu, alpha = periodicity_triple(g, "u", (0,), (2,))
    assert (str(mu), str(nu), str(alpha)) == ("u", "a*b", "a*b")
    mu, nu, alpha = periodicity_triple(g, "u", (2,), (0,))
    assert alpha == P.vertex(g, mu.source)
    g = G("flipcomm")
    mu, nu, alpha = periodicity_triple(g, "v", (1, 0), (0, 1))
    assert (str(mu), str(nu), str(alpha)) == ("f", "g", "g")
    with pytest.raises(AperiodicityError):
        periodicity_triple(G("parallel2"), "u", (0,), (1,))
