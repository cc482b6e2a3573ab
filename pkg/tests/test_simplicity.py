import json

import pytest

from kgraph.simplicity import check_simplicity, fullness
from kgraph.verdict import Status


@pytest.mark.parametrize("name, want, legs", [
    ("omega22", Status.HOLDS, []),
    ("parallel2", Status.HOLDS, []),
    ("cycle2", Status.FAILS, ["aperiodicity"]),
    ("flipcomm", Status.FAILS, ["aperiodicity"]),
    ("disjoint2", Status.FAILS, ["cofinality"]),
    ("cycle1_entrance", Status.FAILS, ["cofinality"]),
    ("fliptwist", Status.UNKNOWN, []),
])
def test_corpus_simplicity(G, name, want, legs):
    r = check_simplicity(G(name))
    assert r.verdict.status is want
    assert r.failing_legs == legs
    assert r.verdict.exit_code == {Status.HOLDS: 0, Status.FAILS: 1, Status.UNKNOWN: 2}[want]


def test_report_schema(G):
    doc = json.loads(json.dumps(check_simplicity(G("cycle2")).to_json(), default=str))
    assert set(doc) == {"graph", "flags", "aperiodicity", "cofinality", "simplicity", "rep"}
    assert doc["simplicity"]["verdict"] == "fails"
    assert doc["simplicity"]["reason"] == "failing: aperiodicity"
    assert doc["rep"]["dimension"] == 2


@pytest.mark.parametrize("name, full", [
    ("omega22", True), ("parallel2", True), ("cycle2", True), ("flipcomm", True), ("disjoint2", False),
])
def test_fullness_of_the_boundary_rep(G, name, full):
    assert fullness(G(name))["full"] is full


def test_simple_graphs_have_full_span(G):
    for name in ("omega22", "parallel2"):
        cons = check_simplicity(G(name)).consistency
        assert cons["expected_full"] and cons["consistent"]


def test_no_rep_for_infinite_boundary(G):
    assert fullness(G("fliptwist")) is None
    assert check_simplicity(G("omega22"), with_rep=False).consistency is None
