import pytest
from hypothesis import given
from hypothesis import strategies as st

from kgraph import degree as dg
from kgraph.verdict import Status, Verdict, conjoin

degrees = st.lists(st.integers(0, 5), min_size=2, max_size=2).map(tuple)


@given(degrees, degrees)
def test_join_meet_bracket(m, n):
    assert dg.leq(dg.meet(m, n), m) and dg.leq(m, dg.join(m, n))
    assert dg.add(dg.join(m, n), dg.meet(m, n)) == dg.add(m, n)


def test_infinite_minus_finite_stays_infinite():
    assert dg.sub((dg.INF, 3), (2, 1)) == (dg.INF, 2)
    with pytest.raises(ValueError):
        dg.sub((1, 1), (dg.INF, 0))


def test_box_order_and_size():
    b = dg.box((1, 2))
    assert len(b) == 6 and b[0] == (0, 0) and b[-1] == (1, 2)
    assert [dg.total(m) for m in b] == sorted(dg.total(m) for m in b)


def test_parse_broadcasts_and_rejects():
    assert dg.parse("2", 3) == (2, 2, 2)
    assert dg.parse("1,0", 2) == (1, 0)
    for bad in ("1,2,3", "x", "-1"):
        with pytest.raises(ValueError):
            dg.parse(bad, 2)


def test_fmt_and_json_handle_infinity():
    assert dg.fmt((dg.INF, 1)) == "inf,1"
    assert dg.to_json((dg.INF, 1)) == [None, 1]


@pytest.mark.parametrize("a", list(Status))
@pytest.mark.parametrize("b", list(Status))
def test_conjunction_table(a, b):
    got = conjoin(a, b)
    if Status.FAILS in (a, b):
        assert got is Status.FAILS
    elif a is b is Status.HOLDS:
        assert got is Status.HOLDS
    else:
        assert got is Status.UNKNOWN


def test_exit_codes():
    assert [Verdict.holds().exit_code, Verdict.fails().exit_code, Verdict.unknown().exit_code] == [0, 1, 2]
