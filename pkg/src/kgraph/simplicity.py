"""Simplicity as the conjunction of aperiodicity and cofinality."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

from .aperiodicity import AperiodicityReport, check_aperiodicity
from .cofinality import CofinalityReport, check_cofinality
from .skeleton import KGraph
from .verdict import Status, Verdict, conjoin


@dataclass
class SimplicityReport:
    graph: str
    flags: dict
    aperiodicity: AperiodicityReport
    cofinality: CofinalityReport
    verdict: Verdict
    failing_legs: list[str] = field(default_factory=list)
    consistency: dict | None = None

    def to_json(self) -> dict:
        return {
            "graph": self.graph,
            "flags": self.flags,
            "aperiodicity": self.aperiodicity.to_json(),
            "cofinality": self.cofinality.to_json(),
            "simplicity": {"verdict": self.verdict.status.value, "failing_legs": self.failing_legs,
                           "reason": self.verdict.reason},
            "rep": self.consistency,
        }


def fullness(g: KGraph, expect_full: bool | None = None) -> dict | None:
    """Compare dim span{S_μ S_ν*} with |∂Λ|²; advisory only."""
    from .ckrep import build_matrix_rep, span_dimension

    if not g.boundary_finite:
        return None
    rep = build_matrix_rep(g)
    span = span_dimension(rep)
    out = {"dimension": rep.dimension, "span_dim": span, "full": span == rep.dimension ** 2}
    if expect_full is not None:
        out["expected_full"] = expect_full
        out["consistent"] = out["full"] if expect_full else None
    return out


def check_simplicity(g: KGraph, pair_bound: Sequence[int] | None = None,
                     tau_bound: Sequence[int] | None = None,
                     cofinality_bound: Sequence[int] | None = None,
                     with_rep: bool = True) -> SimplicityReport:
    ap = check_aperiodicity(g, pair_bound, tau_bound)
    cof = check_cofinality(g, cofinality_bound)
    status = conjoin(ap.verdict.status, cof.verdict.status)
    legs = [name for name, r in (("aperiodicity", ap.verdict), ("cofinality", cof.verdict)) if r.is_fails]
    if status is Status.HOLDS:
        verdict = Verdict.holds(None, "aperiodic and cofinal")
    elif status is Status.FAILS:
        verdict = Verdict.fails(tuple(legs), "failing: " + ", ".join(legs))
    else:
        verdict = Verdict.unknown(None, "a leg is undecided")
    cons = fullness(g, True if status is Status.HOLDS else None) if with_rep else None
    return SimplicityReport(g.name, g.flags(), ap, cof, verdict, legs, cons)
