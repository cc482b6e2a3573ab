"""Command line interface: ``kg <command> <file> ...``.

Exit codes: 0 holds, 1 fails, 2 unknown, 3 usage or input error.
"""
from __future__ import annotations

import argparse
import json
import sys
from typing import Sequence

from . import boundary as B
from . import degree as dg
from . import paths as P
from .align import is_exhaustive, mce
from .corpus import load_file
from .skeleton import KGraph, SkeletonError, ValidationError
from .verdict import Verdict

EXIT_USAGE = 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.format_usage()}{self.prog}: error: {message}")


def _emit(args, payload: dict, lines: list[str]) -> None:
    if args.json:
        print(json.dumps(payload, indent=2, default=str))
    else:
        print("\n".join(lines))


def _verdict_json(v: Verdict) -> dict:
    cert = v.certificate
    if hasattr(cert, "to_json"):
        cert = cert.to_json()
    elif cert is not None:
        cert = str(cert)
    return {"verdict": v.status.value, "reason": v.reason, "certificate": cert}


def _degree(g: KGraph, text: str | None, default: int | None = None):
    if text is None:
        return None if default is None else dg.ones(g.rank, default)
    return dg.parse(text, g.rank)


def _vertices(g: KGraph, v: str | None) -> list[str]:
    if v is None:
        return list(g.vertices)
    if v not in g.vertices:
        raise UsageError(f"unknown vertex {v!r}")
    return [v]


# -- commands ------------------------------------------------------------------

def cmd_validate(args, g: KGraph) -> int:
    flags = g.flags()
    _emit(args, {"graph": g.name, "valid": True, "flags": flags},
          [f"{g.name}: valid rank-{g.rank} graph"] + [f"  {k}: {v}" for k, v in flags.items()])
    return 0


def cmd_paths(args, g: KGraph) -> int:
    n = _degree(g, args.degree, 1)
    out = {}
    for v in _vertices(g, args.vertex):
        ps = P.paths_le(g, v, n) if args.le else P.paths_upto(g, v, n)
        out[v] = [p.to_json() for p in ps]
    lines = [f"{p['path']}  d=({','.join(map(str, p['degree']))})  s={p['source']}"
             for ps in out.values() for p in ps]
    _emit(args, {"graph": g.name, "bound": list(n), "le": args.le, "paths": out}, lines)
    return 0


def cmd_mce(args, g: KGraph) -> int:
    mu, nu = P.parse_path(g, args.mu), P.parse_path(g, args.nu)
    res = mce(g, mu, nu)
    _emit(args, {"mu": str(mu), "nu": str(nu), "mce": [str(p) for p in res]},
          [str(p) for p in res] or ["(empty)"])
    return 0


def cmd_fe(args, g: KGraph) -> int:
    E = [P.parse_path(g, t) for t in args.set.split(",")]
    v = args.vertex or E[0].range
    r = is_exhaustive(g, v, E, bound=_degree(g, args.bound))
    _emit(args, _verdict_json(r), [f"{r.status.value}: {r.reason}"] +
          ([f"  witness: {r.certificate}"] if r.is_fails else []))
    return r.exit_code


def cmd_boundary(args, g: KGraph) -> int:
    depth = _degree(g, args.depth)
    out = {}
    lines = []
    for v in _vertices(g, args.vertex):
        listing = B.boundary_paths(g, v, depth)
        out[v] = {"exact": listing.exact, "paths": [x.to_json() for x in listing.paths]}
        lines.append(f"{v}: {'exact' if listing.exact else 'truncated'}")
        lines.extend(f"  {x}" for x in listing.paths)
    _emit(args, {"graph": g.name, "boundary": out}, lines)
    return 0


def cmd_check(args, g: KGraph) -> int:
    if args.property == "aperiodicity":
        from .aperiodicity import check_aperiodicity

        rep = check_aperiodicity(g, _degree(g, args.pair_bound), _degree(g, args.tau_bound))
        w = rep.periodicity_witness
        lines = [f"aperiodicity: {rep.verdict.status.value} ({rep.verdict.reason})"]
        if w:
            lines.append(f"  local periodicity at {w.vertex}: m=({dg.fmt(w.m)}) n=({dg.fmt(w.n)})")
        _emit(args, rep.to_json(), lines)
        return rep.verdict.exit_code
    if args.property == "cofinality":
        from .cofinality import check_cofinality

        pairs = None
        if args.pair:
            v, _, w = args.pair.partition(",")
            if v not in g.vertices or w not in g.vertices:
                raise UsageError(f"bad --pair {args.pair!r}")
            pairs = [(v, w)]
        rep = check_cofinality(g, _degree(g, args.bound), pairs=pairs)
        lines = [f"cofinality: {rep.verdict.status.value} ({rep.verdict.reason})"]
        for (v, w), r in rep.pairs.items():
            if not r.verdict.is_holds:
                lines.append(f"  ({v},{w}): {r.verdict.status.value}"
                             + (f", avoiding path {r.path}" if r.path else ""))
        _emit(args, rep.to_json(), lines)
        return rep.verdict.exit_code
    from .simplicity import check_simplicity

    rep = check_simplicity(g, _degree(g, args.pair_bound), _degree(g, args.tau_bound), _degree(g, args.bound))
    lines = [f"simplicity: {rep.verdict.status.value} ({rep.verdict.reason})",
             f"  aperiodicity: {rep.aperiodicity.verdict.status.value}",
             f"  cofinality: {rep.cofinality.verdict.status.value}"]
    if rep.consistency:
        lines.append(f"  rep: dimension {rep.consistency['dimension']}, span {rep.consistency['span_dim']}")
    _emit(args, rep.to_json(), lines)
    return rep.verdict.exit_code


def cmd_ck_verify(args, g: KGraph) -> int:
    from .ckrep import CkError, build_matrix_rep, verify_ck_axioms

    try:
        rep = build_matrix_rep(g)
    except CkError as exc:
        _emit(args, {"verdict": "unknown", "reason": str(exc)}, [f"unknown: {exc}"])
        return 2
    r = verify_ck_axioms(rep, _degree(g, args.cap))
    payload = {"dimension": rep.dimension, "basis": [str(x) for x in rep.basis], **r.to_json()}
    if args.export:
        payload["matrices"] = {str(p): rep.to_coo_text(p) for p in P.all_paths_upto(g, dg.ones(g.rank))}
    lines = [f"dimension {rep.dimension}: {'all axioms hold' if r.ok else 'violations found'}"]
    lines += [f"  {k}: {n} checks" for k, n in r.counts.items()] + [f"  {v}" for v in r.violations]
    _emit(args, payload, lines)
    return 0 if r.ok else 1


def _parse_coeffs(g: KGraph, text: str):
    from .ckrep import FormalElement

    a = FormalElement()
    for item in filter(None, (t.strip() for t in text.split(";"))):
        lhs, _, val = item.partition("=")
        mu, _, nu = lhs.partition(",")
        if not val:
            raise UsageError(f"bad coefficient {item!r}; expected mu,nu=value")
        a = a + FormalElement.term(P.parse_path(g, mu), P.parse_path(g, nu), complex(val.replace(" ", "")))
    return a


def cmd_qmap(args, g: KGraph) -> int:
    from .ckrep import NORM_TOL, build_matrix_rep, qmap

    H = [P.parse_path(g, t) for t in args.set.split(",")]
    a = _parse_coeffs(g, args.coeffs)
    q = qmap(build_matrix_rep(g), H, _degree(g, args.N, 1), a)
    ok = abs(q.Qa0_norm - q.a0_norm) <= NORM_TOL and abs(q.Qa - q.Qa0).max(initial=0) <= 1e-12
    payload = {"tau": str(q.tau), "a_norm": q.a_norm, "a0_norm": q.a0_norm, "Qa_norm": q.Qa_norm,
               "Qa0_norm": q.Qa0_norm, "ok": ok}
    _emit(args, payload, [f"{k}: {v}" for k, v in payload.items()])
    return 0 if ok else 1


def cmd_report(args, g: KGraph) -> int:
    from .simplicity import check_simplicity

    rep = check_simplicity(g)
    print(json.dumps(rep.to_json(), indent=2, default=str))
    return rep.verdict.exit_code


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("file", help="a .kg file or the name of a bundled example")
    common.add_argument("--json", action="store_true", help="machine-readable output")

    p = _Parser(prog="kg", description="Finite k-graph toolkit")
    sub = p.add_subparsers(dest="command", parser_class=_Parser, required=True)
    sub.add_parser("validate", parents=[common])
    s = sub.add_parser("paths", parents=[common])
    s.add_argument("--vertex")
    s.add_argument("--degree", help="degree bound, e.g. 1,1")
    s.add_argument("--le", action="store_true", help="list vΛ^<=n instead of all d <= n")
    s = sub.add_parser("mce", parents=[common])
    s.add_argument("mu")
    s.add_argument("nu")
    s = sub.add_parser("fe", parents=[common])
    s.add_argument("--set", required=True, help="comma-separated paths")
    s.add_argument("--vertex")
    s.add_argument("--bound")
    s = sub.add_parser("boundary", parents=[common])
    s.add_argument("--vertex")
    s.add_argument("--depth")
    s = sub.add_parser("check")
    s.add_argument("property", choices=["aperiodicity", "cofinality", "simplicity"])
    s.add_argument("file")
    s.add_argument("--json", action="store_true")
    s.add_argument("--pair-bound")
    s.add_argument("--tau-bound")
    s.add_argument("--bound")
    s.add_argument("--pair", help="v,w")
    s = sub.add_parser("ck-verify", parents=[common])
    s.add_argument("--cap")
    s.add_argument("--export", action="store_true", help="include coordinate-list matrices")
    s = sub.add_parser("qmap", parents=[common])
    s.add_argument("--set", required=True)
    s.add_argument("--coeffs", required=True, help="mu,nu=value;...")
    s.add_argument("--N")
    sub.add_parser("report", parents=[common])
    return p


COMMANDS = {"validate": cmd_validate, "paths": cmd_paths, "mce": cmd_mce, "fe": cmd_fe,
            "boundary": cmd_boundary, "check": cmd_check, "ck-verify": cmd_ck_verify,
            "qmap": cmd_qmap, "report": cmd_report}


def run_cli(argv: Sequence[str] | None = None) -> int:
    try:
        args = build_parser().parse_args(argv)
        try:
            g = load_file(args.file)
        except FileNotFoundError:
            raise UsageError(f"no such file or example: {args.file}")
        return COMMANDS[args.command](args, g)
    except UsageError as exc:
        print(exc, file=sys.stderr)
        return EXIT_USAGE
    except SkeletonError as exc:
        print(f"{getattr(args, 'file', '?')}: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (ValidationError, P.PathError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


def main() -> None:
    sys.exit(run_cli())


if __name__ == "__main__":
    main()
