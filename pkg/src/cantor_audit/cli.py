"""Command-line front end.

Every subcommand prints a JSON report (or text, or SVG for ``paths`` and
``circle``). Exit status: 0 when every audited property holds, 1 when an
audit finds a violation, 2 on bad input.
"""

from __future__ import annotations

import argparse
import json
import sys
from datetime import datetime, timezone
from fractions import Fraction
from pathlib import Path

from . import diagonal, enumeration, first_proof, geometry, powerset
from .errors import AuditFailure, CantorAuditError, NoDifferenceWithinPrefix
from .numerics import format_rational, parse_interval, parse_rational
from .svg import emit_svg

EXIT_OK, EXIT_VIOLATION, EXIT_INPUT = 0, 1, 2


class InputError(Exception):
    pass


def _positive_int(text: str) -> int:
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer, got {text!r}") from None
    if v < 1:
        raise argparse.ArgumentTypeError(f"must be >= 1, got {v}")
    return v


def _positive_rational(text: str) -> Fraction:
    try:
        v = parse_rational(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None
    if v <= 0:
        raise argparse.ArgumentTypeError(f"must be > 0, got {text}")
    return v


def _interval(text: str):
    try:
        return parse_interval(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _rule(text: str):
    try:
        return diagonal.parse_rule(text)
    except CantorAuditError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _existing_file(text: str) -> Path:
    p = Path(text)
    if not p.is_file():
        raise argparse.ArgumentTypeError(f"no such file: {text}")
    return p


# ---------------------------------------------------------------------------
# Subcommands; each returns (report, ok, svg_or_None)


def _nesting_holds(run) -> bool:
    ivs = run.intervals
    return all(b.strictly_inside(a) and b.width < a.width for a, b in zip(ivs, ivs[1:]))


def cmd_first_proof(args):
    if args.sequence_file is not None:
        try:
            seq = enumeration.from_file(args.sequence_file)
        except (ValueError, CantorAuditError) as exc:
            raise InputError(f"--sequence-file: {exc}") from None
        source = "file"
    elif args.source == "file":
        raise InputError("--source file needs --sequence-file")
    elif args.source == "rationals":
        seq, source = enumeration.rationals_in(args.start), "rationals"
    else:
        seq, source = enumeration.harmonic(), "harmonic"
    run = first_proof.run_nested(seq, args.start, args.depth, args.budget)
    report = {"construction": "nested-intervals", "source": source, "depth": args.depth, "run": run.to_json()}
    ok = _nesting_holds(run)
    if isinstance(run.outcome, first_proof.Converged):
        audit = first_proof.audit_members_outside(run, seq)
        report["audit"] = audit.to_json()
        ok = ok and audit.ok
    report["ok"] = ok
    return report, ok, None


def cmd_diagonal(args):
    if args.sequence_file is not None:
        try:
            lst = diagonal.list_from_file(args.sequence_file)
        except (ValueError, CantorAuditError) as exc:
            raise InputError(f"--sequence-file: {exc}") from None
    else:
        lst = diagonal.table2_list()
    k = args.k
    if lst.length is not None and k > lst.length:
        raise InputError(f"--k: list has only {lst.length} rows")
    digits = diagonal.build_diagonal(lst, args.rule, k)
    escapes, failures = [], []
    for n in range(1, k + 1):
        try:
            pos = diagonal.locate_escape(lst, digits, n)
        except NoDifferenceWithinPrefix:
            pos = None
        escapes.append(pos)
        if pos is None or pos > n:
            failures.append(n)
    in_range = all(1 <= d <= 8 for d in digits)
    ok = in_range and not failures
    report = {
        "construction": "digit-diagonal",
        "list": lst.name,
        "rule": args.rule.spec(),
        "k": k,
        "diagonal": "0." + "".join(map(str, digits)),
        "digits_in_1_to_8": in_range,
        "escape_positions": escapes,
        "escape_failures": failures,
        "ok": ok,
    }
    return report, ok, None


def cmd_table2(args):
    audit = diagonal.table2_audit(args.k)
    samples = [diagonal.table2_prefix_identity(n).to_json() for n in sorted({1, 3, min(6, args.k), args.k})]
    report = {"construction": "table2-diagonal", **audit, "identity_samples": samples}
    return report, audit["ok"], None


def cmd_func_diagonal(args):
    grid = diagonal.dyadic_grid(args.depth)
    index = {y: i for i, y in enumerate(grid)}
    fam = diagonal.FunctionFamily(grid, lambda y, x: index[x])
    g = diagonal.build_g(fam)
    escapes = diagonal.verify_g_escapes(fam, g)
    with_eq7 = diagonal.eq7_consistency_check(args.depth)
    without = diagonal.eq7_consistency_check(args.depth, with_eq7=False)
    ok = escapes.result and not with_eq7.satisfiable and without.satisfiable
    report = {
        "construction": "function-diagonal",
        "depth": args.depth,
        "g": {format_rational(y): v for y, v in g.items()},
        "g_escapes": escapes.to_json(),
        "with_pairing_constraint": with_eq7.to_json(),
        "without_pairing_constraint": without.to_json(),
        "ok": ok,
    }
    return report, ok, None


def cmd_powerset(args):
    report = {"construction": "power-set-diagonal", **powerset.audit_report(args.n, args.steps)}
    ok = not report["failures"] and all(t["period_two"] for t in report["sample_traces"])
    report["ok"] = ok
    return report, ok, None


def _load_scene(path):
    try:
        with open(path, encoding="utf-8") as fh:
            return geometry.load_scene(json.load(fh))
    except json.JSONDecodeError as exc:
        raise InputError(f"--scene: invalid JSON: {exc}") from None
    except CantorAuditError as exc:
        raise InputError(f"--scene: {exc}") from None


def cmd_paths(args):
    scene = _load_scene(args.scene)
    plans, results = [], []
    ok = True
    for q in scene.queries:
        if args.eps is not None and q.method == "basic":
            q = geometry.Query(q.start, q.end, args.eps, None, "deviation")
        try:
            plan = geometry.plan_query(scene, q)
        except CantorAuditError as exc:
            raise InputError(f"--scene: query {q.start}->{q.end}: {exc}") from None
        verdict = geometry.validate_path(plan, scene.puncture)
        fidelity = plan.start == scene.points[q.start] and plan.end == scene.points[q.end]
        entry = {"from": q.start, "to": q.end, "plan": plan.to_json(), "validation": verdict.to_json(),
                 "endpoints_exact": fidelity}
        if q.eps is not None:
            dev = geometry.max_deviation_squared(plan, plan.start, plan.end)
            entry["max_deviation_squared"] = format_rational(dev)
            entry["within_eps"] = dev <= q.eps * q.eps
            ok = ok and entry["within_eps"]
        ok = ok and verdict.ok and fidelity
        plans.append(plan)
        results.append(entry)
    report = {"construction": "punctured-plane-paths", "puncture": scene.puncture.value,
              "queries": results, "ok": ok}
    return report, ok, emit_svg(plans)


def cmd_circle(args):
    scene = _load_scene(args.scene)
    pairs = [(q.start, q.end) for q in scene.queries] or list(zip(range(len(scene.points)), range(1, len(scene.points))))
    plans, results = [], []
    ok = True
    for i, j in pairs:
        try:
            plan = geometry.plan_path_circles([scene.points[i], scene.points[j]], scene.excluded)
        except (CantorAuditError, ValueError) as exc:
            raise InputError(f"--scene: pair {i}->{j}: {exc}") from None
        verdict = geometry.validate_path(plan, geometry.PunctureSpec.PURELY_ALGEBRAIC)
        ok = ok and verdict.ok
        plans.append(plan)
        results.append({"from": i, "to": j, "plan": plan.to_json(), "validation": verdict.to_json()})
    report = {"construction": "circle-arcs", "excluded": len(scene.excluded), "queries": results, "ok": ok}
    return report, ok, emit_svg(plans)


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("json", "text", "svg"), default="json")
    common.add_argument("--output", help="write the report here instead of stdout")
    common.add_argument("--timestamp", action="store_true", help="add a generated_at field")

    p = argparse.ArgumentParser(prog="cantor-audit", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="subcommand", required=True)

    fp = sub.add_parser("first-proof", parents=[common], help="nested intervals over a sequence")
    fp.add_argument("--source", choices=("harmonic", "rationals", "file"), default="harmonic")
    fp.add_argument("--sequence-file", type=_existing_file)
    fp.add_argument("--start", type=_interval, default=parse_interval("-1,1/2"))
    fp.add_argument("--depth", type=_positive_int, default=50)
    fp.add_argument("--budget", type=_positive_int, default=10**6)
    fp.set_defaults(func=cmd_first_proof)

    dg = sub.add_parser("diagonal", parents=[common], help="diagonal of a list of decimals")
    dg.add_argument("--sequence-file", type=_existing_file, help="list file; default is the table2 list")
    dg.add_argument("--k", type=_positive_int, default=10)
    dg.add_argument("--rule", type=_rule, default=diagonal.DEFAULT_RULE)
    dg.set_defaults(func=cmd_diagonal)

    t2 = sub.add_parser("table2", parents=[common], help="audit the 0.0, 0.10, 0.110, ... list")
    t2.add_argument("--k", type=_positive_int, default=1000)
    t2.set_defaults(func=cmd_table2)

    fd = sub.add_parser("func-diagonal", parents=[common], help="diagonal over a function family")
    fd.add_argument("--depth", type=_positive_int, default=3)
    fd.set_defaults(func=cmd_func_diagonal)

    ps = sub.add_parser("powerset", parents=[common], help="exhaustive audit of M = {i : i not in s(i)}")
    ps.add_argument("--n", type=int, choices=range(1, powerset.MAX_GROUND + 1), default=3)
    ps.add_argument("--steps", type=_positive_int, default=8)
    ps.set_defaults(func=cmd_powerset)

    pa = sub.add_parser("paths", parents=[common], help="axis-parallel paths in a punctured scene")
    pa.add_argument("--scene", type=_existing_file, required=True)
    pa.add_argument("--eps", type=_positive_rational)
    pa.add_argument("--svg-out")
    pa.set_defaults(func=cmd_paths)

    ci = sub.add_parser("circle", parents=[common], help="circle arcs avoiding excluded points")
    ci.add_argument("--scene", type=_existing_file, required=True)
    ci.add_argument("--svg-out")
    ci.set_defaults(func=cmd_circle)
    return p


def _render_text(report: dict) -> str:
    return "".join(f"{k}: {json.dumps(v, sort_keys=True, ensure_ascii=False)}\n" for k, v in report.items())


def _glue_intervals(argv):
    # "--start -1,1/2" would otherwise read -1,1/2 as an unknown option
    out = []
    it = iter(argv)
    for tok in it:
        if tok == "--start":
            nxt = next(it, None)
            out.append(tok if nxt is None else f"{tok}={nxt}")
        else:
            out.append(tok)
    return out


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(_glue_intervals(sys.argv[1:] if argv is None else list(argv)))
    if args.format == "svg" and args.subcommand not in ("paths", "circle"):
        parser.error("--format svg is only available for paths and circle")
    try:
        report, ok, svg = args.func(args)
    except InputError as exc:
        print(f"cantor-audit: error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except AuditFailure as exc:
        report, ok, svg = {"ok": False, "failure": str(exc)}, False, None
    if args.timestamp:
        report["generated_at"] = datetime.now(timezone.utc).isoformat()

    if args.format == "svg":
        text = svg
    elif args.format == "text":
        text = _render_text(report)
    else:
        text = json.dumps(report, sort_keys=True, indent=2, ensure_ascii=False) + "\n"
    if args.output:
        Path(args.output).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)
    if svg is not None and getattr(args, "svg_out", None):
        Path(args.svg_out).write_text(svg, encoding="utf-8")
    return EXIT_OK if ok else EXIT_VIOLATION


def run() -> None:
    sys.exit(main())


if __name__ == "__main__":
    run()
