"""Command line interface.

tilt-forge {mckay|nabla|check|tilt|dual|truncate|export} with a shared set
of input options. Exit codes: 0 success, 2 hypothesis failure,
3 inconclusive (a bound was hit), 4 input error.
"""

from __future__ import annotations

import argparse
import json
import sys
from typing import List, Optional

from .findim import BoundExceededError, build_algebra, truncate
from .homological import quadratic_dual
from .pipeline import HypothesisError, PipelineInput, cmd_check, cmd_tilt
from .presentation import (
    GradedPresentation,
    ParseError,
    export_dot,
    parse,
    presentation_to_json,
    serialize,
)
from .skewgroup import CyclicGroupData, folded_quiver, gorenstein_parameter, mckay_quiver


class InputError(ValueError):
    pass


def _add_source_options(p: argparse.ArgumentParser) -> None:
    p.add_argument("--r", type=int, help="cyclic group order")
    p.add_argument("--weights", help="comma-separated weights a1,..,ad")
    p.add_argument("--grading", help="file of '<arrow-id> <degree>' lines")
    p.add_argument(
        "--deg",
        action="append",
        default=[],
        metavar="ID=D",
        help="inline arrow degree, e.g. --deg x1@0=1 (repeatable)",
    )
    p.add_argument("--presentation", help="presentation file in the canonical text format")
    p.add_argument("--ell", type=int, help="cycle degree for presentation-file input")
    p.add_argument("--length-bound", type=int, dest="length_bound")
    p.add_argument("--out", help="output file (default: stdout)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="tilt-forge",
        description="graded path algebras: folded quivers, duals, truncations, reports",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    for name, helptext in (
        ("mckay", "McKay presentation of 1/r(a1,..,ad)"),
        ("nabla", "folded (Beilinson) presentation"),
        ("dual", "quadratic dual (of the folded presentation for group input)"),
        ("truncate", "corner presentation at the kept vertices"),
        ("export", "write DOT and JSON for a presentation"),
        ("check", "hypothesis verdicts"),
        ("tilt", "run a tilting route and report"),
    ):
        p = sub.add_parser(name, help=helptext)
        _add_source_options(p)
        if name in ("check", "tilt", "truncate"):
            p.add_argument("--e", help="comma-separated e-vertices (residues or vertex ids)")
            p.add_argument(
                "--assume",
                action="append",
                default=[],
                choices=["as-regular", "gorenstein", "isolated"],
                help="accept a non-combinatorial hypothesis (repeatable)",
            )
        if name == "truncate":
            p.add_argument("--keep", help="comma-separated vertices to keep")
            p.add_argument("--dual", action="store_true", help="truncate the quadratic dual")
        if name == "tilt":
            p.add_argument("--route", choices=["auto", "A", "B"], default="auto")
        if name in ("mckay", "nabla", "dual", "truncate"):
            p.add_argument("--format", choices=["text", "json", "dot"], default="text")
        elif name in ("check", "tilt"):
            p.add_argument("--format", choices=["text", "json"], default="json")
    return parser


def _parse_grading(args) -> dict:
    grading = {}
    if args.grading:
        with open(args.grading, "r", encoding="utf-8") as fh:
            for lineno, raw in enumerate(fh, start=1):
                line = raw.split("#", 1)[0].strip()
                if not line:
                    continue
                if "=" in line:
                    aid, _, deg = line.partition("=")
                else:
                    parts = line.split()
                    if len(parts) != 2:
                        raise InputError(f"{args.grading}:{lineno}: expected '<arrow-id> <degree>'")
                    aid, deg = parts
                grading[aid.strip()] = int(deg)
    for item in args.deg:
        if "=" not in item:
            raise InputError(f"--deg {item!r}: expected ID=D")
        aid, _, deg = item.partition("=")
        grading[aid.strip()] = int(deg)
    return grading


def _group_from(args) -> Optional[CyclicGroupData]:
    if args.r is None and args.weights is None:
        return None
    if args.r is None or args.weights is None:
        raise InputError("--r and --weights must be given together")
    try:
        weights = tuple(int(w) for w in args.weights.split(","))
    except ValueError:
        raise InputError(f"bad --weights {args.weights!r}") from None
    return CyclicGroupData(args.r, weights)


def _source_presentation(args) -> GradedPresentation:
    group = _group_from(args)
    if group is not None:
        return mckay_quiver(group, _parse_grading(args))
    if args.presentation:
        with open(args.presentation, "r", encoding="utf-8") as fh:
            return parse(fh.read())
    raise InputError("need either --r/--weights or --presentation")


def _resolve_ell(args, pres: GradedPresentation, group) -> int:
    if group is not None:
        return gorenstein_parameter(pres, group)
    if args.ell is None:
        raise InputError("presentation input requires --ell")
    return args.ell


def _emit(args, text: str) -> None:
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _emit_presentation(args, pres: GradedPresentation) -> None:
    if args.format == "json":
        _emit(args, json.dumps(presentation_to_json(pres), indent=2) + "\n")
    elif args.format == "dot":
        _emit(args, export_dot(pres))
    else:
        _emit(args, serialize(pres))


def _report_text(report: dict) -> str:
    lines = []
    for name, h in report["hypotheses"].items():
        mark = {True: "ok", False: "FAIL", None: "??"}[h["holds"]]
        lines.append(f"{name:22s} {mark:4s} [{h['source']}] {h['detail']}")
    lines.append(f"ell = {report['ell']}")
    if report.get("route_eligibility"):
        for route, e in report["route_eligibility"].items():
            stat = "eligible" if e["eligible"] else "ineligible: " + "; ".join(e["failures"])
            lines.append(f"route {route}: {stat}")
    if report.get("route"):
        lines.append(f"route taken: {report['route']}")
    if report.get("presentation"):
        p = report["presentation"]
        lines.append(f"output: {len(p['vertices'])} vertices, {len(p['arrows'])} arrows, "
                     f"{len(p['relations'])} relations")
    for n in report.get("notes", []):
        lines.append(f"note: {n}")
    return "\n".join(lines) + "\n"


def _emit_report(args, report: dict) -> None:
    if args.format == "text":
        _emit(args, _report_text(report))
    else:
        _emit(args, json.dumps(report, indent=2) + "\n")


def _pipeline_input(args) -> PipelineInput:
    group = _group_from(args)
    grading = _parse_grading(args)
    pres = None
    ell = None
    if group is None:
        pres = _source_presentation(args)
        if args.ell is None:
            raise InputError("presentation input requires --ell")
        ell = args.ell
    if not getattr(args, "e", None):
        raise InputError("--e is required")
    e_vertices = tuple(v.strip() for v in args.e.split(","))
    return PipelineInput(
        group=group,
        grading=grading,
        e_vertices=e_vertices,
        presentation=pres,
        ell=ell,
        assumptions=tuple(getattr(args, "assume", ()) or ()),
        length_bound=args.length_bound,
    )


def _exit_code_for(report: dict, failures: List[str]) -> int:
    hyp = report["hypotheses"]
    named = [hyp[f] for f in failures if f in hyp]
    if named and all(h["holds"] is None for h in named):
        return 3
    return 2


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command == "mckay":
            group = _group_from(args)
            if group is None:
                raise InputError("mckay requires --r and --weights")
            _emit_presentation(args, mckay_quiver(group, _parse_grading(args)))
            return 0
        if args.command in ("nabla", "dual"):
            group = _group_from(args)
            pres = _source_presentation(args)
            if group is not None or args.command == "nabla":
                ell = _resolve_ell(args, pres, group)
                pres = folded_quiver(pres, ell, group)
            if args.command == "dual":
                pres = quadratic_dual(pres)
            _emit_presentation(args, pres)
            return 0
        if args.command == "truncate":
            group = _group_from(args)
            pres = _source_presentation(args)
            if group is not None:
                ell = _resolve_ell(args, pres, group)
                pres = folded_quiver(pres, ell, group)
                if args.dual:
                    pres = quadratic_dual(pres)
                if args.keep:
                    kept = [v.strip() for v in args.keep.split(",")]
                elif getattr(args, "e", None):
                    removed = {
                        f"{v.strip()}^{p}" for v in args.e.split(",") for p in range(ell)
                    }
                    kept = [v for v in pres.quiver.vertices if v not in removed]
                else:
                    raise InputError("truncate requires --keep or --e")
            else:
                if args.dual:
                    pres = quadratic_dual(pres)
                if not args.keep:
                    raise InputError("presentation input requires --keep")
                kept = [v.strip() for v in args.keep.split(",")]
            if not kept:
                raise InputError("empty kept set")
            tab = build_algebra(pres, args.length_bound)
            _emit_presentation(args, truncate(tab, kept))
            return 0
        if args.command == "export":
            pres = _source_presentation(args)
            if args.out:
                with open(args.out + ".dot", "w", encoding="utf-8") as fh:
                    fh.write(export_dot(pres))
                with open(args.out + ".json", "w", encoding="utf-8") as fh:
                    fh.write(json.dumps(presentation_to_json(pres), indent=2) + "\n")
            else:
                sys.stdout.write(export_dot(pres))
                sys.stdout.write(json.dumps(presentation_to_json(pres), indent=2) + "\n")
            return 0
        if args.command == "check":
            report = cmd_check(_pipeline_input(args))
            _emit_report(args, report)
            elig = report["route_eligibility"]
            return 0 if elig["A"]["eligible"] or elig["B"]["eligible"] else 2
        if args.command == "tilt":
            try:
                report = cmd_tilt(_pipeline_input(args), route=args.route)
            except HypothesisError as exc:
                _emit_report(args, exc.report)
                return _exit_code_for(exc.report, exc.failures)
            _emit_report(args, report)
            return 0
    except (InputError, ParseError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 4
    except BoundExceededError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    return 4


if __name__ == "__main__":
    sys.exit(main())
