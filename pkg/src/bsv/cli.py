"""Command-line entry point: ``bsv check|simulate|tables|verify``."""

from __future__ import annotations

import argparse
import sys
from dataclasses import replace
from typing import Optional, Sequence

from . import __version__
from .dsl import ScenarioFile, parse_source
from .formula import FormulaError
from .hierarchy import Hierarchy, HierarchyError
from .properties import UnknownProperty, verify_properties
from .report import Report, digest, property_entries, scenario_entry, static_violations
from .runtime import InvalidScenario
from .strategy import Strategy
from .syntax import DslSyntaxError
from .tables import TABLE_IDS, UnknownTable, generate_table, render_json, render_text


def _common(p: argparse.ArgumentParser, suppress: bool) -> None:
    default = argparse.SUPPRESS if suppress else None
    p.add_argument("--json", metavar="PATH", default=default, help="also write the JSON report to PATH ('-' for stdout)")
    p.add_argument(
        "--max-assignments", metavar="N", type=int, default=default, help="enumeration budget for tautology checks"
    )


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="bsv", description="Contract inheritance strategies and checks.")
    parser.add_argument("--version", action="version", version=f"bsv {__version__}")
    _common(parser, suppress=False)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("check", help="parse, validate and report static hierarchy violations")
    p.add_argument("file")
    _common(p, suppress=True)

    p = sub.add_parser("simulate", help="simulate the scenarios of a file")
    p.add_argument("file")
    p.add_argument("--scenario", metavar="NAME", action="append", help="only this scenario (repeatable)")
    p.add_argument("--strategy", choices=["percolation", "join", "client", "all"], help="default: file config")
    _common(p, suppress=True)

    p = sub.add_parser("tables", help="regenerate the configuration tables")
    p.add_argument("--id", type=int, action="append", dest="ids", metavar="N", help=f"one of {list(TABLE_IDS)}")
    p.add_argument("--format", choices=["text", "json"], default="text")
    p.add_argument("--unicode", action="store_true", help="render decision cells as glyphs")
    _common(p, suppress=True)

    p = sub.add_parser("verify", help="run brute-force property suites")
    p.add_argument("--suite", action="append", metavar="IDS", help="comma list, ranges like T1..T20, or 'all'")
    p.add_argument("--budget", type=int, metavar="N", help="enumeration budget (overrides --max-assignments)")
    p.add_argument("--samples", type=int, default=1000, help="random hierarchies for theorem3/prop1")
    p.add_argument("--seed", type=int, default=0)
    _common(p, suppress=True)
    return parser


def _load(path: str, budget: Optional[int]) -> tuple[ScenarioFile, str]:
    with open(path, "rb") as fh:
        data = fh.read()
    sf = parse_source(data.decode("utf-8"))
    if budget is not None:
        h = sf.hierarchy
        sf = replace(sf, hierarchy=Hierarchy(h.classes, h.domain.with_budget(budget)))
    return sf, digest(data)


def _error(exc: Exception) -> dict:
    if isinstance(exc, DslSyntaxError):
        return {"message": exc.reason, "line": exc.line, "col": exc.col}
    return {"message": str(exc)}


def _emit(report: Report, args: argparse.Namespace, text: Optional[str] = None) -> int:
    if args.json == "-":
        sys.stdout.write(report.to_json())
    else:
        sys.stdout.write(text if text is not None else report.to_text())
        if args.json:
            with open(args.json, "w", encoding="utf-8") as fh:
                fh.write(report.to_json())
    if report.error is not None:
        e = report.error
        where = f"{report.input_path}:{e['line']}:{e['col']}: " if e.get("line") else ""
        print(f"bsv: {where}{e['message']}", file=sys.stderr)
    return report.exit_status


def _check(args: argparse.Namespace) -> Report:
    report = Report("check", args.file)
    sf, report.input_digest = _load(args.file, args.max_assignments)
    report.violations = static_violations(sf)
    return report


def _simulate(args: argparse.Namespace) -> Report:
    report = Report("simulate", args.file)
    sf, report.input_digest = _load(args.file, args.max_assignments)
    strategies = Strategy.parse(args.strategy) if args.strategy else sf.config.strategies
    names = args.scenario or list(sf.scenarios)
    for n in names:
        if n not in sf.scenarios:
            raise InvalidScenario(f"no scenario named {n!r}")
    report.flag_rejections = sf.config.reject_is_error
    report.scenarios = [scenario_entry(sf, sf.scenarios[n], strategies) for n in names]
    return report


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    report = Report(args.command, getattr(args, "file", None))
    try:
        if args.command == "check":
            report = _check(args)
        elif args.command == "simulate":
            report = _simulate(args)
        elif args.command == "tables":
            tables = [generate_table(i) for i in (args.ids or TABLE_IDS)]
            report.tables = tables
            if args.format == "json":
                text = "".join(render_json(t) for t in tables)
            else:
                text = "\n".join(render_text(t, unicode=args.unicode) for t in tables)
            return _emit(report, args, text)
        else:
            budget = args.budget or args.max_assignments
            kw = {"budget": budget} if budget else {}
            results = verify_properties(args.suite, samples=args.samples, seed=args.seed, **kw)
            report.properties = property_entries(results)
    except (OSError, UnicodeDecodeError) as exc:
        report.error = {"message": f"cannot read input: {exc}"}
    except (DslSyntaxError, FormulaError, HierarchyError, InvalidScenario, UnknownTable, UnknownProperty) as exc:
        # BudgetExceeded is a FormulaError: an over-budget request is an input problem
        report.error = _error(exc)
    return _emit(report, args)


if __name__ == "__main__":
    sys.exit(main())
