"""Command-line entry point.

Exit codes: 0 clean, 1 violations or counterexamples found (or a failed
reproduction), 2 usage or input error.
"""

from __future__ import annotations

import argparse
import itertools
import json
import sys
from dataclasses import dataclass
from pathlib import Path
from typing import Optional, Union

from .axioms import (
    ConsistencyProperty,
    RankOutcome,
    Severity,
    ViolationReport,
    check_aggregation_consistency,
    check_improvement_consistency,
    outcome,
)
from .core import CitationRecord, IndicatorSpec, evaluate, parse_indicator
from .repro import builtin_fixtures, fixture_document, run_fixture
from .search import Counterexample, SearchBounds, find_counterexamples, minimal_counterexamples
from .transforms import (
    Absolute,
    Improvement,
    InexactImprovementError,
    PeriodMismatchError,
    Relative,
    RoundingMode,
    TimePartitionedRecord,
    aggregate_periods,
    parse_fraction,
)

EXIT_OK = 0
EXIT_FOUND = 1
EXIT_ERROR = 2

INDICATORS = ("hcp", "h", "total-citations", "paper-count")


class UsageError(Exception):
    """Bad input or flags; maps to exit code 2."""


# ---------------------------------------------------------------------------
# Record documents
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Scientist:
    name: str
    record: Union[CitationRecord, TimePartitionedRecord]

    @property
    def partitioned(self) -> bool:
        return isinstance(self.record, TimePartitionedRecord)


@dataclass(frozen=True)
class RecordDocument:
    threshold: Optional[int]
    scientists: tuple[Scientist, ...]

    @property
    def partitioned(self) -> Optional[bool]:
        kinds = {s.partitioned for s in self.scientists}
        return kinds.pop() if len(kinds) == 1 else None


def _count(value, where: str) -> int:
    if isinstance(value, bool) or not isinstance(value, int):
        raise UsageError(f"{where}: expected a non-negative integer, got {json.dumps(value)}")
    if value < 0:
        raise UsageError(f"{where}: negative citation count {value}")
    return value


def parse_document(data, source: str = "<document>") -> RecordDocument:
    if not isinstance(data, dict):
        raise UsageError(f"{source}: top level must be an object")
    unknown = set(data) - {"threshold", "scientists", "title"}
    if unknown:
        raise UsageError(f"{source}: unknown field(s) {', '.join(sorted(unknown))}")
    threshold = data.get("threshold")
    if threshold is not None and (
        isinstance(threshold, bool) or not isinstance(threshold, int) or threshold < 1
    ):
        raise UsageError(f"{source}: threshold must be a positive integer")
    raw = data.get("scientists")
    if not isinstance(raw, list):
        raise UsageError(f"{source}: 'scientists' must be a list")

    scientists = []
    seen = set()
    n_periods = None
    for i, entry in enumerate(raw):
        where = f"{source}: scientists[{i}]"
        if not isinstance(entry, dict) or set(entry) != {"name", "papers"}:
            raise UsageError(f"{where}: expected an object with exactly 'name' and 'papers'")
        name, papers = entry["name"], entry["papers"]
        if not isinstance(name, str) or not name:
            raise UsageError(f"{where}.name: expected a non-empty string")
        if name in seen:
            raise UsageError(f"{where}.name: duplicate scientist {name!r}")
        seen.add(name)
        if not isinstance(papers, list):
            raise UsageError(f"{where}.papers: expected a list")
        if papers and all(isinstance(p, list) for p in papers):
            periods = [
                [_count(c, f"{where}.papers[{k}][{j}]") for j, c in enumerate(p)]
                for k, p in enumerate(papers)
            ]
            if len(periods) < 2:
                raise UsageError(f"{where}.papers: per-period data needs at least two periods")
            if n_periods is not None and len(periods) != n_periods:
                raise UsageError(f"{where}.papers: {len(periods)} periods, others have {n_periods}")
            n_periods = len(periods)
            try:
                record = TimePartitionedRecord(periods)
            except PeriodMismatchError:
                raise UsageError(f"{where}.papers: periods cover different papers") from None
        else:
            record = CitationRecord(_count(c, f"{where}.papers[{j}]") for j, c in enumerate(papers))
        scientists.append(Scientist(name, record))

    doc = RecordDocument(threshold, tuple(scientists))
    if doc.scientists and doc.partitioned is None:
        raise UsageError(f"{source}: mixes flat and per-period scientists")
    return doc


def load_document(path: str) -> RecordDocument:
    source = "<stdin>" if path == "-" else path
    try:
        text = sys.stdin.read() if path == "-" else Path(path).read_text()
    except OSError as exc:
        raise UsageError(f"cannot read {source}: {exc.strerror}") from None
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise UsageError(f"{source}:{exc.lineno}:{exc.colno}: {exc.msg}") from None
    return parse_document(data, source)


# ---------------------------------------------------------------------------
# Serialization
# ---------------------------------------------------------------------------


def record_json(rec: Union[CitationRecord, TimePartitionedRecord]) -> list:
    if isinstance(rec, TimePartitionedRecord):
        return [list(p.counts) for p in rec.periods]
    return list(rec.counts)


def improvement_json(imp: Optional[Improvement]) -> Optional[dict]:
    if imp is None:
        return None
    if isinstance(imp, Relative):
        return {"relative": f"{imp.numerator}/{imp.denominator}", "rounding": imp.rounding.value}
    return {"absolute": imp.delta}


def report_json(report: ViolationReport) -> dict:
    before = report.before
    return {
        "property": report.property.value,
        "indicator": report.indicator.name,
        "a": record_json(report.record_a),
        "b": record_json(report.record_b),
        "improvement": improvement_json(report.improvement),
        "before": [list(p) for p in before] if report.property is ConsistencyProperty.AGGREGATION else list(before),
        "after": list(report.after),
        "severity": report.severity.value,
        "inexact": report.inexact,
    }


def emit_records(rows: list[dict], out) -> None:
    for row in rows:
        out.write(json.dumps(row, sort_keys=True, separators=(",", ":")) + "\n")


def emit_table(header: list[str], rows: list[list], out) -> None:
    cells = [header] + [[str(c) for c in r] for r in rows]
    widths = [max(len(r[k]) for r in cells) for k in range(len(header))]
    for r in cells:
        out.write("  ".join(c.ljust(w) for c, w in zip(r, widths)).rstrip() + "\n")


# ---------------------------------------------------------------------------
# Commands
# ---------------------------------------------------------------------------


def _indicator(name: str, threshold: Optional[int]) -> IndicatorSpec:
    try:
        return parse_indicator(name, threshold)
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def _improvement_grid(args, rounding: RoundingMode) -> tuple[list[Relative], list[Absolute]]:
    relative = []
    for text in args.relative or []:
        try:
            relative.append(Relative(*parse_fraction(text), rounding=rounding))
        except ValueError as exc:
            raise UsageError(str(exc)) from None
    absolute = []
    for d in args.absolute or []:
        if d < 0:
            raise UsageError(f"absolute improvement must be non-negative, got {d}")
        absolute.append(Absolute(d))
    return relative, absolute


def cmd_compute(args, out) -> int:
    doc = load_document(args.document)
    threshold = args.threshold if args.threshold is not None else doc.threshold
    spec = _indicator(args.indicator, threshold)
    rows = []
    for s in doc.scientists:
        if s.partitioned:
            rows.append(
                {
                    "name": s.name,
                    "indicator": spec.name,
                    "periods": [evaluate(spec, p) for p in s.record.periods],
                    "value": evaluate(spec, aggregate_periods(s.record)),
                }
            )
        else:
            rows.append({"name": s.name, "indicator": spec.name, "value": evaluate(spec, s.record)})
    if args.format == "records":
        emit_records(rows, out)
    else:
        emit_table(
            ["scientist", spec.name] + (["per period"] if doc.partitioned else []),
            [
                [r["name"], r["value"]] + ([" ".join(map(str, r["periods"]))] if "periods" in r else [])
                for r in rows
            ],
            out,
        )
    return EXIT_OK


def _check_properties(args, doc: RecordDocument, relative, absolute) -> list[ConsistencyProperty]:
    if args.property:
        props = [ConsistencyProperty(p) for p in dict.fromkeys(args.property)]
    elif doc.partitioned and not (relative or absolute):
        props = [ConsistencyProperty.AGGREGATION]
    else:
        props = [p for p, grid in ((ConsistencyProperty.RELATIVE, relative), (ConsistencyProperty.ABSOLUTE, absolute)) if grid]
        if not props:
            raise UsageError("no property selected: pass --property or an improvement (--relative/--absolute)")
    for p in props:
        if p is ConsistencyProperty.AGGREGATION and doc.partitioned is False:
            raise UsageError("aggregation checks need per-period records")
        if p is not ConsistencyProperty.AGGREGATION and doc.partitioned:
            raise UsageError(f"{p.value} improvement checks need flat records, not per-period ones")
        if p is ConsistencyProperty.RELATIVE and not relative:
            raise UsageError("property relative needs at least one --relative factor")
        if p is ConsistencyProperty.ABSOLUTE and not absolute:
            raise UsageError("property absolute needs at least one --absolute increment")
    return props


def cmd_check(args, out) -> int:
    doc = load_document(args.document)
    threshold = args.threshold if args.threshold is not None else doc.threshold
    spec = _indicator(args.indicator, threshold)
    relative, absolute = _improvement_grid(args, RoundingMode(args.rounding))
    props = _check_properties(args, doc, relative, absolute)

    rows = []
    for prop in props:
        grid: list[Optional[Improvement]]
        grid = {ConsistencyProperty.RELATIVE: relative, ConsistencyProperty.ABSOLUTE: absolute}.get(prop, [None])
        for imp in grid:
            for sa, sb in itertools.combinations(doc.scientists, 2):
                try:
                    if imp is None:
                        report = check_aggregation_consistency(spec, sa.record, sb.record)
                    else:
                        report = check_improvement_consistency(spec, sa.record, sb.record, imp)
                except InexactImprovementError as exc:
                    raise UsageError(f"{sa.name}/{sb.name}: {exc}") from None
                except PeriodMismatchError as exc:
                    raise UsageError(f"{sa.name}/{sb.name}: {exc}") from None
                names = [sa.name, sb.name]
                row = {
                    "property": prop.value,
                    "indicator": spec.name,
                    "improvement": improvement_json(imp),
                }
                if report is None:
                    status = "consistent"
                    if imp is None and not _premise_met(spec, sa.record, sb.record):
                        status = "premise-unmet"
                    row.update(pair=names, status=status)
                else:
                    ahead = report.before[0] if prop is ConsistencyProperty.AGGREGATION else report.before
                    if ahead[0] < ahead[1]:
                        report = report.swapped()
                        names.reverse()
                    data = report_json(report)
                    row.update(pair=names, status=report.severity.value, before=data["before"],
                               after=data["after"], inexact=report.inexact)
                rows.append(row)

    counted = {Severity.STRICT_REVERSAL.value}
    if args.include_weakenings:
        counted.add(Severity.WEAKENING.value)
    found = sum(r["status"] in counted for r in rows)

    if args.format == "records":
        emit_records(rows, out)
    else:
        table = []
        for r in rows:
            change = f"{_fmt(r['before'])} -> {_fmt(r['after'])}" if "after" in r else ""
            imp = r["improvement"]
            label = r["property"] if imp is None else next(f"{k} {v}" for k, v in imp.items() if k != "rounding")
            table.append([f"{r['pair'][0]} vs {r['pair'][1]}", label, r["status"], change])
        emit_table(["pair", "change", "status", "values"], table, out)
        out.write(f"{found} violation(s) among {len(rows)} pair check(s)\n")
    return EXIT_FOUND if found else EXIT_OK


def _premise_met(spec: IndicatorSpec, a: TimePartitionedRecord, b: TimePartitionedRecord) -> bool:
    """Whether one scientist is strictly ahead in every period."""
    outcomes = {outcome(evaluate(spec, pa), evaluate(spec, pb)) for pa, pb in zip(a.periods, b.periods)}
    return len(outcomes) == 1 and RankOutcome.TIE not in outcomes


def _fmt(values) -> str:
    if values and isinstance(values[0], list):
        return " / ".join(f"({a},{b})" for a, b in values)
    return f"({values[0]},{values[1]})"


def cmd_search(args, out) -> int:
    relative, absolute = _improvement_grid(args, RoundingMode.FLOOR)
    props = frozenset(ConsistencyProperty(p) for p in args.property or [])
    if not props and not (relative or absolute):
        raise UsageError("empty improvement grid: pass --relative and/or --absolute, or --property aggregation")
    indicators = args.indicator or ["hcp"]
    thresholds = args.threshold or []
    if "hcp" in indicators and not thresholds:
        raise UsageError("the hcp indicator needs --threshold")
    try:
        bounds = SearchBounds(
            max_papers=args.max_papers,
            max_citations=args.max_citations,
            improvements=(*relative, *absolute),
            thresholds=tuple(thresholds),
            properties=props,
            max_periods=args.max_periods,
            equal_paper_counts=not args.allow_unequal_papers,
        )
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    results = find_counterexamples(
        indicators,
        bounds,
        include_weakenings=args.include_weakenings,
        include_inexact=args.include_inexact,
        workers=args.workers,
    )
    if args.minimal:
        results = minimal_counterexamples(results)
    _emit_counterexamples(results, args.format, out)
    return EXIT_FOUND if results else EXIT_OK


def _emit_counterexamples(results: list[Counterexample], fmt: str, out) -> None:
    if fmt == "records":
        emit_records([{**report_json(cx.report), "size": list(cx.size)} for cx in results], out)
        return
    table = []
    for cx in results:
        r = report_json(cx.report)
        imp = r["improvement"]
        label = r["property"] if imp is None else next(f"{k} {v}" for k, v in imp.items() if k != "rounding")
        table.append([
            r["indicator"], label, json.dumps(r["a"]), json.dumps(r["b"]),
            f"{_fmt(r['before'])} -> {_fmt(r['after'])}", r["severity"], f"{cx.size[0]}/{cx.size[1]}",
        ])
    emit_table(["indicator", "change", "a", "b", "values", "severity", "papers/cits"], table, out)
    out.write(f"{len(results)} counterexample(s)\n")


def _select_fixtures(selector: str):
    fixtures = builtin_fixtures()
    if selector == "all":
        return fixtures
    chosen = [f for f in fixtures if f.name == selector.upper()]
    if not chosen:
        raise UsageError(f"unknown fixture {selector!r} (expected T1..T7 or all)")
    return chosen


def cmd_repro(args, out) -> int:
    reports = [run_fixture(f) for f in _select_fixtures(args.table)]
    if args.format == "records":
        rows = []
        for rep in reports:
            rows.append({
                "fixture": rep.name,
                "passed": rep.passed,
                "cells": len(rep.cells),
                "rank_cells": len(rep.rank_cells),
                "error": rep.error,
                "failures": [
                    {"scientist": c.scientist, "scenario": getattr(c, "scenario", getattr(c, "column", None)),
                     "expected": c.expected, "computed": c.computed}
                    for c in rep.failures
                ],
            })
        emit_records(rows, out)
    else:
        for rep in reports:
            status = "PASS" if rep.passed else "FAIL"
            extra = f" + {len(rep.rank_cells)} rank cells" if rep.rank_cells else ""
            out.write(f"{status} {rep.name}: {len(rep.cells)} cells{extra}\n")
            if rep.error:
                out.write(f"    error: {rep.error}\n")
            for c in rep.failures:
                where = getattr(c, "scenario", None) or getattr(c, "column")
                out.write(f"    {c.scientist} @ {where}: expected {c.expected}, computed {c.computed}\n")
    return EXIT_OK if all(r.passed for r in reports) else EXIT_FOUND


def cmd_export(args, out) -> int:
    fixtures = _select_fixtures(args.table)
    if args.out:
        target = Path(args.out)
        target.mkdir(parents=True, exist_ok=True)
        for f in fixtures:
            (target / f"{f.name}.json").write_text(json.dumps(fixture_document(f), indent=2) + "\n")
            out.write(f"wrote {target / (f.name + '.json')}\n")
    else:
        emit_records([fixture_document(f) for f in fixtures], out)
    return EXIT_OK


# ---------------------------------------------------------------------------
# Parser
# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="hcpaxioms",
        description="Indicator evaluation and ranking-consistency checks for citation records.",
    )
    default_format = "table" if sys.stdout.isatty() else "records"
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("table", "records"), default=default_format,
                        help="human table or one JSON object per line (default: table on a terminal)")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("compute", parents=[common], help="evaluate an indicator for every scientist")
    p.add_argument("document", help="record document (JSON), or - for stdin")
    p.add_argument("--indicator", choices=INDICATORS, default="hcp")
    p.add_argument("--threshold", type=int, help="HCP threshold, overrides the document's")
    p.set_defaults(func=cmd_compute)

    p = sub.add_parser("check", parents=[common], help="check consistency for all scientist pairs")
    p.add_argument("document")
    p.add_argument("--indicator", choices=INDICATORS, default="hcp")
    p.add_argument("--threshold", type=int)
    p.add_argument("--property", action="append", choices=[c.value for c in ConsistencyProperty])
    p.add_argument("--relative", action="append", metavar="P/Q", help="relative factor, repeatable")
    p.add_argument("--absolute", action="append", type=int, metavar="D", help="per-paper increment, repeatable")
    p.add_argument("--rounding", choices=[m.value for m in RoundingMode], default="strict")
    p.add_argument("--include-weakenings", action="store_true",
                   help="count tie transitions as violations")
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("search", parents=[common], help="exhaustive counterexample search")
    p.add_argument("--indicator", action="append", choices=INDICATORS,
                   help="indicator to search, repeatable (default: hcp)")
    p.add_argument("--threshold", action="append", type=int, help="HCP threshold, repeatable")
    p.add_argument("--property", action="append", choices=[c.value for c in ConsistencyProperty])
    p.add_argument("--relative", action="append", metavar="P/Q")
    p.add_argument("--absolute", action="append", type=int, metavar="D")
    p.add_argument("--max-papers", type=int, default=2)
    p.add_argument("--max-citations", type=int, default=10)
    p.add_argument("--max-periods", type=int, default=2)
    p.add_argument("--include-weakenings", action="store_true")
    p.add_argument("--include-inexact", action="store_true",
                   help="keep pairs where floor rounding dropped citations")
    p.add_argument("--allow-unequal-papers", action="store_true",
                   help="also pair scientists with different numbers of papers")
    p.add_argument("--minimal", action="store_true", help="only Pareto-minimal counterexamples")
    p.add_argument("--workers", type=int, default=1)
    p.set_defaults(func=cmd_search)

    p = sub.add_parser("repro", parents=[common], help="reproduce the built-in example tables")
    p.add_argument("table", nargs="?", default="all", help="T1..T7 or all")
    p.set_defaults(func=cmd_repro)

    p = sub.add_parser("export-fixtures", help="write the example tables as record documents")
    p.add_argument("table", nargs="?", default="all")
    p.add_argument("--out", help="directory for <name>.json files (default: JSON lines on stdout)")
    p.set_defaults(func=cmd_export)
    return parser


def main(argv: Optional[list[str]] = None, out=None) -> int:
    out = out or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_ERROR
    try:
        return args.func(args, out)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR
    except Exception as exc:  # exit-code contract: nothing outside 0/1/2
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_ERROR


def run() -> None:
    sys.exit(main())
