"""Exhaustive search for consistency violations over small citation records.

All indicators are permutation-invariant, so records are enumerated in
canonical non-increasing form only. Pairs are taken with the first record
canonically no larger than the second; reports are then oriented so that
the scientist ranked higher before the change comes first.
"""

from __future__ import annotations

import itertools
import math
from collections.abc import Iterator, Sequence
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import Union

from .axioms import (
    ConsistencyProperty,
    RankOutcome,
    Severity,
    ViolationReport,
    classify,
    outcome,
)
from .core import (
    CitationRecord,
    IndicatorSpec,
    evaluate,
    indicator_sort_key,
    parse_indicator,
)
from .transforms import (
    Absolute,
    Improvement,
    Relative,
    RoundingMode,
    TimePartitionedRecord,
    aggregate_periods,
    apply_improvement,
    improvement_sort_key,
    is_exact,
)

_PROPERTY_ORDER = {
    ConsistencyProperty.RELATIVE: 0,
    ConsistencyProperty.ABSOLUTE: 1,
    ConsistencyProperty.AGGREGATION: 2,
}


@dataclass(frozen=True)
class SearchBounds:
    max_papers: int
    max_citations: int
    improvements: tuple[Improvement, ...] = ()
    thresholds: tuple[int, ...] = ()
    properties: frozenset[ConsistencyProperty] = frozenset()
    max_periods: int = 2
    # only scientists with equally many papers are compared unless disabled
    equal_paper_counts: bool = True

    def __post_init__(self) -> None:
        object.__setattr__(self, "improvements", tuple(self.improvements))
        object.__setattr__(self, "thresholds", tuple(self.thresholds))
        props = frozenset(self.properties) or frozenset(
            ConsistencyProperty.RELATIVE if isinstance(i, Relative) else ConsistencyProperty.ABSOLUTE
            for i in self.improvements
        )
        object.__setattr__(self, "properties", props)
        if self.max_papers < 0 or self.max_citations < 0:
            raise ValueError("bounds must be non-negative")
        if self.max_periods < 2:
            raise ValueError("max_periods must be at least 2")
        if not props:
            raise ValueError("no property selected and no improvement grid given")
        if ConsistencyProperty.RELATIVE in props and not self.relative_grid():
            raise ValueError("empty relative improvement grid")
        if ConsistencyProperty.ABSOLUTE in props and not self.absolute_grid():
            raise ValueError("empty absolute improvement grid")

    def relative_grid(self) -> list[Relative]:
        # Floor keeps every grid point applicable; exactness is tracked per pair
        return [i.with_rounding(RoundingMode.FLOOR) for i in self.improvements if isinstance(i, Relative)]

    def absolute_grid(self) -> list[Absolute]:
        return [i for i in self.improvements if isinstance(i, Absolute)]


@dataclass(frozen=True)
class Counterexample:
    report: ViolationReport

    @property
    def size(self) -> tuple[int, int]:
        """(papers, citations) summed over both records."""
        papers = citations = 0
        for rec in (self.report.record_a, self.report.record_b):
            if isinstance(rec, TimePartitionedRecord):
                papers += rec.n_papers
                citations += sum(sum(p.counts) for p in rec.periods)
            else:
                papers += len(rec)
                citations += sum(rec.counts)
        return papers, citations

    def sort_key(self) -> tuple:
        r = self.report
        return (
            self.size,
            _PROPERTY_ORDER[r.property],
            r.record_a.sort_key(),
            r.record_b.sort_key(),
            indicator_sort_key(r.indicator),
            improvement_sort_key(r.improvement),
        )


def _nonincreasing(length: int, alphabet: Sequence) -> Iterator[tuple]:
    """Non-increasing tuples over a sorted alphabet, in ascending lexicographic order."""

    def rec(n: int, cap: int) -> Iterator[tuple[int, ...]]:
        if n == 0:
            yield ()
            return
        for first in range(cap + 1):
            for rest in rec(n - 1, first):
                yield (first,) + rest

    for idx in rec(length, len(alphabet) - 1):
        yield tuple(alphabet[i] for i in idx)


def enumerate_records(max_papers: int, max_citations: int) -> Iterator[CitationRecord]:
    """Every canonical record with up to ``max_papers`` papers, ordered by length then lexicographically."""
    alphabet = list(range(max_citations + 1))
    for n in range(max_papers + 1):
        for counts in _nonincreasing(n, alphabet):
            yield CitationRecord(counts)


def enumerate_partitioned(max_papers: int, max_citations: int, n_periods: int) -> Iterator[TimePartitionedRecord]:
    """Canonical time-partitioned records: papers are per-period count vectors, sorted non-increasing."""
    alphabet = sorted(itertools.product(range(max_citations + 1), repeat=n_periods))
    for n in range(max_papers + 1):
        for papers in _nonincreasing(n, alphabet):
            yield TimePartitionedRecord.from_papers(papers, n_periods)


def record_space_size(max_papers: int, max_citations: int) -> int:
    return sum(math.comb(max_citations + k, k) for k in range(max_papers + 1))


def expand_family(
    family: Sequence[Union[IndicatorSpec, str]], thresholds: Sequence[int] = ()
) -> list[IndicatorSpec]:
    """Resolve indicator names; ``"hcp"`` expands to one indicator per threshold."""
    specs: list[IndicatorSpec] = []
    for item in family:
        if item == "hcp":
            if not thresholds:
                raise ValueError("the hcp indicator needs at least one threshold")
            specs.extend(parse_indicator("hcp", t) for t in thresholds)
        elif isinstance(item, str):
            specs.append(parse_indicator(item))
        else:
            specs.append(item)
    return sorted(set(specs), key=indicator_sort_key)


def _orient(report: ViolationReport) -> ViolationReport:
    if report.property is ConsistencyProperty.AGGREGATION:
        ahead = outcome(*report.before[0])
    else:
        ahead = outcome(*report.before)
    return report.swapped() if ahead is RankOutcome.B_HIGHER else report


def _keep(severity: Severity | None, inexact: bool, include_weakenings: bool, include_inexact: bool) -> bool:
    if severity is None:
        return False
    if severity is Severity.WEAKENING and not include_weakenings:
        return False
    return include_inexact or not inexact


def _search_improvements(
    specs: list[IndicatorSpec],
    bounds: SearchBounds,
    rows: range | Sequence[int],
    include_weakenings: bool,
    include_inexact: bool,
) -> list[Counterexample]:
    records = list(enumerate_records(bounds.max_papers, bounds.max_citations))
    grid: list[Improvement] = []
    if ConsistencyProperty.RELATIVE in bounds.properties:
        grid.extend(bounds.relative_grid())
    if ConsistencyProperty.ABSOLUTE in bounds.properties:
        grid.extend(bounds.absolute_grid())

    found = []
    for imp in grid:
        improved = [apply_improvement(r, imp) for r in records]
        exact = [is_exact(r, imp) for r in records]
        for spec in specs:
            before = [evaluate(spec, r) for r in records]
            after = [evaluate(spec, r) for r in improved]
            for i in rows:
                a = records[i]
                for j in range(i, len(records)):
                    b = records[j]
                    if bounds.equal_paper_counts and len(a) != len(b):
                        continue
                    severity = classify(outcome(before[i], before[j]), outcome(after[i], after[j]))
                    inexact = not (exact[i] and exact[j])
                    if not _keep(severity, inexact, include_weakenings, include_inexact):
                        continue
                    report = ViolationReport(
                        property=ConsistencyProperty.RELATIVE
                        if isinstance(imp, Relative)
                        else ConsistencyProperty.ABSOLUTE,
                        indicator=spec,
                        record_a=a,
                        record_b=b,
                        improvement=imp,
                        before=(before[i], before[j]),
                        after=(after[i], after[j]),
                        severity=severity,
                        inexact=inexact,
                    )
                    found.append(Counterexample(_orient(report)))
    return found


def _search_aggregation(
    specs: list[IndicatorSpec],
    bounds: SearchBounds,
    n_periods: int,
    rows: range | Sequence[int],
    include_weakenings: bool,
) -> list[Counterexample]:
    records = list(enumerate_partitioned(bounds.max_papers, bounds.max_citations, n_periods))
    merged = [aggregate_periods(r) for r in records]
    found = []
    for spec in specs:
        per_period = [tuple(evaluate(spec, p) for p in r.periods) for r in records]
        total = [evaluate(spec, m) for m in merged]
        for i in rows:
            a = records[i]
            for j in range(i, len(records)):
                b = records[j]
                if bounds.equal_paper_counts and a.n_papers != b.n_papers:
                    continue
                outcomes = {outcome(x, y) for x, y in zip(per_period[i], per_period[j])}
                if len(outcomes) != 1 or RankOutcome.TIE in outcomes:
                    continue
                severity = classify(next(iter(outcomes)), outcome(total[i], total[j]))
                if not _keep(severity, False, include_weakenings, True):
                    continue
                report = ViolationReport(
                    property=ConsistencyProperty.AGGREGATION,
                    indicator=spec,
                    record_a=a,
                    record_b=b,
                    improvement=None,
                    before=tuple(zip(per_period[i], per_period[j])),
                    after=(total[i], total[j]),
                    severity=severity,
                )
                found.append(Counterexample(_orient(report)))
    return found


def _run_slice(args) -> list[Counterexample]:
    specs, bounds, worker, workers, include_weakenings, include_inexact = args
    found = []
    if bounds.properties & {ConsistencyProperty.RELATIVE, ConsistencyProperty.ABSOLUTE}:
        n = record_space_size(bounds.max_papers, bounds.max_citations)
        found += _search_improvements(
            specs, bounds, range(worker, n, workers), include_weakenings, include_inexact
        )
    if ConsistencyProperty.AGGREGATION in bounds.properties:
        for k in range(2, bounds.max_periods + 1):
            n = record_space_size(bounds.max_papers, (bounds.max_citations + 1) ** k - 1)
            found += _search_aggregation(
                specs, bounds, k, range(worker, n, workers), include_weakenings
            )
    return found


def find_counterexamples(
    family: Sequence[Union[IndicatorSpec, str]],
    bounds: SearchBounds,
    *,
    include_weakenings: bool = False,
    include_inexact: bool = False,
    workers: int = 1,
) -> list[Counterexample]:
    """All violations within ``bounds`` for every indicator in ``family``, canonically sorted.

    Strict reversals only by default. Relative factors are applied with
    floor rounding; pairs where rounding actually dropped citations are
    left out unless ``include_inexact`` is set, since the two scientists
    then did not receive the same relative improvement. ``workers > 1``
    splits the outer loop over processes; the result does not depend on it.
    """
    specs = expand_family(family, bounds.thresholds)
    workers = max(1, workers)
    jobs = [(specs, bounds, w, workers, include_weakenings, include_inexact) for w in range(workers)]
    if workers == 1:
        found = _run_slice(jobs[0])
    else:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            found = [cx for part in pool.map(_run_slice, jobs) for cx in part]
    return sorted(found, key=Counterexample.sort_key)


def minimal_counterexamples(results: Sequence[Counterexample]) -> list[Counterexample]:
    """Pareto-minimal entries under (total papers, total citations), in input order."""
    sizes = [cx.size for cx in results]
    distinct = set(sizes)
    minimal = {
        (p, c)
        for p, c in distinct
        if not any(q <= p and d <= c and (q, d) != (p, c) for q, d in distinct)
    }
    return [cx for cx, s in zip(results, sizes) if s in minimal]
