"""The seven worked example tables as executable fixtures."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Union

from .core import CitationRecord, HcpCount, HIndex, IndicatorSpec, TotalCitations, evaluate
from .core import paper_count, total_citations
from .transforms import (
    Absolute,
    Improvement,
    InexactImprovementError,
    Relative,
    TimePartitionedRecord,
    aggregate_periods,
    apply_improvement,
)

HCP_THRESHOLD = 10

# citations of excellent, good, medium, bad and poor papers before any improvement
GROUP_CITATIONS = {"E": 15, "G": 12, "M": 9, "B": 6, "P": 3}

# group multiplicities (E, G, M, B, P) for the three-scientist example
GROUP_DISTRIBUTIONS = {
    "X": (0, 4, 4, 4, 0),
    "Y": (1, 2, 6, 2, 1),
    "Z": (2, 0, 8, 0, 2),
}


@dataclass(frozen=True)
class Scenario:
    """One column of a table: the original data, an improvement, a single period, or the merge."""

    label: str
    improvement: Optional[Improvement] = None
    period: Optional[int] = None
    aggregate: bool = False


ORIGINAL = Scenario("O")


@dataclass(frozen=True)
class RankColumn:
    label: str
    scenarios: tuple[str, ...]
    ranks: tuple[int, ...]


@dataclass(frozen=True)
class Fixture:
    name: str
    caption: str
    indicator: IndicatorSpec
    scientists: tuple[tuple[str, Union[CitationRecord, TimePartitionedRecord]], ...]
    scenarios: tuple[Scenario, ...]
    # expected[i][k]: value for scientist i under scenario k
    expected: tuple[tuple[int, ...], ...]
    rank_columns: tuple[RankColumn, ...] = ()

    def __post_init__(self) -> None:
        labels = [s.label for s in self.scenarios]
        if len(set(labels)) != len(labels):
            raise ValueError(f"{self.name}: duplicate scenario labels")
        if len(self.expected) != len(self.scientists) or any(
            len(row) != len(self.scenarios) for row in self.expected
        ):
            raise ValueError(f"{self.name}: expected matrix is not scientists x scenarios")

    @property
    def threshold(self) -> Optional[int]:
        return self.indicator.threshold.value if isinstance(self.indicator, HcpCount) else None

    def with_expected(self, scientist: int, scenario: int, value: int) -> Fixture:
        rows = [list(r) for r in self.expected]
        rows[scientist][scenario] = value
        return Fixture(
            self.name,
            self.caption,
            self.indicator,
            self.scientists,
            self.scenarios,
            tuple(tuple(r) for r in rows),
            self.rank_columns,
        )


@dataclass(frozen=True)
class Cell:
    scientist: str
    scenario: str
    expected: int
    computed: Optional[int]

    @property
    def passed(self) -> bool:
        return self.computed == self.expected


@dataclass(frozen=True)
class RankCell:
    scientist: str
    column: str
    expected: int
    computed: tuple[int, ...]  # one rank per scenario sharing the column

    @property
    def passed(self) -> bool:
        return bool(self.computed) and all(r == self.expected for r in self.computed)


@dataclass
class FixtureReport:
    name: str
    cells: list[Cell] = field(default_factory=list)
    rank_cells: list[RankCell] = field(default_factory=list)
    error: Optional[str] = None

    @property
    def passed(self) -> bool:
        return self.error is None and all(c.passed for c in self.cells) and all(
            c.passed for c in self.rank_cells
        )

    @property
    def failures(self) -> list[Union[Cell, RankCell]]:
        return [c for c in [*self.cells, *self.rank_cells] if not c.passed]


def expand_groups(multiplicities: tuple[int, ...]) -> CitationRecord:
    """Turn (E, G, M, B, P) multiplicities into an explicit non-increasing record."""
    counts = []
    for n, c in zip(multiplicities, GROUP_CITATIONS.values()):
        counts.extend([c] * n)
    return CitationRecord(counts)


def _group_scientists() -> tuple[tuple[str, CitationRecord], ...]:
    out = []
    for name, dist in GROUP_DISTRIBUTIONS.items():
        rec = expand_groups(dist)
        # all three share the same totals, which is what makes the example fair
        if paper_count(rec) != 12 or total_citations(rec) != 108:
            raise AssertionError(f"group expansion for {name} does not give 12 papers / 108 citations")
        out.append((name, rec))
    return tuple(out)


def _periods(*periods) -> TimePartitionedRecord:
    return TimePartitionedRecord(periods)


_YEARS = (
    Scenario("first year", period=0),
    Scenario("second year", period=1),
    Scenario("both years", aggregate=True),
)

_TABLE2_SCENARIOS = (
    ORIGINAL,
    Scenario("R1", Relative(4, 3)),
    Scenario("R2", Relative(5, 3)),
    Scenario("A1", Absolute(3)),
    Scenario("A2", Absolute(6)),
)


def builtin_fixtures() -> list[Fixture]:
    hcp = HcpCount(HCP_THRESHOLD)
    t1 = Fixture(
        "T1",
        "Two scientists V, W with two papers each: original, doubled citations, five more citations per paper.",
        hcp,
        (("V", CitationRecord([10, 0])), ("W", CitationRecord([5, 5]))),
        (ORIGINAL, Scenario("R", Relative(2)), Scenario("A", Absolute(5))),
        ((1, 1, 1), (0, 2, 2)),
    )
    t2 = Fixture(
        "T2",
        "Citations of excellent, good, medium, bad and poor papers under the relative and absolute improvements.",
        TotalCitations(),
        tuple((g, CitationRecord([c])) for g, c in GROUP_CITATIONS.items()),
        _TABLE2_SCENARIOS,
        (
            (15, 20, 25, 18, 21),
            (12, 16, 20, 15, 18),
            (9, 12, 15, 12, 15),
            (6, 8, 10, 9, 12),
            (3, 4, 5, 6, 9),
        ),
    )
    t3 = Fixture(
        "T3",
        "HCP scores and ranks of X, Y, Z built from the paper groups, under every case of T2.",
        hcp,
        _group_scientists(),
        _TABLE2_SCENARIOS,
        (
            (4, 8, 12, 8, 12),
            (3, 9, 11, 9, 11),
            (2, 10, 10, 10, 10),
        ),
        (
            RankColumn("O", ("O",), (1, 2, 3)),
            RankColumn("R1/A1", ("R1", "A1"), (3, 2, 1)),
            RankColumn("R2/A2", ("R2", "A2"), (1, 2, 3)),
        ),
    )
    t4 = Fixture(
        "T4",
        "h-indices of P, Q with four papers each: original, doubled citations, two more citations per paper.",
        HIndex(),
        (("P", CitationRecord([3, 3, 3, 0])), ("Q", CitationRecord([3, 2, 2, 2]))),
        (ORIGINAL, Scenario("R", Relative(2)), Scenario("A", Absolute(2))),
        ((3, 3, 3), (2, 4, 4)),
    )
    t5 = Fixture(
        "T5",
        "V, W with the same citations in two consecutive years, and both years combined.",
        hcp,
        (("V", _periods([10, 0], [10, 0])), ("W", _periods([5, 5], [5, 5]))),
        _YEARS,
        ((1, 1, 1), (0, 0, 2)),
    )
    t6 = Fixture(
        "T6",
        "S, T, U with 20 citations per year spread differently over four papers.",
        hcp,
        (
            ("S", _periods([5, 5, 5, 5], [5, 5, 5, 5])),
            ("T", _periods([10, 5, 5, 0], [5, 10, 5, 0])),
            ("U", _periods([10, 10, 0, 0], [10, 10, 0, 0])),
        ),
        _YEARS,
        ((0, 0, 4), (1, 1, 3), (2, 2, 2)),
    )
    t7 = Fixture(
        "T7",
        "P, Q with the same citations in two consecutive years, evaluated by the h-index.",
        HIndex(),
        (("P", _periods([3, 3, 3, 0], [3, 3, 3, 0])), ("Q", _periods([3, 2, 2, 2], [3, 2, 2, 2]))),
        _YEARS,
        ((3, 3, 3), (2, 2, 4)),
    )
    return [t1, t2, t3, t4, t5, t6, t7]


def fixture_by_name(name: str) -> Fixture:
    for f in builtin_fixtures():
        if f.name == name:
            return f
    raise KeyError(f"unknown fixture {name!r}")


def scenario_record(
    record: Union[CitationRecord, TimePartitionedRecord], scenario: Scenario
) -> CitationRecord:
    """The flat record a scenario evaluates; relative factors use Strict rounding."""
    if isinstance(record, TimePartitionedRecord):
        if scenario.aggregate:
            return aggregate_periods(record)
        if scenario.period is None:
            raise ValueError(f"scenario {scenario.label!r} needs a period for a time-partitioned record")
        return record.periods[scenario.period]
    if scenario.improvement is None:
        return record
    return apply_improvement(record, scenario.improvement)


def competition_ranks(values: list[int]) -> tuple[int, ...]:
    """1 for the highest value; tied scientists share the better rank."""
    return tuple(1 + sum(v > x for v in values) for x in values)


def run_fixture(f: Fixture) -> FixtureReport:
    report = FixtureReport(f.name)
    computed: dict[str, list[int]] = {}
    try:
        for k, scenario in enumerate(f.scenarios):
            column = [evaluate(f.indicator, scenario_record(rec, scenario)) for _, rec in f.scientists]
            computed[scenario.label] = column
    except InexactImprovementError as exc:
        report.error = str(exc)
        return report

    for i, (name, _) in enumerate(f.scientists):
        for k, scenario in enumerate(f.scenarios):
            report.cells.append(Cell(name, scenario.label, f.expected[i][k], computed[scenario.label][i]))

    for col in f.rank_columns:
        ranks = [competition_ranks(computed[label]) for label in col.scenarios]
        for i, (name, _) in enumerate(f.scientists):
            report.rank_cells.append(RankCell(name, col.label, col.ranks[i], tuple(r[i] for r in ranks)))
    return report


def fixture_document(f: Fixture) -> dict:
    """The fixture's scientists in the command-line record format."""
    scientists = []
    for name, rec in f.scientists:
        if isinstance(rec, TimePartitionedRecord):
            papers = [list(p.counts) for p in rec.periods]
        else:
            papers = list(rec.counts)
        scientists.append({"name": name, "papers": papers})
    doc: dict = {"title": f"{f.name}: {f.caption}"}
    if f.threshold is not None:
        doc["threshold"] = f.threshold
    doc["scientists"] = scientists
    return doc
