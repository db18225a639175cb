"""Pairwise ranking consistency under uniform improvements and period aggregation.

An indicator is consistent for a pair of scientists when a shared
improvement (or the merging of concordant periods) leaves their rank order
unchanged. Changes are classified as a strict reversal (strict order flips)
or a weakening (strict order turns into a tie, or a tie into strict order).
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Optional, Union

from .core import CitationRecord, IndicatorSpec, evaluate
from .transforms import (
    Improvement,
    PeriodMismatchError,
    Relative,
    TimePartitionedRecord,
    aggregate_periods,
    apply_improvement,
    is_exact,
)


class RankOutcome(enum.Enum):
    A_HIGHER = "a-higher"
    TIE = "tie"
    B_HIGHER = "b-higher"

    def flipped(self) -> RankOutcome:
        if self is RankOutcome.A_HIGHER:
            return RankOutcome.B_HIGHER
        if self is RankOutcome.B_HIGHER:
            return RankOutcome.A_HIGHER
        return self


class ConsistencyProperty(enum.Enum):
    RELATIVE = "relative"
    ABSOLUTE = "absolute"
    AGGREGATION = "aggregation"


class Severity(enum.Enum):
    STRICT_REVERSAL = "strict-reversal"
    WEAKENING = "weakening"


Pair = tuple[int, int]


@dataclass(frozen=True)
class ViolationReport:
    property: ConsistencyProperty
    indicator: IndicatorSpec
    record_a: Union[CitationRecord, TimePartitionedRecord]
    record_b: Union[CitationRecord, TimePartitionedRecord]
    improvement: Optional[Improvement]
    # a single pair for improvements, one pair per period for aggregation
    before: Union[Pair, tuple[Pair, ...]]
    after: Pair
    severity: Severity
    # True when Floor rounding had to drop a fractional citation somewhere
    inexact: bool = False

    def swapped(self) -> ViolationReport:
        if self.property is ConsistencyProperty.AGGREGATION:
            before = tuple((b, a) for a, b in self.before)
        else:
            before = (self.before[1], self.before[0])
        return ViolationReport(
            self.property,
            self.indicator,
            self.record_b,
            self.record_a,
            self.improvement,
            before,
            (self.after[1], self.after[0]),
            self.severity,
            self.inexact,
        )


def outcome(value_a: int, value_b: int) -> RankOutcome:
    if value_a > value_b:
        return RankOutcome.A_HIGHER
    if value_a < value_b:
        return RankOutcome.B_HIGHER
    return RankOutcome.TIE


def compare(spec: IndicatorSpec, a: CitationRecord, b: CitationRecord) -> RankOutcome:
    return outcome(evaluate(spec, a), evaluate(spec, b))


def classify(before: RankOutcome, after: RankOutcome) -> Optional[Severity]:
    """Severity of a rank change, or None when the outcome is preserved."""
    if before is after:
        return None
    if RankOutcome.TIE in (before, after):
        return Severity.WEAKENING
    return Severity.STRICT_REVERSAL


def property_of(imp: Improvement) -> ConsistencyProperty:
    return ConsistencyProperty.RELATIVE if isinstance(imp, Relative) else ConsistencyProperty.ABSOLUTE


def check_improvement_consistency(
    spec: IndicatorSpec,
    a: CitationRecord,
    b: CitationRecord,
    imp: Improvement,
) -> Optional[ViolationReport]:
    """Report the rank change caused by giving both scientists the same improvement.

    Raises InexactImprovementError for Strict relative factors that do not
    map the counts to integers.
    """
    before = (evaluate(spec, a), evaluate(spec, b))
    after = (evaluate(spec, apply_improvement(a, imp)), evaluate(spec, apply_improvement(b, imp)))
    severity = classify(outcome(*before), outcome(*after))
    if severity is None:
        return None
    return ViolationReport(
        property=property_of(imp),
        indicator=spec,
        record_a=a,
        record_b=b,
        improvement=imp,
        before=before,
        after=after,
        severity=severity,
        inexact=not (is_exact(a, imp) and is_exact(b, imp)),
    )


def check_aggregation_consistency(
    spec: IndicatorSpec,
    a: TimePartitionedRecord,
    b: TimePartitionedRecord,
) -> Optional[ViolationReport]:
    """Report when a scientist ahead in every period is not ahead on the merged record.

    Periods with mixed or tied outcomes leave the premise unmet, so nothing
    is reported for them.
    """
    if a.n_periods != b.n_periods:
        raise PeriodMismatchError("period structures differ")
    per_period = tuple(
        (evaluate(spec, pa), evaluate(spec, pb)) for pa, pb in zip(a.periods, b.periods)
    )
    outcomes = {outcome(*v) for v in per_period}
    if len(outcomes) != 1 or RankOutcome.TIE in outcomes:
        return None
    premise = outcomes.pop()
    after = (evaluate(spec, aggregate_periods(a)), evaluate(spec, aggregate_periods(b)))
    severity = classify(premise, outcome(*after))
    if severity is None:
        return None
    return ViolationReport(
        property=ConsistencyProperty.AGGREGATION,
        indicator=spec,
        record_a=a,
        record_b=b,
        improvement=None,
        before=per_period,
        after=after,
        severity=severity,
    )


def recheck(report: ViolationReport) -> Optional[ViolationReport]:
    """Re-run the check that produced ``report`` on its stored inputs."""
    if report.property is ConsistencyProperty.AGGREGATION:
        return check_aggregation_consistency(report.indicator, report.record_a, report.record_b)
    return check_improvement_consistency(
        report.indicator, report.record_a, report.record_b, report.improvement
    )
