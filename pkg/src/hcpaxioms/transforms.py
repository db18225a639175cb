"""Uniform citation improvements and aggregation of per-period records."""

from __future__ import annotations

import enum
from collections.abc import Iterable, Sequence
from dataclasses import dataclass
from fractions import Fraction
from typing import Union

from .core import CitationRecord


class InexactImprovementError(ValueError):
    """A Strict relative improvement hit a count that does not scale to an integer."""

    def __init__(self, index: int, count: int, numerator: int, denominator: int) -> None:
        self.index = index
        super().__init__(
            f"inexact relative improvement: paper {index} with {count} citations "
            f"times {numerator}/{denominator} is not an integer"
        )


class PeriodMismatchError(ValueError):
    pass


class RoundingMode(enum.Enum):
    FLOOR = "floor"
    STRICT = "strict"


@dataclass(frozen=True)
class Relative:
    numerator: int
    denominator: int = 1
    rounding: RoundingMode = RoundingMode.STRICT

    def __post_init__(self) -> None:
        if self.numerator < 1 or self.denominator < 1:
            raise ValueError("relative factor terms must be positive integers")
        if self.numerator < self.denominator:
            raise ValueError(f"relative factor {self.numerator}/{self.denominator} is below 1")

    @property
    def factor(self) -> Fraction:
        return Fraction(self.numerator, self.denominator)

    def with_rounding(self, rounding: RoundingMode) -> Relative:
        return Relative(self.numerator, self.denominator, rounding)

    def __str__(self) -> str:
        return f"relative {self.numerator}/{self.denominator}"


@dataclass(frozen=True)
class Absolute:
    delta: int

    def __post_init__(self) -> None:
        if self.delta < 0:
            raise ValueError("absolute improvement must be non-negative")

    def __str__(self) -> str:
        return f"absolute +{self.delta}"


Improvement = Union[Relative, Absolute]


def parse_fraction(text: str) -> tuple[int, int]:
    """Parse ``"p/q"`` or ``"p"`` into an integer pair; decimals are refused."""
    num, sep, den = text.strip().partition("/")
    try:
        p = int(num)
        q = int(den) if sep else 1
    except ValueError:
        raise ValueError(f"relative factor must be an integer fraction like 4/3, got {text!r}") from None
    return p, q


def improvement_sort_key(imp: Improvement | None) -> tuple:
    if imp is None:
        return (2,)
    if isinstance(imp, Relative):
        return (0, imp.factor, imp.rounding.value)
    return (1, imp.delta)


def relative_improvement(
    record: CitationRecord,
    factor: tuple[int, int] | Fraction,
    rounding: RoundingMode = RoundingMode.STRICT,
) -> CitationRecord:
    if isinstance(factor, Fraction):
        num, den = factor.numerator, factor.denominator
    else:
        num, den = factor
    if num < den or den < 1:
        raise ValueError(f"relative factor {num}/{den} is below 1")
    out = []
    for i, c in enumerate(record.counts):
        q, r = divmod(c * num, den)
        if r and rounding is RoundingMode.STRICT:
            raise InexactImprovementError(i, c, num, den)
        out.append(q)
    return CitationRecord(out)


def is_exact(record: CitationRecord, imp: Improvement) -> bool:
    """Whether ``imp`` maps every count of ``record`` to an integer without rounding."""
    if isinstance(imp, Absolute):
        return True
    return all(c * imp.numerator % imp.denominator == 0 for c in record.counts)


def absolute_improvement(record: CitationRecord, delta: int) -> CitationRecord:
    if delta < 0:
        raise ValueError("absolute improvement must be non-negative")
    return CitationRecord(c + delta for c in record.counts)


def apply_improvement(record: CitationRecord, imp: Improvement) -> CitationRecord:
    if isinstance(imp, Relative):
        return relative_improvement(record, (imp.numerator, imp.denominator), imp.rounding)
    return absolute_improvement(record, imp.delta)


@dataclass(frozen=True)
class TimePartitionedRecord:
    """Citation counts of one fixed set of papers, split over two or more periods."""

    periods: tuple[CitationRecord, ...]

    def __init__(self, periods: Iterable[CitationRecord | Sequence[int]]) -> None:
        periods = tuple(p if isinstance(p, CitationRecord) else CitationRecord(p) for p in periods)
        if len(periods) < 2:
            raise ValueError("a time-partitioned record needs at least two periods")
        if len({len(p) for p in periods}) != 1:
            raise PeriodMismatchError("periods cover different papers")
        object.__setattr__(self, "periods", periods)

    @property
    def n_papers(self) -> int:
        return len(self.periods[0])

    @property
    def n_periods(self) -> int:
        return len(self.periods)

    def papers(self) -> list[tuple[int, ...]]:
        """One tuple of per-period counts per paper."""
        return list(zip(*(p.counts for p in self.periods)))

    @classmethod
    def from_papers(cls, papers: Sequence[Sequence[int]], n_periods: int) -> TimePartitionedRecord:
        return cls([[paper[k] for paper in papers] for k in range(n_periods)])

    def canonical(self) -> TimePartitionedRecord:
        return TimePartitionedRecord.from_papers(sorted(self.papers(), reverse=True), self.n_periods)

    def sort_key(self) -> tuple:
        return (self.n_papers, tuple(self.papers()))


def aggregate_periods(tp: TimePartitionedRecord | Sequence[CitationRecord | Sequence[int]]) -> CitationRecord:
    """Position-wise sum of all periods."""
    if not isinstance(tp, TimePartitionedRecord):
        tp = TimePartitionedRecord(tp)
    return CitationRecord(sum(col) for col in zip(*(p.counts for p in tp.periods)))


def pad_record(record: CitationRecord, extra: Iterable[int]) -> CitationRecord:
    return CitationRecord(record.counts + tuple(extra))
