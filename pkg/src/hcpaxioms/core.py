"""Citation records and the integer-valued indicators evaluated on them."""

from __future__ import annotations

from collections.abc import Iterable, Sequence
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Union


@dataclass(frozen=True)
class CitationRecord:
    """Per-paper citation counts of one scientist; the position identifies the paper."""

    counts: tuple[int, ...] = ()

    def __init__(self, counts: Iterable[int] = ()) -> None:
        counts = tuple(counts)
        for i, c in enumerate(counts):
            if isinstance(c, bool) or not isinstance(c, int):
                raise TypeError(f"citation count at index {i} is not an integer: {c!r}")
            if c < 0:
                raise ValueError(f"negative citation count at index {i}: {c}")
        object.__setattr__(self, "counts", counts)

    def __len__(self) -> int:
        return len(self.counts)

    def __iter__(self):
        return iter(self.counts)

    def canonical(self) -> CitationRecord:
        """Non-increasing representative of the record's permutation class."""
        return CitationRecord(sorted(self.counts, reverse=True))

    def is_canonical(self) -> bool:
        return all(x >= y for x, y in zip(self.counts, self.counts[1:]))

    def sort_key(self) -> tuple[int, tuple[int, ...]]:
        """Total order used everywhere records are listed: length, then lexicographic."""
        return (len(self.counts), self.counts)


@dataclass(frozen=True)
class Threshold:
    value: int

    def __post_init__(self) -> None:
        if isinstance(self.value, bool) or not isinstance(self.value, int) or self.value < 1:
            raise ValueError(f"threshold must be a positive integer, got {self.value!r}")


@dataclass(frozen=True)
class HcpCount:
    threshold: Threshold

    def __init__(self, threshold: Threshold | int) -> None:
        if not isinstance(threshold, Threshold):
            threshold = Threshold(threshold)
        object.__setattr__(self, "threshold", threshold)

    @property
    def name(self) -> str:
        return f"hcp[{self.threshold.value}]"


@dataclass(frozen=True)
class HIndex:
    name: str = field(default="h", init=False)


@dataclass(frozen=True)
class TotalCitations:
    name: str = field(default="total-citations", init=False)


@dataclass(frozen=True)
class PaperCount:
    name: str = field(default="paper-count", init=False)


IndicatorSpec = Union[HcpCount, HIndex, TotalCitations, PaperCount]


def _counts(record: CitationRecord | Sequence[int]) -> Sequence[int]:
    return record.counts if isinstance(record, CitationRecord) else record


def hcp_count(record: CitationRecord | Sequence[int], threshold: Threshold | int) -> int:
    """Number of papers with at least ``threshold`` citations (the bound is inclusive)."""
    t = threshold.value if isinstance(threshold, Threshold) else threshold
    return sum(1 for c in _counts(record) if c >= t)


def h_index(record: CitationRecord | Sequence[int]) -> int:
    """Largest h such that h papers have at least h citations each."""
    h = 0
    for rank, c in enumerate(sorted(_counts(record), reverse=True), start=1):
        if c < rank:
            break
        h = rank
    return h


def total_citations(record: CitationRecord | Sequence[int]) -> int:
    return sum(_counts(record))


def paper_count(record: CitationRecord | Sequence[int]) -> int:
    return len(_counts(record))


def evaluate(spec: IndicatorSpec, record: CitationRecord | Sequence[int]) -> int:
    if isinstance(spec, HcpCount):
        return hcp_count(record, spec.threshold)
    if isinstance(spec, HIndex):
        return h_index(record)
    if isinstance(spec, TotalCitations):
        return total_citations(record)
    if isinstance(spec, PaperCount):
        return paper_count(record)
    raise TypeError(f"unknown indicator: {spec!r}")


def parse_indicator(name: str, threshold: int | None = None) -> IndicatorSpec:
    """Build an indicator from its command-line name (``hcp``, ``h``, ...)."""
    if name == "hcp":
        if threshold is None:
            raise ValueError("the hcp indicator needs a threshold")
        return HcpCount(threshold)
    if name == "h":
        return HIndex()
    if name == "total-citations":
        return TotalCitations()
    if name == "paper-count":
        return PaperCount()
    raise ValueError(f"unknown indicator {name!r}")


def indicator_sort_key(spec: IndicatorSpec) -> tuple[int, int]:
    order = {HcpCount: 0, HIndex: 1, TotalCitations: 2, PaperCount: 3}
    return (order[type(spec)], spec.threshold.value if isinstance(spec, HcpCount) else 0)


def calibrate_threshold(reference: Sequence[int], top_fraction: Fraction | float | str) -> Threshold:
    """Smallest threshold that leaves at most ``top_fraction`` of the reference set highly cited.

    ``top_fraction`` is converted to an exact fraction; floats go through
    their decimal repr so ``0.1`` means one tenth.
    """
    if not reference:
        raise ValueError("empty reference set")
    frac = Fraction(str(top_fraction)) if isinstance(top_fraction, float) else Fraction(top_fraction)
    if not 0 < frac < 1:
        raise ValueError(f"top_fraction must lie strictly between 0 and 1, got {frac}")
    if any(c < 0 for c in reference):
        raise ValueError("reference set contains a negative count")
    allowed = (frac * len(reference)).__floor__()
    ranked = sorted(reference, reverse=True)
    # count(>= t) <= allowed  iff  the (allowed+1)-th largest entry is below t
    return Threshold(ranked[allowed] + 1)
