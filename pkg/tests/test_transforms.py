import pytest
from hypothesis import assume, given
from hypothesis import strategies as st

from hcpaxioms.core import CitationRecord, hcp_count
from hcpaxioms.transforms import (
    Absolute,
    InexactImprovementError,
    PeriodMismatchError,
    Relative,
    RoundingMode,
    TimePartitionedRecord,
    absolute_improvement,
    aggregate_periods,
    apply_improvement,
    pad_record,
    parse_fraction,
    relative_improvement,
)

GROUPS = CitationRecord([15, 12, 9, 6, 3])
counts = st.lists(st.integers(min_value=0, max_value=40), max_size=12)


@pytest.mark.parametrize(
    "record, factor, expected",
    [
        ([15, 12, 9, 6, 3], (4, 3), [20, 16, 12, 8, 4]),
        ([15, 12, 9, 6, 3], (5, 3), [25, 20, 15, 10, 5]),
        ([10, 0], (2, 1), [20, 0]),
    ],
)
def test_relative_examples(record, factor, expected):
    assert relative_improvement(CitationRecord(record), factor, RoundingMode.STRICT).counts == tuple(expected)


def test_relative_strict_names_index():
    with pytest.raises(InexactImprovementError, match="paper 1") as exc:
        relative_improvement(CitationRecord([3, 4]), (4, 3), RoundingMode.STRICT)
    assert exc.value.index == 1
    assert relative_improvement(CitationRecord([3, 4]), (4, 3), RoundingMode.FLOOR).counts == (4, 5)


def test_relative_rejects_shrinking():
    with pytest.raises(ValueError):
        relative_improvement(CitationRecord([3]), (1, 2))
    with pytest.raises(ValueError):
        Relative(2, 3)


@given(counts, st.sampled_from(list(RoundingMode)))
def test_identity_factor(c, mode):
    r = CitationRecord(c)
    assert relative_improvement(r, (1, 1), mode) == r
    assert relative_improvement(r, (3, 3), mode) == r
    assert absolute_improvement(r, 0) == r


def test_absolute_examples():
    assert absolute_improvement(CitationRecord([10, 0]), 5).counts == (15, 5)
    assert absolute_improvement(GROUPS, 3).counts == (18, 15, 12, 9, 6)


def test_aggregate_examples():
    assert aggregate_periods([[10, 5, 5, 0], [5, 10, 5, 0]]).counts == (15, 15, 10, 0)
    assert aggregate_periods([[5, 5, 5, 5], [5, 5, 5, 5]]).counts == (10, 10, 10, 10)
    assert aggregate_periods([[3, 3, 3, 0], [3, 3, 3, 0]]).counts == (6, 6, 6, 0)
    assert aggregate_periods([[0], [0]]).counts == (0,)


def test_aggregate_mismatch():
    with pytest.raises(PeriodMismatchError, match="periods cover different papers"):
        aggregate_periods([[1, 2], [1]])
    with pytest.raises(ValueError):
        TimePartitionedRecord([[1, 2]])


def test_pad_record():
    assert pad_record(CitationRecord([10, 0]), [12, 12]).counts == (10, 0, 12, 12)
    assert pad_record(CitationRecord([5, 5]), []).counts == (5, 5)
    assert hcp_count(pad_record(CitationRecord([10, 0]), [3, 3, 3]), 10) == 1


def test_parse_fraction():
    assert parse_fraction("4/3") == (4, 3)
    assert parse_fraction("2") == (2, 1)
    with pytest.raises(ValueError):
        parse_fraction("1.33")


@given(counts, st.integers(1, 6), st.integers(1, 6), st.integers(1, 6), st.integers(1, 6))
def test_relative_composition(c, p1, q1, p2, q2):
    assume(p1 >= q1 and p2 >= q2)
    r = CitationRecord(c)
    try:
        twice = relative_improvement(relative_improvement(r, (p1, q1)), (p2, q2))
    except InexactImprovementError:
        return
    assert twice == relative_improvement(r, (p1 * p2, q1 * q2))


@given(counts, st.integers(0, 20), st.integers(0, 20))
def test_absolute_composition(c, d1, d2):
    r = CitationRecord(c)
    assert absolute_improvement(absolute_improvement(r, d1), d2) == absolute_improvement(r, d1 + d2)


@given(counts, st.sampled_from([Relative(2), Relative(3, 2, RoundingMode.FLOOR), Absolute(4)]))
def test_elementwise_monotone(c, imp):
    r = CitationRecord(c)
    out = apply_improvement(r, imp)
    assert len(out) == len(r)
    assert all(y >= x for x, y in zip(r, out))


@given(st.integers(0, 8), st.integers(2, 5), st.data())
def test_identical_periods_equal_scaling(n, k, data):
    period = CitationRecord(data.draw(st.lists(st.integers(0, 30), min_size=n, max_size=n)))
    assert aggregate_periods([period] * k) == relative_improvement(period, (k, 1))
