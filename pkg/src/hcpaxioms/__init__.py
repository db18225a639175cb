"""Citation-record indicators and the ranking-consistency axioms they can violate."""

from .axioms import (
    ConsistencyProperty,
    RankOutcome,
    Severity,
    ViolationReport,
    check_aggregation_consistency,
    check_improvement_consistency,
    compare,
)
from .core import (
    CitationRecord,
    HcpCount,
    HIndex,
    IndicatorSpec,
    PaperCount,
    Threshold,
    TotalCitations,
    calibrate_threshold,
    evaluate,
    h_index,
    hcp_count,
    paper_count,
    total_citations,
)
from .repro import builtin_fixtures, run_fixture
from .search import (
    Counterexample,
    SearchBounds,
    enumerate_records,
    find_counterexamples,
    minimal_counterexamples,
)
from .transforms import (
    Absolute,
    InexactImprovementError,
    Relative,
    RoundingMode,
    TimePartitionedRecord,
    absolute_improvement,
    aggregate_periods,
    pad_record,
    relative_improvement,
)

__version__ = "0.1.0"
