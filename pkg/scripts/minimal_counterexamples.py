"""Smallest counterexamples over a grid of thresholds and improvements.

For each indicator and each improvement (or for aggregation of two
periods) this lists the Pareto-minimal pairs of citation records whose
ranking flips. Bounds are deliberately small; raise them on the command
line for a longer run.

    python scripts/minimal_counterexamples.py --max-papers 3 --max-citations 12
"""

import argparse
import time

from hcpaxioms.axioms import ConsistencyProperty
from hcpaxioms.core import HcpCount, HIndex
from hcpaxioms.search import SearchBounds, find_counterexamples, minimal_counterexamples
from hcpaxioms.transforms import Absolute, Relative

IMPROVEMENTS = [Relative(2), Relative(3, 2), Relative(4, 3), Absolute(1), Absolute(3), Absolute(5)]


def describe(cx) -> str:
    r = cx.report
    a = getattr(r.record_a, "counts", None) or r.record_a.papers()
    b = getattr(r.record_b, "counts", None) or r.record_b.papers()
    return f"{list(a)} vs {list(b)}  {r.before} -> {r.after}  size {cx.size}"


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    parser.add_argument("--max-papers", type=int, default=3)
    parser.add_argument("--max-citations", type=int, default=10)
    parser.add_argument("--max-papers-h", type=int, default=4)
    parser.add_argument("--thresholds", type=int, nargs="+", default=[2, 5, 10])
    parser.add_argument("--workers", type=int, default=1)
    args = parser.parse_args()

    families = [(HcpCount(t), args.max_papers) for t in args.thresholds] + [(HIndex(), args.max_papers_h)]
    for spec, max_papers in families:
        for imp in IMPROVEMENTS:
            start = time.perf_counter()
            found = find_counterexamples([spec], SearchBounds(max_papers, args.max_citations, [imp]),
                                         workers=args.workers)
            best = minimal_counterexamples(found)
            took = time.perf_counter() - start
            print(f"{spec.name:<8} {str(imp):<14} {len(found):>6} found ({took:.1f}s)")
            for cx in best[:3]:
                print(f"    {describe(cx)}")

        agg = SearchBounds(2, 3, properties={ConsistencyProperty.AGGREGATION})
        best = minimal_counterexamples(find_counterexamples([spec], agg))
        print(f"{spec.name:<8} {'aggregation':<14} {len(best):>6} minimal")
        for cx in best[:3]:
            print(f"    {describe(cx)}")


if __name__ == "__main__":
    main()
