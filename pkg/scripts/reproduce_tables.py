"""Print every example table with computed values next to the expected ones.

    python scripts/reproduce_tables.py
"""

from hcpaxioms.repro import builtin_fixtures, run_fixture


def main() -> int:
    failed = 0
    for fixture in builtin_fixtures():
        report = run_fixture(fixture)
        print(f"{fixture.name}  {fixture.caption}")
        labels = [s.label for s in fixture.scenarios]
        width = max(len(label) for label in labels) + 2
        print(" " * 6 + "".join(label.rjust(width) for label in labels))
        cells = {(c.scientist, c.scenario): c for c in report.cells}
        for name, _ in fixture.scientists:
            row = []
            for label in labels:
                c = cells[name, label]
                row.append((str(c.computed) + ("" if c.passed else f"!={c.expected}")).rjust(width))
            print(f"  {name:<4}" + "".join(row))
        for rc in fixture.rank_columns:
            ranks = [next(c for c in report.rank_cells if c.scientist == n and c.column == rc.label)
                     for n, _ in fixture.scientists]
            print(f"  rank {rc.label}: " + " ".join(f"{c.scientist}={c.computed[0]}" for c in ranks))
        print("  ok" if report.passed else f"  FAILED {report.error or ''}")
        print()
        failed += not report.passed
    return 1 if failed else 0


if __name__ == "__main__":
    raise SystemExit(main())
