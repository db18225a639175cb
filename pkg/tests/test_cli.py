import io
import json

import pytest

from hcpaxioms.cli import main
from hcpaxioms.repro import builtin_fixtures, fixture_document, run_fixture


def run(*argv):
    out = io.StringIO()
    code = main(list(argv), out=out)
    return code, out.getvalue()


def records(text):
    return [json.loads(line) for line in text.splitlines()]


@pytest.fixture
def write_doc(tmp_path):
    def _write(doc, name="doc.json"):
        path = tmp_path / name
        path.write_text(doc if isinstance(doc, str) else json.dumps(doc))
        return str(path)

    return _write


@pytest.fixture
def table_docs(tmp_path):
    code, _ = run("export-fixtures", "--out", str(tmp_path / "fx"))
    assert code == 0
    return {f.name: str(tmp_path / "fx" / f"{f.name}.json") for f in builtin_fixtures()}


def test_compute_hcp(write_doc):
    path = write_doc({"threshold": 10, "scientists": [{"name": "V", "papers": [10, 0]}, {"name": "W", "papers": [5, 5]}]})
    code, out = run("compute", path, "--indicator", "hcp", "--format", "records")
    assert code == 0
    assert [(r["name"], r["value"]) for r in records(out)] == [("V", 1), ("W", 0)]


def test_compute_threshold_override(write_doc):
    path = write_doc({"threshold": 10, "scientists": [{"name": "W", "papers": [5, 5]}]})
    _, out = run("compute", path, "--threshold", "5", "--format", "records")
    assert records(out)[0]["value"] == 2


def test_compute_h(write_doc):
    path = write_doc({"scientists": [{"name": "P", "papers": [3, 3, 3, 0]}]})
    code, out = run("compute", path, "--indicator", "h", "--format", "records")
    assert (code, records(out)) == (0, [{"name": "P", "indicator": "h", "value": 3}])


def test_compute_empty(write_doc):
    path = write_doc({"threshold": 10, "scientists": []})
    assert run("compute", path, "--format", "records") == (0, "")


def test_compute_missing_threshold(write_doc):
    path = write_doc({"scientists": [{"name": "V", "papers": [10, 0]}]})
    assert run("compute", path, "--indicator", "hcp")[0] == 2


@pytest.mark.parametrize(
    "doc, fragment",
    [
        ('{"scientists": [', ":1:"),
        ({"scientists": [{"name": "V", "papers": [1, -2]}]}, "scientists[0].papers[1]"),
        ({"scientists": [{"name": "V", "papers": [1]}, {"name": "V", "papers": [2]}]}, "duplicate"),
        ({"scientists": [{"name": "V", "papers": [[1, 2], [3]]}]}, "different papers"),
        ({"scientists": [{"name": "V", "papers": [1, "x"]}]}, "scientists[0].papers[1]"),
        ({"people": []}, "unknown field"),
    ],
)
def test_malformed_documents(write_doc, capsys, doc, fragment):
    path = write_doc(doc)
    code, _ = run("compute", path, "--indicator", "h")
    assert code == 2
    assert fragment in capsys.readouterr().err


def test_check_table1(table_docs):
    for flag, value in (("--relative", "2/1"), ("--absolute", "5")):
        code, out = run("check", table_docs["T1"], flag, value, "--format", "records")
        assert code == 1
        (row,) = records(out)
        assert row["pair"] == ["V", "W"]
        assert row["status"] == "strict-reversal"
        assert (row["before"], row["after"]) == ([1, 0], [1, 2])


def test_check_table6(table_docs):
    code, out = run("check", table_docs["T6"], "--property", "aggregation", "--format", "records")
    assert code == 1
    rows = records(out)
    assert {tuple(r["pair"]) for r in rows if r["status"] == "strict-reversal"} == {("T", "S"), ("U", "S"), ("U", "T")}
    by_pair = {tuple(r["pair"]): r for r in rows}
    assert by_pair[("U", "S")]["before"] == [[2, 0], [2, 0]]
    assert by_pair[("U", "S")]["after"] == [2, 4]


def test_check_identity(table_docs):
    for name in ("T1", "T3", "T4"):
        code, out = run("check", table_docs[name], "--indicator", "h", "--absolute", "0", "--format", "records")
        assert code == 0
        assert all(r["status"] == "consistent" for r in records(out))


def test_check_strict_inexact_is_input_error(table_docs):
    assert run("check", table_docs["T4"], "--indicator", "h", "--relative", "4/3")[0] == 2
    code, _ = run("check", table_docs["T4"], "--indicator", "h", "--relative", "4/3", "--rounding", "floor")
    assert code in (0, 1)


def test_check_shape_mismatch(table_docs):
    assert run("check", table_docs["T6"], "--relative", "2")[0] == 2
    assert run("check", table_docs["T1"], "--property", "aggregation")[0] == 2
    assert run("check", table_docs["T1"], "--property", "relative")[0] == 2
    assert run("check", table_docs["T1"], "--relative", "1.5")[0] == 2


def test_check_premise_unmet(write_doc):
    path = write_doc({"threshold": 10, "scientists": [
        {"name": "A", "papers": [[10, 0], [0, 0]]},
        {"name": "B", "papers": [[5, 5], [10, 0]]},
    ]})
    code, out = run("check", path, "--format", "records")
    assert code == 0
    assert records(out)[0]["status"] == "premise-unmet"


def test_check_weakening_flag(write_doc):
    path = write_doc({"threshold": 2, "scientists": [{"name": "A", "papers": [2, 1]}, {"name": "B", "papers": [1, 1]}]})
    code, out = run("check", path, "--relative", "2", "--format", "records")
    assert code == 0 and records(out)[0]["status"] == "weakening"
    assert run("check", path, "--relative", "2", "--include-weakenings")[0] == 1


def test_search_table1():
    code, out = run("search", "--indicator", "hcp", "--threshold", "10", "--max-papers", "2",
                    "--max-citations", "10", "--relative", "2/1", "--format", "records")
    assert code == 1
    assert {"a": [10, 0], "b": [5, 5]}.items() <= next(
        r for r in records(out) if sorted([r["a"], r["b"]]) == [[5, 5], [10, 0]]
    ).items()


def test_search_total_citations_empty():
    code, out = run("search", "--indicator", "total-citations", "--max-papers", "2",
                    "--max-citations", "10", "--relative", "2/1", "--format", "records")
    assert (code, out) == (0, "")


def test_search_theta2():
    code, out = run("search", "--indicator", "hcp", "--threshold", "2", "--max-papers", "2",
                    "--max-citations", "4", "--relative", "2/1", "--minimal", "--format", "records")
    assert code == 1
    assert [(r["a"], r["b"], r["before"], r["after"]) for r in records(out)] == [([2, 0], [1, 1], [1, 0], [1, 2])]


def test_search_usage_errors():
    assert run("search", "--threshold", "10")[0] == 2
    assert run("search", "--relative", "2")[0] == 2  # hcp without threshold
    assert run("search", "--property", "relative", "--absolute", "1", "--threshold", "3")[0] == 2


def test_search_aggregation():
    code, out = run("search", "--indicator", "h", "--property", "aggregation", "--max-papers", "2",
                    "--max-citations", "2", "--format", "records")
    assert code in (0, 1)
    assert all(r["property"] == "aggregation" for r in records(out))


def test_repro_all():
    code, out = run("repro", "all", "--format", "records")
    assert code == 0
    rows = records(out)
    assert len(rows) == 7 and all(r["passed"] for r in rows)


def test_repro_t3_cells():
    code, out = run("repro", "T3", "--format", "table")
    assert code == 0
    assert "15 cells + 9 rank cells" in out


def test_repro_unknown(capsys):
    assert run("repro", "T9")[0] == 2
    assert "unknown fixture" in capsys.readouterr().err


def test_usage_errors_exit_2():
    assert run()[0] == 2
    assert run("frobnicate")[0] == 2
    assert run("compute", "/nonexistent/doc.json", "--indicator", "h")[0] == 2


def test_help_exit_0():
    assert run("--help")[0] == 0


def test_round_trip(table_docs):
    """Exported documents evaluated through the CLI give back every fixture value."""
    for f in builtin_fixtures():
        if f.name == "T2":
            continue
        ind = {"HcpCount": "hcp", "HIndex": "h", "TotalCitations": "total-citations"}[type(f.indicator).__name__]
        code, out = run("compute", table_docs[f.name], "--indicator", ind, "--format", "records")
        assert code == 0
        rows = records(out)
        labels = [s.label for s in f.scenarios]
        for row, exp in zip(rows, f.expected):
            if "periods" in row:
                assert row["periods"] == list(exp[:2]) and row["value"] == exp[labels.index("both years")]
            else:
                assert row["value"] == exp[labels.index("O")]


def test_export_stdout():
    code, out = run("export-fixtures", "T1")
    assert code == 0
    assert records(out) == [fixture_document(builtin_fixtures()[0])]


def test_table_format_smoke(table_docs):
    code, out = run("check", table_docs["T1"], "--relative", "2/1", "--format", "table")
    assert code == 1 and "V vs W" in out and "strict-reversal" in out
