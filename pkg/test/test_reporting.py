import json

import pandas as pd
import pytest

from kplexpart.config import SolverConfig
from kplexpart.graph import WeightedGraph
from kplexpart.partition import Partition
from kplexpart.reporting import (
    TABLE_COLUMNS,
    format_details,
    format_report_row,
    format_table,
    make_run_report,
    report_table,
    write_json_report,
    write_table,
)
from kplexpart.solver import SolveStatus, make_result, solve_exact


@pytest.fixture
def report(signed_graph):
    return make_run_report("signed", signed_graph, SolverConfig(), solve_exact(signed_graph, SolverConfig()))


def test_make_run_report(report):
    assert report["instance"] == "signed"
    assert (report["n"], report["edges"]) == (6, 8)
    assert report["status"] == "OPTIMAL"
    assert report["value"] == 44
    assert report["d_gap"] == 0
    assert (report["comp"], report["largest"], report["singlt_pct"]) == (2, 3, 0.0)
    assert report["components"] == [[1, 2, 3], [4, 5, 6]]


def test_report_without_partition(star):
    result = make_result(SolveStatus.INFEASIBLE, None, None, None, 10, 0.2)
    report = make_run_report("star", star, SolverConfig(P=1), result)
    assert report["comp"] is None and report["components"] is None
    df = report_table([report])
    assert list(df.columns) == TABLE_COLUMNS + ["P"]
    text = format_table(df)
    assert "INFEASIBLE" in text
    assert text.splitlines()[1].split()[6] == "-"


def test_report_table_columns(report):
    df = report_table([report, report])
    assert list(df.columns) == TABLE_COLUMNS
    assert len(df) == 2
    assert df.loc[0, "d"] == pytest.approx(0.53333, abs=1e-5)


def test_format_report_row(report):
    lines = format_report_row(report).splitlines()
    assert lines[0].split() == TABLE_COLUMNS
    row = lines[1].split()
    assert row[0] == "signed"
    assert row[3] == "0.53333"
    assert row[6] == "44"
    assert row[7] == "0.00"
    assert row[-3:] == ["2", "3", "0.00"]


def test_write_json_report(report, tmp_path):
    path = write_json_report(report, tmp_path / "reports" / "signed.json")
    data = json.loads(path.read_text())
    assert data["value"] == 44
    assert data["components"] == [[1, 2, 3], [4, 5, 6]]


def test_write_table(report, tmp_path):
    df = report_table([report])
    csv = write_table(df, tmp_path / "table.csv")
    assert pd.read_csv(csv)["opt/best"].tolist() == [44]
    xlsx = write_table(df, tmp_path / "table.xlsx")
    assert xlsx.exists() and xlsx.stat().st_size > 0


def test_format_details(signed_graph):
    text = format_details(signed_graph, Partition([1, 1, 1, 2, 2, 2]))
    assert text.splitlines() == [
        "component 1: weight=24 size=3 nodes=1 2 3",
        "component 2: weight=20 size=3 nodes=4 5 6",
        "cardinalities: 3:2",
        "spurious components: none",
    ]


def test_format_details_spurious_and_top():
    g = WeightedGraph(5, [(3, 4, 2)])
    lines = format_details(g, Partition([1, 1, 2, 2, 3]), top=1).splitlines()
    assert lines == [
        "component 2: weight=2 size=2 nodes=3 4",
        "cardinalities: 1:1 2:2",
        "spurious components: 1",
    ]
