import json

import pandas as pd
import pytest

from kplexpart.cli import EXIT_INFEASIBLE, EXIT_OK, EXIT_TIMEOUT, EXIT_USAGE, cli_main, exit_code, solver_config
from kplexpart.graph import random_graph, write_weighted_edge_list
from kplexpart.partition import Partition, parse_partition
from kplexpart.solver import SolveStatus, make_result
from kplexpart.utils.parser import parse_command_line

PATH3 = "3\n1 2 5\n2 3 5\n"
CYCLE4 = "c four cycle\np edge 4 4\ne 1 2\ne 2 3\ne 3 4\ne 1 4\n"


@pytest.fixture
def path_file(tmp_path):
    path = tmp_path / "path3.txt"
    path.write_text(PATH3)
    return path


@pytest.fixture
def cycle_file(tmp_path):
    path = tmp_path / "cycle4.clq"
    path.write_text(CYCLE4)
    return path


def test_parse_command_line(path_file):
    opt = parse_command_line(["solve", str(path_file), "--k", "2", "-P", "3", "--no-warm-start"])
    assert opt.command == "solve"
    assert opt.file == path_file
    assert opt.k == 2 and opt.max_components == 3
    assert opt.warm_start is False
    assert opt.deterministic is None
    assert opt.log_level == "WARNING"


def test_solver_config_from_flags(path_file, tmp_path):
    opt = parse_command_line(["solve", str(path_file), "--ub", "2", "--workers", "2", "--deterministic"])
    cfg = solver_config(opt)
    assert cfg.ub == 2 and isinstance(cfg.ub, int)
    assert cfg.worker_count == 2
    assert cfg.deterministic and cfg.warm_start

    config = tmp_path / "solver.yaml"
    config.write_text("k: 3\ntime_limit: 60\n")
    opt = parse_command_line(["solve", str(path_file), "--config", str(config), "--k", "2"])
    cfg = solver_config(opt)
    assert cfg.k == 2 and cfg.time_limit == 60


def test_stats(tmp_path, capsys):
    edges = [(i, i + 1) for i in range(1, 75)] + [(i, i + 2) for i in range(1, 11)]
    path = tmp_path / "sparse.clq"
    path.write_text(f"p edge 75 {len(edges)}\n" + "".join(f"e {i} {j}\n" for i, j in edges))
    assert cli_main(["stats", str(path)]) == EXIT_OK
    out = capsys.readouterr().out
    assert "0.03027" in out
    assert "84" in out.split()


@pytest.mark.parametrize("k, value", [("1", "5"), ("2", "10")])
def test_solve(path_file, capsys, k, value):
    assert cli_main(["solve", str(path_file), "--k", k]) == EXIT_OK
    out = capsys.readouterr().out
    assert "OPTIMAL" in out
    assert value in out.splitlines()[1].split()


def test_solve_json_and_partition_round_trip(path_file, tmp_path, capsys):
    report = tmp_path / "out" / "report.json"
    partition = tmp_path / "out" / "partition.txt"
    argv = ["solve", str(path_file), "--k", "2", "--json", str(report), "--partition-out", str(partition)]
    assert cli_main(argv) == EXIT_OK
    data = json.loads(report.read_text())
    assert data["status"] == "OPTIMAL"
    assert data["value"] == 10
    assert data["components"] == [[1, 2, 3]]
    assert parse_partition(partition.read_text(), 3) == Partition.single_component(3)

    capsys.readouterr()
    assert cli_main(["validate", str(path_file), "--k", "2", "--partition", str(partition)]) == EXIT_OK
    assert "feasible: 1 components, weight 10" in capsys.readouterr().out

    assert cli_main(["validate", str(path_file), "--k", "1", "--partition", str(partition)]) == EXIT_INFEASIBLE
    out = capsys.readouterr().out
    assert out.startswith("kplex: ")
    assert "infeasible: 1 violations" in out


def test_oracle(path_file, capsys):
    assert cli_main(["oracle", str(path_file), "--k", "2"]) == EXIT_OK
    assert "10" in capsys.readouterr().out.splitlines()[1].split()
    assert cli_main(["oracle", str(path_file), "-P", "1"]) == EXIT_INFEASIBLE
    assert "INFEASIBLE" in capsys.readouterr().out


def test_export_model_golden(path_file, cycle_file, tmp_path, data_dir, capsys):
    out = tmp_path / "path.lp"
    assert cli_main(["export-model", str(path_file), "--family", "f1s", "-o", str(out)]) == EXIT_OK
    assert out.read_text() == (data_dir / "path3_f1s.lp").read_text()
    assert capsys.readouterr().out.startswith("F1s variables=2 constraints=1 emitted=1")

    out = tmp_path / "cycle.lp"
    assert cli_main(["export-model", str(cycle_file), "--family", "fks", "--k", "2", "-o", str(out)]) == EXIT_OK
    assert out.read_text() == (data_dir / "cycle4_fks_k2.lp").read_text()


def test_milp_command(path_file, capsys):
    assert cli_main(["milp", str(path_file), "--family", "fks", "--k", "2"]) == EXIT_OK
    out = capsys.readouterr().out
    assert "OPTIMAL" in out
    assert "10" in out.splitlines()[1].split()


def test_batch(path_file, cycle_file, tmp_path, capsys):
    csv = tmp_path / "results.csv"
    xlsx = tmp_path / "results.xlsx"
    argv = ["batch", str(path_file), str(cycle_file), "--k", "1", "2", "--csv", str(csv), "--xlsx", str(xlsx)]
    assert cli_main(argv) == EXIT_OK
    df = pd.read_csv(csv)
    assert len(df) == 4
    assert list(df["k"]) == [1, 2, 1, 2]
    assert list(df["opt/best"]) == [5, 10, 2, 4]
    assert xlsx.exists()
    assert "cycle4.clq" in capsys.readouterr().out


@pytest.mark.parametrize(
    "argv",
    [
        [],
        ["solve"],
        ["export-model", "graph.clq", "--family", "f2x", "-o", "out.lp"],
        ["solve", "graph.clq", "--weights", "random"],
    ],
)
def test_usage_errors(argv):
    assert cli_main(argv) == EXIT_USAGE


def test_input_errors(path_file, tmp_path, capsys):
    assert cli_main(["solve", str(tmp_path / "missing.clq")]) == EXIT_USAGE
    assert "kplexpart solve: error:" in capsys.readouterr().err

    assert cli_main(["solve", str(path_file), "--k", "0"]) == EXIT_USAGE
    assert cli_main(["export-model", str(path_file), "--family", "f1s", "--k", "2", "-o", str(tmp_path / "x.lp")]) == EXIT_USAGE

    broken = tmp_path / "broken.clq"
    broken.write_text("p edge 3 1\ne 1 4\n")
    assert cli_main(["stats", str(broken)]) == EXIT_USAGE


def test_exit_codes():
    pt = Partition([1, 2])
    assert exit_code(make_result(SolveStatus.OPTIMAL, 1, 1, pt, 1, 0.1)) == EXIT_OK
    assert exit_code(make_result(SolveStatus.FEASIBLE, 1, 2, pt, 1, 0.1)) == EXIT_OK
    assert exit_code(make_result(SolveStatus.INFEASIBLE, None, None, None, 1, 0.1)) == EXIT_INFEASIBLE
    assert exit_code(make_result(SolveStatus.TIMEOUT, None, 5, None, 1, 0.1)) == EXIT_TIMEOUT


def test_solve_details(path_file, capsys):
    assert cli_main(["solve", str(path_file), "--k", "2", "--details"]) == EXIT_OK
    lines = capsys.readouterr().out.splitlines()
    assert lines[2:] == [
        "component 1: weight=10 size=3 nodes=1 2 3",
        "cardinalities: 3:1",
        "spurious components: none",
    ]


def test_batch_details(path_file, cycle_file, capsys):
    assert cli_main(["batch", str(path_file), str(cycle_file), "--k", "2", "--details"]) == EXIT_OK
    out = capsys.readouterr().out
    assert "path3.txt k=2\ncomponent 1: weight=10 size=3 nodes=1 2 3" in out
    assert "cycle4.clq k=2\ncomponent 1: weight=4 size=4 nodes=1 2 3 4" in out
    assert out.count("spurious components: none") == 2


@pytest.mark.parametrize("seed", range(50))
def test_solve_and_oracle_print_the_same_value(tmp_path, seed):
    g = random_graph(5 + seed % 5, [0.2, 0.4, 0.6, 0.8][(seed // 5) % 4], seed=500 + seed, weight_range=(-100, 100))
    path = tmp_path / "graph.txt"
    path.write_text(write_weighted_edge_list(g))
    for k in ("1", "2", "3"):
        values = []
        for command in ("solve", "oracle"):
            report = tmp_path / f"{command}.json"
            assert cli_main([command, str(path), "--k", k, "--json", str(report)]) == EXIT_OK
            values.append(json.loads(report.read_text())["value"])
        assert values[0] == values[1]
