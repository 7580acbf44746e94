import pytest

from kplexpart.config import SolverConfig


def test_defaults():
    cfg = SolverConfig()
    assert cfg.k == 1
    assert cfg.time_limit is None
    assert cfg.worker_count == 1
    assert cfg.warm_start and not cfg.deterministic
    assert not cfg.has_side_constraints


def test_side_constraints_flag():
    assert SolverConfig(ub=3).has_side_constraints
    assert SolverConfig(P=2).has_side_constraints
    assert SolverConfig(lb=0).has_side_constraints


@pytest.mark.parametrize(
    "values",
    [
        {"k": 0},
        {"k": 1.5},
        {"k": True},
        {"time_limit": 0},
        {"lb": -1},
        {"lb": 4, "ub": 3},
        {"P": 0},
        {"worker_count": 0},
        {"progress_interval": 0},
    ],
)
def test_invalid_values(values):
    with pytest.raises(ValueError):
        SolverConfig(**values)


def test_replace_validates():
    cfg = SolverConfig(k=2)
    assert cfg.replace(ub=4).ub == 4
    assert cfg.replace(ub=4).k == 2
    with pytest.raises(ValueError):
        cfg.replace(k=-1)


def test_dict_round_trip():
    cfg = SolverConfig(k=3, ub=5, P=2, deterministic=True)
    assert SolverConfig.from_dict(cfg.to_dict()) == cfg


def test_from_dict_unknown_keys():
    with pytest.raises(ValueError, match="gap_tolerance"):
        SolverConfig.from_dict({"k": 2, "gap_tolerance": 0.1})


def test_from_yaml(tmp_path):
    path = tmp_path / "cfg.yaml"
    path.write_text("k: 2\ntime_limit: 600\nub: 5\nworker_count: 4\n")
    cfg = SolverConfig.from_yaml(path)
    assert (cfg.k, cfg.time_limit, cfg.ub, cfg.worker_count) == (2, 600, 5, 4)

    empty = tmp_path / "empty.yaml"
    empty.write_text("")
    assert SolverConfig.from_yaml(empty) == SolverConfig()


def test_from_yaml_errors(tmp_path):
    with pytest.raises(FileNotFoundError):
        SolverConfig.from_yaml(tmp_path / "missing.yaml")
    path = tmp_path / "list.yaml"
    path.write_text("- 1\n- 2\n")
    with pytest.raises(ValueError):
        SolverConfig.from_yaml(path)
