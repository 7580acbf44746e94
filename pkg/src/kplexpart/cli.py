import logging
import sys
from pathlib import Path
from typing import List, Optional

import pandas as pd
from easydict import EasyDict as edict
from tqdm import tqdm

from kplexpart.config import SolverConfig
from kplexpart.graph import WeightedGraph, density, read_graph
from kplexpart.lp_writer import write_lp
from kplexpart.milp import solve_model_milp
from kplexpart.models import build_model, model_dimensions
from kplexpart.partition import parse_partition, partition_weight, validate_partition, write_partition
from kplexpart.reporting import (
    format_details,
    format_report_row,
    format_table,
    make_run_report,
    report_table,
    write_json_report,
    write_table,
)
from kplexpart.solver import SolveResult, SolveStatus, brute_force_optimum, solve_exact
from kplexpart.utils.logger import setup_logger
from kplexpart.utils.parser import parse_command_line
from kplexpart.utils.timer import StageTimer

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_INFEASIBLE = 1
EXIT_USAGE = 2
EXIT_TIMEOUT = 3

# CLI option -> SolverConfig field
CONFIG_FLAGS = {
    "k": "k",
    "lb": "lb",
    "ub": "ub",
    "max_components": "P",
    "time_limit": "time_limit",
    "workers": "worker_count",
    "deterministic": "deterministic",
    "warm_start": "warm_start",
    "verbose": "verbose",
}


def _number(value):
    if isinstance(value, float) and value.is_integer():
        return int(value)
    return value


def solver_config(opt: edict, **overrides) -> SolverConfig:
    """SolverConfig from the --config file (if any) with the explicit flags applied on top."""
    cfg = SolverConfig.from_yaml(opt.config) if opt.get("config") else SolverConfig()
    changes = {}
    for flag, field in CONFIG_FLAGS.items():
        value = opt.get(flag)
        if value is not None and not isinstance(value, list):
            changes[field] = _number(value)
    changes.update(overrides)
    return cfg.replace(**changes)


def exit_code(result: SolveResult) -> int:
    if result.status is SolveStatus.INFEASIBLE:
        return EXIT_INFEASIBLE
    if result.status is SolveStatus.TIMEOUT:
        return EXIT_TIMEOUT
    return EXIT_OK


def _write_outputs(opt: edict, name: str, g: WeightedGraph, cfg: SolverConfig, result: SolveResult) -> None:
    report = make_run_report(name, g, cfg, result)
    print(format_report_row(report))
    if opt.get("details") and result.partition is not None:
        print(format_details(g, result.partition))
    if opt.get("json") is not None:
        write_json_report(report, opt.json)
    if opt.get("partition_out") is not None and result.partition is not None:
        opt.partition_out.parent.mkdir(parents=True, exist_ok=True)
        opt.partition_out.write_text(write_partition(result.partition))
        logger.info(f"Partition written to {opt.partition_out}")


def cmd_stats(opt: edict) -> int:
    g = read_graph(opt.file)
    df = pd.DataFrame(
        [{"Instance": opt.file.name, "n": g.n, "|E|": g.m, "d": density(g) if g.n > 1 else None}]
    )
    print(format_table(df))
    return EXIT_OK


def cmd_solve(opt: edict) -> int:
    timer = StageTimer(logger)
    g = read_graph(opt.file, opt.weights)
    cfg = solver_config(opt)
    timer.update("read")
    result = solve_exact(g, cfg)
    timer.update("solve")
    _write_outputs(opt, opt.file.name, g, cfg, result)
    timer.print("solve")
    return exit_code(result)


def cmd_oracle(opt: edict) -> int:
    g = read_graph(opt.file, opt.weights)
    cfg = solver_config(opt)
    result = brute_force_optimum(g, cfg, progress=opt.log_level.upper() in ("INFO", "DEBUG"))
    _write_outputs(opt, opt.file.name, g, cfg, result)
    return exit_code(result)


def cmd_export_model(opt: edict) -> int:
    g = read_graph(opt.file, opt.weights)
    cfg = solver_config(opt)
    m = build_model(g, opt.family, k=cfg.k, reduce=opt.reduce, lb=cfg.lb, ub=cfg.ub, P=cfg.P)
    write_lp(m, opt.output)
    nvars, nrows = model_dimensions(m)
    print(f"{m.family.value} variables={nvars} constraints={nrows} emitted={len(m.constraints)} -> {opt.output}")
    return EXIT_OK


def cmd_validate(opt: edict) -> int:
    g = read_graph(opt.file, opt.weights)
    cfg = solver_config(opt)
    pt = parse_partition(opt.partition.read_text(), g.n)
    violations = validate_partition(g, pt, cfg.k, cfg)
    for v in violations:
        print(f"{v['kind']}: {v['message']}")
    if violations:
        print(f"infeasible: {len(violations)} violations")
        return EXIT_INFEASIBLE
    print(f"feasible: {pt.num_components} components, weight {partition_weight(g, pt)}")
    return EXIT_OK


def cmd_batch(opt: edict) -> int:
    runs = [(path, k) for path in opt.files for k in opt.k]
    reports = []
    details = []
    graphs = {}
    for path, k in tqdm(runs, desc="Runs", disable=len(runs) < 2):
        if path not in graphs:
            graphs[path] = read_graph(path, opt.weights)
        g = graphs[path]
        cfg = solver_config(opt, k=k)
        result = solve_exact(g, cfg)
        reports.append(make_run_report(Path(path).name, g, cfg, result))
        if opt.details and result.partition is not None:
            details.append((f"{Path(path).name} k={k}", g, result.partition))
    df = report_table(reports)
    print(format_table(df))
    for title, g, pt in details:
        print(f"\n{title}")
        print(format_details(g, pt))
    if opt.get("csv") is not None:
        write_table(df, opt.csv)
    if opt.get("xlsx") is not None:
        write_table(df, opt.xlsx)
    return EXIT_OK


def cmd_milp(opt: edict) -> int:
    g = read_graph(opt.file, opt.weights)
    cfg = solver_config(opt)
    m = build_model(g, opt.family, k=cfg.k, reduce=opt.reduce, lb=cfg.lb, ub=cfg.ub, P=cfg.P)
    result = solve_model_milp(m, time_limit=cfg.time_limit)
    _write_outputs(opt, opt.file.name, g, cfg, result)
    return exit_code(result)


COMMANDS = {
    "stats": cmd_stats,
    "solve": cmd_solve,
    "oracle": cmd_oracle,
    "export-model": cmd_export_model,
    "validate": cmd_validate,
    "batch": cmd_batch,
    "milp": cmd_milp,
}


def cli_main(argv: Optional[List[str]] = None) -> int:
    """Run one kplexpart command and return the process exit status.

    0: success or feasible result, 1: infeasible, 2: usage or input error,
    3: time limit reached without a feasible partition.
    """
    try:
        opt = parse_command_line(argv)
    except SystemExit as e:
        return e.code if isinstance(e.code, int) else EXIT_USAGE

    try:
        setup_logger(opt.log_level, log_to_file=opt.log_file)
        return COMMANDS[opt.command](opt)
    except (ValueError, FileNotFoundError, OSError) as e:
        print(f"kplexpart {opt.command}: error: {e}", file=sys.stderr)
        return EXIT_USAGE


def main() -> None:
    sys.exit(cli_main())


if __name__ == "__main__":
    main()
