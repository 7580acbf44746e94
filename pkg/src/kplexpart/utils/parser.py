import argparse
from pathlib import Path
from typing import List, Optional

from easydict import EasyDict as edict


def _add_side_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument(
        "--k",
        type=int,
        default=None,
        help="k-plex parameter, 1 for cliques (default: 1 or the value in --config)",
    )
    parser.add_argument(
        "--weights",
        choices=["file", "unit", "pullan"],
        default="file",
        help="Edge weights: as read from the file, all 1, or ((i + j) mod 200) + 1 (default: file)",
    )
    parser.add_argument("--lb", type=float, default=None, help="Minimum node weight sum per component")
    parser.add_argument("--ub", type=float, default=None, help="Maximum node weight sum per component")
    parser.add_argument(
        "-P",
        "--max-components",
        dest="max_components",
        type=int,
        default=None,
        help="Maximum number of components",
    )


def _add_run_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--time-limit", type=float, default=None, help="Time limit in seconds")
    parser.add_argument("--workers", type=int, default=None, help="Number of search processes (default: 1)")
    parser.add_argument(
        "--deterministic",
        action="store_true",
        default=None,
        help="Return the lexicographically smallest optimal partition (single worker)",
    )
    parser.add_argument(
        "--no-warm-start",
        dest="warm_start",
        action="store_false",
        default=None,
        help="Do not seed the search with the greedy heuristic",
    )
    parser.add_argument(
        "-v",
        "--verbose",
        action="store_true",
        default=None,
        help="Log search progress lines",
    )


def _add_output_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--json", type=str, default=None, help="Write a JSON report to this file")
    parser.add_argument(
        "--partition-out",
        type=str,
        default=None,
        help="Write the partition ('<node> <label>' lines) to this file",
    )
    parser.add_argument(
        "--details",
        action="store_true",
        default=False,
        help="Print the heaviest components, component sizes and spurious components",
    )


def _add_family_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument(
        "--family",
        choices=["f1c", "f1s", "fks"],
        required=True,
        help="Model family: f1c (complete graphs), f1s (sparse, k = 1) or fks (k >= 2)",
    )
    parser.add_argument(
        "--no-reduce",
        dest="reduce",
        action="store_false",
        default=True,
        help="Keep the triangle rows that are redundant for k = 2",
    )


def parse_command_line(argv: Optional[List[str]] = None) -> edict:
    """
    parse_command_line Parse command line input

    Args:
        argv (List[str], optional): Arguments without the program name. Defaults to sys.argv[1:].

    Returns:
        edict: Options; `command` holds the subcommand name.
    """
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument(
        "--log-level",
        type=str,
        default="WARNING",
        help="Logging level (default: WARNING)",
    )
    common.add_argument(
        "--log-file",
        action="store_true",
        default=False,
        help="Also write a dated log file in ./logs (default: False)",
    )
    common.add_argument(
        "--config",
        type=str,
        default=None,
        help="YAML file with solver settings; explicit flags override it",
    )

    parser = argparse.ArgumentParser(
        prog="kplexpart",
        description="""Maximum edge-weight k-plex partitioning: exact solver and ILP model builder.
        Usage: kplexpart solve graph.clq --k 1 --weights pullan""",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("stats", parents=[common], help="Print n, |E| and density")
    p.add_argument("file", type=str, help="Graph file (DIMACS or weighted edge list)")

    p = sub.add_parser("solve", parents=[common], help="Solve with the exact branch-and-bound")
    p.add_argument("file", type=str, help="Graph file (DIMACS or weighted edge list)")
    _add_side_flags(p)
    _add_run_flags(p)
    _add_output_flags(p)

    p = sub.add_parser("oracle", parents=[common], help="Solve by enumerating every partition (n <= 12)")
    p.add_argument("file", type=str, help="Graph file (DIMACS or weighted edge list)")
    _add_side_flags(p)
    _add_output_flags(p)

    p = sub.add_parser("export-model", parents=[common], help="Write an ILP model in LP format")
    p.add_argument("file", type=str, help="Graph file (DIMACS or weighted edge list)")
    _add_side_flags(p)
    _add_family_flags(p)
    p.add_argument("-o", "--output", type=str, required=True, help="Destination .lp file")

    p = sub.add_parser("validate", parents=[common], help="Check a partition against the constraints")
    p.add_argument("file", type=str, help="Graph file (DIMACS or weighted edge list)")
    p.add_argument("--partition", type=str, required=True, help="Partition file ('<node> <label>' lines)")
    _add_side_flags(p)

    p = sub.add_parser("batch", parents=[common], help="Solve several instances for several k")
    p.add_argument("files", type=str, nargs="+", help="Graph files")
    p.add_argument("--k", type=int, nargs="+", default=[1], help="k values (default: 1)")
    p.add_argument("--weights", choices=["file", "unit", "pullan"], default="file")
    p.add_argument("--lb", type=float, default=None)
    p.add_argument("--ub", type=float, default=None)
    p.add_argument("-P", "--max-components", dest="max_components", type=int, default=None)
    _add_run_flags(p)
    p.add_argument("--csv", type=str, default=None, help="Write the result table as CSV")
    p.add_argument("--xlsx", type=str, default=None, help="Write the result table as an Excel sheet")
    p.add_argument(
        "--details",
        action="store_true",
        default=False,
        help="Print the heaviest components, component sizes and spurious components of every run",
    )

    p = sub.add_parser("milp", parents=[common], help="Build a model and solve it with HiGHS")
    p.add_argument("file", type=str, help="Graph file (DIMACS or weighted edge list)")
    _add_side_flags(p)
    _add_family_flags(p)
    p.add_argument("--time-limit", type=float, default=None, help="Time limit in seconds")
    _add_output_flags(p)

    args = parser.parse_args(argv)

    opt = edict(vars(args))
    for key in ("file", "json", "partition_out", "output", "partition", "csv", "xlsx", "config"):
        if opt.get(key) is not None:
            opt[key] = Path(opt[key])
    if "files" in opt:
        opt.files = [Path(f) for f in opt.files]
    return opt
