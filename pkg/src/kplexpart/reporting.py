import json
import logging
from pathlib import Path
from typing import List, Optional, Sequence, TypedDict, Union

import pandas as pd

from kplexpart.config import SolverConfig
from kplexpart.graph import Number, WeightedGraph, density
from kplexpart.partition import (
    Partition,
    cardinality_histogram,
    heaviest_components,
    partition_stats,
    spurious_components,
)
from kplexpart.solver import SolveResult

logger = logging.getLogger(__name__)

TABLE_COLUMNS = ["Instance", "n", "|E|", "d", "k", "status", "opt/best", "d_gap", "time", "comp", "largest", "singlt"]


class RunReport(TypedDict):
    """One solved instance, with the columns of the result tables.

    Fields:
    instance (str): Instance name.
    n (int), edges (int), density (float): Graph size and density.
    k (int), lb, ub, P: Problem parameters.
    status (str): Solve status.
    value (Number): opt/best value, None without incumbent.
    ub_bound (Number): Upper bound on the optimum.
    d_gap (float): Gap in percent.
    elapsed_s (float): Wall time.
    comp, largest (int), singlt_pct (float): Partition statistics, None without incumbent.
    components (List[List[int]]): Node lists of the components.
    """

    instance: str
    n: int
    edges: int
    density: Optional[float]
    k: int
    lb: Optional[Number]
    ub: Optional[Number]
    P: Optional[int]
    status: str
    value: Optional[Number]
    ub_bound: Optional[Number]
    d_gap: Optional[float]
    elapsed_s: float
    comp: Optional[int]
    largest: Optional[int]
    singlt_pct: Optional[float]
    components: Optional[List[List[int]]]


def make_run_report(name: str, g: WeightedGraph, cfg: SolverConfig, result: SolveResult) -> RunReport:
    stats = partition_stats(g, result.partition) if result.partition is not None else None
    return RunReport(
        instance=name,
        n=g.n,
        edges=g.m,
        density=density(g) if g.n > 1 else None,
        k=cfg.k,
        lb=cfg.lb,
        ub=cfg.ub,
        P=cfg.P,
        status=result.status.value,
        value=result.incumbent_value,
        ub_bound=result.best_bound,
        d_gap=result.d_gap,
        elapsed_s=result.elapsed,
        comp=stats["comp"] if stats else None,
        largest=stats["largest"] if stats else None,
        singlt_pct=stats["singlt"] if stats else None,
        components=result.partition.blocks() if result.partition is not None else None,
    )


def report_table(reports: Sequence[RunReport]) -> pd.DataFrame:
    """Result table with one row per report.

    The lb, ub and P columns are added only when some report sets them.
    """
    rows = []
    for r in reports:
        rows.append(
            {
                "Instance": r["instance"],
                "n": r["n"],
                "|E|": r["edges"],
                "d": None if r["density"] is None else round(r["density"], 5),
                "k": r["k"],
                "status": r["status"],
                "opt/best": r["value"],
                "d_gap": None if r["d_gap"] is None else round(r["d_gap"], 2),
                "time": round(r["elapsed_s"], 2),
                "comp": r["comp"],
                "largest": r["largest"],
                "singlt": None if r["singlt_pct"] is None else round(r["singlt_pct"], 2),
                "lb": r["lb"],
                "ub": r["ub"],
                "P": r["P"],
            }
        )
    df = pd.DataFrame(rows, columns=TABLE_COLUMNS + ["lb", "ub", "P"])
    for col in ("lb", "ub", "P"):
        if df[col].isna().all():
            df = df.drop(columns=col)
    return df


def _fixed(digits: int):
    return lambda x: "-" if pd.isna(x) else f"{x:.{digits}f}"


def _plain(x) -> str:
    if pd.isna(x):
        return "-"
    if isinstance(x, float) and x.is_integer():
        return str(int(x))
    return str(x)


def format_table(df: pd.DataFrame) -> str:
    """Text rendering of a result table: d with 5 decimals, d_gap, time and singlt with 2."""
    formatters = {col: _plain for col in df.columns}
    formatters.update({"d": _fixed(5), "d_gap": _fixed(2), "time": _fixed(2), "singlt": _fixed(2)})
    return df.to_string(index=False, formatters=formatters)


def format_report_row(report: RunReport) -> str:
    """Single table row as text, header included."""
    return format_table(report_table([report]))


def format_details(g: WeightedGraph, pt: Partition, top: int = 3) -> str:
    """Text summary of a partition beyond the table columns, one item per line."""
    lines = [
        f"component {c['label']}: weight={c['weight']} size={c['cardinality']} nodes={' '.join(map(str, c['nodes']))}"
        for c in heaviest_components(g, pt, top)
    ]
    sizes = cardinality_histogram(pt)
    lines.append("cardinalities: " + " ".join(f"{size}:{count}" for size, count in sizes.items()))
    spurious = spurious_components(g, pt)
    lines.append("spurious components: " + (" ".join(map(str, spurious)) if spurious else "none"))
    return "\n".join(lines)


def write_json_report(report: RunReport, path: Union[str, Path]) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w") as f:
        json.dump(report, f, indent=2)
    logger.info(f"Report written to {path}")
    return path


def write_table(df: pd.DataFrame, path: Union[str, Path]) -> Path:
    """Write a result table as CSV, or as an Excel sheet when `path` ends with .xlsx."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    if path.suffix.lower() == ".xlsx":
        with pd.ExcelWriter(path, engine="xlsxwriter") as writer:
            df.to_excel(writer, sheet_name="results", index=False)
    else:
        df.to_csv(path, index=False)
    logger.info(f"Table with {len(df)} rows written to {path}")
    return path
