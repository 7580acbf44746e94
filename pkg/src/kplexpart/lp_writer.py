"""Export of `IlpModel` objects in CPLEX LP file format."""

import logging
from pathlib import Path
from typing import List, Sequence, Union

from kplexpart.graph import Number
from kplexpart.models import IlpModel, ModelFamily, Term

logger = logging.getLogger(__name__)


def _format_coef(value: Number) -> str:
    value = float(value)
    if value.is_integer():
        return str(int(value))
    return repr(value)


def _format_expr(terms: Sequence[Term], names: List[str]) -> str:
    parts = []
    for pos, (vid, coef) in enumerate(terms):
        sign = "-" if coef < 0 else "+"
        magnitude = abs(coef)
        body = names[vid] if magnitude == 1 else f"{_format_coef(magnitude)} {names[vid]}"
        if pos == 0:
            parts.append(f"-{body}" if sign == "-" else body)
        else:
            parts.append(f"{sign} {body}")
    return " ".join(parts)


def _header(m: IlpModel) -> str:
    meta = m.meta
    line = f"\\ family: {m.family.value}  n: {m.n}  k: {m.k}"
    for key in ("lb", "ub", "P"):
        if meta.get(key) is not None:
            line += f"  {key}: {_format_coef(meta[key])}"
    if m.family is ModelFamily.FKS:
        line += f"  reduced: {'yes' if meta.get('reduced') else 'no'}"
    return line


def export_lp(m: IlpModel) -> str:
    """Serialize `m` in LP file format.

    Sections: `Maximize` with the objective row `obj`, `Subject To` with the
    rows c1, c2, ... in construction order, `Bounds` and `Binaries`. A comment
    line with the constraint family tag, e.g. "\\ (10)", precedes every run of
    rows sharing a tag. Empty expressions are written as "0 <first variable>".
    The output only depends on the model, so equal models give identical text.
    """
    names = m.variable_names()
    empty = f"0 {names[0]}" if names else ""

    lines = ["\\ kplexpart LP export", _header(m), "Maximize"]
    objective = _format_expr(m.objective, names) or empty
    lines.append(f" obj: {objective}".rstrip())

    lines.append("Subject To")
    last_tag = None
    for idx, row in enumerate(m.constraints, start=1):
        if row.tag != last_tag:
            lines.append(f"\\ {row.tag}")
            last_tag = row.tag
        lhs = _format_expr(row.terms, names) or empty
        if not lhs:
            lines.append(f"\\ c{idx}: empty row {row.sense} {_format_coef(row.rhs)}")
            continue
        lines.append(f" c{idx}: {lhs} {row.sense} {_format_coef(row.rhs)}")

    lines.append("Bounds")
    lines += [f" 0 <= {name} <= 1" for name in names]
    lines.append("Binaries")
    lines += [f" {name}" for name in names]
    lines.append("End")
    return "\n".join(lines) + "\n"


def write_lp(m: IlpModel, path: Union[str, Path]) -> Path:
    """Write `export_lp(m)` to `path`, creating parent directories."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(export_lp(m))
    logger.info(f"Model {m.family.value} ({len(m.variables)} variables, {len(m.constraints)} rows) written to {path}")
    return path
