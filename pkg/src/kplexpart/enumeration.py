"""Exhaustive enumeration of set partitions and of model assignments."""

import logging
from typing import Iterator, List, Tuple

import numpy as np
from tqdm import tqdm

from kplexpart.models import IlpModel, constraint_matrix

logger = logging.getLogger(__name__)

MAX_ENUMERATION_VARIABLES = 25
BLOCK_BITS = 16


def bell_number(n: int) -> int:
    """Number of set partitions of an n-element set (Bell triangle)."""
    if n < 0:
        raise ValueError(f"n must be nonnegative, got {n}")
    row = [1]
    for _ in range(n):
        nxt = [row[-1]]
        for value in row:
            nxt.append(nxt[-1] + value)
        row = nxt
    return row[0]


def restricted_growth_strings(n: int) -> Iterator[Tuple[int, ...]]:
    """Yield the restricted-growth strings of length n in lexicographic order.

    Labels start at 1; each label is at most one more than the largest label
    before it. There are `bell_number(n)` strings, one per set partition.
    """
    if n < 1:
        return

    def _extend(prefix: List[int], largest: int):
        if len(prefix) == n:
            yield tuple(prefix)
            return
        for label in range(1, largest + 2):
            prefix.append(label)
            yield from _extend(prefix, max(largest, label))
            prefix.pop()

    yield from _extend([1], 1)


def restricted_growth_array(n: int) -> np.ndarray:
    """All restricted-growth strings of length n as a (Bell(n), n) int8 array, rows in lexicographic order."""
    if n < 1:
        raise ValueError(f"n must be positive, got {n}")
    strings = np.ones((1, 1), dtype=np.int8)
    largest = np.ones(1, dtype=np.int8)
    for _ in range(1, n):
        counts = largest.astype(np.int64) + 1
        starts = np.cumsum(counts) - counts
        total = int(counts.sum())
        labels = (np.arange(total) - np.repeat(starts, counts) + 1).astype(np.int8)
        strings = np.hstack([np.repeat(strings, counts, axis=0), labels[:, None]])
        largest = np.maximum(np.repeat(largest, counts), labels)
    return strings


def _feasible_rows(lhs: np.ndarray, rhs: np.ndarray, sense: np.ndarray, tol: float) -> np.ndarray:
    ok = np.ones(lhs.shape[0], dtype=bool)
    le, ge, eq = sense == -1, sense == 1, sense == 0
    if le.any():
        ok &= (lhs[:, le] <= rhs[le] + tol).all(axis=1)
    if ge.any():
        ok &= (lhs[:, ge] >= rhs[ge] - tol).all(axis=1)
    if eq.any():
        ok &= (np.abs(lhs[:, eq] - rhs[eq]) <= tol).all(axis=1)
    return ok


def enumerate_model_solutions(
    m: IlpModel,
    cap: int = None,
    progress: bool = False,
    tol: float = 1e-9,
) -> List[Tuple[int, ...]]:
    """All binary assignments satisfying every row of `m`.

    Assignments are tuples of 0/1 in variable id order, returned in
    lexicographic order (variable 0 most significant).

    Args:
        m (IlpModel): The model, at most 25 variables.
        cap (int, optional): Stop after this many feasible assignments. Defaults to None.
        progress (bool, optional): Show a progress bar over the assignment blocks. Defaults to False.
        tol (float, optional): Row tolerance. Defaults to 1e-9.

    Raises:
        ValueError: If the model has more than 25 variables.
    """
    nvars = len(m.variables)
    if nvars > MAX_ENUMERATION_VARIABLES:
        raise ValueError(
            f"Exhaustive enumeration is limited to {MAX_ENUMERATION_VARIABLES} variables, the model has {nvars}"
        )
    A, rhs, sense = constraint_matrix(m)
    shifts = np.arange(nvars - 1, -1, -1, dtype=np.int64)
    total = 1 << nvars
    block = 1 << BLOCK_BITS

    solutions: List[Tuple[int, ...]] = []
    starts = range(0, total, block)
    for start in tqdm(starts, desc="Enumerating", disable=not progress):
        codes = np.arange(start, min(start + block, total), dtype=np.int64)
        X = ((codes[:, None] >> shifts) & 1).astype(np.float64)
        ok = _feasible_rows(X @ A.T, rhs, sense, tol)
        for row in X[ok].astype(np.int64):
            solutions.append(tuple(int(v) for v in row))
            if cap is not None and len(solutions) >= cap:
                return solutions
    logger.debug(f"{len(solutions)} of {total} assignments satisfy the {len(m.constraints)} rows")
    return solutions
