import logging

import numpy as np
from scipy.optimize import Bounds, LinearConstraint, milp
from scipy.sparse import csr_matrix

from kplexpart.models import IlpModel, assignment_to_partition, objective_vector
from kplexpart.partition import Partition
from kplexpart.solver import SolveResult, SolveStatus, make_result
from kplexpart.utils.timer import Timer

logger = logging.getLogger(__name__)


def _sparse_rows(m: IlpModel):
    rows, cols, data = [], [], []
    lower = np.full(len(m.constraints), -np.inf)
    upper = np.full(len(m.constraints), np.inf)
    for r, row in enumerate(m.constraints):
        for vid, coef in row.terms:
            rows.append(r)
            cols.append(vid)
            data.append(float(coef))
        if row.sense in ("<=", "="):
            upper[r] = row.rhs
        if row.sense in (">=", "="):
            lower[r] = row.rhs
    A = csr_matrix((data, (rows, cols)), shape=(len(m.constraints), len(m.variables)))
    return A, lower, upper


def _round_value(value: float, integral: bool):
    if integral and np.isfinite(value):
        return int(round(value))
    return float(value)


def _round_bound(value: float, integral: bool):
    """Integral objectives have integral optima, so an upper bound may be floored."""
    if integral and np.isfinite(value):
        return int(np.floor(value + 1e-6))
    return float(value)


def solve_model_milp(m: IlpModel, time_limit: float = None) -> SolveResult:
    """Solve an `IlpModel` with the HiGHS MILP solver shipped with SciPy.

    The partition of the result is induced by the selected x / v variables.
    Bounds are rounded to integers when every objective coefficient is integral.

    Args:
        m (IlpModel): The model.
        time_limit (float, optional): Seconds given to HiGHS. Defaults to None.

    Returns:
        SolveResult: Status, objective value (LB), dual bound (UB) and partition.
    """
    timer = Timer(time_limit)
    integral = m.objective_is_integral()
    nvars = len(m.variables)
    if nvars == 0:
        if any(row.rhs < 0 and row.sense == "<=" or row.rhs > 0 and row.sense == ">=" for row in m.constraints):
            return make_result(SolveStatus.INFEASIBLE, None, None, None, 0, timer.elapsed)
        return make_result(SolveStatus.OPTIMAL, 0, 0, Partition.singletons(m.n), 0, timer.elapsed)

    c = -objective_vector(m)
    constraints = None
    if m.constraints:
        A, lower, upper = _sparse_rows(m)
        constraints = LinearConstraint(A, lower, upper)
    options = {"disp": False}
    if time_limit is not None:
        options["time_limit"] = float(time_limit)

    logger.info(f"Solving {m.family.value} model with HiGHS: {nvars} variables, {len(m.constraints)} rows")
    res = milp(
        c,
        integrality=np.ones(nvars),
        bounds=Bounds(0, 1),
        constraints=constraints,
        options=options,
    )
    nodes = int(getattr(res, "mip_node_count", 0) or 0)
    logger.debug(f"HiGHS status {res.status}: {res.message}")

    if res.status == 2:
        return make_result(SolveStatus.INFEASIBLE, None, None, None, nodes, timer.elapsed)
    if res.x is None:
        dual = getattr(res, "mip_dual_bound", None)
        ub = None if dual is None else _round_bound(-dual, integral)
        return make_result(SolveStatus.TIMEOUT, None, ub, None, nodes, timer.elapsed)

    x = np.round(res.x).astype(np.int64)
    value = _round_value(-res.fun, integral)
    pt = assignment_to_partition(m, x)
    if res.status == 0:
        return make_result(SolveStatus.OPTIMAL, value, value, pt, nodes, timer.elapsed)

    dual = getattr(res, "mip_dual_bound", None)
    ub = value if dual is None else max(value, _round_bound(-dual, integral))
    logger.warning(f"HiGHS stopped before optimality: {res.message}")
    return make_result(SolveStatus.FEASIBLE, value, ub, pt, nodes, timer.elapsed)
