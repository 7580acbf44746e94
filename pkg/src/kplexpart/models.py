"""0/1 linear models of the maximum edge-weight k-plex partitioning problem.

Three families are built:

- F1c: triangle inequalities over a complete graph (clique partitioning).
- F1s: the sparse clique partitioning model; x variables exist only for edges,
  triangles with a single missing pair keep one row over their two edges.
- Fks: k-plex partitioning; x variables on edges, v variables on missing
  edges, triangle rows on every triple and a per-node cap of k - 1 selected
  missing edges.

Side constraints (node weight capacity per component, maximum number of
components) are added on top of any family. Every row carries the tag of the
constraint family it belongs to, e.g. "(10)".
"""

import logging
from enum import Enum
from itertools import combinations
from typing import Dict, List, NamedTuple, Optional, Sequence, Tuple, Union

import networkx as nx
import numpy as np

from kplexpart.graph import Number, Pair, WeightedGraph
from kplexpart.partition import Partition
from kplexpart.utils.timer import timeit

logger = logging.getLogger(__name__)

Term = Tuple[int, Number]


class VarKind(str, Enum):
    EDGE_X = "x"
    MISSING_V = "v"
    NODECOMP_Z = "z"


class ModelFamily(str, Enum):
    F1C = "F1c"
    F1S = "F1s"
    FKS = "Fks"

    @classmethod
    def parse(cls, name: str) -> "ModelFamily":
        for family in cls:
            if family.value.lower() == str(name).lower():
                return family
        raise ValueError(f"Unknown model family '{name}' (expected f1c, f1s or fks)")


class Variable(NamedTuple):
    """Binary variable. (i, j) is the node pair for x / v and (node, component) for z."""

    id: int
    kind: VarKind
    i: int
    j: int

    @property
    def name(self) -> str:
        return f"{self.kind.value}_{self.i}_{self.j}"


class Constraint(NamedTuple):
    terms: Tuple[Term, ...]
    sense: str
    rhs: Number
    tag: str


SENSES = ("<=", ">=", "=")


class IlpModel:
    """Solver-agnostic 0/1 linear maximization model.

    Models are immutable; the `add_*` functions of this module return new
    models.

    Args:
        variables (Sequence[Variable]): Variables, ids equal to their positions.
        objective (Sequence[Term]): (variable id, coefficient) terms of the maximized objective.
        constraints (Sequence[Constraint]): Rows in construction order.
        meta (dict): n, k, family, reduced, lb, ub, P.
        dropped_rows (int, optional): Vacuous rows left out of the model (counted by model_dimensions). Defaults to 0.
    """

    def __init__(
        self,
        variables: Sequence[Variable],
        objective: Sequence[Term],
        constraints: Sequence[Constraint],
        meta: dict,
        dropped_rows: int = 0,
    ) -> None:
        self._variables = tuple(variables)
        self._objective = tuple(objective)
        self._constraints = tuple(constraints)
        self._meta = dict(meta)
        self._dropped_rows = dropped_rows
        self._pair_index: Dict[Pair, int] = {}
        self._z_index: Dict[Tuple[int, int], int] = {}
        for var in self._variables:
            if var.kind is VarKind.NODECOMP_Z:
                self._z_index[(var.i, var.j)] = var.id
            else:
                self._pair_index[(var.i, var.j)] = var.id

    def __repr__(self) -> str:
        return (
            f"IlpModel(family={self.family.value}, n={self.n}, k={self.k}, "
            f"variables={len(self._variables)}, constraints={len(self._constraints)})"
        )

    @property
    def variables(self) -> Tuple[Variable, ...]:
        return self._variables

    @property
    def objective(self) -> Tuple[Term, ...]:
        return self._objective

    @property
    def constraints(self) -> Tuple[Constraint, ...]:
        return self._constraints

    @property
    def meta(self) -> dict:
        return dict(self._meta)

    @property
    def family(self) -> ModelFamily:
        return self._meta["family"]

    @property
    def n(self) -> int:
        return self._meta["n"]

    @property
    def k(self) -> int:
        return self._meta["k"]

    @property
    def dropped_rows(self) -> int:
        return self._dropped_rows

    @property
    def has_components(self) -> bool:
        return bool(self._z_index)

    def pair_var(self, i: int, j: int) -> Optional[int]:
        """Id of the x or v variable of pair (i, j), None if the pair has none."""
        return self._pair_index.get((i, j) if i < j else (j, i))

    def z_var(self, i: int, p: int) -> int:
        return self._z_index[(i, p)]

    def variable_names(self) -> List[str]:
        return [v.name for v in self._variables]

    def objective_is_integral(self) -> bool:
        return all(float(c).is_integer() for _, c in self._objective)

    def derive(self, variables=None, objective=None, constraints=None, dropped_rows=None, **meta):
        """Return a new model with the given parts replaced and `meta` updated."""
        new_meta = dict(self._meta)
        new_meta.update(meta)
        return IlpModel(
            self._variables if variables is None else variables,
            self._objective if objective is None else objective,
            self._constraints if constraints is None else constraints,
            new_meta,
            self._dropped_rows if dropped_rows is None else dropped_rows,
        )

    def validate(self) -> None:
        """Assert the structural invariants of the model."""
        pairs = {}
        for pos, var in enumerate(self._variables):
            assert var.id == pos, f"Variable {var.name} has id {var.id} at position {pos}"
            if var.kind is not VarKind.NODECOMP_Z:
                assert (var.i, var.j) not in pairs, f"Pair {(var.i, var.j)} has two variables"
                pairs[(var.i, var.j)] = var.kind
        for vid, coef in self._objective:
            assert self._variables[vid].kind is VarKind.EDGE_X, "Objective term on a non-edge variable"
            assert np.isfinite(coef)
        for row in self._constraints:
            ids = [vid for vid, _ in row.terms]
            assert len(ids) == len(set(ids)), f"Row {row} repeats a variable"
            assert row.sense in SENSES
            assert np.isfinite(row.rhs) and all(np.isfinite(c) for _, c in row.terms)


def _triangle_rows(a: int, b: int, c: int, tags: Tuple[str, str, str]) -> List[Constraint]:
    """The three orientations of the triangle inequality over pair variables a=(i,j), b=(j,k), c=(i,k)."""
    return [
        Constraint(((a, 1), (b, 1), (c, -1)), "<=", 1, tags[0]),
        Constraint(((a, 1), (b, -1), (c, 1)), "<=", 1, tags[1]),
        Constraint(((a, -1), (b, 1), (c, 1)), "<=", 1, tags[2]),
    ]


def _group_by_tag(rows: List[Constraint], tags: Sequence[str]) -> List[Constraint]:
    order = {tag: pos for pos, tag in enumerate(tags)}
    return sorted(rows, key=lambda row: order[row.tag])


def _edge_variables(g: WeightedGraph) -> Tuple[List[Variable], Dict[Pair, int], List[Term]]:
    variables, index, objective = [], {}, []
    for (i, j), w in g.edge_weights.items():
        var = Variable(len(variables), VarKind.EDGE_X, i, j)
        variables.append(var)
        index[(i, j)] = var.id
        objective.append((var.id, w))
    return variables, index, objective


def build_f1c(g: WeightedGraph) -> IlpModel:
    """Clique partitioning model on a complete graph.

    One x variable per pair and three triangle rows (1)-(3) per triple i < j < k.

    Raises:
        ValueError: If g is not complete.
    """
    if not g.is_complete():
        raise ValueError(
            f"F1c needs a complete graph (n={g.n} has {g.m} of {g.n * (g.n - 1) // 2} edges); use F1s"
        )
    variables, index, objective = _edge_variables(g)
    rows = []
    for i, j, k in combinations(g.nodes, 3):
        rows += _triangle_rows(index[(i, j)], index[(j, k)], index[(i, k)], ("(1)", "(2)", "(3)"))
    rows = _group_by_tag(rows, ("(1)", "(2)", "(3)"))
    meta = dict(n=g.n, k=1, family=ModelFamily.F1C, reduced=False, lb=None, ub=None, P=None)
    return IlpModel(variables, objective, rows, meta)


def _triples_with_two_edges(g: WeightedGraph) -> List[Tuple[int, int, int]]:
    triples = set()
    for center in g.nodes:
        for a, b in combinations(sorted(g.neighbors(center)), 2):
            triples.add(tuple(sorted((a, b, center))))
    return sorted(triples)


def build_f1s(g: WeightedGraph) -> IlpModel:
    """Sparse clique partitioning model.

    x variables exist only for edges. Triples whose three pairs are edges get
    the triangle rows (5)-(7). Triples with exactly one missing pair get the
    row (8): the two present edges sum to at most 1. Triples with two or three
    missing pairs give no row.
    """
    variables, index, objective = _edge_variables(g)
    rows = []
    for i, j, k in _triples_with_two_edges(g):
        ij, jk, ik = index.get((i, j)), index.get((j, k)), index.get((i, k))
        present = [v for v in (ij, jk, ik) if v is not None]
        if len(present) == 3:
            rows += _triangle_rows(ij, jk, ik, ("(5)", "(6)", "(7)"))
        else:
            rows.append(Constraint(((present[0], 1), (present[1], 1)), "<=", 1, "(8)"))
    rows = _group_by_tag(rows, ("(5)", "(6)", "(7)", "(8)"))
    meta = dict(n=g.n, k=1, family=ModelFamily.F1S, reduced=False, lb=None, ub=None, P=None)
    return IlpModel(variables, objective, rows, meta)


def build_fks(g: WeightedGraph, k: int, reduce: bool = True) -> IlpModel:
    """k-plex partitioning model with missing-edge variables.

    Every pair i < j gets an x variable (edge) or a v variable (missing edge).
    Every triple gets the triangle rows (10)-(12) over these pair variables and
    every node gets the row (13): its selected missing edges sum to at most
    k - 1. Rows (13) of nodes without missing edges are vacuous and dropped;
    `model_dimensions` still counts them.

    With `reduce` and k = 2, the triangle rows implied by (13) are omitted: all
    rows of triples whose three pairs are missing, and the rows v + v - x <= 1
    whose two positive variables are missing edges.

    Args:
        g (WeightedGraph): The graph.
        k (int): k-plex parameter, at least 2 (use build_f1s for k = 1).
        reduce (bool, optional): Omit the rows that are redundant for k = 2. No effect for k >= 3. Defaults to True.

    Raises:
        ValueError: If k < 2.
    """
    if k < 2:
        raise ValueError(f"Fks needs k >= 2 (got {k}); use F1s for clique partitioning")
    reduced = bool(reduce and k == 2)

    variables, objective = [], []
    index: Dict[Pair, int] = {}
    for i, j in combinations(g.nodes, 2):
        kind = VarKind.EDGE_X if g.has_edge(i, j) else VarKind.MISSING_V
        var = Variable(len(variables), kind, i, j)
        variables.append(var)
        index[(i, j)] = var.id
        if kind is VarKind.EDGE_X:
            objective.append((var.id, g.weight(i, j)))
    is_missing = [var.kind is VarKind.MISSING_V for var in variables]

    rows = []
    omitted = 0
    for i, j, k_ in combinations(g.nodes, 3):
        ij, jk, ik = index[(i, j)], index[(j, k_)], index[(i, k_)]
        if reduced and is_missing[ij] and is_missing[jk] and is_missing[ik]:
            omitted += 3
            continue
        for row in _triangle_rows(ij, jk, ik, ("(10)", "(11)", "(12)")):
            positive = [vid for vid, coef in row.terms if coef > 0]
            negative = [vid for vid, coef in row.terms if coef < 0]
            if reduced and all(is_missing[v] for v in positive) and not is_missing[negative[0]]:
                omitted += 1
                continue
            rows.append(row)
    rows = _group_by_tag(rows, ("(10)", "(11)", "(12)"))

    dropped = 0
    for i in g.nodes:
        terms = tuple((index[(min(i, j), max(i, j))], 1) for j in g.complement_neighbors(i))
        if not terms:
            dropped += 1
            continue
        rows.append(Constraint(terms, "<=", k - 1, "(13)"))

    if omitted:
        logger.debug(f"Fks k=2 reduction omitted {omitted} triangle rows")
    meta = dict(n=g.n, k=k, family=ModelFamily.FKS, reduced=reduced, lb=None, ub=None, P=None)
    return IlpModel(variables, objective, rows, meta, dropped_rows=dropped)


def _check_model_graph(m: IlpModel, g: WeightedGraph) -> None:
    if m.n != g.n:
        raise ValueError(f"Model built for n={m.n} but the graph has n={g.n}")


def add_capacity_bounds(
    m: IlpModel,
    g: WeightedGraph,
    lb: Number = None,
    ub: Number = None,
) -> IlpModel:
    """Add lower / upper limits on the node weight sum of every component.

    For F1c / F1s, node i gets sum_{j adjacent to i} q_j x_ij >= lb - q_i (16)
    and <= ub - q_i (17). For Fks the sums run over every j != i with the x or v
    variable of the pair, tags (18) and (19). Rows are emitted for every node,
    also where they are vacuous.

    Raises:
        ValueError: If lb > ub, a bound is negative, or lb exceeds the total node weight.
    """
    _check_model_graph(m, g)
    if lb is None and ub is None:
        return m
    for name, value in (("lb", lb), ("ub", ub)):
        if value is not None and value < 0:
            raise ValueError(f"{name} must be nonnegative, got {value}")
    if lb is not None and ub is not None and lb > ub:
        raise ValueError(f"lb ({lb}) is larger than ub ({ub})")
    if lb is not None and lb > g.total_node_weight():
        raise ValueError(
            f"lb ({lb}) exceeds the total node weight ({g.total_node_weight()}): no component can reach it"
        )

    if m.family is ModelFamily.FKS:
        tags = ("(18)", "(19)")
        partners = {i: [j for j in g.nodes if j != i] for i in g.nodes}
    else:
        tags = ("(16)", "(17)")
        partners = {i: sorted(g.neighbors(i)) for i in g.nodes}

    rows = []
    for bound, sense, tag in ((lb, ">=", tags[0]), (ub, "<=", tags[1])):
        if bound is None:
            continue
        for i in g.nodes:
            terms = tuple((m.pair_var(i, j), g.q(j)) for j in partners[i])
            rhs = bound - g.q(i)
            if isinstance(rhs, float) and rhs.is_integer():
                rhs = int(rhs)
            rows.append(Constraint(terms, sense, rhs, tag))

    return m.derive(
        constraints=m.constraints + tuple(rows),
        lb=lb if lb is not None else m.meta["lb"],
        ub=ub if ub is not None else m.meta["ub"],
    )


def add_component_limit(m: IlpModel, g: WeightedGraph, P: int) -> IlpModel:
    """Limit the number of components to P with node/component variables z_i_p.

    F1c / F1s get (20) sum_p z_i_p = 1, (21) z_i_p + z_j_p - x_ij <= 1 on edges
    and (22) z_i_p + z_j_p <= 1 on missing edges. Fks gets (23) = (20) and
    (24) z_i_p + z_j_p - {x_ij, v_ij} <= 1 on every pair. The z variables carry
    no objective weight.

    Raises:
        ValueError: If P < 1 or the model already has a component limit.
    """
    _check_model_graph(m, g)
    if int(P) != P or P < 1:
        raise ValueError(f"P must be an integer >= 1, got {P}")
    if m.has_components:
        raise ValueError("The model already has a component limit")
    P = int(P)

    variables = list(m.variables)
    z = {}
    for i in g.nodes:
        for p in range(1, P + 1):
            var = Variable(len(variables), VarKind.NODECOMP_Z, i, p)
            variables.append(var)
            z[(i, p)] = var.id

    fks = m.family is ModelFamily.FKS
    assign_tag, pair_tag = ("(23)", "(24)") if fks else ("(20)", "(21)")
    rows = [
        Constraint(tuple((z[(i, p)], 1) for p in range(1, P + 1)), "=", 1, assign_tag)
        for i in g.nodes
    ]
    for i, j in combinations(g.nodes, 2):
        pair = m.pair_var(i, j)
        for p in range(1, P + 1):
            if pair is None:
                rows.append(Constraint(((z[(i, p)], 1), (z[(j, p)], 1)), "<=", 1, "(22)"))
            else:
                rows.append(
                    Constraint(((z[(i, p)], 1), (z[(j, p)], 1), (pair, -1)), "<=", 1, pair_tag)
                )
    if not fks:
        rows = _group_by_tag(rows, ("(20)", "(21)", "(22)"))

    return m.derive(variables=variables, constraints=m.constraints + tuple(rows), P=P)


@timeit
def build_model(
    g: WeightedGraph,
    family: Union[str, ModelFamily],
    k: int = 1,
    reduce: bool = True,
    lb: Number = None,
    ub: Number = None,
    P: int = None,
) -> IlpModel:
    """Build a model of the given family and add the requested side constraints.

    Raises:
        ValueError: If F1c / F1s is asked for k != 1, or Fks for k < 2.
    """
    family = ModelFamily(family) if isinstance(family, ModelFamily) else ModelFamily.parse(family)
    if family is ModelFamily.FKS:
        m = build_fks(g, k, reduce=reduce)
    else:
        if k != 1:
            raise ValueError(f"{family.value} models clique partitions (k = 1); use Fks for k = {k}")
        m = build_f1c(g) if family is ModelFamily.F1C else build_f1s(g)
    m = add_capacity_bounds(m, g, lb=lb, ub=ub)
    if P is not None:
        m = add_component_limit(m, g, P)
    return m


def model_dimensions(m: IlpModel) -> Tuple[int, int]:
    """(variable count, constraint count).

    The constraint count includes the vacuous rows (13) dropped by `build_fks`,
    so that for k >= 3 it equals 3 C(n, 3) + n. `len(m.constraints)` gives the
    number of rows actually emitted.
    """
    return len(m.variables), len(m.constraints) + m.dropped_rows


def constraint_matrix(m: IlpModel) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Dense (A, rhs, sense) arrays; sense codes are -1 for <=, 1 for >= and 0 for =."""
    A = np.zeros((len(m.constraints), len(m.variables)), dtype=np.float64)
    rhs = np.zeros(len(m.constraints), dtype=np.float64)
    sense = np.zeros(len(m.constraints), dtype=np.int8)
    codes = {"<=": -1, ">=": 1, "=": 0}
    for r, row in enumerate(m.constraints):
        for vid, coef in row.terms:
            A[r, vid] = coef
        rhs[r] = row.rhs
        sense[r] = codes[row.sense]
    return A, rhs, sense


def objective_vector(m: IlpModel) -> np.ndarray:
    c = np.zeros(len(m.variables), dtype=np.float64)
    for vid, coef in m.objective:
        c[vid] = coef
    return c


def check_assignment(m: IlpModel, values: Sequence[float], tol: float = 1e-9) -> List[int]:
    """Indices of the rows violated by the assignment `values`."""
    violated = []
    for r, row in enumerate(m.constraints):
        lhs = sum(coef * values[vid] for vid, coef in row.terms)
        if row.sense == "<=" and lhs > row.rhs + tol:
            violated.append(r)
        elif row.sense == ">=" and lhs < row.rhs - tol:
            violated.append(r)
        elif row.sense == "=" and abs(lhs - row.rhs) > tol:
            violated.append(r)
    return violated


def assignment_to_partition(m: IlpModel, values: Sequence[float]) -> Partition:
    """Partition induced by a binary assignment.

    Components are the connected components of the graph on 1..n whose edges
    are the pairs with a selected x or v variable. z variables are ignored. On
    a feasible assignment the selected pairs are transitive, so every component
    is a clique of the selected-pair relation.
    """
    G = nx.Graph()
    G.add_nodes_from(range(1, m.n + 1))
    for var in m.variables:
        if var.kind is not VarKind.NODECOMP_Z and values[var.id] > 0.5:
            G.add_edge(var.i, var.j)
    blocks = sorted((sorted(c) for c in nx.connected_components(G)), key=lambda b: b[0])
    return Partition.from_components(m.n, blocks)


def partition_to_assignment(m: IlpModel, pt: Partition) -> np.ndarray:
    """Binary assignment induced by `pt`.

    A pair variable is 1 iff its nodes share a component. z_i_p is 1 iff node i
    is in the p-th component in canonical label order.

    Raises:
        ValueError: If the partition does not fit the model: a selected pair without variable, or more than P components.
    """
    if pt.n != m.n:
        raise ValueError(f"Partition covers {pt.n} nodes but the model has n={m.n}")
    labels = pt.canonicalize().labels
    values = np.zeros(len(m.variables), dtype=np.int64)
    for var in m.variables:
        if var.kind is VarKind.NODECOMP_Z:
            values[var.id] = int(labels[var.i - 1] == var.j)
        else:
            values[var.id] = int(labels[var.i - 1] == labels[var.j - 1])
    for block in pt.blocks():
        for i, j in combinations(block, 2):
            if m.pair_var(i, j) is None:
                raise ValueError(f"Nodes {i} and {j} share a component but the model has no variable for them")
    if m.has_components and max(labels) > m.meta["P"]:
        raise ValueError(f"Partition has {max(labels)} components, the model allows {m.meta['P']}")
    return values
