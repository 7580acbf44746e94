"""Exact branch-and-bound solver for maximum edge-weight k-plex partitioning.

Nodes are assigned one at a time to an existing component or to a new one.
Components are opened in assignment order, so each search path corresponds to
exactly one restricted-growth labeling and no partition is visited twice.

A subtree is pruned when

- a node fits in no component (k-plex, ub or P violated),
- the lb deficits can no longer be covered by the unassigned nodes,
- its optimistic bound does not beat the incumbent.

The optimistic bound adds to the current intra-component weight, for every
unassigned node, its best weight towards a component it can still join, plus
a bound on the positive weight among unassigned nodes. The latter is the
smaller of a per-node partner bound and a pairing bound: every node has at
most `cap` neighbors in its component, so the dual of the fractional pairing
LP (node potentials y, edge slacks z with y_u + y_v + z_uv >= w_uv) gives
sum(cap_u * y_u) + sum(z_uv) over the unassigned nodes.
"""

import logging
import multiprocessing as mp
import time
from enum import Enum
from typing import Dict, List, NamedTuple, Optional, Tuple

import networkx as nx
import numpy as np
from scipy.optimize import linprog
from scipy.sparse import csr_matrix
from tqdm import tqdm

from kplexpart.config import SolverConfig
from kplexpart.enumeration import restricted_growth_array
from kplexpart.graph import Number, WeightedGraph
from kplexpart.heuristics import greedy_warm_start
from kplexpart.partition import (
    Partition,
    canonical_labels,
    partition_weight,
    prop1_applies,
    validate_partition,
)
from kplexpart.utils.timer import Timer, timeit

logger = logging.getLogger(__name__)

TIME_CHECK_EVERY = 1024
BRUTE_FORCE_MAX_N = 12
FLOAT_TOL = 1e-9
EXACT_CLIQUE_MAX_DEGREE = 40
DUAL_TOL = 1e-6


class SolveStatus(str, Enum):
    OPTIMAL = "OPTIMAL"
    FEASIBLE = "FEASIBLE"
    INFEASIBLE = "INFEASIBLE"
    TIMEOUT = "TIMEOUT"


class SolveResult(NamedTuple):
    """Outcome of a solve.

    Attributes:
        status (SolveStatus): OPTIMAL, FEASIBLE (time limit hit with an incumbent), INFEASIBLE or TIMEOUT (no incumbent).
        incumbent_value (Number): Weight of the best partition found (LB). None without incumbent.
        best_bound (Number): Proven upper bound on the optimum (UB). None when infeasible.
        d_gap (float): ((UB - LB) / UB) * 100. None without incumbent.
        gap_absolute (bool): True when d_gap is the absolute difference UB - LB (UB not positive).
        partition (Partition): Best partition found, None without incumbent.
        nodes_explored (int): Search nodes visited.
        elapsed (float): Wall time in seconds.
    """

    status: SolveStatus
    incumbent_value: Optional[Number]
    best_bound: Optional[Number]
    d_gap: Optional[float]
    gap_absolute: bool
    partition: Optional[Partition]
    nodes_explored: int
    elapsed: float

    def to_dict(self) -> dict:
        return {
            "status": self.status.value,
            "value": self.incumbent_value,
            "ub_bound": self.best_bound,
            "d_gap": self.d_gap,
            "gap_absolute": self.gap_absolute,
            "components": self.partition.blocks() if self.partition is not None else None,
            "nodes_explored": self.nodes_explored,
            "elapsed_s": self.elapsed,
        }


def compute_gap(lb: Number, ub: Number) -> Tuple[float, bool]:
    """Relative gap in percent between a lower and an upper bound.

    Returns ((ub - lb) / ub * 100, False) for ub > 0 and 0 when lb == ub. When
    ub is zero the relative gap is undefined and (ub - lb, True) is returned,
    the flag marking an absolute gap. For negative ub the difference is taken
    relative to |ub|.
    """
    if lb == ub:
        return 0.0, False
    if ub > 0:
        return float((ub - lb) / ub * 100), False
    if ub == 0:
        return float(ub - lb), True
    return float((ub - lb) / abs(ub) * 100), False


def _node_order(g: WeightedGraph, deterministic: bool) -> List[int]:
    """Nodes in assignment order: ids for deterministic runs, else descending weighted degree."""
    if deterministic:
        return list(g.nodes)
    strength = {i: sum(abs(g.weight(i, j)) for j in g.neighbors(i)) for i in g.nodes}
    return sorted(g.nodes, key=lambda i: (-strength[i], i))


def _partner_caps(g: WeightedGraph, order: List[int], k: int, ub, q: np.ndarray) -> np.ndarray:
    """Upper bound on the number of neighbors of each node that can share its component.

    The neighbors of u inside a k-plex form a k-plex, whose size is at most k
    times its clique number. The clique number of the neighborhood of u is
    computed exactly for small neighborhoods and bounded by the colors of a
    greedy coloring otherwise. With ub, the node weights give another cap.
    """
    G = g.to_networkx()
    caps = np.zeros(len(order), dtype=np.int64)
    qmin = float(q.min()) if len(q) else 0.0
    for pos, u in enumerate(order):
        neighborhood = G.subgraph(g.neighbors(u))
        if g.degree(u) <= EXACT_CLIQUE_MAX_DEGREE:
            omega = nx.max_weight_clique(neighborhood, weight=None)[1] if g.degree(u) else 0
        else:
            omega = len(set(nx.greedy_color(neighborhood, strategy="largest_first").values()))
        cap = min(k * omega, g.degree(u))
        if ub is not None and qmin > 0:
            cap = min(cap, int(np.floor((ub - g.q(u)) / qmin + FLOAT_TOL)))
        caps[pos] = max(cap, 0)
    return caps


def _pairing_dual(Wpos: np.ndarray, caps: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    """Node potentials and edge slacks bounding the positive weight of any partition.

    Solves max sum(w_uv x_uv) s.t. sum_v x_uv <= cap_u, 0 <= x <= 1 with HiGHS
    and keeps the duals of the degree rows as potentials y >= 0. The slacks
    z_uv = max(w_uv - y_u - y_v, 0) are recomputed from y, so (y, z) is dual
    feasible whatever the LP accuracy.
    """
    n = len(caps)
    y = np.zeros(n)
    iu, ju = np.nonzero(np.triu(Wpos, 1) > 0)
    if len(iu):
        m = len(iu)
        A = csr_matrix(
            (np.ones(2 * m), (np.concatenate([iu, ju]), np.tile(np.arange(m), 2))),
            shape=(n, m),
        )
        res = linprog(
            -Wpos[iu, ju].astype(np.float64),
            A_ub=A,
            b_ub=caps.astype(np.float64),
            bounds=(0, 1),
            method="highs",
        )
        if res.status == 0:
            y = np.maximum(-np.asarray(res.ineqlin.marginals), 0)
        else:
            logger.warning(f"Pairing LP not solved ({res.message}), using the partner bound only")
    slack = np.maximum(Wpos - y[:, None] - y[None, :], 0)
    np.fill_diagonal(slack, 0)
    return y, slack


class _SearchTimeout(Exception):
    pass


class _Engine:
    """Search state over nodes permuted into assignment order.

    Position p of every array refers to node `order[p]`. Components are
    indexed 0..count-1 in the order they were opened.
    """

    def __init__(self, g: WeightedGraph, cfg: SolverConfig, order: List[int]) -> None:
        self.n = g.n
        self.k = cfg.k
        self.lb = cfg.lb
        self.ub = cfg.ub
        self.P = cfg.P
        self.order = order
        self.integral = g.has_integral_weights()
        perm = np.array(order) - 1

        W = g.weight_matrix()[np.ix_(perm, perm)]
        self.W = W
        self.Wpos = np.maximum(W, 0)
        adj = g.adjacency_matrix()[np.ix_(perm, perm)]
        self.nonadj = ~adj
        np.fill_diagonal(self.nonadj, False)
        q = np.array(g.node_weights, dtype=np.int64 if g.has_integral_node_weights() else np.float64)
        self.q = q[perm]
        self.q_suffix = np.concatenate([np.cumsum(self.q[::-1])[::-1], [0]])

        self.rem_pos = np.zeros(self.n + 1, dtype=W.dtype)
        for d in range(self.n - 1, -1, -1):
            self.rem_pos[d] = self.rem_pos[d + 1] + self.Wpos[d, d + 1 :].sum()
        self.caps = _partner_caps(g, order, self.k, self.ub, self.q)
        self.potential, slack = _pairing_dual(self.Wpos, self.caps)
        self.slack_suffix = np.zeros(self.n + 1)
        for d in range(self.n - 1, -1, -1):
            self.slack_suffix[d] = self.slack_suffix[d + 1] + slack[d, d + 1 :].sum()

        self.max_comps = self.n if self.P is None else min(self.P, self.n)
        self.tol = 0 if self.integral else FLOAT_TOL
        self.reset()

    def reset(self) -> None:
        n = self.n
        self.comp_w = np.zeros((n, n), dtype=self.W.dtype)
        self.comp_miss = np.zeros((n, n), dtype=np.int64)
        self.comp_block = np.zeros((n, n), dtype=bool)
        self.comp_q = np.zeros(n, dtype=self.q.dtype)
        self.members: List[List[int]] = [[] for _ in range(n)]
        self.missing = np.zeros(n, dtype=np.int64)
        self.labels = np.full(n, -1, dtype=np.int64)
        self.count = 0

    # State updates

    def add(self, pos: int, c: int) -> tuple:
        """Put the node at `pos` into component c (c == count opens one). Return the undo record."""
        undo = (c, self.comp_w[c].copy(), self.comp_block[c].copy(), self.missing.copy())
        opened = c == self.count
        for member in self.members[c]:
            if self.nonadj[member, pos]:
                self.missing[member] += 1
        self.missing[pos] = self.comp_miss[c, pos]
        self.comp_w[c] += self.W[pos]
        self.comp_miss[c] += self.nonadj[pos]
        self.comp_q[c] += self.q[pos]
        self.members[c].append(pos)
        self.labels[pos] = c
        if opened:
            self.count += 1
        if self.k > 1:
            saturated = [m for m in self.members[c] if self.missing[m] >= self.k - 1]
            if saturated:
                self.comp_block[c] = self.nonadj[saturated].any(axis=0)
        return undo + (opened,)

    def remove(self, pos: int, undo: tuple) -> None:
        c, comp_w, comp_block, missing, opened = undo
        self.members[c].pop()
        self.comp_w[c] = comp_w
        self.comp_block[c] = comp_block
        self.missing[:] = missing
        self.comp_miss[c] -= self.nonadj[pos]
        self.comp_q[c] -= self.q[pos]
        self.labels[pos] = -1
        if opened:
            self.count -= 1

    def feasible(self, d: int) -> np.ndarray:
        """Boolean (count, n - d) array: can the unassigned node at d + j join component c."""
        C = self.count
        ok = self.comp_miss[:C, d:] <= self.k - 1
        if self.k > 1:
            ok &= ~self.comp_block[:C, d:]
        if self.ub is not None:
            ok &= (self.comp_q[:C, None] + self.q[None, d:]) <= self.ub + self.tol
        return ok

    # Bounds

    def bound(self, d: int, cur: Number) -> Optional[Number]:
        """Optimistic value of the subtree with positions d.. unassigned, None if it holds no feasible leaf."""
        if d == self.n:
            return cur
        C = self.count
        F = self.feasible(d)
        can_open = C < self.max_comps
        if C:
            gains = np.where(F, self.comp_w[:C, d:], np.iinfo(np.int64).min if self.integral else -np.inf)
            best = gains.max(axis=0)
            if not can_open and not F.any(axis=0).all():
                return None
        else:
            best = np.zeros(self.n - d, dtype=self.W.dtype)
        if can_open:
            best = np.maximum(best, 0)

        if self.lb is not None and not self._lb_reachable(d, F):
            return None

        rest = self.rem_pos[d]
        if self.n - d > 1:
            sub = self.Wpos[d:, d:]
            top = -np.sort(-sub, axis=1)
            csum = np.cumsum(top, axis=1)
            caps = np.minimum(self.caps[d:], self.n - d - 1)
            partners = np.where(caps > 0, csum[np.arange(self.n - d), np.maximum(caps - 1, 0)], 0)
            half = partners.sum() // 2 if self.integral else partners.sum() / 2
            rest = min(rest, half, self._pairing_bound(d, caps))
        return cur + best.sum() + rest

    def _pairing_bound(self, d: int, caps: np.ndarray) -> Number:
        value = float((caps * self.potential[d:]).sum() + self.slack_suffix[d])
        if self.integral:
            return int(np.floor(value + DUAL_TOL))
        return value + DUAL_TOL

    def _lb_reachable(self, d: int, F: np.ndarray) -> bool:
        C = self.count
        deficit = np.maximum(self.lb - self.comp_q[:C], 0)
        if deficit.sum() > self.q_suffix[d] + self.tol:
            return False
        if C:
            reachable = (F * self.q[None, d:]).sum(axis=1)
            if (deficit > reachable + self.tol).any():
                return False
        return True

    def leaf_ok(self) -> bool:
        if self.lb is None:
            return True
        return bool((self.comp_q[: self.count] >= self.lb - self.tol).all())

    def children(self, d: int, deterministic: bool) -> List[Tuple[int, Number]]:
        """Feasible (component, gain) moves for the node at position d, in exploration order."""
        C = self.count
        F = self.feasible(d)[:, 0] if C else np.zeros(0, dtype=bool)
        moves = [(c, self.comp_w[c, d]) for c in range(C) if F[c]]
        if C < self.max_comps:
            moves.append((C, 0))
        if not deterministic:
            moves.sort(key=lambda mv: -mv[1])
        return moves

    def partition(self) -> Partition:
        labels = [0] * self.n
        for pos, node in enumerate(self.order):
            labels[node - 1] = int(self.labels[pos]) + 1
        return Partition(labels).canonicalize()


class _Search:
    """Depth-first search driver holding the incumbent and the open-subtree bounds."""

    def __init__(
        self,
        engine: _Engine,
        timer: Timer,
        incumbent: Optional[Number],
        incumbent_from_search: bool,
        deterministic: bool,
        verbose: bool = False,
        progress_interval: float = 5.0,
        shared=None,
    ) -> None:
        self.engine = engine
        self.timer = timer
        self.incumbent = incumbent
        self.from_search = incumbent_from_search
        self.best_labels: Optional[Partition] = None
        self.deterministic = deterministic
        self.verbose = verbose
        self.progress_interval = progress_interval
        self.shared = shared
        self.nodes = 0
        self.open_bounds: List[Number] = []
        self.stopped_bound: Optional[Number] = None
        self.check_every = TIME_CHECK_EVERY
        self.last_check = 0
        self.last_report = time.perf_counter()

    def _threshold(self) -> Optional[Number]:
        inc = self.incumbent
        if self.shared is not None:
            shared = self.shared.value
            if shared != -np.inf and (inc is None or shared > inc):
                inc = shared
        return inc

    def _beats(self, value: Number, inc: Optional[Number]) -> bool:
        """Whether `value` can still improve on `inc`. Ties survive while the incumbent is not from the search."""
        if inc is None:
            return True
        tol = self.engine.tol * max(1.0, abs(inc))
        if self.from_search or not self.deterministic:
            return value > inc + tol
        return value >= inc - tol

    def upper_bound(self) -> Optional[Number]:
        """Bound over every unexplored subtree. Pushed bounds are already clamped by their ancestors."""
        candidates = list(self.open_bounds)
        if self.incumbent is not None:
            candidates.append(self.incumbent)
        return max(candidates) if candidates else None

    def _checkpoint(self) -> None:
        self.last_check = self.nodes
        if self.timer.expired():
            self.stopped_bound = self.upper_bound()
            raise _SearchTimeout
        if self.verbose and time.perf_counter() - self.last_report >= self.progress_interval:
            self.last_report = time.perf_counter()
            lb, ub = self._threshold(), self.upper_bound()
            gap = compute_gap(lb, ub)[0] if lb is not None and ub is not None else float("nan")
            logger.info(f"nodes={self.nodes} LB={lb} UB={ub} gap={gap:.2f}%")

    def run(self, d: int, cur: Number) -> None:
        self.nodes += 1
        engine = self.engine
        if d == engine.n:
            if engine.leaf_ok() and self._beats(cur, self._threshold()):
                self.incumbent = cur
                self.from_search = True
                self.best_labels = engine.partition()
                if self.shared is not None:
                    with self.shared.get_lock():
                        if cur > self.shared.value:
                            self.shared.value = float(cur)
            return
        bound = engine.bound(d, cur)
        if bound is None or not self._beats(bound, self._threshold()):
            return
        if self.open_bounds:
            bound = min(bound, self.open_bounds[-1])
        self.open_bounds.append(bound)
        try:
            # the bound of this subtree is on the stack when the clock is read
            if self.nodes - self.last_check >= self.check_every:
                self._checkpoint()
            for c, gain in engine.children(d, self.deterministic):
                undo = engine.add(d, c)
                try:
                    self.run(d + 1, cur + gain)
                finally:
                    engine.remove(d, undo)
                if not self._beats(bound, self._threshold()):
                    break
        finally:
            self.open_bounds.pop()


def make_result(
    status: SolveStatus,
    lb: Optional[Number],
    ub: Optional[Number],
    pt: Optional[Partition],
    nodes: int,
    elapsed: float,
) -> SolveResult:
    if lb is None:
        gap, absolute = None, False
    else:
        gap, absolute = compute_gap(lb, ub)
    return SolveResult(status, lb, ub, gap, absolute, pt, nodes, elapsed)


def _as_value(value):
    if value is None:
        return None
    if isinstance(value, (np.integer,)):
        return int(value)
    if isinstance(value, (np.floating,)):
        return float(value)
    return value


# Parallel search

_worker: Dict[str, object] = {}


def _init_worker(engine: _Engine, shared, time_limit: Optional[float], cfg: SolverConfig) -> None:
    _worker["engine"] = engine
    _worker["shared"] = shared
    _worker["timer"] = Timer(time_limit)
    _worker["cfg"] = cfg


def _solve_prefix(prefix: Tuple[int, ...]) -> dict:
    """Explore the subtree below the assignment `prefix` (component of each of the first positions)."""
    engine: _Engine = _worker["engine"]
    cfg: SolverConfig = _worker["cfg"]
    engine.reset()
    cur = 0
    for pos, c in enumerate(prefix):
        cur += engine.comp_w[c, pos] if c < engine.count else 0
        engine.add(pos, c)
    shared = _worker["shared"]
    search = _Search(
        engine,
        _worker["timer"],
        None,
        True,
        deterministic=False,
        verbose=False,
        progress_interval=cfg.progress_interval,
        shared=shared,
    )
    out = {"value": None, "labels": None, "nodes": 0, "timed_out": False, "ub": None}
    try:
        if _worker["timer"].expired():
            raise _SearchTimeout
        search.run(len(prefix), cur)
    except _SearchTimeout:
        out["timed_out"] = True
        ub = search.stopped_bound
        if ub is None:
            ub = engine.bound(len(prefix), cur)
        out["ub"] = _as_value(ub)
    out["nodes"] = search.nodes
    if search.best_labels is not None:
        out["value"] = _as_value(search.incumbent)
        out["labels"] = search.best_labels.labels
    return out


def _prefixes(engine: _Engine, target: int) -> List[Tuple[int, ...]]:
    """Feasible partial assignments of the first positions, expanded breadth first until `target` are available."""
    frontier: List[Tuple[int, ...]] = [()]
    depth = 0
    while len(frontier) < target and depth < engine.n - 1:
        expanded = []
        for prefix in frontier:
            engine.reset()
            for pos, c in enumerate(prefix):
                engine.add(pos, c)
            expanded += [prefix + (c,) for c, _ in engine.children(depth, deterministic=True)]
        frontier = expanded
        depth += 1
    engine.reset()
    return frontier


def _solve_parallel(
    engine: _Engine,
    cfg: SolverConfig,
    timer: Timer,
    incumbent: Optional[Number],
    warm: Optional[Partition],
) -> Tuple[SolveStatus, Optional[Number], Optional[Number], Optional[Partition], int]:
    tasks = _prefixes(engine, 8 * cfg.worker_count)
    logger.info(f"Searching {len(tasks)} subtrees with {cfg.worker_count} workers")
    shared = mp.Value("d", float(incumbent) if incumbent is not None else -np.inf)
    remaining = None if cfg.time_limit is None else timer.remaining
    with mp.Pool(cfg.worker_count, initializer=_init_worker, initargs=(engine, shared, remaining, cfg)) as pool:
        outcomes = list(pool.imap_unordered(_solve_prefix, tasks))

    nodes = sum(o["nodes"] for o in outcomes)
    best_value, best_pt = incumbent, warm
    found = [o for o in outcomes if o["value"] is not None]
    found.sort(key=lambda o: (-o["value"], canonical_labels(o["labels"])))
    if found and (best_value is None or found[0]["value"] > best_value):
        best_value, best_pt = found[0]["value"], Partition(found[0]["labels"]).canonicalize()

    timed_out = [o for o in outcomes if o["timed_out"]]
    if not timed_out:
        status = SolveStatus.OPTIMAL if best_value is not None else SolveStatus.INFEASIBLE
        return status, best_value, best_value, best_pt, nodes
    bounds = [o["ub"] for o in timed_out if o["ub"] is not None]
    if best_value is not None:
        bounds.append(best_value)
    ub = max(bounds) if bounds else None
    status = SolveStatus.FEASIBLE if best_value is not None else SolveStatus.TIMEOUT
    return status, best_value, ub, best_pt, nodes


def solve_exact(g: WeightedGraph, cfg: SolverConfig) -> SolveResult:
    """Solve Max-EkPP to optimality, or up to the time limit.

    Args:
        g (WeightedGraph): The graph.
        cfg (SolverConfig): k, side constraints, time limit, worker count and search options.

    Returns:
        SolveResult: OPTIMAL with a maximum-weight feasible partition when the
        search completes, FEASIBLE (incumbent) or TIMEOUT (no incumbent) with
        valid bounds when the time limit is reached, INFEASIBLE when no
        partition meets the side constraints.
    """
    timer = Timer(cfg.time_limit)

    if not cfg.has_side_constraints and prop1_applies(g, cfg.k):
        pt = Partition.single_component(g.n)
        value = partition_weight(g, pt)
        logger.info(f"Every node misses at most k - 1 others and no weight is negative: single component, value {value}")
        return make_result(SolveStatus.OPTIMAL, value, value, pt, 0, timer.elapsed)

    incumbent, warm = None, None
    if cfg.warm_start:
        warm = greedy_warm_start(g, cfg)
        if warm is not None:
            incumbent = partition_weight(g, warm)
            logger.info(f"Warm start value {incumbent} ({warm.num_components} components)")
        else:
            logger.warning("Warm start found no feasible partition, searching without incumbent")

    order = _node_order(g, cfg.deterministic and cfg.worker_count == 1)
    engine = _Engine(g, cfg, order)
    root_bound = engine.bound(0, 0)
    logger.debug(f"Root bound {root_bound}")

    if cfg.worker_count > 1 and g.n > 2:
        status, lb, ub, pt, nodes = _solve_parallel(engine, cfg, timer, incumbent, warm)
    else:
        search = _Search(
            engine,
            timer,
            incumbent,
            incumbent_from_search=False,
            deterministic=cfg.deterministic,
            verbose=cfg.verbose,
            progress_interval=cfg.progress_interval,
        )
        try:
            search.run(0, 0)
            lb = search.incumbent
            ub = lb
            status = SolveStatus.OPTIMAL if lb is not None else SolveStatus.INFEASIBLE
        except _SearchTimeout:
            lb = search.incumbent
            ub = search.stopped_bound
            status = SolveStatus.FEASIBLE if lb is not None else SolveStatus.TIMEOUT
            if ub is None:
                ub = root_bound
            logger.warning(f"Time limit of {cfg.time_limit} s reached after {search.nodes} nodes")
        pt = search.best_labels if search.best_labels is not None else warm
        if lb is None:
            pt = None
        nodes = search.nodes

    if status in (SolveStatus.FEASIBLE, SolveStatus.TIMEOUT) and None not in (ub, root_bound):
        ub = min(ub, root_bound)
    lb, ub = _as_value(lb), _as_value(ub)
    if pt is not None:
        assert not validate_partition(g, pt, cfg.k, cfg), "Returned partition violates the constraints"
        lb = partition_weight(g, pt)
        if status is SolveStatus.OPTIMAL:
            ub = lb
    result = make_result(status, lb, ub, pt, nodes, timer.elapsed)
    logger.info(
        f"{status.value}: value={lb} bound={ub} nodes={nodes} time={result.elapsed:.2f}s"
    )
    return result


@timeit
def brute_force_optimum(g: WeightedGraph, cfg: SolverConfig, progress: bool = False) -> SolveResult:
    """Best feasible partition by enumerating every set partition (n <= 12).

    Partitions are scanned as restricted-growth strings in lexicographic
    order; among the optima the first one is returned.

    Raises:
        ValueError: If n > 12.
    """
    if g.n > BRUTE_FORCE_MAX_N:
        raise ValueError(f"Brute force is limited to n <= {BRUTE_FORCE_MAX_N} nodes, got n = {g.n}")
    timer = Timer()
    L = restricted_growth_array(g.n)
    total = L.shape[0]
    logger.debug(f"Enumerating {total} partitions of {g.n} nodes")

    integral = g.has_integral_weights()
    values = np.zeros(total, dtype=np.int64 if integral else np.float64)
    for (i, j), w in tqdm(g.edge_weights.items(), desc="Partition weights", disable=not progress):
        values += (L[:, i - 1] == L[:, j - 1]) * w

    ok = np.ones(total, dtype=bool)
    if g.n > cfg.k:
        for i in g.nodes:
            others = g.complement_neighbors(i)
            if not others:
                continue
            missing = np.zeros(total, dtype=np.int64)
            for j in others:
                missing += L[:, i - 1] == L[:, j - 1]
            ok &= missing <= cfg.k - 1

    if cfg.P is not None:
        ok &= L.max(axis=1) <= cfg.P
    if cfg.lb is not None or cfg.ub is not None:
        q = np.array(g.node_weights, dtype=np.float64)
        largest = L.max(axis=1)
        for label in range(1, g.n + 1):
            load = ((L == label) * q).sum(axis=1)
            used = largest >= label
            if cfg.lb is not None:
                ok &= ~used | (load >= cfg.lb - FLOAT_TOL)
            if cfg.ub is not None:
                ok &= ~used | (load <= cfg.ub + FLOAT_TOL)

    if not ok.any():
        return make_result(SolveStatus.INFEASIBLE, None, None, None, total, timer.elapsed)
    feasible_values = values[ok]
    best = feasible_values.max()
    first = int(np.flatnonzero(ok)[np.flatnonzero(feasible_values == best)[0]])
    pt = Partition(L[first].tolist())
    assert not validate_partition(g, pt, cfg.k, cfg)
    value = partition_weight(g, pt)
    return make_result(SolveStatus.OPTIMAL, value, value, pt, total, timer.elapsed)
