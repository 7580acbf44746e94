import logging
from typing import List, Optional, Set

import numpy as np

from kplexpart.config import SolverConfig
from kplexpart.graph import WeightedGraph
from kplexpart.partition import Partition, is_kplex, partition_weight, validate_partition

logger = logging.getLogger(__name__)

MAX_LOCAL_SEARCH_PASSES = 50


def _gain_matrix(W: np.ndarray, comps: List[Set[int]]) -> np.ndarray:
    """Inter-component weight sums: entry (a, b) is the weight between components a and b."""
    n = W.shape[0]
    B = np.zeros((n, len(comps)), dtype=W.dtype)
    for c, nodes in enumerate(comps):
        B[[i - 1 for i in nodes], c] = 1
    G = B.T @ W @ B
    np.fill_diagonal(G, 0)
    return G


def _load(g: WeightedGraph, nodes: Set[int]):
    return sum(g.q(i) for i in nodes)


def _can_merge(g: WeightedGraph, a: Set[int], b: Set[int], cfg: SolverConfig) -> bool:
    if cfg.ub is not None and _load(g, a) + _load(g, b) > cfg.ub:
        return False
    return is_kplex(g, a | b, cfg.k)


def _merge_best(
    g: WeightedGraph,
    W: np.ndarray,
    comps: List[Set[int]],
    cfg: SolverConfig,
    positive_only: bool,
    among: Set[int] = None,
) -> bool:
    """Merge the feasible pair of components with the largest gain. Return False if none qualifies."""
    if len(comps) < 2:
        return False
    G = _gain_matrix(W, comps)
    a_idx, b_idx = np.triu_indices(len(comps), k=1)
    gains = G[a_idx, b_idx]
    for pos in np.argsort(-gains, kind="stable"):
        if positive_only and gains[pos] <= 0:
            return False
        a, b = int(a_idx[pos]), int(b_idx[pos])
        if among is not None and a not in among and b not in among:
            continue
        if _can_merge(g, comps[a], comps[b], cfg):
            comps[a] |= comps[b]
            del comps[b]
            return True
    return False


def _relocate(g: WeightedGraph, comps: List[Set[int]], cfg: SolverConfig) -> bool:
    """Move single nodes between components while the total weight strictly increases."""
    improved = False
    for _ in range(MAX_LOCAL_SEARCH_PASSES):
        moved = False
        for u in g.nodes:
            src = next(c for c, nodes in enumerate(comps) if u in nodes)
            stay = sum(g.weight(u, v) for v in g.neighbors(u) if v in comps[src])
            if cfg.lb is not None and len(comps[src]) > 1 and _load(g, comps[src]) - g.q(u) < cfg.lb:
                continue
            best, target = 0, None
            for c, nodes in enumerate(comps):
                if c == src:
                    continue
                if cfg.ub is not None and _load(g, nodes) + g.q(u) > cfg.ub:
                    continue
                gain = sum(g.weight(u, v) for v in g.neighbors(u) if v in nodes) - stay
                if gain > best and is_kplex(g, nodes | {u}, cfg.k):
                    best, target = gain, c
            if target is None:
                continue
            comps[target].add(u)
            comps[src].discard(u)
            if not comps[src]:
                del comps[src]
            moved = improved = True
        if not moved:
            break
    return improved


def greedy_warm_start(g: WeightedGraph, cfg: SolverConfig) -> Optional[Partition]:
    """Feasible starting partition for the exact search.

    Starts from singletons, merges the pair of components with the largest
    positive inter-component weight as long as the union stays a k-plex within
    `ub`, then forces merges until at most `P` components remain and every
    component reaches `lb`. A single-node relocation local search finishes the
    partition.

    Returns:
        Optional[Partition]: The partition, or None when the side constraints could not be met.
    """
    W = g.weight_matrix()
    comps: List[Set[int]] = [{i} for i in g.nodes]

    while _merge_best(g, W, comps, cfg, positive_only=True):
        pass

    if cfg.P is not None:
        while len(comps) > cfg.P:
            if not _merge_best(g, W, comps, cfg, positive_only=False):
                logger.debug(f"Warm start: cannot reduce {len(comps)} components to P = {cfg.P}")
                return None

    if cfg.lb is not None:
        while True:
            short = {c for c, nodes in enumerate(comps) if _load(g, nodes) < cfg.lb}
            if not short:
                break
            if not _merge_best(g, W, comps, cfg, positive_only=False, among=short):
                logger.debug(f"Warm start: {len(short)} components stay below lb = {cfg.lb}")
                return None

    _relocate(g, comps, cfg)

    pt = Partition.from_components(g.n, sorted((sorted(c) for c in comps), key=lambda b: b[0]))
    violations = validate_partition(g, pt, cfg.k, cfg)
    if violations:
        logger.debug(f"Warm start infeasible: {violations[0]['message']}")
        return None
    logger.debug(f"Warm start: {pt.num_components} components, weight {partition_weight(g, pt)}")
    return pt
