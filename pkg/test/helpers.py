from itertools import combinations
from pathlib import Path
from typing import Set

from kplexpart.config import SolverConfig
from kplexpart.enumeration import restricted_growth_strings
from kplexpart.graph import WeightedGraph
from kplexpart.partition import Partition, validate_partition

DATA_DIR = Path(__file__).parent / "data"


def feasible_partitions(g: WeightedGraph, k: int, cfg: SolverConfig = None) -> Set[Partition]:
    """Every partition of g whose components are k-plexes (and meet cfg's side constraints)."""
    return {
        Partition(labels)
        for labels in restricted_growth_strings(g.n)
        if not validate_partition(g, Partition(labels), k, cfg)
    }


def clique(n: int, w=1) -> WeightedGraph:
    return WeightedGraph(n, [(i, j, w) for i in range(1, n + 1) for j in range(i + 1, n + 1)])


def johnson_graph(n: int = 8, size: int = 2) -> WeightedGraph:
    """Johnson-type benchmark graph: the `size`-subsets of {1..n}, adjacent when disjoint."""
    subsets = list(combinations(range(1, n + 1), size))
    edges = [
        (a + 1, b + 1, 1)
        for a, b in combinations(range(len(subsets)), 2)
        if not set(subsets[a]) & set(subsets[b])
    ]
    return WeightedGraph(len(subsets), edges)


def hamming_graph(bits: int = 6, distance: int = 4) -> WeightedGraph:
    """Hamming benchmark graph: words 0..2^bits - 1, adjacent when at Hamming distance >= `distance`."""
    size = 2**bits
    edges = [
        (a + 1, b + 1, 1)
        for a, b in combinations(range(size), 2)
        if bin(a ^ b).count("1") >= distance
    ]
    return WeightedGraph(size, edges)
