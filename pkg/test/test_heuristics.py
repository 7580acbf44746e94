import pytest

from kplexpart.config import SolverConfig
from kplexpart.graph import WeightedGraph, random_graph
from kplexpart.heuristics import greedy_warm_start
from kplexpart.partition import Partition, partition_weight, validate_partition
from kplexpart.solver import brute_force_optimum

from helpers import clique


def test_warm_start_clique():
    assert greedy_warm_start(clique(5), SolverConfig()) == Partition.single_component(5)


def test_warm_start_keeps_negative_edges_apart(signed_graph):
    pt = greedy_warm_start(signed_graph, SolverConfig())
    assert pt.label(2) != pt.label(5)
    assert partition_weight(signed_graph, pt) >= 0


@pytest.mark.parametrize("seed", range(15))
@pytest.mark.parametrize("k", [1, 2, 3])
def test_warm_start_feasible_and_bounded(seed, k):
    g = random_graph(5 + seed % 5, 0.5, seed=seed, weight_range=(-100, 100))
    cfg = SolverConfig(k=k)
    pt = greedy_warm_start(g, cfg)
    assert pt is not None
    assert validate_partition(g, pt, k) == []
    value = partition_weight(g, pt)
    assert 0 <= value <= brute_force_optimum(g, cfg).incumbent_value


@pytest.mark.parametrize("seed", range(6))
def test_warm_start_side_constraints(seed):
    g = random_graph(8, 0.7, seed=seed, weight_range=(-10, 100))
    for cfg in (SolverConfig(k=2, ub=3), SolverConfig(k=2, P=3), SolverConfig(k=3, lb=2)):
        pt = greedy_warm_start(g, cfg)
        if pt is not None:
            assert validate_partition(g, pt, cfg.k, cfg) == []
            assert partition_weight(g, pt) <= brute_force_optimum(g, cfg).incumbent_value


def test_warm_start_forced_merges():
    g = WeightedGraph(4, [(1, 2, 5), (3, 4, 5), (1, 3, -1), (2, 4, -1), (1, 4, -2), (2, 3, -2)])
    pt = greedy_warm_start(g, SolverConfig(P=1))
    assert pt == Partition.single_component(4)
    assert partition_weight(g, pt) == 4


def test_warm_start_gives_up():
    # an edgeless graph has no clique with two nodes
    assert greedy_warm_start(WeightedGraph(4), SolverConfig(P=2)) is None
    assert greedy_warm_start(WeightedGraph(4), SolverConfig(lb=2)) is None
