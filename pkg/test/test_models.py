from itertools import combinations
from math import comb

import numpy as np
import pytest

from kplexpart.config import SolverConfig
from kplexpart.enumeration import enumerate_model_solutions
from kplexpart.graph import WeightedGraph, complement_edges, random_graph
from kplexpart.models import (
    ModelFamily,
    VarKind,
    add_capacity_bounds,
    add_component_limit,
    assignment_to_partition,
    build_f1c,
    build_f1s,
    build_fks,
    build_model,
    check_assignment,
    model_dimensions,
    partition_to_assignment,
)
from kplexpart.partition import Partition

from helpers import clique, feasible_partitions


def induced_partitions(m):
    return {assignment_to_partition(m, values) for values in enumerate_model_solutions(m)}


def row_signature(m):
    return [(row.terms, row.sense, row.rhs) for row in m.constraints]


@pytest.mark.parametrize("n, nvars, nrows", [(3, 3, 3), (10, 45, 360), (2, 1, 0)])
def test_f1c_dimensions(n, nvars, nrows):
    m = build_f1c(clique(n))
    assert model_dimensions(m) == (nvars, nrows)
    assert m.family is ModelFamily.F1C
    m.validate()


def test_f1c_rejects_sparse_graph(path3):
    with pytest.raises(ValueError, match="complete"):
        build_f1c(path3)


def test_f1c_triangle_rows():
    m = build_f1c(clique(3))
    names = m.variable_names()
    assert names == ["x_1_2", "x_1_3", "x_2_3"]
    assert [row.tag for row in m.constraints] == ["(1)", "(2)", "(3)"]
    # x_12 + x_23 - x_13 <= 1
    assert m.constraints[0].terms == ((0, 1), (2, 1), (1, -1))
    assert all(row.sense == "<=" and row.rhs == 1 for row in m.constraints)


def test_f1s_equals_f1c_on_complete_graph():
    g = clique(6)
    assert row_signature(build_f1s(g)) == row_signature(build_f1c(g))


def test_f1s_path(path3):
    m = build_f1s(path3)
    assert m.variable_names() == ["x_1_2", "x_2_3"]
    assert m.objective == ((0, 5), (1, 5))
    assert len(m.constraints) == 1
    row = m.constraints[0]
    assert (row.terms, row.sense, row.rhs, row.tag) == (((0, 1), (1, 1)), "<=", 1, "(8)")
    assert m.pair_var(1, 3) is None


def test_f1s_edgeless():
    m = build_f1s(WeightedGraph(4))
    assert model_dimensions(m) == (0, 0)


def test_f1s_single_missing_pair_rows():
    # Triangle 1-2-3 plus pendant 4 attached to 3: triples (1,3,4) and (2,3,4) miss one pair each
    g = WeightedGraph(4, [(1, 2, 1), (1, 3, 1), (2, 3, 1), (3, 4, 1)])
    m = build_f1s(g)
    tags = [row.tag for row in m.constraints]
    assert tags == ["(5)", "(6)", "(7)", "(8)", "(8)"]
    names = m.variable_names()
    rows8 = [{names[v] for v, _ in row.terms} for row in m.constraints if row.tag == "(8)"]
    assert rows8 == [{"x_1_3", "x_3_4"}, {"x_2_3", "x_3_4"}]


def test_fks_variables(cycle4):
    m = build_fks(cycle4, 2)
    kinds = [(v.kind, v.i, v.j) for v in m.variables]
    assert kinds == [
        (VarKind.EDGE_X, 1, 2),
        (VarKind.MISSING_V, 1, 3),
        (VarKind.EDGE_X, 1, 4),
        (VarKind.EDGE_X, 2, 3),
        (VarKind.MISSING_V, 2, 4),
        (VarKind.EDGE_X, 3, 4),
    ]
    # only edges carry weight
    assert [m.variables[vid].kind for vid, _ in m.objective] == [VarKind.EDGE_X] * 4
    m.validate()


def test_fks_rejects_k1(path3):
    with pytest.raises(ValueError):
        build_fks(path3, 1)


def test_fks_dimension_formula_k3():
    assert model_dimensions(build_fks(clique(10), 3)) == (45, 370)
    for n in range(5, 13):
        g = random_graph(n, 0.5, seed=n)
        m = build_fks(g, 3)
        assert model_dimensions(m) == (n * (n - 1) // 2, 3 * comb(n, 3) + n)


def test_fks_complete_graph_drops_degree_rows():
    m = build_fks(clique(5), 2)
    assert m.dropped_rows == 5
    assert all(row.tag != "(13)" for row in m.constraints)
    f1c = build_f1c(clique(5))
    assert row_signature(m) == row_signature(f1c)


def test_fks_degree_rows(star):
    m = build_fks(star, 3)
    rows = [row for row in m.constraints if row.tag == "(13)"]
    names = m.variable_names()
    assert [sorted(names[v] for v, _ in row.terms) for row in rows] == [
        ["v_2_3", "v_2_4"],
        ["v_2_3", "v_3_4"],
        ["v_2_4", "v_3_4"],
    ]
    assert all(row.rhs == 2 for row in rows)
    assert m.dropped_rows == 1


def test_fks_reduce_has_no_effect_for_k3():
    g = random_graph(6, 0.3, seed=4)
    assert row_signature(build_fks(g, 3, reduce=True)) == row_signature(build_fks(g, 3, reduce=False))
    assert not build_fks(g, 3).meta["reduced"]


def test_fks_path_reduction_same_feasible_set(path3):
    reduced = enumerate_model_solutions(build_fks(path3, 2, reduce=True))
    full = enumerate_model_solutions(build_fks(path3, 2, reduce=False))
    assert reduced == full


def _has_two_missing_triple(g):
    missing = set(complement_edges(g))
    for triple in combinations(g.nodes, 3):
        pairs = [(triple[0], triple[1]), (triple[1], triple[2]), (triple[0], triple[2])]
        if sum(p in missing for p in pairs) >= 2:
            return True
    return False


@pytest.mark.parametrize("seed", range(50))
def test_fks_k2_reduction_soundness(seed):
    n = 4 + seed % 3
    g = random_graph(n, [0.3, 0.5, 0.7][seed % 3], seed=100 + seed)
    reduced = build_fks(g, 2, reduce=True)
    full = build_fks(g, 2, reduce=False)
    assert enumerate_model_solutions(reduced) == enumerate_model_solutions(full)
    if _has_two_missing_triple(g):
        assert len(reduced.constraints) < len(full.constraints)
    else:
        assert len(reduced.constraints) == len(full.constraints)


@pytest.mark.parametrize("seed", range(50))
def test_model_semantics_equivalence(seed):
    n = 4 + seed % 3
    g = random_graph(n, [0.4, 0.6][seed % 2], seed=200 + seed)
    assert induced_partitions(build_f1s(g)) == feasible_partitions(g, 1)
    for k in (2, 3):
        assert induced_partitions(build_fks(g, k)) == feasible_partitions(g, k)


def test_f1c_feasible_assignments_k3():
    solutions = enumerate_model_solutions(build_f1c(clique(3)))
    assert len(solutions) == 5


def test_capacity_rows_f1(path3):
    m = add_capacity_bounds(build_f1s(path3), path3, lb=1, ub=2)
    tags = [row.tag for row in m.constraints]
    assert tags == ["(8)", "(16)", "(16)", "(16)", "(17)", "(17)", "(17)"]
    assert m.meta["lb"] == 1 and m.meta["ub"] == 2
    # node 2 has neighbors 1 and 3
    row = m.constraints[5]
    assert (row.terms, row.sense, row.rhs) == (((0, 1), (1, 1)), "<=", 1)


def test_capacity_rows_fks_use_all_pairs(star):
    m = add_capacity_bounds(build_fks(star, 2), star, ub=3)
    rows = [row for row in m.constraints if row.tag == "(19)"]
    assert len(rows) == 4
    assert all(len(row.terms) == 3 for row in rows)


def test_capacity_node_weights():
    g = WeightedGraph(3, [(1, 2, 1), (2, 3, 1)], node_weights={1: 2, 3: 0.5})
    m = add_capacity_bounds(build_f1s(g), g, ub=3)
    rows = [row for row in m.constraints if row.tag == "(17)"]
    assert rows[0].terms == ((0, 1),)
    assert rows[0].rhs == 1
    assert rows[1].terms == ((0, 2), (1, 0.5))
    assert rows[1].rhs == 2


def test_capacity_ub1_forces_singletons():
    g = random_graph(5, 0.6, seed=8)
    m = build_model(g, "f1s", ub=1)
    assert induced_partitions(m) == {Partition.singletons(5)}
    m = build_model(g, "fks", k=2, ub=1)
    assert induced_partitions(m) == {Partition.singletons(5)}


def test_capacity_lb1_is_vacuous():
    g = random_graph(5, 0.6, seed=9)
    assert induced_partitions(build_model(g, "f1s", lb=1)) == feasible_partitions(g, 1)


@pytest.mark.parametrize("ub", [2, 3])
@pytest.mark.parametrize("k", [1, 2])
def test_capacity_matches_constrained_partitions(ub, k):
    g = random_graph(6, 0.6, seed=ub * 10 + k)
    m = build_model(g, "f1s" if k == 1 else "fks", k=k, ub=ub)
    assert induced_partitions(m) == feasible_partitions(g, k, SolverConfig(k=k, ub=ub))


def test_capacity_errors(path3):
    m = build_f1s(path3)
    with pytest.raises(ValueError):
        add_capacity_bounds(m, path3, lb=3, ub=2)
    with pytest.raises(ValueError):
        add_capacity_bounds(m, path3, lb=4)
    with pytest.raises(ValueError):
        add_capacity_bounds(m, WeightedGraph(4), ub=2)
    assert add_capacity_bounds(m, path3) is m


def test_component_limit_rows(path3):
    m = add_component_limit(build_f1s(path3), path3, 2)
    z = [v for v in m.variables if v.kind is VarKind.NODECOMP_Z]
    assert [v.name for v in z] == ["z_1_1", "z_1_2", "z_2_1", "z_2_2", "z_3_1", "z_3_2"]
    tags = [row.tag for row in m.constraints]
    assert tags.count("(20)") == 3
    assert tags.count("(21)") == 4
    assert tags.count("(22)") == 2
    assert all(vid < 2 for vid, _ in m.objective)
    assert m.meta["P"] == 2
    m.validate()


def test_component_limit_fks_rows(cycle4):
    m = add_component_limit(build_fks(cycle4, 2), cycle4, 3)
    tags = [row.tag for row in m.constraints]
    assert tags.count("(23)") == 4
    assert tags.count("(24)") == 6 * 3
    assert "(22)" not in tags


@pytest.mark.parametrize("P", [1, 2, 3])
def test_component_limit_matches_constrained_partitions(P):
    g = random_graph(4, 0.5, seed=P)
    assert induced_partitions(build_model(g, "f1s", P=P)) == feasible_partitions(g, 1, SolverConfig(P=P))
    assert induced_partitions(build_model(g, "fks", k=2, P=P)) == feasible_partitions(
        g, 2, SolverConfig(k=2, P=P)
    )


def test_component_limit_vacuous_and_single():
    g = clique(4)
    assert induced_partitions(build_model(g, "f1c", P=4)) == feasible_partitions(g, 1)
    assert induced_partitions(build_model(g, "f1c", P=1)) == {Partition.single_component(4)}


def test_component_limit_errors(path3):
    m = build_f1s(path3)
    with pytest.raises(ValueError):
        add_component_limit(m, path3, 0)
    with pytest.raises(ValueError):
        add_component_limit(add_component_limit(m, path3, 2), path3, 2)


def test_build_model_family_checks(path3):
    with pytest.raises(ValueError):
        build_model(path3, "f1s", k=2)
    with pytest.raises(ValueError):
        build_model(path3, "fks", k=1)
    with pytest.raises(ValueError):
        build_model(path3, "f2x")
    assert build_model(path3, ModelFamily.F1S).family is ModelFamily.F1S


def test_assignment_round_trip(signed_graph):
    m = build_fks(signed_graph, 2)
    pt = Partition.from_components(6, [[1, 2, 3], [4, 6], [5]])
    values = partition_to_assignment(m, pt)
    assert check_assignment(m, values) == []
    assert assignment_to_partition(m, values) == pt


def test_assignment_with_components(path3):
    m = build_model(path3, "f1s", P=2)
    pt = Partition([1, 1, 2])
    values = partition_to_assignment(m, pt)
    assert check_assignment(m, values) == []
    assert values[m.z_var(3, 2)] == 1 and values[m.z_var(3, 1)] == 0
    with pytest.raises(ValueError):
        partition_to_assignment(m, Partition.singletons(3))


def test_partition_to_assignment_missing_variable(path3):
    m = build_f1s(path3)
    with pytest.raises(ValueError):
        partition_to_assignment(m, Partition([1, 2, 1]))


def test_check_assignment_reports_rows(path3):
    m = build_f1s(path3)
    assert check_assignment(m, np.array([1, 1])) == [0]
    assert check_assignment(m, np.array([1, 0])) == []
