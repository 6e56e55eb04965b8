import dataclasses

import pytest

from ceamp import config
from ceamp.errors import GuardLimitError, SolverTimeout
from ceamp.formula import brute_force_sat
from ceamp.graph_core import (
    EditKind,
    Graph,
    Packing,
    PackedP3,
    apply_edits,
    is_cluster_graph,
)
from ceamp.solver import (
    brute_force_cluster_editing,
    brute_force_partition_solve,
    solve_packing,
    solve_zero_excess,
)
from ceamp.transform import decode_assignment
from ceamp.variable_gadget import build_variable_gadget, truth_pairs
from ceamp.verifier import check_solution

UNLIMITED = config.SolverConfig(time_limit=None)


def test_path_is_closed_into_a_triangle():
    g = Graph("abc", [("a", "b"), ("b", "c")])
    s = solve_packing(g, Packing([PackedP3("a", "b", "c")]), UNLIMITED)
    assert s.items() == [(("a", "c"), EditKind.INSERT)]


def test_cluster_graph_with_empty_packing():
    g = Graph(range(5), [(0, 1), (2, 3), (3, 4), (2, 4)])
    s = solve_packing(g, Packing(), UNLIMITED)
    assert len(s) == 0


def test_p3_without_packing_has_no_zero_excess_solution():
    g = Graph("abc", [("a", "b"), ("b", "c")])
    assert solve_packing(g, Packing(), UNLIMITED) is None


def test_star_needs_excess():
    # a-b-c and d-b-e: b cannot stay with both a and c, nor with both d and e.
    g = Graph("abcde", [("a", "b"), ("b", "c"), ("d", "b"), ("b", "e")])
    h = Packing([PackedP3("a", "b", "c"), PackedP3("d", "b", "e")])
    assert solve_packing(g, h, UNLIMITED) is None
    assert brute_force_partition_solve(g, h) is None
    assert len(brute_force_cluster_editing(g, 10)) == 3


def test_variable_gadget_has_exactly_its_two_parities():
    gadget = build_variable_gadget(0, 2)
    g, h = Graph(), Packing()
    gadget.install(g, h)
    s = solve_packing(g, h, UNLIMITED)
    edited = apply_edits(g, s)
    merged = {
        value: all(
            edited.has_edge(gadget.vertex(a.b, 0), gadget.vertex(b.b, 0))
            for a, b in truth_pairs(gadget, value)
        )
        for value in (False, True)
    }
    assert merged[False] != merged[True]


def test_phi2_is_feasible_and_decodes(phi2, phi2_instance):
    s = solve_zero_excess(phi2_instance, UNLIMITED)
    assert s is not None
    assert len(s) == len(phi2_instance.packing)
    assert phi2.is_satisfied_by(decode_assignment(phi2_instance, s))


@pytest.mark.slow
def test_contradiction_is_infeasible(contradiction_instance):
    assert solve_zero_excess(contradiction_instance, UNLIMITED) is None


def test_threads_agree_with_the_sequential_search(phi2_instance):
    sequential = solve_zero_excess(phi2_instance, UNLIMITED)
    threaded = solve_zero_excess(
        phi2_instance, dataclasses.replace(UNLIMITED, threads=4, frontier_depth=2)
    )
    assert threaded is not None
    assert len(threaded) == len(sequential)
    assert decode_assignment(phi2_instance, threaded) is not None


def test_timeout(phi2_instance):
    with pytest.raises(SolverTimeout):
        solve_zero_excess(phi2_instance, config.SolverConfig(time_limit=0.0))


def test_search_agrees_with_partition_enumeration(make_packed_graph, rng):
    for _ in range(100):
        g, h = make_packed_graph(rng, rng.randint(3, 8), rng.choice((0.3, 0.5, 0.7)))
        oracle = brute_force_partition_solve(g, h)
        found = solve_packing(g, h, UNLIMITED)
        assert (oracle is None) == (found is None)
        if found is not None:
            assert check_solution(g, h, found).passed
            assert check_solution(g, h, oracle).passed


def test_packing_is_a_lower_bound(make_packed_graph, rng):
    for _ in range(30):
        g, h = make_packed_graph(rng, rng.randint(3, 7), 0.5)
        assert brute_force_cluster_editing(g, len(h) - 1) is None
        best = brute_force_cluster_editing(g, g.vertex_count**2)
        assert is_cluster_graph(apply_edits(g, best))
        assert (len(best) == len(h)) == (solve_packing(g, h, UNLIMITED) is not None)


def test_cluster_editing_examples():
    path = Graph("abc", [("a", "b"), ("b", "c")])
    assert len(brute_force_cluster_editing(path, 1)) == 1
    assert brute_force_cluster_editing(path, 0) is None
    assert brute_force_cluster_editing(path, -1) is None
    assert len(brute_force_cluster_editing(Graph(), 0)) == 0


def test_oracle_guards():
    big = Graph(range(13))
    with pytest.raises(GuardLimitError):
        brute_force_cluster_editing(big, 0)
    with pytest.raises(GuardLimitError):
        brute_force_partition_solve(big, Packing())
    small = config.SolverConfig(oracle_vertex_limit=2, oracle_cluster_limit=2)
    with pytest.raises(GuardLimitError):
        brute_force_cluster_editing(Graph("abc"), 0, small)


@pytest.mark.slow
def test_reduction_preserves_satisfiability(equivalence_corpus, equivalence_instances):
    satisfiable = [brute_force_sat(f) is not None for f in equivalence_corpus]
    assert any(satisfiable) and not all(satisfiable)
    for expected, inst in zip(satisfiable, equivalence_instances):
        # The default configuration stops after 120 s; a timeout fails the test.
        assert (solve_zero_excess(inst, config.SolverConfig()) is not None) == expected
