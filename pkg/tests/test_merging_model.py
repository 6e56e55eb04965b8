import pytest

from ceamp.graph_core import CliqueId
from ceamp.merging_model import MergingModel, check_levels_acyclic, model_to_dot, union_size


def Q(k, d=0):
    return CliqueId.clause(d, k)


def T(i, d=0):
    return CliqueId.transfer(d, i)


def K(i, j):
    return CliqueId.variable(i, j)


@pytest.mark.parametrize(
    "clique, size",
    [(Q(2), 6), (Q(3), 2), (T(0), 16), (T(2), 16), (T(1), 20), (T(1, d=1), 20), (T(0, d=1), 16)],
)
def test_out_neighbour_unions(phi2_instance, clique, size):
    # Both clauses list x0, x1, x2 in order, so T[d][1] is the middle one.
    model, cliques = phi2_instance.model, phi2_instance.cliques
    assert union_size(cliques, model.out_neighbors(clique)) == size


def test_q3_out_neighbours(phi2_instance):
    assert phi2_instance.model.out_neighbors(Q(3)) == [Q(1), Q(4)]


def test_transferring_cliques_see_three_variable_cliques(phi2_instance):
    model = phi2_instance.model
    # x1 is the q of clause 0 and occurs there first.
    assert [c for c in model.out_neighbors(T(1)) if c.kind == "K"] == [K(1, 0), K(1, 1), K(1, 2)]
    assert [c for c in model.out_neighbors(T(1)) if c.kind == "Q"] == [Q(3), Q(4)]
    assert [c for c in model.out_neighbors(T(0)) if c.kind == "Q"] == [Q(1)]
    assert [c for c in model.out_neighbors(T(2)) if c.kind == "Q"] == [Q(4)]


def test_dividing_pairs_are_not_model_edges(phi2_instance):
    model = phi2_instance.model
    for d in range(2):
        assert not model.has_edge(Q(1, d), Q(4, d))
    assert not model.has_edge(K(0, 1), Q(1))
    assert not model.has_edge(K(1, 1), Q(1))
    assert not model.has_edge(K(2, 5), Q(1, d=1))


def test_variable_cycle(phi2_instance):
    model = phi2_instance.model
    assert model.has_edge(K(0, 7), K(0, 0))
    assert model.neighbors(K(2, 3)) == [K(2, 2), K(2, 4)]
    assert model.at_level(0) == [K(i, j) for i in range(3) for j in range(8)]


def test_levels_of_a_reduced_instance_are_acyclic(phi2_instance):
    assert check_levels_acyclic(phi2_instance.model)


def test_same_level_edge_is_rejected():
    model = MergingModel({Q(1): 1, Q(4): 1})
    model.add_edge(Q(1), Q(4))
    assert not check_levels_acyclic(model)


def test_variable_edges_may_share_level_zero():
    model = MergingModel({K(0, 0): 0, K(0, 1): 0})
    model.add_edge(K(0, 0), K(0, 1))
    assert check_levels_acyclic(model)


def test_empty_model():
    assert check_levels_acyclic(MergingModel())
    assert len(MergingModel()) == 0


def test_oriented_model_points_down():
    model = MergingModel({Q(2): 3, Q(3): 2, K(0, 0): 0, K(0, 1): 0})
    model.add_edge(Q(3), Q(2))
    model.add_edge(K(0, 0), K(0, 1))
    oriented = model.oriented()
    assert list(oriented.edges) == [(Q(2), Q(3))]


def test_model_to_dot(phi2_instance):
    dot = model_to_dot(phi2_instance.model)
    assert dot.startswith("graph H {")
    assert dot.count("rank=same") == 5
    assert '"T[0][1]" -- "Q[0][3]";' in dot or '"Q[0][3]" -- "T[0][1]";' in dot
