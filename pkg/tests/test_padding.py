import itertools
import random

import pytest

from ceamp.errors import ConstructionError
from ceamp.graph_core import Graph, Role
from ceamp.padding import (
    PaddingProblem,
    Triangle,
    audit_triangle_packing,
    pack_triangles_with_dummies,
    pack_triangles,
    padding_prime,
    triangles_to_p3s,
)


def _names(prefix, count):
    return tuple(f"{prefix}{k}" for k in range(count))


def _c8(vs, ws):
    """F pairs of the 8-cycle w0 v0 w1 v1 w2 v2 w3 v3."""
    return {(vs[k], ws[k]) for k in range(4)} | {(vs[k], ws[(k + 1) % 4]) for k in range(4)}


def random_problem(
    rng: random.Random, p: int, v_count: int, cycles: int | None = None
) -> PaddingProblem:
    """A padding problem whose F is a mix of 8-cycles and P3s centered in V.

    The number of 8-cycles is drawn at random unless `cycles` is given.
    """
    V, W = _names("v", v_count), _names("w", 2 * p)
    free_v, free_w = list(V), list(W)
    rng.shuffle(free_v)
    rng.shuffle(free_w)
    F = set()
    if cycles is None:
        cycles = rng.randint(0, v_count // 4)
    for _ in range(cycles):
        vs = [free_v.pop() for _ in range(4)]
        ws = [free_w.pop() for _ in range(4)]
        F |= _c8(vs, ws)
    room = min(len(free_v), 1 if p == 2 else p)
    for _ in range(rng.randint(0 if F else 1, room)):
        center = free_v.pop()
        F |= {(center, free_w.pop()), (center, free_w.pop())}
    return PaddingProblem(p, V, W, frozenset(F))


def test_smallest_example():
    problem = PaddingProblem(2, ("a", "b"), _names("w", 4), {("a", "w0"), ("a", "w1")})
    triangles = pack_triangles(problem)
    assert len(triangles) == 3
    assert audit_triangle_packing(problem, triangles) == []


def test_c8_removes_four_triangles():
    V, W = _names("v", 5), _names("w", 10)
    problem = PaddingProblem(5, V, W, _c8(V[:4], W[:4]))
    triangles = pack_triangles(problem)
    assert len(triangles) == 25 - 4
    assert audit_triangle_packing(problem, triangles) == []


def test_c8_and_p3_share_the_field():
    V, W = _names("v", 5), _names("w", 10)
    F = _c8(V[:4], W[:4]) | {(V[4], W[8]), (V[4], W[9])}
    problem = PaddingProblem(5, V, W, F)
    triangles = pack_triangles(problem)
    assert len(triangles) == 20
    assert audit_triangle_packing(problem, triangles) == []


def test_without_f_everything_is_covered_but_w_falls_apart():
    problem = PaddingProblem(3, _names("v", 3), _names("w", 6))
    triangles = pack_triangles(problem)
    assert len(triangles) == 9
    assert audit_triangle_packing(problem, triangles) == ["W-pairs left unused do not connect W"]


@pytest.mark.parametrize("p", [2, 3, 5, 7, 11, 13, 17, 23])
def test_random_f_configurations(p):
    rng = random.Random(p)
    for _ in range(3):
        problem = random_problem(rng, p, p)
        assert audit_triangle_packing(problem, pack_triangles(problem)) == []


@pytest.mark.parametrize("p", [2, 3, 5, 7, 11, 13, 17, 23])
def test_f_without_cycles_and_with_the_most_cycles(p):
    rng = random.Random(500 + p)
    for cycles in (0, p // 4):
        for _ in range(3):
            problem = random_problem(rng, p, p, cycles)
            assert len(problem.F) >= max(8 * cycles, 2)
            assert audit_triangle_packing(problem, pack_triangles(problem)) == []


@pytest.mark.slow
@pytest.mark.parametrize("p", [2, 3, 5, 7, 11, 13, 17, 23])
def test_many_random_f_configurations(p):
    rng = random.Random(1000 + p)
    for _ in range(20):
        problem = random_problem(rng, p, rng.randint(1, p))
        assert audit_triangle_packing(problem, pack_triangles_with_dummies(problem)) == []


def test_dummy_triangles_are_dropped():
    V, W = _names("v", 3), _names("w", 10)
    problem = PaddingProblem(5, V, W, {(V[0], W[0]), (V[0], W[1])})
    triangles = pack_triangles_with_dummies(problem)
    assert len(triangles) == 25 - 1 - 2 * 5
    assert {t.v for t in triangles} == set(V)
    assert audit_triangle_packing(problem, triangles) == []


def test_dummy_variant_needs_f():
    with pytest.raises(ConstructionError):
        pack_triangles_with_dummies(PaddingProblem(3, _names("v", 2), _names("w", 6)))


@pytest.mark.parametrize(
    "F",
    [
        # A P3 centered in W.
        {("v0", "w0"), ("v1", "w0")},
        # A single pair.
        {("v0", "w0")},
        # A path of four vertices.
        {("v0", "w0"), ("v0", "w1"), ("v1", "w1")},
    ],
)
def test_malformed_f(F):
    problem = PaddingProblem(5, _names("v", 5), _names("w", 10), F)
    with pytest.raises(ConstructionError):
        pack_triangles(problem)


def test_two_p3s_do_not_fit_into_f2():
    F = {("a", "w0"), ("a", "w1"), ("b", "w2"), ("b", "w3")}
    with pytest.raises(ConstructionError, match="no free label"):
        pack_triangles(PaddingProblem(2, ("a", "b"), _names("w", 4), F))


@pytest.mark.parametrize(
    "p, v_count, w_count, F",
    [
        (4, 2, 8, set()),
        (3, 4, 6, set()),
        (3, 3, 5, set()),
        (3, 3, 6, {("w0", "v0")}),
    ],
)
def test_problem_validation(p, v_count, w_count, F):
    with pytest.raises(ConstructionError):
        PaddingProblem(p, _names("v", v_count), _names("w", w_count), F)


def test_audit_reports_each_kind_of_violation():
    problem = PaddingProblem(2, ("a", "b"), _names("w", 4), {("a", "w0"), ("a", "w1")})
    good = pack_triangles(problem)
    assert any("is not covered" in v for v in audit_triangle_packing(problem, good[1:]))
    assert any("lies in" in v for v in audit_triangle_packing(problem, good + good[:1]))
    assert any("F pair" in v for v in audit_triangle_packing(problem, good + [Triangle("a", "w0", "w1")]))
    assert any("exactly one V-vertex" in v for v in audit_triangle_packing(problem, [Triangle("w0", "w1", "w2")]))


def test_triangles_to_p3s():
    problem = PaddingProblem(2, ("a", "b"), _names("w", 4), {("a", "w0"), ("a", "w1")})
    W = problem.W
    g = Graph(("a", "b") + W, itertools.combinations(W, 2))
    g.add_edge("a", "w0")
    g.add_edge("a", "w1")
    triangles = pack_triangles(problem)
    inserted, p3s = triangles_to_p3s(triangles, g)
    assert len(inserted) == len(p3s) == 3
    assert all(p3.role == Role.PAD for p3 in p3s)
    assert all(p3.is_induced_in(g) for p3 in p3s)
    assert all(g.has_edge(u, v) for u, v in inserted)


def test_triangles_to_p3s_needs_a_w_edge():
    g = Graph(("a", "w0", "w1"))
    with pytest.raises(ConstructionError):
        triangles_to_p3s([Triangle("a", "w0", "w1")], g)


@pytest.mark.parametrize(
    "v_count, q_count, p",
    [(2, 3, 2), (6, 4, 7), (16, 6, 17), (20, 6, 23), (0, 0, 2), (1, 9, 5)],
)
def test_padding_prime(v_count, q_count, p):
    assert padding_prime(v_count, q_count) == p
