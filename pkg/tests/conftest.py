import itertools
import random

import pytest

from ceamp.formula import Formula, brute_force_sat, normalize
from ceamp.graph_core import Graph, Packing, PackedP3, induced_p3s
from ceamp.reduction import reduce


def random_formula(rng: random.Random, n: int, m: int) -> Formula:
    """A normalized random 3-CNF formula over `n` variables with `m` drawn clauses."""
    clauses = []
    for _ in range(m):
        variables = rng.sample(range(n), 3)
        clauses.append([(v + 1) * rng.choice((1, -1)) for v in variables])
    return normalize(Formula.from_dimacs_lists(n, clauses))


def random_packed_graph(rng: random.Random, n: int, density: float) -> tuple[Graph, Packing]:
    """A random graph on 0..n-1 with a greedy modification-disjoint P3 packing."""
    g = Graph(range(n))
    for u, v in itertools.combinations(range(n), 2):
        if rng.random() < density:
            g.add_edge(u, v)
    h = Packing()
    candidates = induced_p3s(g)
    rng.shuffle(candidates)
    for x, y, z in candidates:
        p3 = PackedP3(x, y, z)
        if all(h.owner(p) is None for p in p3.pairs()):
            h.add(p3)
    return g, h


# Every assignment of four variables falsifies exactly one of these clauses.
_SPLIT_CONTRADICTION = [
    [-1, 2, 3], [-1, 2, -3], [-1, -2, 4], [-1, -2, -4],
    [1, 3, 4], [1, 3, -4], [1, -3, 2], [1, -3, -2],
]


def relabelled(rng: random.Random, n: int, clauses: list[list[int]]) -> Formula:
    """`clauses` with variables permuted, polarities flipped and clauses shuffled."""
    order = rng.sample(range(1, n + 1), n)
    signs = [rng.choice((1, -1)) for _ in range(n)]
    moved = [
        [signs[abs(lit) - 1] * (1 if lit > 0 else -1) * order[abs(lit) - 1] for lit in clause]
        for clause in clauses
    ]
    rng.shuffle(moved)
    return normalize(Formula.from_dimacs_lists(n, moved))


@pytest.fixture
def rng():
    return random.Random(20240607)


@pytest.fixture(scope="session")
def phi2() -> Formula:
    # (x0 | ~x1 | ~x2) & (~x0 | x1 | x2)
    return Formula.from_dimacs_lists(3, [[1, -2, -3], [-1, 2, 3]])


@pytest.fixture(scope="session")
def contradiction() -> Formula:
    # All eight sign patterns over x0, x1, x2.
    clauses = [
        [s0 * 1, s1 * 2, s2 * 3] for s0, s1, s2 in itertools.product((1, -1), repeat=3)
    ]
    return Formula.from_dimacs_lists(3, clauses)


@pytest.fixture(scope="session")
def phi2_instance(phi2):
    return reduce(phi2)


@pytest.fixture(scope="session")
def contradiction_instance(contradiction):
    return reduce(contradiction)


@pytest.fixture(scope="session")
def satisfiable_corpus() -> list[Formula]:
    """Conforming satisfiable formulas with n <= 6 and at most 10 drawn clauses."""
    rng = random.Random(1)
    corpus = []
    while len(corpus) < 100:
        n = rng.randint(3, 6)
        f = random_formula(rng, n, rng.randint(2, 10))
        if brute_force_sat(f) is not None:
            corpus.append(f)
    return corpus


@pytest.fixture(scope="session")
def equivalence_corpus() -> list[Formula]:
    """50 conforming formulas with n <= 4 and m <= 8, both satisfiable and not."""
    rng = random.Random(2)
    every_pattern = [[s0 * 1, s1 * 2, s2 * 3] for s0, s1, s2 in itertools.product((1, -1), repeat=3)]
    corpus = [relabelled(rng, 3, every_pattern) for _ in range(3)]
    corpus += [relabelled(rng, 4, _SPLIT_CONTRADICTION) for _ in range(5)]
    while len(corpus) < 50:
        n = rng.randint(3, 4)
        f = random_formula(rng, n, rng.randint(2, 6))
        if f.clause_count <= 8:
            corpus.append(f)
    return corpus


@pytest.fixture
def make_formula():
    return random_formula


@pytest.fixture
def make_packed_graph():
    return random_packed_graph


@pytest.fixture(scope="session")
def satisfiable_instances(satisfiable_corpus):
    return [reduce(f) for f in satisfiable_corpus]


@pytest.fixture(scope="session")
def equivalence_instances(equivalence_corpus):
    return [reduce(f) for f in equivalence_corpus]
