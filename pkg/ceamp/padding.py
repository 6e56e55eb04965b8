"""Padding: triangle packings of V x W over F_p and their conversion to P3s.

The packing of a complete bipartite graph between V (|V| <= p) and a clique
W of 2p vertices avoids a prescribed set F of V-W pairs whose components are
P3s centered in V or 8-cycles. W is split into halves W_1, W_2 and every
vertex is labelled by F_p; the triangles v_i w_j w'_k with j - i = k - j
cover every V-W pair once, and the few triangles through F are dropped.
"""

import dataclasses
import itertools
import logging
from collections.abc import Iterable, Mapping, Sequence

import networkx as nx

from ceamp import ffield
from ceamp.custom_types import Vertex
from ceamp.errors import ConstructionError
from ceamp.graph_core import CliqueId, Graph, Packing, PackedP3, Pair, Role, VertexId, pair

_VERTEX_KIND = {"K": "v", "Q": "Q", "T": "T"}


@dataclasses.dataclass(frozen=True, order=True)
class DummyVertex:
    """A V-side label that never enters the graph."""
    index: int

    def __str__(self) -> str:
        return f"dummy[{self.index}]"


@dataclasses.dataclass(frozen=True)
class PaddingProblem:
    """A padding instance.

    Attributes:
      p: The prime.
      V: The lower-level vertices, at most p of them. Order breaks ties.
      W: The 2p vertices of the clique being padded. Order breaks ties.
      F: V-W pairs, as (v, w), that the packing must avoid.
    """
    p: int
    V: tuple[Vertex, ...]
    W: tuple[Vertex, ...]
    F: frozenset[tuple[Vertex, Vertex]] = frozenset()

    def __post_init__(self):
        object.__setattr__(self, "V", tuple(self.V))
        object.__setattr__(self, "W", tuple(self.W))
        object.__setattr__(self, "F", frozenset(self.F))
        if not ffield.is_prime(self.p):
            raise ConstructionError(f"{self.p} is not prime")
        if len(self.V) > self.p or len(set(self.V)) != len(self.V):
            raise ConstructionError(f"need at most {self.p} distinct V-vertices, got {len(self.V)}")
        if len(self.W) != 2 * self.p or len(set(self.W)) != len(self.W):
            raise ConstructionError(f"need {2 * self.p} distinct W-vertices, got {len(self.W)}")
        v_set, w_set = set(self.V), set(self.W)
        for v, w in self.F:
            if v not in v_set or w not in w_set:
                raise ConstructionError(f"F pair ({v}, {w}) is not a V-W pair")


@dataclasses.dataclass(frozen=True)
class Triangle:
    """A triangle v w1 w2 with v in V, w1 in W_1 and w2 in W_2."""
    v: Vertex
    w1: Vertex
    w2: Vertex


TrianglePacking = list[Triangle]


def _third(p: int, i: int, j: int) -> int:
    # Over F_2 the progression rule collapses, so the Latin square k = i + j
    # stands in for it.
    if p == 2:
        return (i + j) % 2
    return (2 * j - i) % p


def _f_components(problem: PaddingProblem):
    """Splits F into P3s (center, w, w') and 8-cycles listed from their smallest W vertex."""
    v_pos = {v: k for k, v in enumerate(problem.V)}
    w_pos = {w: k for k, w in enumerate(problem.W)}
    graph = nx.Graph()
    for v, w in problem.F:
        graph.add_edge(("V", v_pos[v]), ("W", w_pos[w]))

    p3s, c8s = [], []
    for component in nx.connected_components(graph):
        nodes = sorted(component)
        sub = graph.subgraph(nodes)
        degrees = dict(sub.degree)
        v_nodes = [n for n in nodes if n[0] == "V"]
        w_nodes = [n for n in nodes if n[0] == "W"]
        if len(nodes) == 3 and len(v_nodes) == 1 and degrees[v_nodes[0]] == 2:
            p3s.append((v_nodes[0][1], w_nodes[0][1], w_nodes[1][1]))
        elif len(nodes) == 8 and len(v_nodes) == 4 and all(deg == 2 for deg in degrees.values()):
            start = w_nodes[0]
            cycle = [start, min(sub.neighbors(start))]
            while len(cycle) < 8:
                cycle.append(next(n for n in sub.neighbors(cycle[-1]) if n != cycle[-2]))
            c8s.append(tuple(n[1] for n in cycle))
        else:
            shown = ", ".join(
                str(problem.V[k] if side == "V" else problem.W[k]) for side, k in nodes
            )
            raise ConstructionError(
                f"F component {{{shown}}} is neither a P3 centered in V nor an 8-cycle"
            )
    p3s.sort()
    c8s.sort()
    return p3s, c8s


def pack_triangles(problem: PaddingProblem) -> TrianglePacking:
    """Packs triangles covering every V-W pair outside F exactly once.

    Requires |V| = p. The triangles are edge-disjoint, avoid F, contain one
    V-vertex each, and when F is nonempty the W-pairs they leave unused
    connect W.

    Raises:
      ConstructionError: On a malformed F or when F needs more labels than
        F_p has.
    """
    p = problem.p
    if len(problem.V) != p:
        raise ConstructionError(f"triangle packing needs |V| = {p}, got {len(problem.V)}")
    p3s, c8s = _f_components(problem)
    if 4 * len(c8s) + len(p3s) > p:
        raise ConstructionError(
            f"{len(c8s)} 8-cycles and {len(p3s)} P3s do not fit into F_{p}"
        )

    # Labels by position in V and W.
    v_label: dict[int, int] = {}
    w1_label: dict[int, int] = {}
    w2_label: dict[int, int] = {}
    removed: set[tuple[int, int, int]] = set()

    for c, cycle in enumerate(c8s):
        h = 4 * c
        w1_label[cycle[0]] = h + 1
        v_label[cycle[1]] = h
        w2_label[cycle[2]] = h + 2
        v_label[cycle[3]] = h + 2
        w1_label[cycle[4]] = h + 2
        v_label[cycle[5]] = h + 3
        w2_label[cycle[6]] = h + 1
        v_label[cycle[7]] = h + 1
        removed.update(
            [(h, h + 1, h + 2), (h + 1, h + 1, h + 1), (h + 2, h + 2, h + 2), (h + 3, h + 2, h + 1)]
        )

    for center, wa, wb in p3s:
        used_v, used_w1, used_w2 = set(v_label.values()), set(w1_label.values()), set(w2_label.values())
        h = next(
            (
                j
                for j in range(p)
                if j not in used_v and j not in used_w1 and _third(p, j, j) not in used_w2
            ),
            None,
        )
        if h is None:
            raise ConstructionError(f"no free label in F_{p} for the P3 centered at {problem.V[center]}")
        v_label[center] = h
        w1_label[wa] = h
        w2_label[wb] = _third(p, h, h)
        removed.add((h, h, _third(p, h, h)))

    free_v = iter(sorted(set(range(p)) - set(v_label.values())))
    for k in range(p):
        if k not in v_label:
            v_label[k] = next(free_v)
    free_w1 = iter(sorted(set(range(p)) - set(w1_label.values())))
    free_w2 = iter(sorted(set(range(p)) - set(w2_label.values())))
    for k in range(2 * p):
        if k in w1_label or k in w2_label:
            continue
        if len(w1_label) < p:
            w1_label[k] = next(free_w1)
        else:
            w2_label[k] = next(free_w2)

    v_by_label = {label: problem.V[k] for k, label in v_label.items()}
    w1_by_label = {label: problem.W[k] for k, label in w1_label.items()}
    w2_by_label = {label: problem.W[k] for k, label in w2_label.items()}

    triangles = []
    for i, j in itertools.product(range(p), repeat=2):
        k = _third(p, i, j)
        if (i, j, k) in removed:
            continue
        triangles.append(Triangle(v_by_label[i], w1_by_label[j], w2_by_label[k]))
    if len(triangles) != p * p - len(removed):
        raise ConstructionError("removed triangles are not part of the cover")
    return triangles


def pack_triangles_with_dummies(problem: PaddingProblem) -> TrianglePacking:
    """Packs for |V| <= p by padding V with dummy labels and dropping their triangles.

    Raises:
      ConstructionError: If F is empty, or as `pack_triangles`.
    """
    if not problem.F:
        raise ConstructionError("padding needs a nonempty F")
    dummies = tuple(DummyVertex(k) for k in range(problem.p - len(problem.V)))
    extended = PaddingProblem(problem.p, problem.V + dummies, problem.W, problem.F)
    return [t for t in pack_triangles(extended) if not isinstance(t.v, DummyVertex)]


def audit_triangle_packing(problem: PaddingProblem, triangles: Iterable[Triangle]) -> list[str]:
    """Returns the ways `triangles` fails to be a valid packing for `problem`.

    Checked: one V-vertex and two distinct W-vertices per triangle, no pair
    in two triangles, every V-W pair outside F covered, no F pair covered,
    and (W, W-pairs no triangle uses) connected. An empty list is a pass.
    """
    v_set, w_set = set(problem.V), set(problem.W)
    violations = []
    used: dict[frozenset, Triangle] = {}
    for t in triangles:
        if t.v not in v_set or t.w1 not in w_set or t.w2 not in w_set or t.w1 == t.w2:
            violations.append(f"triangle {t} does not have exactly one V-vertex")
            continue
        for a, b in ((t.v, t.w1), (t.v, t.w2), (t.w1, t.w2)):
            key = frozenset((a, b))
            if key in used:
                violations.append(f"pair {{{a}, {b}}} lies in {used[key]} and {t}")
            used[key] = t
    for v, w in sorted(problem.F, key=str):
        if frozenset((v, w)) in used:
            violations.append(f"F pair {{{v}, {w}}} is covered")
    for v, w in itertools.product(problem.V, problem.W):
        if (v, w) not in problem.F and frozenset((v, w)) not in used:
            violations.append(f"pair {{{v}, {w}}} is not covered")
    if problem.W:
        residual = nx.Graph()
        residual.add_nodes_from(problem.W)
        residual.add_edges_from(
            (a, b) for a, b in itertools.combinations(problem.W, 2) if frozenset((a, b)) not in used
        )
        if not nx.is_connected(residual):
            violations.append("W-pairs left unused do not connect W")
    return violations


def triangles_to_p3s(tau: Iterable[Triangle], g: Graph) -> tuple[list[Pair], list[PackedP3]]:
    """Turns each triangle v w1 w2 into the pad-P3 v-w1-w2 centered at w1.

    The edge v w1 is inserted into `g`; v w2 stays a non-edge.

    Raises:
      ConstructionError: If w1 w2 is not an edge or v is already adjacent to w1 or w2.
    """
    inserted, p3s = [], []
    for t in tau:
        if not g.has_edge(t.w1, t.w2):
            raise ConstructionError(f"{t.w1} and {t.w2} are not adjacent")
        if g.has_edge(t.v, t.w1) or g.has_edge(t.v, t.w2):
            raise ConstructionError(f"{t.v} is already adjacent to {t.w1} or {t.w2}")
        g.add_edge(t.v, t.w1)
        inserted.append(pair(t.v, t.w1))
        p3s.append(PackedP3(t.v, t.w1, t.w2, Role.PAD))
    return inserted, p3s


@dataclasses.dataclass(frozen=True)
class PaddingResult:
    clique: CliqueId
    p: int
    v_count: int
    w_count: int
    triangles: int


def padding_prime(v_count: int, q_count: int) -> int:
    """The smallest prime p with p >= |V| and 2p >= |Q|."""
    return ffield.smallest_prime_geq(max(v_count, (q_count + 1) // 2, 1))


def pad_clique(
    q: CliqueId,
    out_neighbors: Sequence[CliqueId],
    g: Graph,
    h: Packing,
    members: Mapping[CliqueId, list[VertexId]],
) -> PaddingResult:
    """Grows clique `q` to 2p vertices and covers its pairs to the lower-level cliques.

    `members` is updated in place with the new vertices of `q`. The cliques
    in `out_neighbors` must already have their final size.

    Raises:
      ConstructionError: If F is empty, contains pairs not covered by
        transferring P3s, or the packing fails its audit.
    """
    V = sorted(v for c in out_neighbors for v in members[c])
    W = members[q]
    p = padding_prime(len(V), len(W))
    kind = _VERTEX_KIND[q.kind]
    while len(W) < 2 * p:
        fresh = VertexId(kind, q.a, q.b, len(W))
        g.add_vertex(fresh)
        for other in W:
            g.add_edge(fresh, other)
        W.append(fresh)

    F = set()
    for v, w in itertools.product(V, W):
        owner = h.owner(pair(v, w))
        if owner is None:
            continue
        if owner.role != Role.TRA:
            raise ConstructionError(f"pair {{{v}, {w}}} is already covered by {owner}")
        F.add((v, w))

    problem = PaddingProblem(p, tuple(V), tuple(W), frozenset(F))
    tau = pack_triangles_with_dummies(problem)
    violations = audit_triangle_packing(problem, tau)
    if violations:
        raise ConstructionError(f"padding of {q} is invalid: {violations[:5]}")
    _, p3s = triangles_to_p3s(tau, g)
    h.extend(p3s)
    logging.debug(
        f"Padded {q}: p={p}, |V|={len(V)}, |W|={len(W)}, |F|={len(F)}, {len(tau)} triangles"
    )
    return PaddingResult(q, p, len(V), len(W), len(tau))
