"""The merging model: a graph over the cliques of V(H), stratified into levels."""

import itertools
import logging
from collections.abc import Iterable

import networkx as nx

from ceamp import constants
from ceamp.custom_types import Level
from ceamp.formula import Formula
from ceamp.graph_core import CliqueId, CliquePartition, Graph

# Q-pairs of one clause gadget joined in the model.
_Q_PAIRS = ((1, 2), (1, 3), (2, 3), (2, 4), (3, 4))


class MergingModel:
    """Clique pairs a zero-excess solution may merge.

    Nodes carry a `level` attribute: 0 for variable cliques, 1 for Q^1 and
    Q^4, 2 for Q^3, 3 for Q^2 and 4 for transferring cliques.
    """

    def __init__(self, levels: dict[CliqueId, Level] | None = None):
        self._graph = nx.Graph()
        for c, level in (levels or {}).items():
            self.add_node(c, level)

    def __len__(self) -> int:
        return self._graph.number_of_nodes()

    def __contains__(self, c: CliqueId) -> bool:
        return c in self._graph

    def add_node(self, c: CliqueId, level: Level):
        self._graph.add_node(c, level=level)

    def add_edge(self, a: CliqueId, b: CliqueId):
        self._graph.add_edge(a, b)

    def nodes(self) -> list[CliqueId]:
        return sorted(self._graph.nodes)

    def edges(self) -> list[tuple[CliqueId, CliqueId]]:
        return sorted(tuple(sorted(e)) for e in self._graph.edges)

    def has_edge(self, a: CliqueId, b: CliqueId) -> bool:
        return self._graph.has_edge(a, b)

    def level(self, c: CliqueId) -> Level:
        return self._graph.nodes[c]["level"]

    def at_level(self, level: Level) -> list[CliqueId]:
        return [c for c in self.nodes() if self.level(c) == level]

    def neighbors(self, c: CliqueId) -> list[CliqueId]:
        return sorted(self._graph.neighbors(c))

    def out_neighbors(self, c: CliqueId) -> list[CliqueId]:
        """Returns the neighbours of `c` on strictly lower levels."""
        return [n for n in self.neighbors(c) if self.level(n) < self.level(c)]

    def oriented(self) -> nx.DiGraph:
        """Returns the model with every non-L_0 edge oriented from high to low level."""
        digraph = nx.DiGraph()
        digraph.add_nodes_from(self._graph.nodes(data=True))
        for a, b in self._graph.edges:
            if self.level(a) == self.level(b) == constants.LEVEL_VARIABLE:
                continue
            if self.level(a) >= self.level(b):
                digraph.add_edge(a, b)
            if self.level(b) >= self.level(a):
                digraph.add_edge(b, a)
        return digraph


def _adjacent_cliques(g: Graph, cliques: CliquePartition, c: CliqueId) -> set[CliqueId]:
    adjacent = set()
    for v in cliques.members(c):
        for u in g.neighbors(v):
            adjacent.add(cliques.clique_of(u))
    adjacent.discard(c)
    return adjacent


def build_merging_model(f: Formula, g: Graph, cliques: CliquePartition) -> MergingModel:
    """Builds the merging model of an instance under construction or loaded from JSON.

    Edges join consecutive variable cliques, each T^i_d to K^i_{4pi},
    K^i_{4pi+1} and K^i_{4pi+2}, the Q-pairs 12, 13, 23, 24 and 34 of every
    clause, and T^i_d to Q^1_d or Q^4_d when adjacent to it in `g`; a T^i_d
    adjacent to Q^3_d is joined to both Q^3_d and Q^4_d.
    """
    model = MergingModel({c: cliques.level(c) for c in cliques.cliques()})
    for i in range(f.variable_count):
        count = constants.CLIQUES_PER_OCCURRENCE * f.occurrence_count(i)
        for j in range(count):
            model.add_edge(CliqueId.variable(i, j), CliqueId.variable(i, (j + 1) % count))
    for d, clause in enumerate(f.clauses):
        for a, b in _Q_PAIRS:
            model.add_edge(CliqueId.clause(d, a), CliqueId.clause(d, b))
        for i in clause.variables:
            t = CliqueId.transfer(d, i)
            base = constants.CLIQUES_PER_OCCURRENCE * f.occurrence_index(i, d)
            for j in range(base, base + 3):
                model.add_edge(t, CliqueId.variable(i, j))
            adjacent = _adjacent_cliques(g, cliques, t)
            q1, q3, q4 = (CliqueId.clause(d, k) for k in (1, 3, 4))
            if q1 in adjacent:
                model.add_edge(t, q1)
            if q4 in adjacent:
                model.add_edge(t, q4)
            if q3 in adjacent:
                model.add_edge(t, q3)
                model.add_edge(t, q4)
    logging.debug(f"Built merging model: {len(model)} cliques, {len(model.edges())} edges")
    return model


def check_levels_acyclic(mm: MergingModel) -> bool:
    """Whether every edge outside L_0 joins two different levels.

    That makes the high-to-low orientation of those edges acyclic.
    """
    for a, b in mm.edges():
        if mm.level(a) == mm.level(b) == constants.LEVEL_VARIABLE:
            continue
        if mm.level(a) == mm.level(b):
            return False
    return nx.is_directed_acyclic_graph(mm.oriented())


def union_size(cliques: CliquePartition, members: Iterable[CliqueId]) -> int:
    return sum(cliques.size(c) for c in members)


def model_to_dot(mm: MergingModel, name: str = "H") -> str:
    """Renders the model as DOT with one `rank=same` group per level."""
    lines = [f"graph {name} {{", "  rankdir=BT;", "  node [shape=box];"]
    for level in range(constants.LEVEL_TRANSFER + 1):
        members = mm.at_level(level)
        if not members:
            continue
        nodes = " ".join(f'"{c}";' for c in members)
        lines.append(f"  {{ rank=same; {nodes} }}")
    for a, b in mm.edges():
        lines.append(f'  "{a}" -- "{b}";')
    lines.append("}")
    return "\n".join(lines) + "\n"
