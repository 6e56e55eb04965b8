"""The cyclic variable gadget: 4m_i cliques of 5 vertices labelled by F_5."""

import dataclasses
import itertools
import logging
from collections.abc import Iterator

from ceamp import constants
from ceamp import ffield
from ceamp.custom_types import VariableIndex
from ceamp.errors import ConstructionError
from ceamp.graph_core import CliqueId, Graph, Packing, PackedP3, Pair, Role, VertexId

CliquePair = tuple[CliqueId, CliqueId]


@dataclasses.dataclass(frozen=True)
class VariableGadget:
    """The gadget of variable x_i.

    Clique K_j holds v_{j,0}..v_{j,4}; the vertex index doubles as the F_5
    label. Indices are taken modulo 4m_i, so K_{4m_i} is K_0.

    Attributes:
      variable: The variable index i.
      occurrences: m_i, the number of clauses containing x_i.
      p3s: The packed P3s of H_var, one per even j and (p, q) in F_5^2.
    """
    variable: VariableIndex
    occurrences: int
    p3s: tuple[PackedP3, ...]

    @property
    def clique_count(self) -> int:
        return constants.CLIQUES_PER_OCCURRENCE * self.occurrences

    def clique(self, j: int) -> CliqueId:
        return CliqueId.variable(self.variable, j % self.clique_count)

    def vertex(self, j: int, p: int) -> VertexId:
        return VertexId.var(self.variable, j % self.clique_count, p % constants.VARIABLE_FIELD)

    def members(self, j: int) -> list[VertexId]:
        return [self.vertex(j, p) for p in range(constants.VARIABLE_CLIQUE_SIZE)]

    def cliques(self) -> list[CliqueId]:
        return [self.clique(j) for j in range(self.clique_count)]

    def vertices(self) -> list[VertexId]:
        return [v for j in range(self.clique_count) for v in self.members(j)]

    def edges(self) -> Iterator[Pair]:
        """Yields the intra-clique edges and all edges between consecutive cliques."""
        for j in range(self.clique_count):
            yield from itertools.combinations(self.members(j), 2)
            yield from itertools.product(self.members(j), self.members(j + 1))

    def install(self, g: Graph, h: Packing):
        """Adds the gadget's vertices, edges and P3s to a graph under construction."""
        for v in self.vertices():
            g.add_vertex(v)
        for u, v in self.edges():
            g.add_edge(u, v)
        h.extend(self.p3s)


def build_variable_gadget(i: VariableIndex, m_i: int) -> VariableGadget:
    """Builds the gadget of x_i occurring in `m_i` clauses.

    For every even j and every (p, q) in F_5^2 the P3
    v_{j,p} v_{j+1,q} v_{j+2,2q-p} is packed.

    Raises:
      ConstructionError: If `m_i` is smaller than 2.
    """
    if m_i < 2:
        raise ConstructionError(f"x{i} occurs {m_i} times, the gadget needs at least 2")
    count = constants.CLIQUES_PER_OCCURRENCE * m_i
    p3s = []
    for j in range(0, count, 2):
        for pv, q in itertools.product(ffield.elements(constants.VARIABLE_FIELD), repeat=2):
            r = ffield.progression_third(pv, q)
            p3s.append(
                PackedP3(
                    VertexId.var(i, j, pv.value),
                    VertexId.var(i, j + 1, q.value),
                    VertexId.var(i, (j + 2) % count, r.value),
                    Role.VAR,
                )
            )
    logging.debug(f"Built gadget of x{i}: {count} cliques, {len(p3s)} P3s")
    return VariableGadget(i, m_i, tuple(p3s))


def truth_pairs(gadget: VariableGadget, value: bool) -> list[CliquePair]:
    """Returns the clique pairs merged when x_i takes `value`.

    False merges the even pairs (K_j, K_{j+1}), true the odd pairs
    (K_{j+1}, K_{j+2}), j even.
    """
    offset = 1 if value else 0
    return [
        (gadget.clique(j + offset), gadget.clique(j + offset + 1))
        for j in range(0, gadget.clique_count, 2)
    ]
