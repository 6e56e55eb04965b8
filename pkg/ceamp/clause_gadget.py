"""Clause skeletons and their connection to the variable gadgets."""

import dataclasses
import itertools
import logging
from collections.abc import Iterator

from ceamp import constants
from ceamp.custom_types import ClauseIndex, LiteralPosition, VariableIndex
from ceamp.errors import ConstructionError
from ceamp.formula import Clause
from ceamp.graph_core import CliqueId, Graph, Packing, PackedP3, Pair, Role, VertexId
from ceamp.variable_gadget import VariableGadget

# Seed vertex counts of Q^1..Q^4.
_Q_SEEDS = {1: 1, 2: 4, 3: 3, 4: 1}
_T_SEEDS = 2
_W_COUNT = 4


@dataclasses.dataclass(frozen=True)
class ClauseSkeleton:
    """The clause gadget of Gamma_d before padding.

    Attributes:
      clause: The clause index d.
      literals: The clause's literals; position 0, 1, 2 are p, q and r.
      p3s: The six transferring P3s P^1..P^6 in order.
    """
    clause: ClauseIndex
    literals: Clause
    p3s: tuple[PackedP3, ...]

    @property
    def variables(self) -> tuple[VariableIndex, ...]:
        return self.literals.variables

    def role_of(self, variable: VariableIndex) -> LiteralPosition:
        """Returns the position (0 for p, 1 for q, 2 for r) of `variable` in the clause."""
        return self.literals.position_of(variable)

    def q(self, k: int) -> CliqueId:
        return CliqueId.clause(self.clause, k)

    def transfer(self, position: LiteralPosition) -> CliqueId:
        return CliqueId.transfer(self.clause, self.variables[position])

    def cliques(self) -> list[CliqueId]:
        return [self.q(k) for k in range(1, 5)] + [self.transfer(k) for k in range(3)]

    def seeds(self, c: CliqueId) -> list[VertexId]:
        if c.kind == "Q":
            return [VertexId.clause(c.a, c.b, t) for t in range(_Q_SEEDS[c.b])]
        return [VertexId.transfer(c.a, c.b, t) for t in range(_T_SEEDS)]

    def vertices(self) -> list[VertexId]:
        return [v for c in self.cliques() for v in self.seeds(c)]

    def edges(self) -> Iterator[Pair]:
        for c in self.cliques():
            yield from itertools.combinations(self.seeds(c), 2)
        for p3 in self.p3s:
            yield (p3.x, p3.y)
            yield (p3.y, p3.z)

    def install(self, g: Graph, h: Packing):
        for v in self.vertices():
            g.add_vertex(v)
        for u, v in self.edges():
            g.add_edge(u, v)
        h.extend(self.p3s)


def build_clause_skeleton(d: ClauseIndex, literals: Clause) -> ClauseSkeleton:
    """Builds the skeleton of clause `d`.

    P^1, P^2 join T^p to Q^2 through the single vertex of Q^1; P^3, P^4 join
    T^q to Q^2 through the first vertex of Q^3; P^5, P^6 join T^r to Q^3
    through the single vertex of Q^4. All endpoints are distinct seeds.

    Raises:
      ConstructionError: If the clause is not over 3 distinct variables.
    """
    if len(literals) != 3 or len(set(literals.variables)) != 3:
        raise ConstructionError(f"clause {d} {literals} is not over 3 distinct variables")
    vp, vq, vr = literals.variables
    q1 = VertexId.clause(d, 1, 0)
    q4 = VertexId.clause(d, 4, 0)
    q3 = [VertexId.clause(d, 3, t) for t in range(_Q_SEEDS[3])]
    q2 = [VertexId.clause(d, 2, t) for t in range(_Q_SEEDS[2])]
    tp = [VertexId.transfer(d, vp, t) for t in range(_T_SEEDS)]
    tq = [VertexId.transfer(d, vq, t) for t in range(_T_SEEDS)]
    tr = [VertexId.transfer(d, vr, t) for t in range(_T_SEEDS)]
    p3s = (
        PackedP3(tp[0], q1, q2[0], Role.TRA),
        PackedP3(tp[1], q1, q2[1], Role.TRA),
        PackedP3(tq[0], q3[0], q2[2], Role.TRA),
        PackedP3(tq[1], q3[0], q2[3], Role.TRA),
        PackedP3(tr[0], q4, q3[1], Role.TRA),
        PackedP3(tr[1], q4, q3[2], Role.TRA),
    )
    return ClauseSkeleton(d, literals, p3s)


@dataclasses.dataclass(frozen=True)
class ConnectionRewiring:
    """The rewiring joining T^i_d to the gadget of x_i.

    Attributes:
      variable: The variable i.
      clause: The clause d.
      positive: Whether x_i occurs positively in Gamma_d.
      occurrence: pi(i, d).
      v: The designated vertices v_1..v_8, `v[0]` being v_1.
      w: The fresh vertices w_1..w_4 of T^i_d.
      removed: The four var-P3s taken out of the packing.
      added_var: The var-P3s v_5 v_6 v_2 and v_1 v_7 v_8.
      added_tra: The tra-P3s w_1 v_1 v_3, w_2 v_2 v_4, w_3 v_2 v_3, w_4 v_1 v_4.
    """
    variable: VariableIndex
    clause: ClauseIndex
    positive: bool
    occurrence: int
    v: tuple[VertexId, ...]
    w: tuple[VertexId, ...]
    removed: tuple[PackedP3, ...]
    added_var: tuple[PackedP3, ...]
    added_tra: tuple[PackedP3, ...]

    def c8(self) -> tuple[VertexId, ...]:
        """The cycle v_1 w_1 v_3 w_3 v_2 w_2 v_4 w_4 formed by the tra pairs."""
        v1, v2, v3, v4 = self.v[:4]
        w1, w2, w3, w4 = self.w
        return (v1, w1, v3, w3, v2, w2, v4, w4)


def designated_vertices(
    gadget: VariableGadget, occurrence: int, positive: bool
) -> tuple[VertexId, ...]:
    """Returns v_1..v_8 for an occurrence at position `occurrence` of the gadget."""
    base = constants.CLIQUES_PER_OCCURRENCE * occurrence
    middle = base + 1
    near, far = (base + 2, base) if positive else (base, base + 2)
    return (
        gadget.vertex(middle, 0),
        gadget.vertex(middle, 1),
        gadget.vertex(near, 1),
        gadget.vertex(near, 2),
        gadget.vertex(far, 0),
        gadget.vertex(far, 1),
        gadget.vertex(far, 3),
        gadget.vertex(far, 4),
    )


def connect_to_variable(
    skeleton: ClauseSkeleton,
    gadget: VariableGadget,
    position: LiteralPosition,
    occurrence: int,
    g: Graph,
    h: Packing,
) -> ConnectionRewiring:
    """Rewires the gadget of the variable at `position` to T^i_d.

    Removes the var-P3s v_8 v_1 v_3, v_7 v_1 v_4, v_6 v_2 v_3 and v_5 v_2 v_4
    with their edges, then packs v_5 v_6 v_2, v_1 v_7 v_8 and the four
    transferring P3s through w_1..w_4, re-adding the edges they need. The net
    effect on G is the loss of v_8 v_1 and v_5 v_2 plus the edges of the new
    vertices w_1..w_4.

    Raises:
      ConstructionError: If a P3 to remove is not in the packing.
    """
    literal = skeleton.literals.literals[position]
    if literal.variable != gadget.variable:
        raise ConstructionError(
            f"position {position} of clause {skeleton.clause} is not over x{gadget.variable}"
        )
    v = designated_vertices(gadget, occurrence, literal.positive)
    v1, v2, v3, v4, v5, v6, v7, v8 = v

    removed = []
    for x, y, z in ((v8, v1, v3), (v7, v1, v4), (v6, v2, v3), (v5, v2, v4)):
        p3 = h.find(x, y, z)
        if p3 is None or p3.role != Role.VAR:
            raise ConstructionError(
                f"var-P3 {x}-{y}-{z} is not packed; occurrence of x{gadget.variable} "
                f"in clause {skeleton.clause} rewired twice?"
            )
        removed.append(p3)
    for p3 in removed:
        h.remove(p3)
        g.remove_edge(p3.x, p3.y)
        g.remove_edge(p3.y, p3.z)

    t = skeleton.transfer(position)
    existing = [u for u in g.vertices() if isinstance(u, VertexId) and u.clique == t]
    start = len(existing)
    w = tuple(VertexId.transfer(t.a, t.b, start + k) for k in range(_W_COUNT))
    for u in w:
        g.add_vertex(u)
        for other in existing:
            g.add_edge(u, other)
        existing.append(u)
    w1, w2, w3, w4 = w

    added_var = (PackedP3(v5, v6, v2, Role.VAR), PackedP3(v1, v7, v8, Role.VAR))
    added_tra = (
        PackedP3(w1, v1, v3, Role.TRA),
        PackedP3(w2, v2, v4, Role.TRA),
        PackedP3(w3, v2, v3, Role.TRA),
        PackedP3(w4, v1, v4, Role.TRA),
    )
    for p3 in added_var + added_tra:
        g.add_edge(p3.x, p3.y)
        g.add_edge(p3.y, p3.z)
    for p3 in added_var + added_tra:
        if not p3.is_induced_in(g):
            raise ConstructionError(f"{p3} is not an induced P3 after rewiring")
        h.add(p3)

    logging.debug(
        f"Connected x{gadget.variable} ({'+' if literal.positive else '-'}) to "
        f"clause {skeleton.clause} at occurrence {occurrence}"
    )
    return ConnectionRewiring(
        variable=gadget.variable,
        clause=skeleton.clause,
        positive=literal.positive,
        occurrence=occurrence,
        v=v,
        w=w,
        removed=tuple(removed),
        added_var=added_var,
        added_tra=added_tra,
    )
