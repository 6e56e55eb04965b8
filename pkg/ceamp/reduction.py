"""Reduction of a normalized 3-CNF formula to a CEaMP instance (G, H, ell=0)."""

import dataclasses
import logging

from ceamp import constants
from ceamp import structured_outputs
from ceamp.clause_gadget import ClauseSkeleton, build_clause_skeleton, connect_to_variable
from ceamp.errors import ConstructionError, FormulaError, GraphError
from ceamp.formula import Formula
from ceamp.graph_core import (
    CliqueId,
    CliquePartition,
    Graph,
    Packing,
    PackedP3,
    Role,
    VertexId,
    pair,
    to_dot,
    vertex_incidence,
)
from ceamp.merging_model import MergingModel, build_merging_model
from ceamp.padding import pad_clique
from ceamp.variable_gadget import VariableGadget, build_variable_gadget


@dataclasses.dataclass
class Instance:
    """A CEaMP instance with the structure it was built from.

    Attributes:
      formula: The normalized formula the instance encodes.
      graph: The graph G.
      packing: The modification-disjoint P3 packing H.
      cliques: The cliques of V(H).
      model: The merging model over those cliques.
      ell: Excess budget, always 0 for reduced instances.
    """
    formula: Formula
    graph: Graph
    packing: Packing
    cliques: CliquePartition
    model: MergingModel
    ell: int = 0

    def gadget(self, i: int) -> VariableGadget:
        return VariableGadget(i, self.formula.occurrence_count(i), ())

    def skeleton(self, d: int) -> ClauseSkeleton:
        return ClauseSkeleton(d, self.formula.clauses[d], ())

    def to_document(self) -> structured_outputs.InstanceDocument:
        f = self.formula
        return structured_outputs.InstanceDocument(
            ell=self.ell,
            formula=structured_outputs.FormulaRecord(
                variables=f.variable_count,
                clauses=[[lit.to_dimacs() for lit in clause] for clause in f.clauses],
            ),
            vertices=[
                structured_outputs.VertexRecord(
                    id=str(v),
                    clique=str(self.cliques.clique_of(v)),
                    level=self.cliques.level(self.cliques.clique_of(v)),
                )
                for v in self.graph.vertices()
            ],
            edges=[(str(u), str(v)) for u, v in self.graph.edges()],
            packing=[
                structured_outputs.PackedP3Record(
                    x=str(p3.x), y=str(p3.y), z=str(p3.z), role=p3.role.value
                )
                for p3 in self.packing
            ],
        )

    def to_json(self) -> str:
        return self.to_document().model_dump_json(indent=2) + "\n"

    @classmethod
    def from_document(cls, doc: structured_outputs.InstanceDocument) -> "Instance":
        """Rebuilds an instance from its document.

        The packing is loaded non-strictly so that overlapping P3s reach the
        verifier instead of failing the load.
        """
        formula = Formula.from_dimacs_lists(doc.formula.variables, doc.formula.clauses)
        if not formula.is_normalized():
            raise FormulaError("the instance formula is not normalized")
        vertices = [VertexId.parse(r.id) for r in doc.vertices]
        graph = Graph(vertices)
        for u, v in doc.edges:
            graph.add_edge(VertexId.parse(u), VertexId.parse(v))
        packing = Packing(
            (
                PackedP3(VertexId.parse(r.x), VertexId.parse(r.y), VertexId.parse(r.z), Role(r.role))
                for r in doc.packing
            ),
            strict=False,
        )
        assignment = {v: CliqueId.parse(r.clique) for v, r in zip(vertices, doc.vertices)}
        levels: dict[CliqueId, int] = {}
        for r in doc.vertices:
            c = CliqueId.parse(r.clique)
            if levels.setdefault(c, r.level) != r.level:
                raise GraphError(f"clique {c} declared on levels {levels[c]} and {r.level}")
        cliques = CliquePartition(assignment, levels)
        model = build_merging_model(formula, graph, cliques)
        return cls(formula, graph, packing, cliques, model, doc.ell)

    @classmethod
    def from_json(cls, text: str | bytes) -> "Instance":
        return cls.from_document(structured_outputs.InstanceDocument.model_validate_json(text))

    def to_dot(self) -> str:
        return to_dot(self.graph, self.packing, self.cliques)


@dataclasses.dataclass(frozen=True)
class Stats:
    """Size statistics of an instance."""
    vertex_count: int
    edge_count: int
    var_p3s: int
    tra_p3s: int
    pad_p3s: int
    clique_sizes: dict[str, int]
    max_incidence: int

    def to_document(self) -> structured_outputs.StatsDocument:
        return structured_outputs.StatsDocument(**dataclasses.asdict(self))


def instance_stats(inst: Instance) -> Stats:
    """Counts vertices, edges, packed P3s per role, clique sizes and the max P3 incidence."""
    incidence = vertex_incidence(inst.graph, inst.packing)
    return Stats(
        vertex_count=inst.graph.vertex_count,
        edge_count=inst.graph.edge_count,
        var_p3s=inst.packing.count(Role.VAR),
        tra_p3s=inst.packing.count(Role.TRA),
        pad_p3s=inst.packing.count(Role.PAD),
        clique_sizes={str(c): inst.cliques.size(c) for c in inst.cliques.cliques()},
        max_incidence=int(incidence.max()) if incidence.size else 0,
    )


def reduce(f: Formula) -> Instance:
    """Builds the instance (G, H, 0) of a normalized formula.

    Variable gadgets come first, then clause skeletons in clause order, then
    the rewirings in (clause, literal position) order, and finally the
    paddings of levels 2, 3 and 4. Transferring cliques are padded in
    (clause, literal position) order.

    Raises:
      ConstructionError: If `f` is not normalized or a construction step
        fails its own checks.
    """
    if not f.is_normalized():
        raise ConstructionError("the reduction needs a normalized formula")
    g = Graph()
    h = Packing()

    gadgets: dict[int, VariableGadget] = {}
    for i in range(f.variable_count):
        gadgets[i] = build_variable_gadget(i, f.occurrence_count(i))
        gadgets[i].install(g, h)

    skeletons = [build_clause_skeleton(d, clause) for d, clause in enumerate(f.clauses)]
    for skeleton in skeletons:
        skeleton.install(g, h)
    for d, skeleton in enumerate(skeletons):
        for position, i in enumerate(skeleton.variables):
            connect_to_variable(skeleton, gadgets[i], position, f.occurrence_index(i, d), g, h)

    members: dict[CliqueId, list[VertexId]] = {}
    for v in g.vertices():
        members.setdefault(v.clique, []).append(v)
    model = build_merging_model(f, g, CliquePartition.from_vertices(g.vertices()))

    order = [CliqueId.clause(d, 3) for d in range(f.clause_count)]
    order += [CliqueId.clause(d, 2) for d in range(f.clause_count)]
    order += [s.transfer(k) for s in skeletons for k in range(3)]
    for q in order:
        pad_clique(q, model.out_neighbors(q), g, h, members)

    cliques = CliquePartition.from_vertices(g.vertices())
    inst = Instance(f, g, h, cliques, model)
    logging.info(
        f"Reduced {f.variable_count} variables, {f.clause_count} clauses to "
        f"{g.vertex_count} vertices, {g.edge_count} edges, {len(h)} packed P3s "
        f"(var {h.count(Role.VAR)}, tra {h.count(Role.TRA)}, pad {h.count(Role.PAD)})"
    )
    return inst


def expected_clique_size(inst: Instance, c: CliqueId) -> int:
    """The final size a clique of a reduced instance must have."""
    if c.kind == "K":
        return constants.CLIQUE_SIZE_K
    if c.kind == "Q":
        return {
            1: constants.CLIQUE_SIZE_Q1,
            2: constants.CLIQUE_SIZE_Q2,
            3: constants.CLIQUE_SIZE_Q3,
            4: constants.CLIQUE_SIZE_Q4,
        }[c.b]
    middle = inst.formula.clauses[c.a].position_of(c.b) == constants.ROLE_Q
    return constants.CLIQUE_SIZE_MIDDLE_T if middle else constants.CLIQUE_SIZE_OUTER_T


def dividing_pairs(inst: Instance) -> list[tuple[CliqueId, CliqueId]]:
    """The clique pairs whose vertex pairs must all stay uncovered non-edges.

    Q^1_d x Q^4_d for every clause and K^i_{4pi(i,d)+1} x Q^1_d for every
    literal over x_i in Gamma_d.
    """
    pairs = []
    for d, clause in enumerate(inst.formula.clauses):
        q1 = CliqueId.clause(d, 1)
        pairs.append(pair(q1, CliqueId.clause(d, 4)))
        for i in clause.variables:
            j = constants.CLIQUES_PER_OCCURRENCE * inst.formula.occurrence_index(i, d) + 1
            pairs.append(pair(CliqueId.variable(i, j), q1))
    return pairs
