"""Certificate transformers between satisfying assignments and zero-excess edit sets."""

import logging

from networkx.utils import UnionFind

from ceamp import constants
from ceamp.errors import CertificateError, ConstructionError, GraphError
from ceamp.formula import Assignment
from ceamp.graph_core import CliqueId, EditSet, apply_edits, components, edits_for_partition, is_cluster_graph
from ceamp.reduction import Instance
from ceamp.variable_gadget import truth_pairs
from ceamp.verifier import verify_solution

ClusterPartition = list[list[CliqueId]]


def _clause_merges(inst: Instance, d: int, a: Assignment) -> list[list[CliqueId]]:
    """The groups of clause-gadget cliques merged for clause `d` under `a`."""
    skeleton = inst.skeleton(d)
    chosen = next(
        position for position, lit in enumerate(skeleton.literals) if lit.evaluate(a.values)
    )
    q1, q2, q3, q4 = (skeleton.q(k) for k in range(1, 5))
    t = skeleton.transfer(chosen)
    if chosen == constants.ROLE_P:
        groups = [[t, q1], [q2, q3, q4]]
    elif chosen == constants.ROLE_Q:
        groups = [[q1, q2], [t, q3, q4]]
    else:
        groups = [[t, q4], [q1, q2, q3]]
    for position, i in enumerate(skeleton.variables):
        if position == chosen:
            continue
        base = constants.CLIQUES_PER_OCCURRENCE * inst.formula.occurrence_index(i, d)
        gadget = inst.gadget(i)
        first = base + 1 if a[i] else base
        groups.append([skeleton.transfer(position), gadget.clique(first), gadget.clique(first + 1)])
    return groups


def cluster_partition(inst: Instance, a: Assignment) -> ClusterPartition:
    """Groups the cliques of `inst` into the clusters encoding `a`."""
    blocks = UnionFind(inst.cliques.cliques())
    f = inst.formula
    for i in range(f.variable_count):
        for c, c_next in truth_pairs(inst.gadget(i), a[i]):
            blocks.union(c, c_next)
    for d in range(f.clause_count):
        for group in _clause_merges(inst, d, a):
            blocks.union(*group)
    return sorted(sorted(block) for block in blocks.to_sets())


def encode_solution(inst: Instance, a: Assignment) -> EditSet:
    """Turns a satisfying assignment into a zero-excess cluster editing set.

    Variables merge their odd pairs when true and their even pairs when
    false. Each clause picks its first satisfied literal: for p, T^p joins
    Q^1 and Q^2, Q^3, Q^4 form one cluster; for q, Q^1 joins Q^2 and T^q
    joins Q^3, Q^4; for r, T^r joins Q^4 and Q^1, Q^2, Q^3 form one cluster.
    Every other transferring clique joins K_{4pi+1} and K_{4pi+2} when its
    variable is true, and K_{4pi}, K_{4pi+1} otherwise.

    Raises:
      CertificateError: If `a` does not satisfy the instance's formula.
      ConstructionError: If the resulting edit set is not a zero-excess
        solution.
    """
    f = inst.formula
    if len(a) < f.variable_count or not f.is_satisfied_by(a):
        raise CertificateError("the assignment does not satisfy the formula")
    clusters = cluster_partition(inst, a)
    blocks = [[v for c in cluster for v in inst.cliques.members(c)] for cluster in clusters]
    s = edits_for_partition(inst.graph, blocks)
    report = verify_solution(inst, s)
    if not report.passed:
        raise ConstructionError(f"encoded edit set fails {report.failed()}")
    logging.info(f"Encoded assignment into {len(s)} edits over {len(clusters)} clusters")
    return s


def decode_assignment(inst: Instance, s: EditSet) -> Assignment:
    """Reads the assignment off a zero-excess solution.

    The clusters of G with `s` applied decide, for each variable gadget,
    whether the even pairs (false) or the odd pairs (true) are merged.
    Variables without a gadget are false.

    Raises:
      CertificateError: If `s` is not a zero-excess solution, a clique is
        split, a gadget mixes parities, or the decoded assignment does not
        satisfy the formula.
    """
    if len(s) != len(inst.packing):
        raise CertificateError(f"{len(s)} edits for {len(inst.packing)} packed P3s")
    try:
        edited = apply_edits(inst.graph, s)
    except GraphError as e:
        raise CertificateError(str(e)) from e
    if not is_cluster_graph(edited):
        raise CertificateError("the edits do not produce a cluster graph")

    cluster_of = {}
    for k, component in enumerate(components(edited.vertices(), edited.edges())):
        for v in component:
            cluster_of[v] = k
    clique_cluster = {}
    for c in inst.cliques.cliques():
        found = {cluster_of[v] for v in inst.cliques.members(c)}
        if len(found) != 1:
            raise CertificateError(f"{c} is split across clusters")
        clique_cluster[c] = found.pop()

    f = inst.formula
    values = []
    for i in range(f.variable_count):
        gadget = inst.gadget(i)
        even = [clique_cluster[a] == clique_cluster[b] for a, b in truth_pairs(gadget, False)]
        odd = [clique_cluster[a] == clique_cluster[b] for a, b in truth_pairs(gadget, True)]
        if all(even) and not any(odd):
            values.append(False)
        elif all(odd) and not any(even):
            values.append(True)
        else:
            raise CertificateError(f"gadget of x{i} merges pairs of both parities")
    a = Assignment(tuple(values))
    if not f.is_satisfied_by(a):
        raise CertificateError("the decoded assignment does not satisfy the formula")
    return a
