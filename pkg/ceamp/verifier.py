"""Independent checks of reduced instances and candidate solutions.

Everything is recomputed from the instance as loaded: coverage maps,
proto-clusters, the merging model and the levels. Checks never raise on a
violation; they report it.
"""

import itertools
from collections import Counter
from collections.abc import Iterable

from ceamp import config as config_lib
from ceamp.errors import GraphError
from ceamp.graph_core import (
    CliquePartition,
    EditKind,
    EditSet,
    Graph,
    Packing,
    Pair,
    apply_edits,
    components,
    is_cluster_graph,
    vertex_incidence,
    pair,
    pair_str,
    proto_clusters,
)
from ceamp.merging_model import check_levels_acyclic
from ceamp.reduction import Instance, dividing_pairs, expected_clique_size
from ceamp.structured_outputs import CheckResult, VerificationReport

# Witness lists are cut to this many entries.
WITNESS_LIMIT = 20


def _result(check: str, violations: list[str]) -> CheckResult:
    if len(violations) > WITNESS_LIMIT:
        violations = violations[:WITNESS_LIMIT] + [
            f"... and {len(violations) - WITNESS_LIMIT} more"
        ]
    return CheckResult(check=check, status="fail" if violations else "pass", witness=violations)


def _pair_counts(h: Iterable) -> Counter:
    counts: Counter = Counter()
    for p3 in h:
        counts.update(p3.pairs())
    return counts


def verify_packing(inst: Instance) -> VerificationReport:
    """Checks that every packed triple is an induced P3 and no pair lies in two of them."""
    g, h = inst.graph, inst.packing
    not_induced = []
    for p3 in h:
        if not all(v in g for v in p3.vertices) or not p3.is_induced_in(g):
            not_induced.append(f"{p3} is not an induced P3")
    overlaps = []
    first: dict[Pair, object] = {}
    for p3 in h:
        for p in p3.pairs():
            if p in first:
                overlaps.append(f"{first[p]} and {p3} share {pair_str(p)}")
            else:
                first[p] = p3
    return VerificationReport(
        checks=[_result("induced_p3s", not_induced), _result("modification_disjoint", overlaps)]
    )


def verify_structure(
    inst: Instance, conf: config_lib.VerifierConfig | None = None
) -> VerificationReport:
    """Runs the seven structural checks of a reduced instance.

    1. the proto-clusters are exactly the declared cliques;
    2. clique sizes follow the size table;
    3. all pairs between cliques adjacent in the merging model are covered
       exactly once;
    4. Q^1 x Q^4 and K_{4pi+1} x Q^1 pairs are uncovered non-edges;
    5. edges outside L_0 join different levels and declared levels match;
    6. per-vertex P3 incidence, judged only against `conf.incidence_bound`;
    7. every edge between two cliques is covered.
    """
    conf = conf or config_lib.VerifierConfig()
    g, h, cliques, model = inst.graph, inst.packing, inst.cliques, inst.model
    counts = _pair_counts(h)
    checks = []

    declared = {tuple(block) for block in cliques.blocks()}
    found = {tuple(block) for block in proto_clusters(g, h)}
    mismatch = [
        f"proto-cluster {{{', '.join(map(str, block))}}} is not a declared clique"
        for block in sorted(found - declared)
    ] + [
        f"clique {{{', '.join(map(str, block))}}} is not a proto-cluster"
        for block in sorted(declared - found)
    ]
    checks.append(_result("proto_clusters", mismatch))

    sizes = []
    for c in cliques.cliques():
        try:
            expected = expected_clique_size(inst, c)
        except (IndexError, KeyError, ValueError) as e:
            sizes.append(f"{c} has no place in the size table ({e})")
            continue
        if cliques.size(c) != expected:
            sizes.append(f"{c} has {cliques.size(c)} vertices, expected {expected}")
    checks.append(_result("clique_sizes", sizes))

    coverage = []
    for a, b in model.edges():
        for u, v in itertools.product(cliques.members(a), cliques.members(b)):
            count = counts[pair(u, v)]
            if count != 1:
                coverage.append(f"{pair_str(pair(u, v))} covered {count} times")
    checks.append(_result("model_coverage", coverage))

    dividing = []
    for a, b in dividing_pairs(inst):
        for u, v in itertools.product(cliques.members(a), cliques.members(b)):
            if g.has_edge(u, v):
                dividing.append(f"{pair_str(pair(u, v))} is an edge")
            elif counts[pair(u, v)]:
                dividing.append(f"{pair_str(pair(u, v))} is covered")
    checks.append(_result("dividing_non_edges", dividing))

    levels = []
    if not check_levels_acyclic(model):
        levels += [
            f"{a} and {b} share level {model.level(a)}"
            for a, b in model.edges()
            if model.level(a) == model.level(b) and model.level(a) != 0
        ] or ["orientation by level has a cycle"]
    levels += [
        f"{c} declared on level {cliques.level(c)}, expected {c.level}"
        for c in cliques.cliques()
        if cliques.level(c) != c.level
    ]
    checks.append(_result("levels", levels))

    incidence = vertex_incidence(g, h)
    peak = int(incidence.max()) if incidence.size else 0
    if conf.incidence_bound is None:
        checks.append(CheckResult(check="incidence", status="info", witness=[str(peak)]))
    else:
        status = "pass" if peak <= conf.incidence_bound else "fail"
        checks.append(CheckResult(check="incidence", status=status, witness=[str(peak)]))

    uncovered = [
        f"edge {pair_str((u, v))} between {cliques.clique_of(u)} and {cliques.clique_of(v)} is uncovered"
        for u, v in g.edges()
        if cliques.clique_of(u) != cliques.clique_of(v) and not counts[(u, v)]
    ]
    checks.append(_result("inter_clique_coverage", uncovered))
    return VerificationReport(checks=checks)


def _edited_graph(g: Graph, s: EditSet) -> tuple[Graph, list[str]]:
    """Applies `s` tolerantly, returning the result and the mistagged edits."""
    try:
        return apply_edits(g, s), []
    except GraphError:
        pass
    result = g.copy()
    mistagged = []
    for (u, v), kind in s.items():
        if u not in g or v not in g:
            mistagged.append(f"{pair_str((u, v))} leaves the vertex set")
            continue
        if (kind == EditKind.DELETE) != g.has_edge(u, v):
            mistagged.append(f"{pair_str((u, v))} tagged {kind}")
        if result.has_edge(u, v):
            result.remove_edge(u, v)
        else:
            result.add_edge(u, v)
    return result, mistagged


def check_solution(
    g: Graph,
    h: Packing,
    s: EditSet,
    cliques: CliquePartition | None = None,
    ell: int = 0,
) -> VerificationReport:
    """Checks that `s` is a cluster editing set of `g` with excess at most `ell` over `h`.

    For ell = 0 it must also put exactly one edit into every packed P3 and
    nothing else; with `cliques` given, every cluster must be a union of them.
    """
    edited, mistagged = _edited_graph(g, s)
    checks = [_result("edit_tags", mistagged)]
    checks.append(
        _result("cluster_graph", [] if is_cluster_graph(edited) else ["G with the edits applied has an induced P3"])
    )
    size = []
    if len(s) > len(h) + ell:
        size.append(f"{len(s)} edits exceed |H| + ell = {len(h) + ell}")
    if ell == 0 and len(s) != len(h):
        size.append(f"{len(s)} edits, |H| = {len(h)}")
    checks.append(_result("size", sorted(set(size))))
    checks.append(
        _result(
            "edits_covered",
            [f"edit {pair_str(p)} lies in no packed P3" for p in s if h.owner(p) is None],
        )
    )
    per_p3 = []
    for p3 in h:
        hits = sum(1 for p in p3.pairs() if p in s)
        if hits != 1:
            per_p3.append(f"{p3} has {hits} edits")
    checks.append(_result("one_edit_per_p3", per_p3))
    if cliques is not None:
        cluster_of = {}
        for k, component in enumerate(components(edited.vertices(), edited.edges())):
            for v in component:
                cluster_of[v] = k
        split = [
            f"{c} is split across clusters"
            for c in cliques.cliques()
            if len({cluster_of[v] for v in cliques.members(c)}) > 1
        ]
        checks.append(_result("clusters_are_clique_unions", split))
    return VerificationReport(checks=checks)


def verify_solution(inst: Instance, s: EditSet) -> VerificationReport:
    """Checks that `s` is a zero-excess solution of `inst`."""
    return check_solution(inst.graph, inst.packing, s, inst.cliques, inst.ell)
