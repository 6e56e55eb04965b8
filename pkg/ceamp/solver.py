"""Exact zero-excess search for CEaMP and two brute-force oracles.

A zero-excess solution never cuts an uncovered edge, so it never splits a
proto-cluster. The search therefore works on proto-clusters and decides, for
pairs of them, whether they end up merged or divided. Every packed P3 turns
into a table of the relations among its (at most three) proto-clusters under
which it receives exactly one edit.
"""
import dataclasses
import itertools
import threading
import time
from collections import Counter
from collections.abc import Callable
from concurrent.futures import ThreadPoolExecutor

import numpy as np
from absl import logging

from ceamp import config as config_lib
from ceamp.custom_types import Vertex
from ceamp.errors import ConstructionError, GuardLimitError, SolverTimeout
from ceamp.graph_core import EditSet, Graph, Packing, PackedP3, edits_for_partition, pair, pair_str, proto_clusters
from ceamp.reduction import Instance
from ceamp.verifier import check_solution, verify_solution

_MERGED, _DIVIDED, _OPEN = range(3)

Labels = tuple[int, ...]


def _set_partitions(k: int) -> list[Labels]:
    """All partitions of k items as restricted growth strings, in lexicographic order."""
    result = []

    def grow(prefix: list[int], blocks: int):
        if len(prefix) == k:
            result.append(tuple(prefix))
            return
        for b in range(blocks + 1):
            grow(prefix + [b], max(blocks, b + 1))

    grow([], 0)
    return result


_PARTITIONS = {k: _set_partitions(k) for k in (1, 2, 3)}


def _key(a: int, b: int) -> tuple[int, int]:
    return (a, b) if a < b else (b, a)


@dataclasses.dataclass(frozen=True)
class _Constraint:
    """The relations among `clusters` under which a packed P3 gets exactly one edit.

    Attributes:
      clusters: Sorted indices of the distinct proto-clusters the P3 touches.
      allowed: Labellings of `clusters`, one label per cluster, equal labels
        meaning merged.
    """
    clusters: tuple[int, ...]
    allowed: tuple[Labels, ...]

    def local_pairs(self) -> list[tuple[int, int]]:
        return list(itertools.combinations(range(len(self.clusters)), 2))


@dataclasses.dataclass
class _Problem:
    clusters: list[list[Vertex]]
    constraints: list[_Constraint] = dataclasses.field(default_factory=list)
    # Constraint indices per proto-cluster.
    watching: list[list[int]] = dataclasses.field(default_factory=list)
    # Proto-cluster pairs that may share a cluster: linked, and every
    # non-edge between them covered.
    mergeable: set[tuple[int, int]] = dataclasses.field(default_factory=set)
    conflict: str | None = None


def _edit_count(g: Graph, p3: PackedP3, local: dict[Vertex, int], labels: Labels) -> int:
    return sum(
        1 for u, v in p3.pairs() if g.has_edge(u, v) != (labels[local[u]] == labels[local[v]])
    )


def _respects(mergeable: set[tuple[int, int]], clusters: tuple[int, ...], labels: Labels) -> bool:
    return all(
        _key(clusters[i], clusters[j]) in mergeable
        for i, j in itertools.combinations(range(len(clusters)), 2)
        if labels[i] == labels[j]
    )


def _build_problem(g: Graph, h: Packing) -> _Problem:
    clusters = proto_clusters(g, h)
    problem = _Problem(clusters, watching=[[] for _ in clusters])
    cluster_of = {v: k for k, block in enumerate(clusters) for v in block}

    for block in clusters:
        for u, v in itertools.combinations(block, 2):
            if not g.has_edge(u, v) and h.owner(pair(u, v)) is None:
                problem.conflict = f"uncovered non-edge {pair_str(pair(u, v))} inside a proto-cluster"
                return problem

    edges_between: Counter = Counter()
    for u, v in g.edges():
        a, b = cluster_of[u], cluster_of[v]
        if a != b:
            edges_between[_key(a, b)] += 1
    covered_non_edges: Counter = Counter()
    linked = set()
    for p3 in h:
        for u, v in p3.pairs():
            a, b = cluster_of[u], cluster_of[v]
            if a == b:
                continue
            linked.add(_key(a, b))
            if not g.has_edge(u, v):
                covered_non_edges[_key(a, b)] += 1
    for a, b in linked:
        non_edges = len(clusters[a]) * len(clusters[b]) - edges_between[(a, b)]
        if non_edges == covered_non_edges[(a, b)]:
            problem.mergeable.add((a, b))

    seen = set()
    for p3 in h:
        involved = tuple(sorted({cluster_of[v] for v in p3.vertices}))
        position = {c: k for k, c in enumerate(involved)}
        local = {v: position[cluster_of[v]] for v in p3.vertices}
        feasible = [
            labels
            for labels in _PARTITIONS[len(involved)]
            if _respects(problem.mergeable, involved, labels)
        ]
        allowed = tuple(labels for labels in feasible if _edit_count(g, p3, local, labels) == 1)
        if not allowed:
            problem.conflict = f"{p3} cannot receive exactly one edit"
            return problem
        if len(allowed) == len(feasible) or (involved, allowed) in seen:
            continue
        seen.add((involved, allowed))
        for c in involved:
            problem.watching[c].append(len(problem.constraints))
        problem.constraints.append(_Constraint(involved, allowed))
    return problem


class _State:
    """Union-find over proto-clusters with explicit divisions between classes.

    `members` and `divided` are replaced, never mutated, so copies share them.
    """

    def __init__(self, n: int):
        self.parent = list(range(n))
        self.members: dict[int, tuple[int, ...]] = {k: (k,) for k in range(n)}
        self.divided: dict[int, frozenset[int]] = {}

    def copy(self) -> "_State":
        other = _State.__new__(_State)
        other.parent = list(self.parent)
        other.members = dict(self.members)
        other.divided = dict(self.divided)
        return other

    def find(self, a: int) -> int:
        while self.parent[a] != a:
            self.parent[a] = self.parent[self.parent[a]]
            a = self.parent[a]
        return a

    def _can_merge(self, problem: _Problem, ra: int, rb: int) -> bool:
        return all(
            _key(x, y) in problem.mergeable
            for x in self.members[ra]
            for y in self.members[rb]
        )

    def relation(self, problem: _Problem, a: int, b: int) -> int:
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return _MERGED
        if rb in self.divided.get(ra, ()) or not self._can_merge(problem, ra, rb):
            return _DIVIDED
        return _OPEN

    def merge(self, problem: _Problem, a: int, b: int) -> tuple[int, ...] | None:
        """Joins the classes of `a` and `b`; returns the touched clusters, or None on a conflict."""
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return ()
        if rb in self.divided.get(ra, ()) or not self._can_merge(problem, ra, rb):
            return None
        if len(self.members[ra]) < len(self.members[rb]):
            ra, rb = rb, ra
        self.parent[rb] = ra
        self.members[ra] = self.members[ra] + self.members.pop(rb)
        moved = self.divided.pop(rb, frozenset())
        for r in moved:
            self.divided[r] = (self.divided[r] - {rb}) | {ra}
        joined = self.divided.get(ra, frozenset()) | moved
        if joined:
            self.divided[ra] = joined
        return self.members[ra]

    def divide(self, a: int, b: int) -> tuple[int, ...] | None:
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return None
        if rb in self.divided.get(ra, ()):
            return ()
        self.divided[ra] = self.divided.get(ra, frozenset()) | {rb}
        self.divided[rb] = self.divided.get(rb, frozenset()) | {ra}
        return self.members[ra] + self.members[rb]

    def blocks(self, problem: _Problem) -> list[list[Vertex]]:
        return [
            [v for k in sorted(members) for v in problem.clusters[k]]
            for _, members in sorted(self.members.items())
        ]


def _options(
    problem: _Problem, state: _State, con: _Constraint
) -> tuple[list[Labels], dict[tuple[int, int], int]]:
    """The allowed labellings of `con` consistent with `state`, and the current relations."""
    relations = {
        (i, j): state.relation(problem, con.clusters[i], con.clusters[j])
        for i, j in con.local_pairs()
    }
    options = [
        labels
        for labels in con.allowed
        if all(
            r == _OPEN or (r == _MERGED) == (labels[i] == labels[j])
            for (i, j), r in relations.items()
        )
    ]
    return options, relations


def _propagate(problem: _Problem, state: _State, queue: list[int]) -> bool:
    """Forces every pair all remaining options agree on; False on a dead end."""
    pending = set(queue)
    while queue:
        index = queue.pop()
        pending.discard(index)
        con = problem.constraints[index]
        options, relations = _options(problem, state, con)
        if not options:
            return False
        for (i, j), r in relations.items():
            if r != _OPEN:
                continue
            together = {labels[i] == labels[j] for labels in options}
            if len(together) != 1:
                continue
            a, b = con.clusters[i], con.clusters[j]
            touched = state.merge(problem, a, b) if together.pop() else state.divide(a, b)
            if touched is None:
                return False
            for c in touched:
                for k in problem.watching[c]:
                    if k not in pending:
                        pending.add(k)
                        queue.append(k)
            # Relations are stale now; the touched constraint is queued again.
            break
    return True


def _decide(problem: _Problem, state: _State, a: int, b: int, merge: bool) -> _State | None:
    child = state.copy()
    touched = child.merge(problem, a, b) if merge else child.divide(a, b)
    if touched is None:
        return None
    queue = sorted({k for c in touched for k in problem.watching[c]})
    return child if _propagate(problem, child, queue) else None


def _select(problem: _Problem, state: _State) -> tuple[int, int] | None:
    """The first open pair of the constraint with the fewest options left."""
    best = None
    for con in problem.constraints:
        options, relations = _options(problem, state, con)
        if len(options) < 2 or (best is not None and len(options) >= best[0]):
            continue
        i, j = next(p for p, r in relations.items() if r == _OPEN)
        best = (len(options), con.clusters[i], con.clusters[j])
        if best[0] == 2:
            break
    return None if best is None else best[1:]


def _check_deadline(deadline: float | None):
    if deadline is not None and time.monotonic() > deadline:
        raise SolverTimeout("time limit exceeded")


def _search(
    problem: _Problem,
    root: _State,
    deadline: float | None,
    cancelled: Callable[[], bool] = lambda: False,
) -> tuple[_State | None, int]:
    """Depth-first search below `root`, merge before divide."""
    stack: list[tuple[_State, tuple[int, int, bool] | None]] = [(root, None)]
    nodes = 0
    while stack:
        _check_deadline(deadline)
        if cancelled():
            return None, nodes
        state, decision = stack.pop()
        if decision is not None:
            state = _decide(problem, state, *decision)
            if state is None:
                continue
        nodes += 1
        branch = _select(problem, state)
        if branch is None:
            return state, nodes
        stack.append((state, (*branch, False)))
        stack.append((state, (*branch, True)))
    return None, nodes


def _frontier(problem: _Problem, root: _State, depth: int, deadline: float | None) -> list[_State]:
    """Expands `depth` branching levels breadth-first; leaves stay in place."""
    frontier = [root]
    for _ in range(depth):
        expanded = []
        for state in frontier:
            _check_deadline(deadline)
            branch = _select(problem, state)
            if branch is None:
                expanded.append(state)
                continue
            for merge in (True, False):
                child = _decide(problem, state, *branch, merge)
                if child is not None:
                    expanded.append(child)
        frontier = expanded
    return frontier


def _search_parallel(
    problem: _Problem,
    root: _State,
    conf: config_lib.SolverConfig,
    deadline: float | None,
) -> tuple[_State | None, int]:
    """Explores a frontier on a thread pool and keeps the first witness in frontier order."""
    frontier = _frontier(problem, root, conf.frontier_depth, deadline)
    logging.info("Split the search into %d frontier states over %d threads", len(frontier), conf.threads)
    found = [len(frontier)]
    lock = threading.Lock()

    def explore(index: int, state: _State) -> tuple[_State | None, int]:
        result = _search(problem, state, deadline, lambda: found[0] < index)
        if result[0] is not None:
            with lock:
                found[0] = min(found[0], index)
        return result

    with ThreadPoolExecutor(max_workers=conf.threads) as executor:
        futures = [executor.submit(explore, k, state) for k, state in enumerate(frontier)]
        results = [future.result() for future in futures]

    nodes = sum(n for _, n in results)
    witness = next((state for state, _ in results if state is not None), None)
    return witness, nodes


def solve_packing(g: Graph, h: Packing, conf: config_lib.SolverConfig | None = None) -> EditSet | None:
    """Decides whether `g` has a cluster editing set of size exactly |h|.

    Args:
      g: The graph.
      h: A modification-disjoint packing of induced P3s of `g`.
      conf: Time limit and threading.

    Returns:
      A verified witness, or None if no zero-excess solution exists.

    Raises:
      SolverTimeout: If the time limit runs out before the answer is known.
    """
    conf = conf or config_lib.SolverConfig()
    start = time.monotonic()
    deadline = None if conf.time_limit is None else start + conf.time_limit

    problem = _build_problem(g, h)
    if problem.conflict is not None:
        logging.info("Infeasible before search: %s", problem.conflict)
        return None
    logging.info(
        "Searching %d proto-clusters under %d constraints from %d packed P3s",
        len(problem.clusters),
        len(problem.constraints),
        len(h),
    )
    root = _State(len(problem.clusters))
    if not _propagate(problem, root, list(range(len(problem.constraints)))):
        logging.info("Infeasible after initial propagation")
        return None

    try:
        if conf.threads > 1:
            state, nodes = _search_parallel(problem, root, conf, deadline)
        else:
            state, nodes = _search(problem, root, deadline)
    except SolverTimeout:
        logging.warning("Search timed out after %.1f seconds", time.monotonic() - start)
        raise
    elapsed = time.monotonic() - start
    if state is None:
        logging.info("Infeasible after %d nodes in %.3f seconds", nodes, elapsed)
        return None

    s = edits_for_partition(g, state.blocks(problem))
    report = check_solution(g, h, s)
    if not report.passed:
        raise ConstructionError(f"search witness fails {report.failed()}")
    logging.info("Found a witness with %d edits after %d nodes in %.3f seconds", len(s), nodes, elapsed)
    return s


def solve_zero_excess(inst: Instance, conf: config_lib.SolverConfig | None = None) -> EditSet | None:
    """Solves a reduced instance; the witness is checked against its cliques as well."""
    s = solve_packing(inst.graph, inst.packing, conf)
    if s is not None:
        report = verify_solution(inst, s)
        if not report.passed:
            raise ConstructionError(f"search witness fails {report.failed()}")
    return s


def _min_cost_labels(
    edges: np.ndarray, non_edges: np.ndarray, base: int, bound: int
) -> tuple[int, list[int]] | None:
    """Cheapest partition of the items, by branch and bound over restricted growth strings.

    Merging items i and j costs `non_edges[i, j]`, keeping them apart costs
    `edges[i, j]`. Only partitions of total cost at most `bound` are reported.
    """
    n = len(edges)
    labels = np.zeros(n, dtype=np.int64)
    best_cost = bound + 1
    best_labels = None

    def grow(i: int, blocks: int, cost: int):
        nonlocal best_cost, best_labels
        if cost >= best_cost:
            return
        if i == n:
            best_cost, best_labels = cost, labels.tolist()
            return
        for b in range(blocks + 1):
            same = labels[:i] == b
            extra = int(non_edges[i, :i][same].sum() + edges[i, :i][~same].sum())
            labels[i] = b
            grow(i + 1, max(blocks, b + 1), cost + extra)

    grow(0, 0, base)
    return None if best_labels is None else (best_cost, best_labels)


def _group(items: list[list[Vertex]], labels: list[int]) -> list[list[Vertex]]:
    groups: dict[int, list[Vertex]] = {}
    for block, label in zip(items, labels):
        groups.setdefault(label, []).extend(block)
    return list(groups.values())


def brute_force_partition_solve(
    g: Graph, h: Packing, conf: config_lib.SolverConfig | None = None
) -> EditSet | None:
    """Enumerates every partition of the proto-clusters of (g, h).

    Returns:
      The edit set of a cheapest partition if it costs exactly |h|, else None.

    Raises:
      GuardLimitError: If there are more proto-clusters than
        `conf.oracle_cluster_limit`.
    """
    conf = conf or config_lib.SolverConfig()
    clusters = proto_clusters(g, h)
    n = len(clusters)
    if n > conf.oracle_cluster_limit:
        raise GuardLimitError(f"{n} proto-clusters exceed the oracle limit {conf.oracle_cluster_limit}")
    cluster_of = {v: k for k, block in enumerate(clusters) for v in block}
    edges = np.zeros((n, n), dtype=np.int64)
    internal = 0
    for u, v in g.edges():
        a, b = cluster_of[u], cluster_of[v]
        if a == b:
            internal += 1
        else:
            edges[a, b] += 1
            edges[b, a] += 1
    sizes = np.array([len(block) for block in clusters], dtype=np.int64)
    non_edges = np.outer(sizes, sizes) - edges
    base = int((sizes * (sizes - 1) // 2).sum()) - internal

    best = _min_cost_labels(edges, non_edges, base, len(h))
    if best is None or best[0] != len(h):
        return None
    return edits_for_partition(g, _group(clusters, best[1]))


def brute_force_cluster_editing(
    g: Graph, k: int, conf: config_lib.SolverConfig | None = None
) -> EditSet | None:
    """A minimum cluster editing set of `g` if it has at most `k` edits.

    Raises:
      GuardLimitError: If `g` has more vertices than `conf.oracle_vertex_limit`.
    """
    conf = conf or config_lib.SolverConfig()
    vertices = g.vertices()
    n = len(vertices)
    if n > conf.oracle_vertex_limit:
        raise GuardLimitError(f"{n} vertices exceed the oracle limit {conf.oracle_vertex_limit}")
    if k < 0:
        return None
    edges = np.array(
        [[int(g.has_edge(u, v)) if u != v else 0 for v in vertices] for u in vertices],
        dtype=np.int64,
    ).reshape(n, n)
    non_edges = 1 - edges - np.eye(n, dtype=np.int64)
    best = _min_cost_labels(edges, non_edges, 0, k)
    if best is None:
        return None
    return edits_for_partition(g, _group([[v] for v in vertices], best[1]))
