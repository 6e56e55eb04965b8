"""Graph, P3, packing, edit-set and cluster-graph primitives."""

import dataclasses
import enum
import re
import sys
from collections.abc import Iterable, Iterator, Mapping, Sequence

import numpy as np
from scipy.sparse import coo_matrix
from scipy.sparse.csgraph import connected_components

from ceamp import constants, structured_outputs
from ceamp.custom_types import CliqueText, Level, Vertex, VertexText
from ceamp.errors import GraphError, ModificationDisjointnessError

Pair = tuple[Vertex, Vertex]

_VERTEX_RE = re.compile(r"^([vQT])\[(\d+)\]\[(\d+)\]\[(\d+)\]$")
_CLIQUE_RE = re.compile(r"^([KQT])\[(\d+)\]\[(\d+)\]$")
_CLIQUE_KIND = {"v": "K", "Q": "Q", "T": "T"}
# Level of Q^k by k.
_Q_LEVELS = {
    1: constants.LEVEL_Q1_Q4,
    4: constants.LEVEL_Q1_Q4,
    3: constants.LEVEL_Q3,
    2: constants.LEVEL_Q2,
}


@dataclasses.dataclass(frozen=True, order=True)
class CliqueId:
    """Identifier of a clique of V(H).

    Attributes:
      kind: "K" for K^i_j, "Q" for Q^k_d, "T" for T^i_d.
      a: i for K, d for Q and T.
      b: j for K, k for Q, i for T.
    """
    kind: str
    a: int
    b: int

    @classmethod
    def variable(cls, i: int, j: int) -> "CliqueId":
        return cls("K", i, j)

    @classmethod
    def clause(cls, d: int, k: int) -> "CliqueId":
        return cls("Q", d, k)

    @classmethod
    def transfer(cls, d: int, i: int) -> "CliqueId":
        return cls("T", d, i)

    @property
    def level(self) -> Level:
        if self.kind == "K":
            return constants.LEVEL_VARIABLE
        if self.kind == "T":
            return constants.LEVEL_TRANSFER
        return _Q_LEVELS[self.b]

    def __str__(self) -> CliqueText:
        return f"{self.kind}[{self.a}][{self.b}]"

    @classmethod
    def parse(cls, text: CliqueText) -> "CliqueId":
        match = _CLIQUE_RE.match(text)
        if match is None:
            raise GraphError(f"bad clique id '{text}'")
        kind, a, b = match.groups()
        return cls(kind, int(a), int(b))


@dataclasses.dataclass(frozen=True, order=True)
class VertexId:
    """Provenance-structured vertex identifier.

    `v[i][j][p]` is v^i_{j,p}, `Q[d][k][t]` the t-th vertex of Q^k_d and
    `T[d][i][t]` the t-th vertex of T^i_d.
    """
    kind: str
    a: int
    b: int
    c: int

    @classmethod
    def var(cls, i: int, j: int, p: int) -> "VertexId":
        return cls("v", i, j, p)

    @classmethod
    def clause(cls, d: int, k: int, t: int) -> "VertexId":
        return cls("Q", d, k, t)

    @classmethod
    def transfer(cls, d: int, i: int, t: int) -> "VertexId":
        return cls("T", d, i, t)

    @property
    def clique(self) -> CliqueId:
        return CliqueId(_CLIQUE_KIND[self.kind], self.a, self.b)

    def __str__(self) -> VertexText:
        return f"{self.kind}[{self.a}][{self.b}][{self.c}]"

    @classmethod
    def parse(cls, text: VertexText) -> "VertexId":
        match = _VERTEX_RE.match(text)
        if match is None:
            raise GraphError(f"bad vertex id '{text}'")
        kind, a, b, c = match.groups()
        return cls(kind, int(a), int(b), int(c))


def pair(u: Vertex, v: Vertex) -> Pair:
    """Returns the canonical (sorted) form of the unordered pair {u, v}."""
    if u == v:
        raise GraphError(f"pair with identical endpoints {u}")
    return (u, v) if u < v else (v, u)


def pair_str(p: Pair) -> str:
    return f"{{{p[0]}, {p[1]}}}"


if sys.version_info >= (3, 11):
    StrEnum = enum.StrEnum
else:

    class StrEnum(str, enum.Enum):
        """Backport of enum.StrEnum (Python 3.11) for Python 3.10."""

        __str__ = str.__str__
        __format__ = str.__format__

        @staticmethod
        def _generate_next_value_(name, start, count, last_values):
            return name.lower()


class Role(StrEnum):
    VAR = "var"
    TRA = "tra"
    PAD = "pad"


class EditKind(StrEnum):
    DELETE = "delete"
    INSERT = "insert"


class Graph:
    """A simple undirected graph over sortable hashable vertices."""

    def __init__(self, vertices: Iterable[Vertex] = (), edges: Iterable[Pair] = ()):
        self._adj: dict[Vertex, set[Vertex]] = {}
        self._edge_count = 0
        for v in vertices:
            self.add_vertex(v)
        for u, v in edges:
            self.add_edge(u, v)

    def __repr__(self) -> str:
        return f"Graph(|V|={self.vertex_count}, |E|={self.edge_count})"

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Graph):
            return NotImplemented
        return self._adj == other._adj

    def __contains__(self, v: Vertex) -> bool:
        return v in self._adj

    @property
    def vertex_count(self) -> int:
        return len(self._adj)

    @property
    def edge_count(self) -> int:
        return self._edge_count

    def add_vertex(self, v: Vertex):
        self._adj.setdefault(v, set())

    def add_edge(self, u: Vertex, v: Vertex):
        if u == v:
            raise GraphError(f"self-loop at {u}")
        if u not in self._adj or v not in self._adj:
            raise GraphError(f"edge {pair_str((u, v))} has an endpoint outside the graph")
        if v not in self._adj[u]:
            self._adj[u].add(v)
            self._adj[v].add(u)
            self._edge_count += 1

    def remove_edge(self, u: Vertex, v: Vertex):
        if not self.has_edge(u, v):
            raise GraphError(f"{pair_str((u, v))} is not an edge")
        self._adj[u].discard(v)
        self._adj[v].discard(u)
        self._edge_count -= 1

    def has_edge(self, u: Vertex, v: Vertex) -> bool:
        return v in self._adj.get(u, ())

    def neighbors(self, v: Vertex) -> frozenset[Vertex]:
        return frozenset(self._adj[v])

    def degree(self, v: Vertex) -> int:
        return len(self._adj[v])

    def vertices(self) -> list[Vertex]:
        return sorted(self._adj)

    def edges(self) -> Iterator[Pair]:
        """Yields every edge once, in canonical order."""
        for u in self.vertices():
            for v in sorted(self._adj[u]):
                if u < v:
                    yield (u, v)

    def copy(self) -> "Graph":
        g = Graph()
        g._adj = {v: set(nbrs) for v, nbrs in self._adj.items()}
        g._edge_count = self._edge_count
        return g


def components(vertices: Sequence[Vertex], edges: Iterable[Pair]) -> list[list[Vertex]]:
    """Returns the connected components of (vertices, edges).

    Each component is sorted, and components are ordered by their smallest
    vertex.
    """
    vertices = sorted(vertices)
    n = len(vertices)
    if n == 0:
        return []
    index = {v: k for k, v in enumerate(vertices)}
    rows, cols = [], []
    for u, v in edges:
        rows.append(index[u])
        cols.append(index[v])
    matrix = coo_matrix(
        (np.ones(len(rows), dtype=np.int8), (rows, cols)), shape=(n, n)
    ).tocsr()
    _, labels = connected_components(matrix, directed=False)
    groups: dict[int, list[Vertex]] = {}
    for k, label in enumerate(labels):
        groups.setdefault(int(label), []).append(vertices[k])
    return sorted(groups.values(), key=lambda group: group[0])


def vertex_incidence(g: Graph, h: Iterable["PackedP3"]) -> np.ndarray:
    """Number of packed P3s containing each vertex, in vertex order."""
    index = {v: k for k, v in enumerate(g.vertices())}
    hits = [index[v] for p3 in h for v in p3.vertices if v in index]
    return np.bincount(np.array(hits, dtype=np.int64), minlength=len(index))


def induced_p3s(g: Graph) -> list[tuple[Vertex, Vertex, Vertex]]:
    """Returns every induced P3 (x, y, z) of `g` once, with x < z."""
    result = []
    for y in g.vertices():
        nbrs = sorted(g.neighbors(y))
        for a, x in enumerate(nbrs):
            for z in nbrs[a + 1 :]:
                if not g.has_edge(x, z):
                    result.append((x, y, z))
    return result


def is_cluster_graph(g: Graph) -> bool:
    """Whether every connected component of `g` is a clique."""
    for component in components(g.vertices(), g.edges()):
        k = len(component)
        if sum(g.degree(v) for v in component) != k * (k - 1):
            return False
    return True


@dataclasses.dataclass(frozen=True)
class PackedP3:
    """A packed induced P3 x-y-z with center y.

    Attributes:
      x: First endpoint.
      y: Center.
      z: Second endpoint.
      role: Which part of the packing the P3 belongs to.
    """
    x: Vertex
    y: Vertex
    z: Vertex
    role: Role = Role.VAR

    def __str__(self) -> str:
        return f"{self.role}:{self.x}-{self.y}-{self.z}"

    @property
    def vertices(self) -> tuple[Vertex, Vertex, Vertex]:
        return (self.x, self.y, self.z)

    def pairs(self) -> tuple[Pair, Pair, Pair]:
        """Returns the edges xy, yz and the non-edge xz."""
        return (pair(self.x, self.y), pair(self.y, self.z), pair(self.x, self.z))

    def same_path(self, other: "PackedP3") -> bool:
        """Whether both describe the same path, ignoring orientation and role."""
        return self.y == other.y and {self.x, self.z} == {other.x, other.z}

    def is_induced_in(self, g: Graph) -> bool:
        return (
            g.has_edge(self.x, self.y)
            and g.has_edge(self.y, self.z)
            and self.x != self.z
            and not g.has_edge(self.x, self.z)
        )


class Packing:
    """An ordered family of packed P3s indexed by the pairs they contain.

    With `strict` set, adding a P3 that shares a pair with a member raises
    ModificationDisjointnessError. Non-strict packings keep the first owner of
    every pair and exist so that loaded documents can be verified.
    """

    def __init__(self, members: Iterable[PackedP3] = (), strict: bool = True):
        self.strict = strict
        self._members: list[PackedP3] = []
        self._owner: dict[Pair, PackedP3] = {}
        for p3 in members:
            self.add(p3)

    def __len__(self) -> int:
        return len(self._members)

    def __iter__(self) -> Iterator[PackedP3]:
        return iter(self._members)

    def __getitem__(self, k: int) -> PackedP3:
        return self._members[k]

    def __repr__(self) -> str:
        return f"Packing({len(self)} P3s)"

    def add(self, p3: PackedP3):
        pairs = p3.pairs()
        if self.strict:
            for p in pairs:
                other = self._owner.get(p)
                if other is not None:
                    raise ModificationDisjointnessError(other, p3, p)
        self._members.append(p3)
        for p in pairs:
            self._owner.setdefault(p, p3)

    def extend(self, p3s: Iterable[PackedP3]):
        for p3 in p3s:
            self.add(p3)

    def remove(self, p3: PackedP3):
        self._members.remove(p3)
        for p in p3.pairs():
            if self._owner.get(p) == p3:
                del self._owner[p]

    def owner(self, p: Pair) -> PackedP3 | None:
        """Returns the member containing pair `p`, if any."""
        return self._owner.get(p)

    def find(self, x: Vertex, y: Vertex, z: Vertex) -> PackedP3 | None:
        """Returns the member describing the path x-y-z in either orientation."""
        candidate = self._owner.get(pair(x, y))
        probe = PackedP3(x, y, z)
        if candidate is not None and candidate.same_path(probe):
            return candidate
        return None

    def by_role(self, role: Role) -> list[PackedP3]:
        return [p3 for p3 in self._members if p3.role == role]

    def count(self, role: Role) -> int:
        return sum(1 for p3 in self._members if p3.role == role)


def covered_pairs(h: Iterable[PackedP3]) -> dict[Pair, PackedP3]:
    """Maps each of the three pairs of every member of `h` to that member.

    Raises:
      ModificationDisjointnessError: If two members share a pair.
    """
    covered: dict[Pair, PackedP3] = {}
    for p3 in h:
        for p in p3.pairs():
            other = covered.get(p)
            if other is not None:
                raise ModificationDisjointnessError(other, p3, p)
            covered[p] = p3
    return covered


def proto_clusters(g: Graph, h: Packing) -> list[list[Vertex]]:
    """Returns the connected components of `g` restricted to edges no packed P3 covers."""
    uncovered = (e for e in g.edges() if h.owner(e) is None)
    return components(g.vertices(), uncovered)


class EditSet:
    """A set of vertex pairs, each tagged as an edge deletion or an insertion."""

    def __init__(self, edits: Iterable[tuple[Pair, EditKind]] = ()):
        self._edits: dict[Pair, EditKind] = {}
        for (u, v), kind in edits:
            p = pair(u, v)
            if p in self._edits:
                raise GraphError(f"pair {pair_str(p)} edited twice")
            self._edits[p] = EditKind(kind)

    @classmethod
    def from_pairs(cls, g: Graph, pairs: Iterable[Pair]) -> "EditSet":
        """Tags every pair against `g`: edges become deletions, non-edges insertions."""
        return cls(
            (p, EditKind.DELETE if g.has_edge(*p) else EditKind.INSERT) for p in pairs
        )

    def __len__(self) -> int:
        return len(self._edits)

    def __iter__(self) -> Iterator[Pair]:
        return iter(sorted(self._edits))

    def __contains__(self, p: Pair) -> bool:
        return p in self._edits

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, EditSet):
            return NotImplemented
        return self._edits == other._edits

    def __repr__(self) -> str:
        return f"EditSet({self.deletion_count} deletions, {self.insertion_count} insertions)"

    def kind(self, p: Pair) -> EditKind:
        return self._edits[p]

    def items(self) -> list[tuple[Pair, EditKind]]:
        return [(p, self._edits[p]) for p in self]

    @property
    def deletion_count(self) -> int:
        return sum(1 for k in self._edits.values() if k == EditKind.DELETE)

    @property
    def insertion_count(self) -> int:
        return sum(1 for k in self._edits.values() if k == EditKind.INSERT)

    def to_json(self) -> str:
        records = [
            structured_outputs.EditRecord(u=str(u), v=str(v), kind=kind.value)
            for (u, v), kind in self.items()
        ]
        return structured_outputs.EditSetDocument.dump_json(records, indent=2).decode() + "\n"

    @classmethod
    def from_json(cls, text: str | bytes) -> "EditSet":
        records = structured_outputs.EditSetDocument.validate_json(text)
        return cls(
            ((VertexId.parse(r.u), VertexId.parse(r.v)), EditKind(r.kind)) for r in records
        )


def edits_for_partition(g: Graph, blocks: Iterable[Iterable[Vertex]]) -> EditSet:
    """Returns the edit set turning `g` into the disjoint union of cliques on `blocks`.

    That is every edge between two blocks and every non-edge inside a block.
    """
    block_of: dict[Vertex, int] = {}
    for k, block in enumerate(blocks):
        for v in block:
            block_of[v] = k
    pairs = [e for e in g.edges() if block_of[e[0]] != block_of[e[1]]]
    members: dict[int, list[Vertex]] = {}
    for v in sorted(block_of):
        members.setdefault(block_of[v], []).append(v)
    for block in members.values():
        for a, u in enumerate(block):
            nbrs = g.neighbors(u)
            for v in block[a + 1 :]:
                if v not in nbrs:
                    pairs.append((u, v))
    return EditSet.from_pairs(g, pairs)


def apply_edits(g: Graph, s: EditSet) -> Graph:
    """Returns G triangle S.

    Raises:
      GraphError: If a deletion is not an edge of `g` or an insertion is.
    """
    result = g.copy()
    for (u, v), kind in s.items():
        if u not in g or v not in g:
            raise GraphError(f"edit {pair_str((u, v))} leaves the vertex set")
        if kind == EditKind.DELETE:
            if not g.has_edge(u, v):
                raise GraphError(f"deletion of non-edge {pair_str((u, v))}")
            result.remove_edge(u, v)
        else:
            if g.has_edge(u, v):
                raise GraphError(f"insertion of existing edge {pair_str((u, v))}")
            result.add_edge(u, v)
    return result


class CliquePartition:
    """The cliques of V(H): a map from every vertex to its clique.

    Levels default to the ones implied by the clique ids; a loaded document
    may declare others.
    """

    def __init__(
        self,
        assignment: Mapping[Vertex, CliqueId],
        levels: Mapping[CliqueId, Level] | None = None,
    ):
        self._clique_of = dict(assignment)
        self._levels = dict(levels or {})
        members: dict[CliqueId, list[Vertex]] = {}
        for v in sorted(self._clique_of):
            members.setdefault(self._clique_of[v], []).append(v)
        self._members = members

    @classmethod
    def from_vertices(cls, vertices: Iterable[VertexId]) -> "CliquePartition":
        return cls({v: v.clique for v in vertices})

    def __len__(self) -> int:
        return len(self._members)

    def __iter__(self) -> Iterator[CliqueId]:
        return iter(self.cliques())

    def __contains__(self, c: CliqueId) -> bool:
        return c in self._members

    def clique_of(self, v: Vertex) -> CliqueId:
        return self._clique_of[v]

    def members(self, c: CliqueId) -> list[Vertex]:
        return self._members.get(c, [])

    def level(self, c: CliqueId) -> Level:
        return self._levels.get(c, c.level)

    def size(self, c: CliqueId) -> int:
        return len(self._members.get(c, ()))

    def cliques(self) -> list[CliqueId]:
        return sorted(self._members)

    def blocks(self) -> list[list[Vertex]]:
        return sorted((self._members[c] for c in self._members), key=lambda b: b[0])


_ROLE_COLORS = {Role.VAR: "blue", Role.TRA: "red", Role.PAD: "gray"}


def to_dot(g: Graph, h: Packing, cliques: CliquePartition | None = None, name: str = "G") -> str:
    """Renders `g` as DOT.

    Every clique becomes a `cluster_*` subgraph, packed edges are coloured by
    role and packed non-edges are drawn dashed.
    """
    lines = [f"graph {name} {{", "  node [shape=point];"]
    if cliques is not None:
        for c in cliques.cliques():
            label = str(c).replace("[", "_").replace("]", "")
            lines.append(f"  subgraph cluster_{label} {{")
            lines.append(f'    label="{c}";')
            for v in cliques.members(c):
                lines.append(f'    "{v}";')
            lines.append("  }")
    else:
        for v in g.vertices():
            lines.append(f'  "{v}";')
    for u, v in g.edges():
        owner = h.owner((u, v))
        attributes = f" [color={_ROLE_COLORS[owner.role]}]" if owner else ""
        lines.append(f'  "{u}" -- "{v}"{attributes};')
    for p3 in h:
        x, z = pair(p3.x, p3.z)
        lines.append(f'  "{x}" -- "{z}" [style=dashed, color={_ROLE_COLORS[p3.role]}];')
    lines.append("}")
    return "\n".join(lines) + "\n"
