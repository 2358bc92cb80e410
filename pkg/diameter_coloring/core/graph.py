"""
Graph representation and distance primitives.

Vertices are integers ``0..n-1`` and vertex sets are bitmasks, so unions,
intersections and domination checks are single integer operations.
"""

import logging
import math
from dataclasses import dataclass
from typing import Dict, Iterable, Iterator, List, Optional, Sequence, Tuple, Union

import networkx as nx

from ..exceptions import ArgumentError, ContractionRejected

logger = logging.getLogger(__name__)

UNREACHABLE = -1
INFINITE = math.inf

Distance = Union[int, float]


def popcount(mask: int) -> int:
    return bin(mask).count("1")


def iter_bits(mask: int) -> Iterator[int]:
    """Yield the positions of the set bits of ``mask`` in increasing order."""
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def mask_of(items: Iterable[int]) -> int:
    mask = 0
    for item in items:
        mask |= 1 << item
    return mask


@dataclass(frozen=True)
class VertexSet:
    """An immutable set of vertex ids backed by a bitmask."""

    mask: int = 0

    @classmethod
    def of(cls, vertices: Iterable[int]) -> "VertexSet":
        return cls(mask_of(vertices))

    @classmethod
    def full(cls, vertex_count: int) -> "VertexSet":
        return cls((1 << vertex_count) - 1)

    def __iter__(self) -> Iterator[int]:
        return iter_bits(self.mask)

    def __len__(self) -> int:
        return popcount(self.mask)

    def __bool__(self) -> bool:
        return self.mask != 0

    def __contains__(self, vertex: object) -> bool:
        return isinstance(vertex, int) and vertex >= 0 and bool(self.mask >> vertex & 1)

    def __or__(self, other: "VertexSet") -> "VertexSet":
        return VertexSet(self.mask | other.mask)

    def __and__(self, other: "VertexSet") -> "VertexSet":
        return VertexSet(self.mask & other.mask)

    def __sub__(self, other: "VertexSet") -> "VertexSet":
        return VertexSet(self.mask & ~other.mask)

    def issubset(self, other: "VertexSet") -> bool:
        return self.mask & ~other.mask == 0

    def isdisjoint(self, other: "VertexSet") -> bool:
        return self.mask & other.mask == 0

    def first(self) -> Optional[int]:
        """Return the lowest vertex id in the set, or None when empty."""
        if not self.mask:
            return None
        return (self.mask & -self.mask).bit_length() - 1

    def to_list(self) -> List[int]:
        return list(iter_bits(self.mask))

    def __repr__(self) -> str:
        return f"VertexSet({self.to_list()})"


class Graph:
    """
    Immutable simple undirected graph.

    Loops are only permitted when ``allows_loops`` is set, which is how
    homomorphism targets are represented. A loop at ``v`` puts ``v`` into its
    own neighborhood.
    """

    __slots__ = ("_vertex_count", "_adjacency", "_allows_loops")

    def __init__(
        self,
        vertex_count: int,
        adjacency: Sequence[int],
        allows_loops: bool = False,
    ):
        """
        Initialize a graph from per-vertex neighbor bitmasks.

        Args:
            vertex_count: Number of vertices
            adjacency: Neighbor bitmask for every vertex
            allows_loops: Whether a vertex may be its own neighbor

        Raises:
            ArgumentError: If the adjacency is not a valid symmetric relation
        """
        if vertex_count < 0:
            raise ArgumentError(f"vertex_count must be non-negative, got {vertex_count}")
        if len(adjacency) != vertex_count:
            raise ArgumentError(
                f"Expected {vertex_count} adjacency masks, got {len(adjacency)}"
            )
        limit = 1 << vertex_count
        for v, mask in enumerate(adjacency):
            if mask < 0 or mask >= limit:
                raise ArgumentError(f"Neighbor mask of vertex {v} has out-of-range ids")
            if not allows_loops and mask >> v & 1:
                raise ArgumentError(f"Loop at vertex {v} in a graph without loops")
            for u in iter_bits(mask):
                if not adjacency[u] >> v & 1:
                    raise ArgumentError(f"Adjacency is not symmetric for edge {v}-{u}")
        self._vertex_count = vertex_count
        self._adjacency: Tuple[int, ...] = tuple(adjacency)
        self._allows_loops = allows_loops

    @classmethod
    def from_edges(
        cls,
        vertex_count: int,
        edges: Iterable[Tuple[int, int]],
        allows_loops: bool = False,
    ) -> "Graph":
        builder = GraphBuilder(vertex_count, allows_loops=allows_loops)
        for u, v in edges:
            builder.add_edge(u, v)
        return builder.build()

    @classmethod
    def from_networkx(cls, nx_graph: nx.Graph, allows_loops: bool = False) -> "Graph":
        """Convert a networkx graph, relabelling nodes by their sorted order."""
        nodes = sorted(nx_graph.nodes())
        index = {node: i for i, node in enumerate(nodes)}
        return cls.from_edges(
            len(nodes),
            ((index[u], index[v]) for u, v in nx_graph.edges()),
            allows_loops=allows_loops,
        )

    def to_networkx(self) -> nx.Graph:
        nx_graph = nx.Graph()
        nx_graph.add_nodes_from(range(self._vertex_count))
        nx_graph.add_edges_from(self.edges())
        return nx_graph

    @property
    def vertex_count(self) -> int:
        return self._vertex_count

    @property
    def allows_loops(self) -> bool:
        return self._allows_loops

    @property
    def adjacency(self) -> Tuple[int, ...]:
        return self._adjacency

    def vertices(self) -> VertexSet:
        return VertexSet.full(self._vertex_count)

    def check_vertex(self, v: int) -> None:
        if not isinstance(v, int) or not 0 <= v < self._vertex_count:
            raise ArgumentError(
                f"Invalid vertex id {v} for a graph with {self._vertex_count} vertices"
            )

    def neighbor_mask(self, v: int) -> int:
        return self._adjacency[v]

    def neighbors(self, v: int) -> VertexSet:
        self.check_vertex(v)
        return VertexSet(self._adjacency[v])

    def closed_neighbors(self, v: int) -> VertexSet:
        self.check_vertex(v)
        return VertexSet(self._adjacency[v] | 1 << v)

    def degree(self, v: int) -> int:
        self.check_vertex(v)
        return popcount(self._adjacency[v])

    def max_degree(self) -> int:
        return max((popcount(mask) for mask in self._adjacency), default=0)

    def has_edge(self, u: int, v: int) -> bool:
        self.check_vertex(u)
        self.check_vertex(v)
        return bool(self._adjacency[u] >> v & 1)

    def has_loop(self, v: int) -> bool:
        return self.has_edge(v, v)

    def has_loops(self) -> bool:
        return any(mask >> v & 1 for v, mask in enumerate(self._adjacency))

    def edges(self) -> Iterator[Tuple[int, int]]:
        """Yield every edge once as ``(u, v)`` with ``u <= v``."""
        for u, mask in enumerate(self._adjacency):
            for v in iter_bits(mask >> u << u):
                yield u, v

    @property
    def edge_count(self) -> int:
        return sum(1 for _ in self.edges())

    def union_neighbors(self, vertices: VertexSet) -> VertexSet:
        """Return the union of the open neighborhoods of ``vertices``."""
        mask = 0
        for v in vertices:
            mask |= self._adjacency[v]
        return VertexSet(mask)

    def neighborhood(self, vertices: VertexSet) -> VertexSet:
        """Return N(X): vertices adjacent to X, excluding X itself."""
        return self.union_neighbors(vertices) - vertices

    def closed_neighborhood(self, vertices: VertexSet) -> VertexSet:
        """Return N[X] = N(X) | X."""
        return self.union_neighbors(vertices) | vertices

    def dominates(self, dominators: VertexSet, targets: VertexSet) -> bool:
        return targets.issubset(self.closed_neighborhood(dominators))

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Graph):
            return NotImplemented
        return (
            self._vertex_count == other._vertex_count
            and self._adjacency == other._adjacency
            and self._allows_loops == other._allows_loops
        )

    def __hash__(self) -> int:
        return hash((self._vertex_count, self._adjacency, self._allows_loops))

    def __repr__(self) -> str:
        return f"Graph(n={self._vertex_count}, edges={list(self.edges())})"


class GraphBuilder:
    """Collects edges and produces an immutable :class:`Graph`."""

    def __init__(self, vertex_count: int, allows_loops: bool = False):
        if vertex_count < 0:
            raise ArgumentError(f"vertex_count must be non-negative, got {vertex_count}")
        self.vertex_count = vertex_count
        self.allows_loops = allows_loops
        self._adjacency = [0] * vertex_count

    def add_edge(self, u: int, v: int) -> bool:
        """
        Add the edge ``uv``.

        Returns:
            False if the edge was already present, True otherwise.

        Raises:
            ArgumentError: For out-of-range ids or a loop when loops are not allowed
        """
        for w in (u, v):
            if not isinstance(w, int) or not 0 <= w < self.vertex_count:
                raise ArgumentError(
                    f"Invalid vertex id {w} for a graph with {self.vertex_count} vertices"
                )
        if u == v and not self.allows_loops:
            raise ArgumentError(f"Loop at vertex {u} is not allowed")
        if self._adjacency[u] >> v & 1:
            return False
        self._adjacency[u] |= 1 << v
        self._adjacency[v] |= 1 << u
        return True

    def build(self) -> Graph:
        return Graph(self.vertex_count, self._adjacency, allows_loops=self.allows_loops)


@dataclass(frozen=True)
class VertexMapping:
    """
    Correspondence between the vertices of a derived graph and its parent.

    Attributes:
        to_new: Parent vertex id -> derived vertex id, for every kept vertex
        to_old: For each derived vertex, the parent vertices it stands for
    """

    to_new: Dict[int, int]
    to_old: Tuple[Tuple[int, ...], ...]
    parent_count: int

    def lift(self, values: Sequence[int]) -> Tuple[int, ...]:
        """Map per-vertex values of the derived graph back onto the parent."""
        lifted: List[Optional[int]] = [None] * self.parent_count
        for new_id, old_ids in enumerate(self.to_old):
            for old_id in old_ids:
                lifted[old_id] = values[new_id]
        if any(value is None for value in lifted):
            raise ArgumentError("Mapping does not cover every parent vertex")
        return tuple(lifted)  # type: ignore[arg-type]


def _remap(mask: int, to_new: Dict[int, int]) -> int:
    result = 0
    for v in iter_bits(mask):
        if v in to_new:
            result |= 1 << to_new[v]
    return result


def bfs_distances(g: Graph, source: int) -> List[int]:
    """
    Hop distances from ``source``.

    Returns:
        A list indexed by vertex; vertices in other components get UNREACHABLE.
    """
    g.check_vertex(source)
    distances = [UNREACHABLE] * g.vertex_count
    adjacency = g.adjacency
    visited = 1 << source
    frontier = visited
    depth = 0
    while frontier:
        reached = 0
        for v in iter_bits(frontier):
            distances[v] = depth
            reached |= adjacency[v]
        frontier = reached & ~visited
        visited |= frontier
        depth += 1
    return distances


def all_pairs_distances(g: Graph) -> List[List[int]]:
    return [bfs_distances(g, v) for v in range(g.vertex_count)]


def eccentricity(g: Graph, v: int) -> Distance:
    distances = bfs_distances(g, v)
    if UNREACHABLE in distances:
        return INFINITE
    return max(distances)


def diameter(g: Graph) -> Distance:
    """Largest pairwise distance; INFINITE for disconnected graphs, 0 for n <= 1."""
    best: Distance = 0
    for v in range(g.vertex_count):
        ecc = eccentricity(g, v)
        if ecc == INFINITE:
            return INFINITE
        best = max(best, ecc)
    return best


def is_connected(g: Graph) -> bool:
    if g.vertex_count == 0:
        return True
    return UNREACHABLE not in bfs_distances(g, 0)


def ball(g: Graph, v: int, p: int, closed: bool = True) -> VertexSet:
    """
    Vertices at distance at most ``p`` from ``v``.

    Args:
        g: The graph
        v: Center vertex
        p: Radius, at least 0
        closed: Include ``v`` itself (N^{<=p}[v]) or not (N^{<=p}(v))
    """
    g.check_vertex(v)
    if p < 0:
        raise ArgumentError(f"Radius must be non-negative, got {p}")
    adjacency = g.adjacency
    visited = 1 << v
    frontier = visited
    for _ in range(p):
        reached = 0
        for u in iter_bits(frontier):
            reached |= adjacency[u]
        frontier = reached & ~visited
        if not frontier:
            break
        visited |= frontier
    if not closed:
        visited &= ~(1 << v)
    return VertexSet(visited)


def induced(g: Graph, vertices: VertexSet) -> Tuple[Graph, VertexMapping]:
    """Induced subgraph on ``vertices``; kept vertices are renumbered in id order."""
    if vertices.mask >> g.vertex_count:
        raise ArgumentError("Vertex set contains ids outside the graph")
    kept = vertices.to_list()
    to_new = {old: new for new, old in enumerate(kept)}
    adjacency = [_remap(g.neighbor_mask(old) & vertices.mask, to_new) for old in kept]
    sub = Graph(len(kept), adjacency, allows_loops=g.allows_loops)
    mapping = VertexMapping(
        to_new=to_new,
        to_old=tuple((old,) for old in kept),
        parent_count=g.vertex_count,
    )
    return sub, mapping


def contract_pair(g: Graph, u: int, v: int) -> Tuple[Graph, VertexMapping]:
    """
    Replace non-adjacent ``u`` and ``v`` by one vertex ``z`` adjacent to N(u) | N(v).

    The other vertices keep their relative order; ``z`` gets the last id.

    Raises:
        ArgumentError: If ``u == v`` or an id is invalid
        ContractionRejected: If ``u`` and ``v`` are adjacent
    """
    g.check_vertex(u)
    g.check_vertex(v)
    if u == v:
        raise ArgumentError(f"Cannot contract vertex {u} with itself")
    if g.has_edge(u, v):
        raise ContractionRejected(f"Vertices {u} and {v} are adjacent")
    others = [w for w in range(g.vertex_count) if w not in (u, v)]
    z = len(others)
    to_new = {old: new for new, old in enumerate(others)}
    to_new[u] = z
    to_new[v] = z
    adjacency = [_remap(g.neighbor_mask(old), to_new) for old in others]
    adjacency.append(_remap(g.neighbor_mask(u) | g.neighbor_mask(v), to_new))
    contracted = Graph(len(adjacency), adjacency, allows_loops=g.allows_loops)
    mapping = VertexMapping(
        to_new=to_new,
        to_old=tuple((old,) for old in others) + ((u, v),),
        parent_count=g.vertex_count,
    )
    return contracted, mapping


def common_neighbor_witness(g: Graph, u: int, v: int) -> Optional[int]:
    """Lowest-id vertex of N[u] & N[v], or None when the intersection is empty."""
    common = g.closed_neighbors(u) & g.closed_neighbors(v)
    return common.first()
