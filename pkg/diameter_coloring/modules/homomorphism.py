"""
List homomorphisms to small targets.

A target ``H`` may have loops; its vertices are the colors. A homomorphism
instance is a list instance whose compatibility table is the adjacency of
``H``, so propagation and the 2-SAT finish come from the shared list engine.
"""

import logging
import re
from typing import Iterable, List, Optional, Sequence, Tuple, Union

from ..core.graph import (
    INFINITE,
    UNREACHABLE,
    Graph,
    VertexSet,
    all_pairs_distances,
    diameter,
    induced,
    iter_bits,
    mask_of,
    popcount,
)
from ..core.instance import ListAssignment, ListInstance, finish_two_lists, reduce
from ..core.outcome import Coloring
from ..exceptions import ArgumentError, ContractViolation

logger = logging.getLogger(__name__)

_CYCLE_NAME = re.compile(r"^C(\d+)$", re.IGNORECASE)
_LOOPED_PATH_NAME = re.compile(r"^P(?:STAR|\*)(\d+)$", re.IGNORECASE)


def check_properties(h: Graph) -> Tuple[bool, bool, bool]:
    """
    Evaluate the three target properties.

    Returns:
        ``(p1, p2, p3)``: every vertex has at most two neighbors (a loop counts
        the vertex itself), any two distinct vertices have at most one common
        neighbor, and there are no loops.
    """
    adjacency = h.adjacency
    p1 = all(popcount(mask) <= 2 for mask in adjacency)
    p2 = all(
        popcount(adjacency[u] & adjacency[v]) <= 1
        for u in range(h.vertex_count)
        for v in range(u + 1, h.vertex_count)
    )
    p3 = not h.has_loops()
    return p1, p2, p3


class TargetGraph:
    """
    A homomorphism target with cached properties.

    Attributes:
        graph: The target, loops allowed
        name: Display name such as ``C5`` or ``PSTAR3``
        parent_ids: For each vertex, its id in the target the user supplied
    """

    def __init__(
        self,
        graph: Graph,
        name: Optional[str] = None,
        parent_ids: Optional[Sequence[int]] = None,
    ):
        if not graph.allows_loops:
            graph = Graph(graph.vertex_count, graph.adjacency, allows_loops=True)
        self.graph = graph
        self.name = name or f"H{graph.vertex_count}"
        self.parent_ids: Tuple[int, ...] = (
            tuple(parent_ids) if parent_ids is not None else tuple(range(graph.vertex_count))
        )
        if len(self.parent_ids) != graph.vertex_count:
            raise ArgumentError("parent_ids must name one vertex per target vertex")
        self.p1, self.p2, self.p3 = check_properties(graph)

    @classmethod
    def cycle(cls, k: int) -> "TargetGraph":
        if k < 3:
            raise ArgumentError(f"Cycle targets need at least 3 vertices, got {k}")
        edges = [(i, (i + 1) % k) for i in range(k)]
        return cls(Graph.from_edges(k, edges, allows_loops=True), name=f"C{k}")

    @classmethod
    def looped_path(cls, k: int) -> "TargetGraph":
        """The path on ``k`` vertices with a loop on both ends."""
        if k < 3:
            raise ArgumentError(f"Looped path targets need at least 3 vertices, got {k}")
        edges = [(i, i + 1) for i in range(k - 1)] + [(0, 0), (k - 1, k - 1)]
        return cls(Graph.from_edges(k, edges, allows_loops=True), name=f"PSTAR{k}")

    @classmethod
    def from_name(cls, name: str) -> "TargetGraph":
        """
        Build a named target: ``C<k>`` or ``PSTAR<k>`` (also ``P*<k>``).

        Raises:
            ArgumentError: For an unknown name
        """
        text = name.strip()
        match = _CYCLE_NAME.match(text)
        if match:
            return cls.cycle(int(match.group(1)))
        match = _LOOPED_PATH_NAME.match(text)
        if match:
            return cls.looped_path(int(match.group(1)))
        raise ArgumentError(f"Unknown target '{name}'. Expected C<k> or PSTAR<k>")

    @property
    def vertex_count(self) -> int:
        return self.graph.vertex_count

    @property
    def in_family(self) -> bool:
        """P1 holds; every target the solvers accept satisfies it."""
        return self.p1

    def without(self, x: int) -> Tuple["TargetGraph", Tuple[Tuple[int, ...], ...]]:
        """
        Remove vertex ``x``.

        Returns:
            The smaller target and, for each of its vertices, the id it had here.
        """
        self.graph.check_vertex(x)
        kept = self.graph.vertices() - VertexSet.of([x])
        sub, mapping = induced(self.graph, kept)
        parent_ids = tuple(self.parent_ids[old[0]] for old in mapping.to_old)
        return TargetGraph(sub, name=f"{self.name}-{x}", parent_ids=parent_ids), mapping.to_old

    def lift_colors(self, coloring: Coloring) -> Coloring:
        """Translate target vertex ids back to the user-supplied target."""
        return tuple(self.parent_ids[c] for c in coloring)

    def __repr__(self) -> str:
        return f"TargetGraph({self.name}, p1={self.p1}, p2={self.p2}, p3={self.p3})"


class HomInstance(ListInstance):
    """A graph with lists of target vertices; colors are target vertex ids."""

    def __init__(
        self,
        graph: Graph,
        target: TargetGraph,
        lists: Optional[Union[ListAssignment, Sequence[Iterable[int]]]] = None,
    ):
        """
        Initialize a list homomorphism instance.

        Args:
            graph: A loopless graph
            target: The target ``H``
            lists: Per-vertex lists of target vertices; all of V(H) when omitted
        """
        palette = (1 << target.vertex_count) - 1
        if lists is None:
            assignment = ListAssignment([palette] * graph.vertex_count)
        elif isinstance(lists, ListAssignment):
            assignment = lists
        else:
            assignment = ListAssignment([mask_of(colors) for colors in lists])
        super().__init__(graph, assignment, target.graph.adjacency, palette)
        self.target = target

    def _derive(self, graph: Graph, lists: ListAssignment) -> "HomInstance":
        return HomInstance(graph, self.target, lists)

    def __repr__(self) -> str:
        lists = [sorted(self.list_of(v)) for v in range(self.vertex_count)]
        return (
            f"HomInstance(target={self.target.name}, "
            f"edges={list(self.graph.edges())}, lists={lists})"
        )


def _restrict(inst: HomInstance, x: int) -> HomInstance:
    target, to_old = inst.target.without(x)
    to_new = {old[0]: new for new, old in enumerate(to_old)}
    masks = []
    for mask in inst.lists.masks():
        remapped = 0
        for color in iter_bits(mask):
            if color in to_new:
                remapped |= 1 << to_new[color]
        masks.append(remapped)
    return HomInstance(inst.graph, target, ListAssignment(masks))


def distance_split(
    inst: HomInstance, graph_diameter: Optional[int] = None
) -> Optional[List[HomInstance]]:
    """
    Split on two target vertices farther apart than the diameter of G.

    No homomorphism from a connected graph uses both such vertices, so the
    instance is equivalent to the pair obtained by removing either one.

    Args:
        inst: An instance with a connected graph
        graph_diameter: Diameter of ``inst.graph`` if already known

    Returns:
        The two subinstances for the lexicographically first such pair
        ``(x, y)``, or None when no pair qualifies.
    """
    d = diameter(inst.graph) if graph_diameter is None else graph_diameter
    if d == INFINITE:
        raise ArgumentError("distance_split requires a connected graph")
    distances = all_pairs_distances(inst.target.graph)
    k = inst.target.vertex_count
    for x in range(k):
        for y in range(x + 1, k):
            gap = distances[x][y]
            if gap == UNREACHABLE or gap > d:
                logger.debug(
                    f"Splitting target {inst.target.name} on ({x}, {y}) at distance "
                    f"{'inf' if gap == UNREACHABLE else gap} > {d}"
                )
                return [_restrict(inst, x), _restrict(inst, y)]
    return None


def hom_reduce(inst: HomInstance) -> Optional[HomInstance]:
    """
    Propagate singleton lists along target adjacency to a fixpoint.

    Returns:
        The reduced instance, or None when some list empties.

    Raises:
        ContractViolation: If the target violates P1
    """
    if not inst.target.p1:
        raise ContractViolation(f"Target {inst.target.name} has a vertex with three neighbors")
    return reduce(inst)


def hom_two_lists(inst: HomInstance) -> Optional[Coloring]:
    """
    Decide an instance whose lists have at most two target vertices via 2-SAT.

    Returns:
        A verified homomorphism (target ids per vertex), or None if UNSAT.

    Raises:
        ContractViolation: If a list has more than two vertices
    """
    return finish_two_lists(inst)
