"""
List coloring instances, the layer structure, and the reduction rules.

Every instance pairs a graph with per-vertex color lists and a compatibility
table: ``compat[c]`` is the bitmask of colors a neighbor of a ``c``-colored
vertex may take. For List 3-Coloring the table forbids equal colors; for a
homomorphism target it is the target's adjacency.
"""

import logging
from collections import deque
from dataclasses import dataclass
from typing import (
    Deque,
    Dict,
    FrozenSet,
    Iterable,
    Iterator,
    List,
    Mapping,
    Optional,
    Sequence,
    Tuple,
    TypeVar,
    Union,
)

from ..exceptions import ArgumentError, ContractViolation, DiameterColoringError
from .graph import Graph, VertexSet, iter_bits, mask_of, popcount
from .outcome import Coloring, SearchStats

logger = logging.getLogger(__name__)

COLORS = (1, 2, 3)
FULL_LIST = mask_of(COLORS)
# compat[c] for the triangle on colors 1..3: anything but c itself.
TRIANGLE_COMPAT = (0,) + tuple(FULL_LIST & ~(1 << c) for c in COLORS)

InstanceT = TypeVar("InstanceT", bound="ListInstance")


class ListAssignment:
    """
    Per-vertex color bitmasks stored as an overlay over a shared base tuple.

    Derived assignments only copy the vertices they change, so the many
    sibling instances created while branching share one base.
    """

    __slots__ = ("_base", "_delta")

    def __init__(self, masks: Sequence[int], delta: Optional[Dict[int, int]] = None):
        self._base: Tuple[int, ...] = tuple(masks)
        self._delta: Dict[int, int] = delta or {}

    def __getitem__(self, v: int) -> int:
        if self._delta:
            return self._delta.get(v, self._base[v])
        return self._base[v]

    def __len__(self) -> int:
        return len(self._base)

    def __iter__(self) -> Iterator[int]:
        return iter(self.masks())

    def masks(self) -> Tuple[int, ...]:
        if not self._delta:
            return self._base
        return tuple(self._delta.get(v, mask) for v, mask in enumerate(self._base))

    def updated(self, changes: Mapping[int, int]) -> "ListAssignment":
        if not changes:
            return self
        delta = dict(self._delta)
        delta.update(changes)
        if 4 * len(delta) > len(self._base):
            merged = list(self._base)
            for v, mask in delta.items():
                merged[v] = mask
            return ListAssignment(merged)
        return ListAssignment(self._base, delta)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, ListAssignment):
            return NotImplemented
        return self.masks() == other.masks()

    def __hash__(self) -> int:
        return hash(self.masks())

    def __repr__(self) -> str:
        return f"ListAssignment({[sorted(iter_bits(m)) for m in self.masks()]})"


class ListInstance:
    """
    A graph with color lists and a color compatibility table.

    Subclasses fix the palette: :class:`ColoringInstance` uses colors 1..3,
    homomorphism instances use the vertices of their target graph.
    """

    def __init__(
        self,
        graph: Graph,
        lists: ListAssignment,
        compat: Sequence[int],
        palette: int,
    ):
        if graph.allows_loops or graph.has_loops():
            raise ArgumentError("Instance graphs must not contain loops")
        if len(lists) != graph.vertex_count:
            raise ArgumentError(
                f"Expected {graph.vertex_count} lists, got {len(lists)}"
            )
        for v, mask in enumerate(lists.masks()):
            if mask & ~palette:
                raise ArgumentError(
                    f"List of vertex {v} has colors outside the palette: "
                    f"{sorted(iter_bits(mask & ~palette))}"
                )
        self.graph = graph
        self.lists = lists
        self.compat: Tuple[int, ...] = tuple(compat)
        self.palette = palette

    def _derive(self: InstanceT, graph: Graph, lists: ListAssignment) -> InstanceT:
        raise NotImplementedError

    @property
    def vertex_count(self) -> int:
        return self.graph.vertex_count

    def mask(self, v: int) -> int:
        return self.lists[v]

    def list_of(self, v: int) -> FrozenSet[int]:
        return frozenset(iter_bits(self.lists[v]))

    def list_size(self, v: int) -> int:
        return popcount(self.lists[v])

    def palette_colors(self) -> List[int]:
        return list(iter_bits(self.palette))

    def with_masks(self: InstanceT, changes: Mapping[int, int]) -> InstanceT:
        """Return a copy whose listed vertices get new list bitmasks."""
        for v, mask in changes.items():
            self.graph.check_vertex(v)
            if mask & ~self.palette:
                raise ArgumentError(f"List of vertex {v} has colors outside the palette")
        return self._derive(self.graph, self.lists.updated(changes))

    def with_lists(self: InstanceT, changes: Mapping[int, Iterable[int]]) -> InstanceT:
        return self.with_masks({v: mask_of(colors) for v, colors in changes.items()})

    def fix(self: InstanceT, assignment: Mapping[int, int]) -> InstanceT:
        """Return a copy where each listed vertex has the single given color."""
        return self.with_masks({v: 1 << color for v, color in assignment.items()})

    def with_graph(self: InstanceT, graph: Graph, masks: Sequence[int]) -> InstanceT:
        return self._derive(graph, ListAssignment(masks))

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, ListInstance):
            return NotImplemented
        return (
            type(self) is type(other)
            and self.graph == other.graph
            and self.lists == other.lists
            and self.compat == other.compat
        )

    def __hash__(self) -> int:
        return hash((self.graph, self.lists, self.compat))


class ColoringInstance(ListInstance):
    """An instance of List 3-Coloring: lists are subsets of {1, 2, 3}."""

    def __init__(
        self,
        graph: Graph,
        lists: Optional[Union[ListAssignment, Sequence[Iterable[int]]]] = None,
    ):
        """
        Initialize a List 3-Coloring instance.

        Args:
            graph: A loopless graph
            lists: Per-vertex color lists; every vertex gets {1, 2, 3} when omitted
        """
        if lists is None:
            assignment = ListAssignment([FULL_LIST] * graph.vertex_count)
        elif isinstance(lists, ListAssignment):
            assignment = lists
        else:
            assignment = ListAssignment([mask_of(colors) for colors in lists])
        super().__init__(graph, assignment, TRIANGLE_COMPAT, FULL_LIST)

    def _derive(self, graph: Graph, lists: ListAssignment) -> "ColoringInstance":
        return ColoringInstance(graph, lists)

    def __repr__(self) -> str:
        lists = [sorted(self.list_of(v)) for v in range(self.vertex_count)]
        return f"ColoringInstance(edges={list(self.graph.edges())}, lists={lists})"


@dataclass(frozen=True)
class LayerStructure:
    """
    Partition of the vertices by list size.

    ``v3`` holds every vertex with at least three colors, which for
    List 3-Coloring is exactly the full lists.
    """

    v1: VertexSet
    v2: VertexSet
    v3: VertexSet
    measure_diam3: int
    measure_diam2: int

    @property
    def undecided(self) -> VertexSet:
        """V2 | V3."""
        return self.v2 | self.v3


def layers(inst: ListInstance) -> LayerStructure:
    """
    Compute (V1, V2, V3) and both measures of a reduced instance.

    Raises:
        ContractViolation: If some list is empty
    """
    v1 = v2 = v3 = 0
    measure_diam3 = 0
    for v, mask in enumerate(inst.lists.masks()):
        size = popcount(mask)
        if size == 0:
            raise ContractViolation(f"Vertex {v} has an empty list; reduce first")
        if size == 1:
            v1 |= 1 << v
            continue
        measure_diam3 += size
        if size == 2:
            v2 |= 1 << v
        else:
            v3 |= 1 << v
    return LayerStructure(
        v1=VertexSet(v1),
        v2=VertexSet(v2),
        v3=VertexSet(v3),
        measure_diam3=measure_diam3,
        measure_diam2=popcount(v3),
    )


def reduce(
    inst: InstanceT,
    stats: Optional[SearchStats] = None,
    order: Optional[Sequence[int]] = None,
) -> Optional[InstanceT]:
    """
    Apply R1 to a fixpoint, reporting failure (R2) when a list empties.

    A vertex with list {c} restricts each neighbor's list to ``compat[c]``;
    for 3-coloring that removes ``c``. Vertices are never deleted.

    Args:
        inst: The instance to reduce
        stats: Optional counters for R1 and R2 firings
        order: Optional order in which the initial singleton vertices are queued

    Returns:
        The reduced instance, or None on failure.
    """
    lists = inst.lists
    changed: Dict[int, int] = {}

    def current(v: int) -> int:
        return changed.get(v, lists[v])

    if order is None:
        candidates: Sequence[int] = range(inst.vertex_count)
    elif sorted(order) != list(range(inst.vertex_count)):
        raise ArgumentError("order must be a permutation of the vertex ids")
    else:
        candidates = order
    queue: Deque[int] = deque()
    for v in candidates:
        size = popcount(current(v))
        if size == 0:
            if stats is not None:
                stats.fire("R2")
            return None
        if size == 1:
            queue.append(v)

    adjacency = inst.graph.adjacency
    compat = inst.compat
    processed = set()
    while queue:
        v = queue.popleft()
        if v in processed:
            continue
        processed.add(v)
        color = current(v).bit_length() - 1
        allowed = compat[color]
        if stats is not None:
            stats.fire("R1")
        for u in iter_bits(adjacency[v]):
            before = current(u)
            after = before & allowed
            if after == before:
                continue
            if not after:
                if stats is not None:
                    stats.fire("R2")
                return None
            changed[u] = after
            if popcount(after) == 1:
                queue.append(u)
    if not changed:
        return inst
    return inst.with_masks(changed)


def finish_two_lists(
    inst: ListInstance, stats: Optional[SearchStats] = None
) -> Optional[Coloring]:
    """
    Decide an instance whose lists all have at most two colors (R3).

    Returns:
        A verified coloring, or None if the instance is UNSAT.

    Raises:
        ContractViolation: If some list has more than two colors
    """
    from .twosat import encode_lists, solve_2sat

    sizes = [popcount(mask) for mask in inst.lists.masks()]
    if any(size > 2 for size in sizes):
        raise ContractViolation("finish_two_lists requires every list to have size <= 2")
    if stats is not None:
        stats.fire("R3")
    if any(size == 0 for size in sizes):
        return None
    formula, decoding = encode_lists(inst)
    assignment = solve_2sat(formula)
    if assignment is None:
        return None
    coloring = decoding.decode(assignment)
    if not verify(inst, coloring):
        logger.error(f"2-SAT certificate failed verification: {coloring}")
        raise DiameterColoringError("2-SAT certificate failed verification")
    return coloring


def verify(inst: ListInstance, coloring: Sequence[int]) -> bool:
    """True iff ``coloring`` respects every list and every edge constraint."""
    if len(coloring) != inst.vertex_count:
        return False
    for v, color in enumerate(coloring):
        if not isinstance(color, int) or color < 0 or not inst.mask(v) >> color & 1:
            return False
    for u, v in inst.graph.edges():
        if not inst.compat[coloring[u]] >> coloring[v] & 1:
            return False
    return True
