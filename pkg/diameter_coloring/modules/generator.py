"""
Seeded instance generators with diameter control.
"""

import logging
import math
import random
from dataclasses import dataclass
from enum import Enum
from typing import List, Optional

import networkx as nx

from ..core.graph import Graph, GraphBuilder, diameter
from ..core.instance import COLORS, ColoringInstance, ListAssignment
from ..exceptions import ArgumentError, GenerationError

logger = logging.getLogger(__name__)

MAX_REJECTIONS = 10_000

# Bitmasks of the 7 nonempty subsets of {1, 2, 3}; bit c stands for color c.
NONEMPTY_LISTS = tuple(range(2, 16, 2))
SMALL_LISTS = tuple(mask for mask in NONEMPTY_LISTS if bin(mask).count("1") <= 2)


class GenFamily(str, Enum):
    UNIVERSAL_APEX = "universal-apex"
    RANDOM_DIAM2 = "random-diam2"
    RANDOM_DIAM3 = "random-diam3"
    CYCLE = "cycle"
    PETERSEN = "petersen"
    CUSTOM_EDGE_PROB = "custom-edge-prob"

    @classmethod
    def parse(cls, value: str) -> "GenFamily":
        normalized = value.strip().lower().replace("_", "-")
        for family in cls:
            if family.value == normalized:
                return family
        raise ArgumentError(
            f"Unknown family '{value}'. Expected one of: {', '.join(f.value for f in cls)}"
        )


class ListMode(str, Enum):
    FULL = "full"
    RANDOM_NONEMPTY = "random-nonempty"
    RANDOM_SIZE_LE2 = "random-size-le2"

    @classmethod
    def parse(cls, value: str) -> "ListMode":
        normalized = value.strip().lower().replace("_", "-")
        for mode in cls:
            if mode.value == normalized:
                return mode
        raise ArgumentError(
            f"Unknown list mode '{value}'. Expected one of: {', '.join(m.value for m in cls)}"
        )


@dataclass(frozen=True)
class GenSpec:
    """
    What to generate.

    Attributes:
        family: Graph family
        n: Number of vertices, including the apex for UNIVERSAL_APEX
        edge_prob: Edge probability; each random family has a default
        rng_seed: Seed for graph and lists
        list_mode: How lists are drawn
    """

    family: GenFamily
    n: int
    edge_prob: Optional[float] = None
    rng_seed: int = 0
    list_mode: ListMode = ListMode.FULL

    def __post_init__(self):
        if isinstance(self.family, str) and not isinstance(self.family, GenFamily):
            object.__setattr__(self, "family", GenFamily.parse(self.family))
        if isinstance(self.list_mode, str) and not isinstance(self.list_mode, ListMode):
            object.__setattr__(self, "list_mode", ListMode.parse(self.list_mode))
        if self.n < 1:
            raise ArgumentError(f"n must be at least 1, got {self.n}")
        if self.edge_prob is not None and not 0 <= self.edge_prob <= 1:
            raise ArgumentError(f"edge_prob must lie in [0, 1], got {self.edge_prob}")
        if self.family == GenFamily.CYCLE and self.n < 3:
            raise ArgumentError(f"A cycle needs at least 3 vertices, got {self.n}")
        if self.family == GenFamily.PETERSEN and self.n != 10:
            raise ArgumentError(f"The Petersen graph has 10 vertices, got n={self.n}")
        if self.family == GenFamily.RANDOM_DIAM2 and self.n < 3:
            raise ArgumentError(f"Diameter 2 needs at least 3 vertices, got {self.n}")
        if self.family == GenFamily.RANDOM_DIAM3 and self.n < 4:
            raise ArgumentError(f"Diameter 3 needs at least 4 vertices, got {self.n}")
        if self.family == GenFamily.CUSTOM_EDGE_PROB and self.edge_prob is None:
            raise ArgumentError("custom-edge-prob requires edge_prob")


def default_edge_prob(family: GenFamily, n: int) -> float:
    """Edge probability that makes the family's target diameter likely."""
    if n < 2:
        return 0.5
    if family == GenFamily.RANDOM_DIAM2:
        return min(1.0, math.sqrt(2 * math.log(n) / n))
    if family == GenFamily.RANDOM_DIAM3:
        return min(1.0, (2 * math.log(n) / (n * n)) ** (1 / 3))
    return 0.5


def add_universal_vertex(graph: Graph) -> Graph:
    """Append one vertex adjacent to every vertex of ``graph``; the result has diameter <= 2."""
    builder = GraphBuilder(graph.vertex_count + 1)
    for u, v in graph.edges():
        builder.add_edge(u, v)
    apex = graph.vertex_count
    for v in range(graph.vertex_count):
        builder.add_edge(v, apex)
    return builder.build()


def random_lists(vertex_count: int, mode: ListMode, rng: random.Random) -> List[int]:
    """Draw list bitmasks; random modes pick uniformly among the allowed subsets."""
    if mode == ListMode.FULL:
        full = sum(1 << c for c in COLORS)
        return [full] * vertex_count
    choices = NONEMPTY_LISTS if mode == ListMode.RANDOM_NONEMPTY else SMALL_LISTS
    return [rng.choice(choices) for _ in range(vertex_count)]


def _gnp(n: int, p: float, rng: random.Random) -> Graph:
    return Graph.from_networkx(nx.gnp_random_graph(n, p, seed=rng.randrange(2**32)))


def _rejection_sample(n: int, p: float, target: int, rng: random.Random) -> Graph:
    for attempt in range(1, MAX_REJECTIONS + 1):
        graph = _gnp(n, p, rng)
        if diameter(graph) == target:
            logger.debug(f"Accepted a diameter-{target} graph after {attempt} draws")
            return graph
    logger.error(f"No diameter-{target} graph on {n} vertices after {MAX_REJECTIONS} draws")
    raise GenerationError(
        f"No graph of diameter {target} on {n} vertices with p={p:.4f} "
        f"after {MAX_REJECTIONS} draws"
    )


def generate_graph(spec: GenSpec) -> Graph:
    rng = random.Random(spec.rng_seed)
    p = spec.edge_prob if spec.edge_prob is not None else default_edge_prob(spec.family, spec.n)
    if spec.family == GenFamily.UNIVERSAL_APEX:
        return add_universal_vertex(_gnp(spec.n - 1, p, rng))
    if spec.family == GenFamily.RANDOM_DIAM2:
        return _rejection_sample(spec.n, p, 2, rng)
    if spec.family == GenFamily.RANDOM_DIAM3:
        return _rejection_sample(spec.n, p, 3, rng)
    if spec.family == GenFamily.CYCLE:
        return Graph.from_networkx(nx.cycle_graph(spec.n))
    if spec.family == GenFamily.PETERSEN:
        return Graph.from_networkx(nx.petersen_graph())
    return _gnp(spec.n, p, rng)


def generate(spec: GenSpec) -> ColoringInstance:
    """
    Generate an instance; identical specs give identical instances.

    Raises:
        GenerationError: If rejection sampling runs out of draws
    """
    graph = generate_graph(spec)
    lists = random_lists(graph.vertex_count, spec.list_mode, random.Random(f"lists:{spec.rng_seed}"))
    logger.info(
        f"Generated {spec.family.value} instance: {graph.vertex_count} vertices, "
        f"{graph.edge_count} edges, {spec.list_mode.value} lists"
    )
    return ColoringInstance(graph, ListAssignment(lists))
