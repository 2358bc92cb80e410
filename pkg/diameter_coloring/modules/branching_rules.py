"""
Branching rules and the strategies that combine them.

Rules B1-B4 drive the diameter-2 search, degree branching plus the
dominating ball drive the diameter-3 search, and the dominating-set
enumeration is the baseline. All thresholds on ``mu ** (2/3)`` are compared
in exact integer arithmetic.
"""

import logging
import math
import random
from dataclasses import dataclass
from itertools import combinations, islice, product
from typing import Dict, Iterable, Iterator, List, Optional, Sequence, Tuple

from ..config import SolverConfig
from ..core.graph import (
    Graph,
    VertexSet,
    ball,
    contract_pair,
    induced,
    iter_bits,
    mask_of,
    popcount,
)
from ..core.instance import LayerStructure, ListInstance, reduce
from ..core.outcome import SearchStats
from ..exceptions import ArgumentError
from .search_engine import Branch, BranchingStrategy, NodeContext

logger = logging.getLogger(__name__)


def ceil_two_thirds(mu: int) -> int:
    """Smallest integer t with t**3 >= mu**2, i.e. ceil(mu ** (2/3))."""
    if mu <= 0:
        return 0
    target = mu * mu
    t = max(1, math.ceil(mu ** (2 / 3)))
    while t**3 < target:
        t += 1
    while t > 1 and (t - 1) ** 3 >= target:
        t -= 1
    return t


def ceil_sixth(mu: int) -> int:
    return -(-mu // 6)


def witness_size_bound(mu: int, k_const: float) -> int:
    """Largest allowed |S| and |S~|: floor(K * mu^(1/3) * ln mu)."""
    if mu <= 1:
        return 0
    return int(math.floor(k_const * mu ** (1 / 3) * math.log(mu)))


def sampling_probabilities(mu: int) -> Tuple[float, float]:
    """
    Inclusion probabilities of the witness sampler.

    Returns:
        ``(p_tilde, p)`` with p_tilde = min(1, 100 mu^(-1/3) ln mu) for
        neighbors of the anchor vertex and p = mu^(-2/3) for the rest.
    """
    if mu <= 0:
        raise ArgumentError("Sampling probabilities need a positive measure")
    p_tilde = min(1.0, 100 * mu ** (-1 / 3) * math.log(mu))
    p = min(1.0, mu ** (-2 / 3))
    return p_tilde, p


def rule_b1_candidate(inst: ListInstance, layer: LayerStructure) -> Optional[int]:
    """Lowest-id vertex of V2 | V3 with more than mu^(2/3) neighbors in V3."""
    mu = layer.measure_diam2
    if mu == 0:
        return None
    v3 = layer.v3.mask
    adjacency = inst.graph.adjacency
    for v in layer.undecided:
        count = popcount(adjacency[v] & v3)
        if count**3 > mu * mu:
            return v
    return None


def rule_b2_candidate(inst: ListInstance, layer: LayerStructure) -> Optional[int]:
    """
    Lowest-id ``v`` in V3 such that at least mu^(2/3) / 36 vertices of V3
    share a common neighbor with ``v`` inside V2.
    """
    mu = layer.measure_diam2
    if mu == 0 or not layer.v2:
        return None
    v2 = layer.v2.mask
    v3 = layer.v3.mask
    adjacency = inst.graph.adjacency
    for v in layer.v3:
        reach = 0
        for w in iter_bits(adjacency[v] & v2):
            reach |= adjacency[w]
        count = popcount(reach & v3 & ~(1 << v))
        if (36 * count) ** 3 >= mu * mu:
            return v
    return None


def rule_b3_candidate(
    inst: ListInstance, layer: LayerStructure
) -> Optional[Tuple[int, int]]:
    """
    Lexicographically smallest pair ``u < v`` in V3 such that at least
    mu^(2/3) vertices ``w`` of V3 have N(u) & N(v) & N(w) non-empty.

    ``u`` and ``v`` qualify as ``w`` themselves; B4 assumes the bound fails
    with them counted.
    """
    mu = layer.measure_diam2
    if mu < 2:
        return None
    v3 = layer.v3.mask
    adjacency = inst.graph.adjacency
    members = layer.v3.to_list()
    for i, u in enumerate(members):
        for v in members[i + 1 :]:
            common = adjacency[u] & adjacency[v]
            if not common:
                continue
            reach = 0
            for x in iter_bits(common):
                reach |= adjacency[x]
            count = popcount(reach & v3)
            if count**3 >= mu * mu:
                return u, v
    return None


@dataclass(frozen=True)
class WitnessTuple:
    """
    A candidate ``(a, S, S~, phi)`` for rule B4.

    ``S`` receives color ``a``; ``phi`` colors ``S~`` avoiding ``a``.
    """

    a: int
    s: VertexSet
    s_tilde: VertexSet
    phi: Tuple[Tuple[int, int], ...] = ()

    def __post_init__(self):
        if not self.s.isdisjoint(self.s_tilde):
            raise ArgumentError("S and S~ must be disjoint")
        if VertexSet.of(v for v, _ in self.phi) != self.s_tilde:
            raise ArgumentError("phi must color exactly the vertices of S~")
        if any(color == self.a for _, color in self.phi):
            raise ArgumentError(f"phi must avoid color {self.a}")

    def assignment(self) -> Dict[int, int]:
        fixed = {v: self.a for v in self.s}
        fixed.update(self.phi)
        return fixed


def _dominated_count(graph: Graph, s_mask: int, s_tilde_mask: int, v3_mask: int) -> int:
    adjacency = graph.adjacency
    around_s = 0
    for v in iter_bits(s_mask):
        around_s |= adjacency[v]
    around_s_tilde = 0
    for v in iter_bits(s_tilde_mask):
        around_s_tilde |= adjacency[v]
    core = s_mask | s_tilde_mask | (around_s & around_s_tilde)
    dominated = core
    for v in iter_bits(core):
        dominated |= adjacency[v]
    return popcount(dominated & v3_mask)


def check_witness(inst: ListInstance, layer: LayerStructure, witness: WitnessTuple) -> int:
    """
    Number of V3 vertices in N[S | S~ | (N(S) & N(S~))], neighborhoods taken in G.

    The branch is taken when the count reaches ceil(mu / 6).
    """
    return _dominated_count(inst.graph, witness.s.mask, witness.s_tilde.mask, layer.v3.mask)


def _subsets_by_size(items: Sequence[int], max_size: int) -> Iterator[Tuple[int, ...]]:
    for size in range(min(max_size, len(items)) + 1):
        yield from combinations(items, size)


def find_witness_pairs(
    inst: ListInstance,
    layer: LayerStructure,
    config: SolverConfig,
    stats: Optional[SearchStats] = None,
) -> Tuple[List[Tuple[VertexSet, VertexSet]], bool]:
    """
    Scan ``(S, S~)`` pairs in size-lexicographic order and keep the accepted ones.

    At most ``config.witness_budget`` pairs are examined.

    Returns:
        The accepted pairs and whether the budget cut the scan short.
    """
    mu = layer.measure_diam2
    accepted: List[Tuple[VertexSet, VertexSet]] = []
    if mu == 0:
        return accepted, False
    needed = ceil_sixth(mu)
    bound = witness_size_bound(mu, config.k_const)
    members = layer.v3.to_list()
    v3 = layer.v3.mask
    examined = 0
    truncated = False
    for s in _subsets_by_size(members, bound):
        s_mask = mask_of(s)
        rest = [v for v in members if not s_mask >> v & 1]
        for s_tilde in _subsets_by_size(rest, bound):
            if examined >= config.witness_budget:
                truncated = True
                break
            examined += 1
            s_tilde_mask = mask_of(s_tilde)
            if _dominated_count(inst.graph, s_mask, s_tilde_mask, v3) >= needed:
                accepted.append((VertexSet(s_mask), VertexSet(s_tilde_mask)))
        if truncated:
            break
    if stats is not None:
        stats.witness_tuples_checked += examined
    logger.debug(
        f"Witness scan: {examined} pairs examined, {len(accepted)} accepted, bound {bound}"
    )
    return accepted, truncated


def expand_witness_pair(
    inst: ListInstance, s: VertexSet, s_tilde: VertexSet
) -> Iterator[WitnessTuple]:
    """Yield every ``(a, phi)`` completion of a pair, ``a`` first, then ``phi``."""
    shared = inst.palette
    for v in s:
        shared &= inst.mask(v)
    tilde = s_tilde.to_list()
    for a in iter_bits(shared):
        options = [sorted(inst.list_of(v) - {a}) for v in tilde]
        for colors in product(*options):
            yield WitnessTuple(a, s, s_tilde, tuple(zip(tilde, colors)))


def enumerate_witnesses(
    inst: ListInstance,
    layer: LayerStructure,
    config: SolverConfig,
    stats: Optional[SearchStats] = None,
) -> Iterator[WitnessTuple]:
    """
    Stream the accepted witness tuples in canonical order.

    An empty stream means no tuple was accepted within the budget.
    """
    pairs, _ = find_witness_pairs(inst, layer, config, stats)
    for s, s_tilde in pairs:
        yield from expand_witness_pair(inst, s, s_tilde)


def sample_witness(
    inst: ListInstance,
    layer: LayerStructure,
    config: SolverConfig,
    rng: random.Random,
    stats: Optional[SearchStats] = None,
) -> Optional[WitnessTuple]:
    """
    Draw witness tuples the way the existence argument does.

    An anchor ``v_a`` and color ``a`` are drawn, S~ keeps each V3-neighbor of
    the anchor with probability p_tilde and S keeps each other V3 vertex that
    may take ``a`` with probability p. A dominating draw is returned with the
    first ``phi`` (among ``config.phi_cap``) whose child survives reduction.

    Returns:
        A tuple, or None after ``config.max_retries`` failed draws.
    """
    mu = layer.measure_diam2
    if mu == 0:
        return None
    p_tilde, p = sampling_probabilities(mu)
    needed = ceil_sixth(mu)
    members = layer.v3.to_list()
    v3 = layer.v3.mask
    adjacency = inst.graph.adjacency
    for attempt in range(config.max_retries):
        anchor = rng.choice(members)
        a = rng.choice(sorted(inst.list_of(anchor)))
        s_tilde_mask = 0
        for u in iter_bits(adjacency[anchor] & v3):
            if rng.random() < p_tilde:
                s_tilde_mask |= 1 << u
        s_mask = 0
        for u in members:
            if s_tilde_mask >> u & 1 or not inst.mask(u) >> a & 1:
                continue
            if rng.random() < p:
                s_mask |= 1 << u
        if stats is not None:
            stats.witness_tuples_checked += 1
        if _dominated_count(inst.graph, s_mask, s_tilde_mask, v3) < needed:
            continue
        tilde = list(iter_bits(s_tilde_mask))
        options = [sorted(inst.list_of(v) - {a}) for v in tilde]
        for colors in islice(product(*options), config.phi_cap):
            witness = WitnessTuple(a, VertexSet(s_mask), VertexSet(s_tilde_mask), tuple(zip(tilde, colors)))
            if reduce(inst.fix(witness.assignment())) is not None:
                logger.debug(f"Sampled witness after {attempt + 1} draws: {witness}")
                return witness
    return None


def degree_branch_candidate(
    inst: ListInstance, layer: LayerStructure, diameter: int
) -> Optional[Tuple[int, int]]:
    """
    Find a vertex with at least (mu log mu)^(1/d) undecided neighbors.

    Neighbors are grouped by list; the largest group whose list meets
    L(v) supplies the color ``a``.

    Returns:
        ``(v, a)`` for the lowest-id such vertex, or None.
    """
    mu = layer.measure_diam3
    if mu <= 1:
        return None
    threshold = mu * math.log(mu)
    undecided = layer.undecided.mask
    adjacency = inst.graph.adjacency
    for v in layer.undecided:
        around = adjacency[v] & undecided
        if popcount(around) ** diameter < threshold:
            continue
        groups: Dict[int, int] = {}
        for u in iter_bits(around):
            groups[inst.mask(u)] = groups.get(inst.mask(u), 0) + 1
        for list_mask, _ in sorted(groups.items(), key=lambda item: (-item[1], item[0])):
            common = inst.mask(v) & list_mask
            if common:
                return v, (common & -common).bit_length() - 1
    return None


def dominating_ball(inst: ListInstance, layer: LayerStructure, diameter: int) -> VertexSet:
    """
    Ball of radius d - 1 around the lowest-id V3 vertex in G[V2 | V3].

    For reduced instances of diameter d in {2, 3} it dominates V3.
    """
    center = layer.v3.first()
    if center is None:
        return VertexSet()
    sub, mapping = induced(inst.graph, layer.undecided)
    radius = max(diameter, 2) - 1
    around = ball(sub, mapping.to_new[center], radius)
    return VertexSet.of(mapping.to_old[x][0] for x in around)


def greedy_dominating_set(graph: Graph) -> VertexSet:
    """Repeatedly take the vertex covering most undominated vertices (lowest id on ties)."""
    undominated = graph.vertices().mask
    adjacency = graph.adjacency
    chosen = 0
    while undominated:
        best, best_gain = -1, -1
        for v in range(graph.vertex_count):
            gain = popcount((adjacency[v] | 1 << v) & undominated)
            if gain > best_gain:
                best, best_gain = v, gain
        chosen |= 1 << best
        undominated &= ~(adjacency[best] | 1 << best)
    return VertexSet(chosen)


def ms_dominating_set(graph: Graph) -> VertexSet:
    """
    The smaller of N(v) for a minimum-degree ``v`` and the greedy dominating set.

    N(v) is only a candidate when it dominates the graph, which always holds
    for diameter 2.
    """
    greedy = greedy_dominating_set(graph)
    if graph.vertex_count < 2:
        return greedy
    degrees = [popcount(mask) for mask in graph.adjacency]
    v_min = degrees.index(min(degrees))
    around = graph.neighbors(v_min)
    if around and graph.dominates(around, graph.vertices()) and len(around) < len(greedy):
        return around
    return greedy


def assignment_children(
    inst: ListInstance,
    vertices: Sequence[int],
    resolves: bool = False,
) -> Iterator[Branch]:
    """One child per list-respecting coloring of ``vertices``, in lexicographic order."""
    options = [sorted(inst.list_of(v)) for v in vertices]
    for colors in product(*options):
        yield Branch(inst.fix(dict(zip(vertices, colors))), resolves=resolves)


def color_children(
    inst: ListInstance, v: int, min_drop: int = 0, parent_measure: int = 0
) -> List[Branch]:
    """Fix ``v`` to each color of its list in increasing order."""
    return [
        Branch(inst.fix({v: color}), min_drop=min_drop, parent_measure=parent_measure)
        for color in sorted(inst.list_of(v))
    ]


def pair_children(inst: ListInstance, u: int, v: int) -> Iterator[Branch]:
    """
    Children of B3: each ordered pair of distinct colors, then ``u`` and ``v``
    sharing a color.

    Sharing a color contracts the pair into one vertex; adjacent pairs can
    only share a looped color, so they get explicit children instead.
    """
    for color_u in sorted(inst.list_of(u)):
        for color_v in sorted(inst.list_of(v)):
            if color_u != color_v:
                yield Branch(inst.fix({u: color_u, v: color_v}))
    shared = inst.mask(u) & inst.mask(v)
    if not shared:
        return
    if inst.graph.has_edge(u, v):
        for color in iter_bits(shared):
            if inst.compat[color] >> color & 1:
                yield Branch(inst.fix({u: color, v: color}))
        return
    contracted, mapping = contract_pair(inst.graph, u, v)
    masks = [inst.mask(old[0]) for old in mapping.to_old[:-1]] + [shared]
    yield Branch(inst.with_graph(contracted, masks), lift=mapping.lift)


class CompleteBranching(BranchingStrategy):
    """Branch on the colors of the lowest-id V3 vertex."""

    def branch(
        self, inst: ListInstance, layer: LayerStructure, ctx: NodeContext
    ) -> Tuple[str, Iterable[Branch]]:
        v = layer.v3.first()
        return "BRANCH", color_children(inst, v)


class WitnessBranching(BranchingStrategy):
    """
    Rules B1, B2, B3, then B4, tried strictly in that order.

    With ``randomized`` set, B4 uses one sampled witness child followed by
    complete branching; otherwise it enumerates witness tuples and falls
    back to complete branching when none is accepted within the budget.
    """

    def __init__(self, randomized: bool = False):
        self.randomized = randomized
        self._complete = CompleteBranching()

    def branch(
        self, inst: ListInstance, layer: LayerStructure, ctx: NodeContext
    ) -> Tuple[str, Iterable[Branch]]:
        mu = layer.measure_diam2

        ctx.attempt("B1")
        v = rule_b1_candidate(inst, layer)
        if v is not None:
            return "B1", color_children(inst, v, ceil_two_thirds(mu), mu)

        ctx.attempt("B2")
        v = rule_b2_candidate(inst, layer)
        if v is not None:
            return "B2", color_children(inst, v)

        ctx.attempt("B3")
        pair = rule_b3_candidate(inst, layer)
        if pair is not None:
            return "B3", pair_children(inst, *pair)

        ctx.attempt("B4")
        if self.randomized:
            return self._sampled(inst, layer, ctx)
        return self._enumerated(inst, layer, ctx)

    def _fallback(
        self, inst: ListInstance, layer: LayerStructure, ctx: NodeContext
    ) -> Tuple[str, Iterable[Branch]]:
        ctx.stats.fallbacks += 1
        logger.debug(f"Node {ctx.path}: no witness, falling back to complete branching")
        return self._complete.branch(inst, layer, ctx)

    def _sampled(
        self, inst: ListInstance, layer: LayerStructure, ctx: NodeContext
    ) -> Tuple[str, Iterable[Branch]]:
        witness = sample_witness(inst, layer, ctx.config, ctx.rng, ctx.stats)
        if witness is None:
            return self._fallback(inst, layer, ctx)
        mu = layer.measure_diam2
        sampled = Branch(
            inst.fix(witness.assignment()), min_drop=ceil_sixth(mu), parent_measure=mu
        )
        _, complete = self._complete.branch(inst, layer, ctx)
        return "B4", [sampled, *complete]

    def _enumerated(
        self, inst: ListInstance, layer: LayerStructure, ctx: NodeContext
    ) -> Tuple[str, Iterable[Branch]]:
        pairs, truncated = find_witness_pairs(inst, layer, ctx.config, ctx.stats)
        if not pairs:
            return self._fallback(inst, layer, ctx)
        tail: Iterable[Branch] = ()
        if truncated:
            # Budget cut the scan: keep the node complete.
            ctx.stats.fallbacks += 1
            _, tail = self._complete.branch(inst, layer, ctx)
        return "B4", _chain(_witness_children(inst, pairs, layer.measure_diam2), tail)


def _witness_children(
    inst: ListInstance, pairs: List[Tuple[VertexSet, VertexSet]], mu: int
) -> Iterator[Branch]:
    needed = ceil_sixth(mu)
    for s, s_tilde in pairs:
        seen = set()
        for witness in expand_witness_pair(inst, s, s_tilde):
            key = tuple(sorted(witness.assignment().items()))
            if key in seen:
                continue
            seen.add(key)
            yield Branch(inst.fix(dict(key)), min_drop=needed, parent_measure=mu)


def _chain(*parts: Iterable[Branch]) -> Iterator[Branch]:
    for part in parts:
        yield from part


class DegreeBallBranching(BranchingStrategy):
    """
    Degree branching while some vertex has many undecided neighbors, then
    enumeration of a dominating ball.

    Args:
        diameter: Diameter of the input graph, 2 or 3 (smaller values use 2)
    """

    def __init__(self, diameter: int):
        self.diameter = max(int(diameter), 2)

    def branch(
        self, inst: ListInstance, layer: LayerStructure, ctx: NodeContext
    ) -> Tuple[str, Iterable[Branch]]:
        ctx.attempt("DEGREE")
        found = degree_branch_candidate(inst, layer, self.diameter)
        if found is not None:
            v, a = found
            children = [
                Branch(inst.fix({v: a})),
                Branch(inst.with_masks({v: inst.mask(v) & ~(1 << a)})),
            ]
            return "DEGREE", children
        ctx.attempt("BALL")
        around = dominating_ball(inst, layer, self.diameter)
        logger.debug(f"Node {ctx.path}: enumerating a ball of {len(around)} vertices")
        return "BALL", assignment_children(inst, around.to_list(), resolves=True)


class DominatingSetBranching(BranchingStrategy):
    """Enumerate every coloring of a small dominating set at the root."""

    def __init__(self):
        self._complete = CompleteBranching()

    def branch(
        self, inst: ListInstance, layer: LayerStructure, ctx: NodeContext
    ) -> Tuple[str, Iterable[Branch]]:
        if ctx.depth > 0:
            return self._complete.branch(inst, layer, ctx)
        dominating = ms_dominating_set(inst.graph)
        logger.debug(f"Dominating set of size {len(dominating)}: {dominating.to_list()}")
        return "DOMSET", assignment_children(inst, dominating.to_list(), resolves=True)
