"""
Brute-force oracles and the differential testing harness.

The oracles enumerate every list-respecting assignment in lexicographic
order (vertex ids, then colors) and never prune; the first valid assignment
is the reported witness.
"""

import logging
import random
from concurrent.futures import ThreadPoolExecutor, as_completed
from dataclasses import dataclass, field
from itertools import combinations, product
from typing import Callable, Iterator, List, Optional, Sequence, Tuple

from ..config import SolverConfig, SolverMode
from ..core.graph import INFINITE, Graph, VertexSet, diameter, induced, is_connected
from ..core.instance import ColoringInstance, ListAssignment, ListInstance
from ..core.outcome import Coloring, SearchOutcome, Verdict
from ..exceptions import ArgumentError, DiameterColoringError, OracleRefusal
from .generator import GenFamily, GenSpec, ListMode, generate, random_lists
from .homomorphism import HomInstance, TargetGraph
from .homomorphism_solver import HomomorphismSolver
from .instance_io import serialize
from .list_coloring_solver import DIAMETER_LIMITS, ListColoringSolver

logger = logging.getLogger(__name__)

DEFAULT_CAP = 3**20

DEFAULT_SWEEP_MODES = (
    SolverMode.COMPLETE,
    SolverMode.RANDOMIZED,
    SolverMode.BASELINE_MS,
    SolverMode.DIAM3,
)


@dataclass(frozen=True)
class OracleReport:
    """
    Result of an exhaustive search.

    Attributes:
        verdict: SAT or UNSAT
        count: Number of solutions, or None when counting was skipped
        witness: Lexicographically first solution when SAT
        instances_compared: Instances covered, for harness runs
    """

    verdict: Verdict
    count: Optional[int]
    witness: Optional[Coloring]
    instances_compared: int = 1

    @property
    def is_sat(self) -> bool:
        return self.verdict == Verdict.SAT


def _satisfies(edges: Sequence[Tuple[int, int]], compat: Sequence[int], colors: Sequence[int]) -> bool:
    return all(compat[colors[u]] >> colors[v] & 1 for u, v in edges)


def _scan(
    edges: Sequence[Tuple[int, int]],
    compat: Sequence[int],
    options: List[List[int]],
    count_all: bool,
) -> Tuple[int, Optional[Coloring]]:
    count = 0
    witness: Optional[Coloring] = None
    for colors in product(*options):
        if _satisfies(edges, compat, colors):
            if witness is None:
                witness = tuple(colors)
                if not count_all:
                    return 1, witness
            count += 1
    return count, witness


def _brute(inst: ListInstance, count_all: bool, threads: int) -> OracleReport:
    edges = list(inst.graph.edges())
    options = [sorted(inst.list_of(v)) for v in range(inst.vertex_count)]
    if threads <= 1 or not options or len(options[0]) <= 1:
        count, witness = _scan(edges, inst.compat, options, count_all)
    else:
        # One range per color of vertex 0, merged in color order.
        parts: List[Optional[Tuple[int, Optional[Coloring]]]] = [None] * len(options[0])
        with ThreadPoolExecutor(max_workers=min(threads, len(options[0]))) as executor:
            future_to_index = {
                executor.submit(_scan, edges, inst.compat, [[color]] + options[1:], count_all): i
                for i, color in enumerate(options[0])
            }
            for future in as_completed(future_to_index):
                parts[future_to_index[future]] = future.result()
        count, witness = 0, None
        for part_count, part_witness in parts:  # type: ignore[misc]
            count += part_count
            if witness is None:
                witness = part_witness
        if not count_all and witness is not None:
            count = 1
    verdict = Verdict.SAT if witness is not None else Verdict.UNSAT
    return OracleReport(verdict=verdict, count=count if count_all else None, witness=witness)


def _search_space(inst: ListInstance) -> int:
    size = 1
    for v in range(inst.vertex_count):
        size *= inst.list_size(v)
    return size


def brute_color(
    inst: ColoringInstance, cap: int = DEFAULT_CAP, count_all: bool = True, threads: int = 1
) -> OracleReport:
    """
    Decide and count List 3-Coloring solutions by enumeration.

    Raises:
        OracleRefusal: If the product of list sizes exceeds ``cap``
    """
    space = _search_space(inst)
    if space > cap:
        raise OracleRefusal(f"Search space {space} exceeds the cap {cap}")
    return _brute(inst, count_all, threads)


def brute_hom(
    inst: HomInstance, cap: int = DEFAULT_CAP, count_all: bool = True, threads: int = 1
) -> OracleReport:
    """
    Decide and count list homomorphisms by enumeration.

    Raises:
        OracleRefusal: If |V(H)| ** |V(G)| exceeds ``cap``
    """
    space = inst.target.vertex_count ** inst.vertex_count
    if space > cap:
        raise OracleRefusal(f"Search space {space} exceeds the cap {cap}")
    return _brute(inst, count_all, threads)


@dataclass(frozen=True)
class SweepConfig:
    """
    Which instance families a differential sweep covers.

    Attributes:
        max_vertices: All labeled connected graphs up to this size are used
        lists_per_graph: Seeded random list assignments per enumerated graph
        include_full_lists: Also run every enumerated graph with full lists
        list_mode: Distribution of the random lists
        random_diam2: Number of random diameter-2 instances
        random_max_n: Largest size of the random diameter-2 instances
        modes: Solver modes compared against the oracle
        targets: Homomorphism targets (names such as C5 or PSTAR3)
        hom_max_vertices: Size limit of graphs used for homomorphism runs
        rng_seed: Seed of every random choice in the sweep
        solver: Settings shared by every solver run; its mode is replaced
    """

    max_vertices: int = 4
    lists_per_graph: int = 5
    include_full_lists: bool = True
    list_mode: ListMode = ListMode.RANDOM_NONEMPTY
    random_diam2: int = 0
    random_max_n: int = 8
    modes: Tuple[SolverMode, ...] = DEFAULT_SWEEP_MODES
    targets: Tuple[str, ...] = ()
    hom_max_vertices: int = 4
    rng_seed: int = 0
    solver: SolverConfig = field(default_factory=SolverConfig)

    def __post_init__(self):
        if self.max_vertices < 0 or self.lists_per_graph < 0 or self.random_diam2 < 0:
            raise ArgumentError("Sweep sizes must be non-negative")
        if self.random_diam2 and self.random_max_n < 3:
            raise ArgumentError("random_max_n must be at least 3")


@dataclass(frozen=True)
class Disagreement:
    """A solver run whose verdict differs from the oracle."""

    solver: str
    expected: str
    actual: str
    instance_text: str
    original_text: str


@dataclass
class SweepReport:
    instances_compared: int = 0
    runs: int = 0
    disagreements: List[Disagreement] = field(default_factory=list)
    certificate_failures: int = 0
    progress_violations: int = 0

    @property
    def ok(self) -> bool:
        return not self.disagreements and not self.certificate_failures

    def summary_lines(self) -> List[str]:
        lines = [
            f"instances={self.instances_compared}",
            f"runs={self.runs}",
            f"disagreements={len(self.disagreements)}",
            f"certificate_failures={self.certificate_failures}",
            f"progress_violations={self.progress_violations}",
        ]
        for item in self.disagreements:
            lines.append(f"disagreement solver={item.solver} expected={item.expected} actual={item.actual}")
            lines.extend(f"  {line}" for line in item.instance_text.splitlines())
        return lines


def connected_graphs(n: int) -> Iterator[Graph]:
    """Every labeled connected graph on ``n`` vertices, by increasing edge subset bitmask."""
    pairs = list(combinations(range(n), 2))
    for subset in range(1 << len(pairs)):
        edges = [pair for i, pair in enumerate(pairs) if subset >> i & 1]
        graph = Graph.from_edges(n, edges)
        if is_connected(graph):
            yield graph


def _applicable(mode: SolverMode, graph_diameter) -> bool:
    limit = DIAMETER_LIMITS[mode]
    return limit is None or graph_diameter <= limit


def _drop_edge(inst: ListInstance, u: int, v: int) -> ListInstance:
    edges = [edge for edge in inst.graph.edges() if edge != (u, v)]
    graph = Graph.from_edges(inst.vertex_count, edges)
    return inst.with_graph(graph, inst.lists.masks())


def _drop_vertex(inst: ListInstance, x: int) -> ListInstance:
    graph, mapping = induced(inst.graph, inst.graph.vertices() - VertexSet.of([x]))
    masks = [inst.mask(old[0]) for old in mapping.to_old]
    return inst.with_graph(graph, masks)


def minimize(
    inst: ListInstance,
    still_failing: Callable[[ListInstance], bool],
    admissible: Callable[[ListInstance], bool],
) -> ListInstance:
    """
    Greedily drop edges, then vertices, while the failure persists.

    Args:
        inst: A failing instance
        still_failing: Whether a candidate still shows the failure
        admissible: Whether a candidate satisfies the solver's preconditions
    """
    changed = True
    while changed:
        changed = False
        for u, v in list(inst.graph.edges()):
            candidate = _drop_edge(inst, u, v)
            if admissible(candidate) and still_failing(candidate):
                inst, changed = candidate, True
                break
        if changed:
            continue
        for x in range(inst.vertex_count):
            candidate = _drop_vertex(inst, x)
            if admissible(candidate) and still_failing(candidate):
                inst, changed = candidate, True
                break
    return inst


class DifferentialSweep:
    """Runs solvers against the oracle over enumerated and random families."""

    def __init__(self, config: SweepConfig):
        self.config = config
        self.report = SweepReport()

    def run(self) -> SweepReport:
        cfg = self.config
        logger.info(
            f"Differential sweep: graphs up to {cfg.max_vertices} vertices, "
            f"{cfg.random_diam2} random diameter-2 instances, targets {list(cfg.targets)}"
        )
        for n in range(1, cfg.max_vertices + 1):
            for index, graph in enumerate(connected_graphs(n)):
                for inst in self._list_variants(graph, f"{n}:{index}"):
                    self._compare_coloring(inst)
        for i in range(cfg.random_diam2):
            rng = random.Random(f"{cfg.rng_seed}:diam2:{i}")
            n = rng.randint(3, cfg.random_max_n)
            spec = GenSpec(GenFamily.RANDOM_DIAM2, n, rng_seed=cfg.rng_seed + i, list_mode=cfg.list_mode)
            self._compare_coloring(generate(spec))
        for name in cfg.targets:
            target = TargetGraph.from_name(name)
            for n in range(1, cfg.hom_max_vertices + 1):
                for index, graph in enumerate(connected_graphs(n)):
                    for inst in self._hom_variants(graph, target, f"{name}:{n}:{index}"):
                        self._compare_hom(inst)
        logger.info(
            f"Sweep finished: {self.report.instances_compared} instances, "
            f"{len(self.report.disagreements)} disagreements"
        )
        return self.report

    def _list_variants(self, graph: Graph, key: str) -> Iterator[ColoringInstance]:
        if self.config.include_full_lists:
            yield ColoringInstance(graph)
        for j in range(self.config.lists_per_graph):
            rng = random.Random(f"{self.config.rng_seed}:{key}:{j}")
            yield ColoringInstance(graph, ListAssignment(random_lists(graph.vertex_count, self.config.list_mode, rng)))

    def _hom_variants(self, graph: Graph, target: TargetGraph, key: str) -> Iterator[HomInstance]:
        k = target.vertex_count
        if self.config.include_full_lists:
            yield HomInstance(graph, target)
        for j in range(self.config.lists_per_graph):
            rng = random.Random(f"{self.config.rng_seed}:{key}:{j}")
            masks = [rng.randrange(1, 1 << k) for _ in range(graph.vertex_count)]
            yield HomInstance(graph, target, ListAssignment(masks))

    def _run_solver(self, label: str, run: Callable[[], SearchOutcome]) -> Optional[SearchOutcome]:
        self.report.runs += 1
        try:
            outcome = run()
        except ArgumentError:
            raise
        except DiameterColoringError as e:
            logger.error(f"{label}: solver failed: {e}")
            self.report.certificate_failures += 1
            return None
        self.report.progress_violations += outcome.stats.progress_violations
        return outcome

    def _compare_coloring(self, inst: ColoringInstance) -> None:
        self.report.instances_compared += 1
        expected = brute_color(inst, count_all=False).verdict
        d = diameter(inst.graph)
        for mode in self.config.modes:
            if d == INFINITE or not _applicable(mode, d):
                continue
            solver = ListColoringSolver(self.config.solver.with_overrides(mode=mode))
            outcome = self._run_solver(mode.value, lambda: solver.solve(inst))
            if outcome is None or outcome.verdict == expected:
                continue

            def still_failing(candidate: ListInstance) -> bool:
                truth = brute_color(candidate, count_all=False).verdict
                return solver.solve(candidate).verdict != truth

            def admissible(candidate: ListInstance) -> bool:
                cd = diameter(candidate.graph)
                return cd != INFINITE and _applicable(mode, cd)

            self._record(mode.value, expected, outcome.verdict, inst, still_failing, admissible)

    def _compare_hom(self, inst: HomInstance) -> None:
        d = diameter(inst.graph)
        if d == INFINITE or d > 3:
            return
        self.report.instances_compared += 1
        expected = brute_hom(inst, count_all=False).verdict
        for mode in self.config.modes:
            solver = HomomorphismSolver(self.config.solver.with_overrides(mode=mode))
            label = f"hom:{inst.target.name}:{mode.value}"
            outcome = self._run_solver(label, lambda: solver.solve(inst))
            if outcome is None or outcome.verdict == expected:
                continue

            def still_failing(candidate: ListInstance) -> bool:
                truth = brute_hom(candidate, count_all=False).verdict
                return solver.solve(candidate).verdict != truth

            def admissible(candidate: ListInstance) -> bool:
                cd = diameter(candidate.graph)
                return cd != INFINITE and cd <= 3

            self._record(label, expected, outcome.verdict, inst, still_failing, admissible)

    def _record(
        self,
        label: str,
        expected: Verdict,
        actual: Verdict,
        inst: ListInstance,
        still_failing: Callable[[ListInstance], bool],
        admissible: Callable[[ListInstance], bool],
    ) -> None:
        logger.warning(f"{label} answered {actual.value}, oracle says {expected.value}")
        smallest = minimize(inst, still_failing, admissible)
        self.report.disagreements.append(
            Disagreement(
                solver=label,
                expected=expected.value,
                actual=actual.value,
                instance_text=serialize(smallest),  # type: ignore[arg-type]
                original_text=serialize(inst),  # type: ignore[arg-type]
            )
        )


def differential_sweep(config: Optional[SweepConfig] = None) -> SweepReport:
    """Compare every applicable solver with the oracle; see :class:`SweepConfig`."""
    return DifferentialSweep(config or SweepConfig()).run()
