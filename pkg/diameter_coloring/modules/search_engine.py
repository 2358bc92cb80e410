"""
Branch-and-reduce driver shared by every search mode.

At each node the engine reduces the instance (R1/R2), finishes it with 2-SAT
when no list has three or more colors (R3), and otherwise asks the mode's
:class:`BranchingStrategy` for a rule name and the children to explore. The
first satisfiable child wins and its coloring is lifted back to the parent.
"""

import logging
import random
import time
from concurrent.futures import ThreadPoolExecutor, as_completed
from dataclasses import dataclass, field
from typing import Callable, Iterable, Iterator, List, Optional, Tuple

from ..config import SolverConfig
from ..core.instance import LayerStructure, ListInstance, finish_two_lists, layers, reduce, verify
from ..core.outcome import Coloring, SearchOutcome, SearchStats, Verdict
from ..exceptions import DiameterColoringError, SearchTimeout

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Branch:
    """
    A child instance produced by a branching rule.

    Attributes:
        instance: The child instance, not yet reduced
        lift: Maps a coloring of the child back to the parent (contractions)
        min_drop: Required decrease of |V3| once the child is reduced
        parent_measure: |V3| of the parent, the reference for ``min_drop``
        resolves: The child is expected to have no 3-list once reduced
    """

    instance: ListInstance
    lift: Optional[Callable[[Coloring], Coloring]] = None
    min_drop: int = 0
    parent_measure: int = 0
    resolves: bool = False


@dataclass
class NodeContext:
    """Per-node information handed to a strategy."""

    depth: int
    path: Tuple[int, ...]
    stats: SearchStats
    config: SolverConfig
    attempts: List[str] = field(default_factory=list)
    _rng: Optional[random.Random] = None

    @property
    def rng(self) -> random.Random:
        # Seeded from the node path so results do not depend on visiting order.
        if self._rng is None:
            node_id = ".".join(str(i) for i in self.path)
            self._rng = random.Random(f"{self.config.rng_seed}:{node_id}")
        return self._rng

    def attempt(self, rule: str) -> None:
        self.attempts.append(rule)

    def describe(self, rule: str) -> str:
        steps = list(self.attempts)
        if not steps or steps[-1] != rule:
            steps.append(rule)
        return ">".join(steps)


class BranchingStrategy:
    """
    Chooses how a reduced node with a non-empty V3 is split.

    Counters in ``ctx.stats`` must be updated inside :meth:`branch` itself;
    the returned children may be a lazy iterable but must not touch them.
    """

    def branch(
        self, inst: ListInstance, layer: LayerStructure, ctx: NodeContext
    ) -> Tuple[str, Iterable[Branch]]:
        """
        Args:
            inst: A reduced instance
            layer: Its layer structure; ``layer.v3`` is non-empty
            ctx: Node depth, path, counters and configuration

        Returns:
            The name of the applied rule and the children in exploration order.
        """
        raise NotImplementedError


@dataclass
class _Frame:
    branch: Branch
    children: Iterator[Branch]
    depth: int
    path: Tuple[int, ...]
    next_index: int = 0


def _lift(branch: Branch, coloring: Coloring) -> Coloring:
    return branch.lift(coloring) if branch.lift is not None else coloring


class SearchEngine:
    """
    Depth-first branch-and-reduce search.

    The search is iterative so deep trees do not hit the recursion limit.
    With ``threads > 1`` the children of the root are explored by a thread
    pool; their results and counters are merged in child order, which keeps
    the verdict, certificate and statistics identical for any thread count.
    """

    def __init__(self, strategy: BranchingStrategy, config: SolverConfig):
        self.strategy = strategy
        self.config = config
        self._deadline: Optional[float] = None

    def run(self, inst: ListInstance) -> SearchOutcome:
        """
        Decide ``inst``.

        Returns:
            SAT with a verified coloring, UNSAT, or TIMEOUT when the
            configured time limit elapses.
        """
        stats = SearchStats()
        started = time.perf_counter()
        if self.config.time_limit is not None:
            self._deadline = time.monotonic() + self.config.time_limit
        else:
            self._deadline = None
        try:
            coloring = self._search(Branch(inst), stats, 0, (), allow_parallel=True)
            verdict = Verdict.SAT if coloring is not None else Verdict.UNSAT
        except SearchTimeout:
            logger.warning(f"Search stopped after the {self.config.time_limit}s time limit")
            coloring, verdict = None, Verdict.TIMEOUT
        stats.wall_time = time.perf_counter() - started

        if coloring is not None and not verify(inst, coloring):
            logger.error(f"Search produced an invalid certificate: {coloring}")
            raise DiameterColoringError("Search produced an invalid certificate")
        return SearchOutcome(verdict=verdict, coloring=coloring, stats=stats)

    def _check_deadline(self) -> None:
        if self._deadline is not None and time.monotonic() > self._deadline:
            raise SearchTimeout(f"Time limit of {self.config.time_limit}s exceeded")

    def _record(self, stats: SearchStats, entry: str) -> None:
        if self.config.record_trace:
            stats.rule_trace.append(entry)

    def _open(
        self, branch: Branch, stats: SearchStats, depth: int, path: Tuple[int, ...]
    ) -> Tuple[Optional[Coloring], Optional[Iterable[Branch]]]:
        """
        Expand one node.

        Returns:
            ``(coloring, None)`` when the node is decided without branching,
            ``(None, children)`` otherwise. The coloring is not lifted.
        """
        self._check_deadline()
        stats.nodes_expanded += 1
        stats.max_depth = max(stats.max_depth, depth)

        reduced = reduce(branch.instance, stats)
        if reduced is None:
            self._record(stats, "R2")
            return None, None
        layer = layers(reduced)
        if branch.min_drop:
            drop = branch.parent_measure - layer.measure_diam2
            if drop < branch.min_drop:
                stats.progress_violations += 1
                logger.warning(
                    f"Branch at {path} removed {drop} full lists, expected at least {branch.min_drop}"
                )
        if branch.resolves and layer.v3:
            stats.domination_misses += 1
            logger.warning(f"Branch at {path} left {len(layer.v3)} full lists undominated")
        if not layer.v3:
            self._record(stats, "R3")
            return finish_two_lists(reduced, stats), None

        ctx = NodeContext(depth=depth, path=path, stats=stats, config=self.config)
        rule, children = self.strategy.branch(reduced, layer, ctx)
        stats.fire(rule)
        self._record(stats, ctx.describe(rule))
        logger.debug(
            f"Node {path}: rule {rule}, |V2|={len(layer.v2)}, |V3|={len(layer.v3)}"
        )
        return None, children

    def _search(
        self,
        root: Branch,
        stats: SearchStats,
        depth: int,
        path: Tuple[int, ...],
        allow_parallel: bool = False,
    ) -> Optional[Coloring]:
        coloring, children = self._open(root, stats, depth, path)
        if children is None:
            return _lift(root, coloring) if coloring is not None else None
        if allow_parallel and self.config.threads > 1:
            coloring = self._explore_parallel(children, stats, depth, path)
            return _lift(root, coloring) if coloring is not None else None

        stack = [_Frame(root, iter(children), depth, path)]
        while stack:
            frame = stack[-1]
            child = next(frame.children, None)
            if child is None:
                stack.pop()
                continue
            child_path = frame.path + (frame.next_index,)
            frame.next_index += 1
            coloring, grandchildren = self._open(child, stats, frame.depth + 1, child_path)
            if grandchildren is not None:
                stack.append(_Frame(child, iter(grandchildren), frame.depth + 1, child_path))
                continue
            if coloring is not None:
                coloring = _lift(child, coloring)
                while stack:
                    coloring = _lift(stack.pop().branch, coloring)
                return coloring
        return None

    def _run_child(
        self, child: Branch, depth: int, path: Tuple[int, ...]
    ) -> Tuple[Optional[Coloring], SearchStats]:
        child_stats = SearchStats()
        coloring = self._search(child, child_stats, depth, path)
        return coloring, child_stats

    def _explore_parallel(
        self,
        children: Iterable[Branch],
        stats: SearchStats,
        depth: int,
        path: Tuple[int, ...],
    ) -> Optional[Coloring]:
        branches = list(children)
        if not branches:
            return None
        results: List[Optional[Tuple[Optional[Coloring], SearchStats]]] = [None] * len(branches)
        workers = min(self.config.threads, len(branches))
        logger.debug(f"Exploring {len(branches)} root children on {workers} threads")

        with ThreadPoolExecutor(max_workers=workers) as executor:
            future_to_index = {
                executor.submit(self._run_child, child, depth + 1, path + (index,)): index
                for index, child in enumerate(branches)
            }
            try:
                for future in as_completed(future_to_index):
                    results[future_to_index[future]] = future.result()
                    if _first_sat_settled(results):
                        break
            finally:
                for future in future_to_index:
                    future.cancel()

        for result in results:
            if result is None:
                break
            coloring, child_stats = result
            stats.merge(child_stats)
            if coloring is not None:
                return coloring
        return None


def _first_sat_settled(
    results: List[Optional[Tuple[Optional[Coloring], SearchStats]]]
) -> bool:
    """True once some child is SAT and every earlier child has finished."""
    for result in results:
        if result is None:
            return False
        if result[0] is not None:
            return True
    return False
