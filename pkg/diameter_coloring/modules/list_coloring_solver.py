"""
List 3-Coloring solver for graphs of small diameter.
"""

import logging
from typing import Optional

from ..config import SolverConfig, SolverMode
from ..core.graph import INFINITE, diameter
from ..core.instance import ColoringInstance
from ..core.outcome import SearchOutcome
from ..exceptions import ArgumentError
from .branching_rules import (
    CompleteBranching,
    DegreeBallBranching,
    DominatingSetBranching,
    WitnessBranching,
)
from .search_engine import BranchingStrategy, SearchEngine

logger = logging.getLogger(__name__)

# Largest input diameter each mode accepts; None means any graph.
DIAMETER_LIMITS = {
    SolverMode.COMPLETE: None,
    SolverMode.PAPER: 2,
    SolverMode.RANDOMIZED: 2,
    SolverMode.BASELINE_MS: 2,
    SolverMode.DIAM3: 3,
}


def strategy_for(mode: SolverMode, graph_diameter: int) -> BranchingStrategy:
    if mode == SolverMode.COMPLETE:
        return CompleteBranching()
    if mode == SolverMode.PAPER:
        return WitnessBranching(randomized=False)
    if mode == SolverMode.RANDOMIZED:
        return WitnessBranching(randomized=True)
    if mode == SolverMode.BASELINE_MS:
        return DominatingSetBranching()
    return DegreeBallBranching(graph_diameter)


class ListColoringSolver:
    """
    Decides List 3-Coloring in one of the solver modes.

    COMPLETE accepts any graph. PAPER, RANDOMIZED and BASELINE_MS need a
    connected graph of diameter at most 2, DIAM3 one of diameter at most 3.
    """

    def __init__(self, config: Optional[SolverConfig] = None):
        """
        Initialize the solver.

        Args:
            config: Default configuration for every call; SolverConfig() if omitted
        """
        self.config = config or SolverConfig()

    def check_diameter(self, inst: ColoringInstance, mode: SolverMode) -> int:
        """
        Validate the diameter precondition of ``mode``.

        Returns:
            The diameter of the instance graph, or -1 if it was not needed.

        Raises:
            ArgumentError: If the graph is disconnected or too wide for ``mode``
        """
        limit = DIAMETER_LIMITS[mode]
        if limit is None:
            return -1
        d = diameter(inst.graph)
        if d == INFINITE:
            raise ArgumentError(f"Mode {mode.value} requires a connected graph")
        if d > limit:
            raise ArgumentError(
                f"Mode {mode.value} requires diameter at most {limit}, got {d}"
            )
        return int(d)

    def solve(
        self, inst: ColoringInstance, config: Optional[SolverConfig] = None
    ) -> SearchOutcome:
        """
        Decide a List 3-Coloring instance.

        Args:
            inst: The instance
            config: Overrides the solver's default configuration

        Returns:
            SearchOutcome with verdict, verified coloring when SAT, and counters.

        Raises:
            ArgumentError: If the graph violates the mode's diameter precondition
        """
        cfg = config or self.config
        if not isinstance(inst, ColoringInstance):
            raise ArgumentError("ListColoringSolver expects a ColoringInstance")
        graph_diameter = self.check_diameter(inst, cfg.mode)
        logger.info(
            f"Solving {inst.vertex_count} vertices, {inst.graph.edge_count} edges "
            f"in {cfg.mode.value} mode"
        )
        engine = SearchEngine(strategy_for(cfg.mode, graph_diameter), cfg)
        outcome = engine.run(inst)
        logger.info(
            f"Verdict {outcome.verdict.value} after {outcome.stats.nodes_expanded} nodes "
            f"in {outcome.stats.wall_time:.3f}s"
        )
        return outcome

    def solve_diam3(
        self, inst: ColoringInstance, config: Optional[SolverConfig] = None
    ) -> SearchOutcome:
        """Degree branching plus dominating-ball enumeration, for diameter <= 3."""
        cfg = (config or self.config).with_overrides(mode=SolverMode.DIAM3)
        return self.solve(inst, cfg)

    def solve_ms_baseline(
        self, inst: ColoringInstance, config: Optional[SolverConfig] = None
    ) -> SearchOutcome:
        """Dominating-set enumeration, for diameter <= 2."""
        cfg = (config or self.config).with_overrides(mode=SolverMode.BASELINE_MS)
        return self.solve(inst, cfg)
