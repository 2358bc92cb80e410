"""
Diameter Coloring - exact List 3-Coloring for graphs of diameter 2 and 3.

The :class:`DiameterColoring` facade bundles the solvers, the brute-force
oracle, the generators and the instance file format behind one object.
"""

import logging
from typing import List, Optional, TextIO, Union

from .config import SolverConfig
from .core.instance import ColoringInstance
from .core.outcome import SearchOutcome
from .modules.benchmark import BenchmarkConfig, BenchmarkRow, run_benchmark
from .modules.generator import GenSpec, generate
from .modules.homomorphism import HomInstance, TargetGraph
from .modules.homomorphism_solver import HomomorphismSolver
from .modules.instance_io import ParseResult, parse, serialize
from .modules.list_coloring_solver import ListColoringSolver
from .modules.oracle import (
    DEFAULT_CAP,
    OracleReport,
    SweepConfig,
    SweepReport,
    brute_color,
    brute_hom,
    differential_sweep,
)

logger = logging.getLogger(__name__)

Instance = Union[ColoringInstance, HomInstance]


class DiameterColoring:
    """
    Solver front end.

    Every solving method accepts keyword overrides of :class:`SolverConfig`
    fields (``mode``, ``k_const``, ``rng_seed``, ...); ``None`` values are ignored.
    """

    def __init__(self, config: Optional[SolverConfig] = None):
        """
        Initialize the facade.

        Args:
            config: Default solver configuration; SolverConfig() if omitted
        """
        self.config = config or SolverConfig()
        self._coloring_solver = ListColoringSolver(self.config)
        self._hom_solver = HomomorphismSolver(self.config)

    @classmethod
    def from_env(cls, dotenv_path: Optional[str] = None) -> "DiameterColoring":
        """Build the facade from ``DIAMCOL_*`` environment variables."""
        return cls(SolverConfig.from_env(dotenv_path))

    def _config(self, overrides) -> SolverConfig:
        return self.config.with_overrides(**overrides)

    def solve(self, inst: Instance, **overrides) -> SearchOutcome:
        """Decide a coloring or homomorphism instance with the configured mode."""
        if isinstance(inst, HomInstance):
            return self.hom_solve(inst, **overrides)
        return self._coloring_solver.solve(inst, self._config(overrides))

    def solve_diam3(self, inst: ColoringInstance, **overrides) -> SearchOutcome:
        return self._coloring_solver.solve_diam3(inst, self._config(overrides))

    def solve_ms_baseline(self, inst: ColoringInstance, **overrides) -> SearchOutcome:
        return self._coloring_solver.solve_ms_baseline(inst, self._config(overrides))

    def hom_solve(self, inst: HomInstance, **overrides) -> SearchOutcome:
        return self._hom_solver.solve(inst, self._config(overrides))

    def brute_force(self, inst: Instance, cap: int = DEFAULT_CAP) -> OracleReport:
        """Exhaustive verdict and solution count."""
        if isinstance(inst, HomInstance):
            return brute_hom(inst, cap=cap, threads=self.config.threads)
        return brute_color(inst, cap=cap, threads=self.config.threads)

    def generate(self, spec: GenSpec) -> ColoringInstance:
        return generate(spec)

    def parse(self, text: str, target: Optional[Union[str, TargetGraph]] = None) -> ParseResult:
        if isinstance(target, str):
            target = TargetGraph.from_name(target)
        return parse(text, target)

    def serialize(self, inst: Instance) -> str:
        return serialize(inst)

    def differential_sweep(self, config: Optional[SweepConfig] = None) -> SweepReport:
        return differential_sweep(config or SweepConfig(solver=self.config))

    def run_benchmark(self, config: BenchmarkConfig, out: Optional[TextIO] = None) -> List[BenchmarkRow]:
        return run_benchmark(config, out)
