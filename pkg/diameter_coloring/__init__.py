from .config import SolverConfig, SolverMode
from .core.graph import Graph, VertexSet
from .core.instance import ColoringInstance
from .core.outcome import SearchOutcome, SearchStats, Verdict
from .diameter_coloring import DiameterColoring
from .modules.homomorphism import HomInstance, TargetGraph

__version__ = "0.1.0"
__author__ = "fujie"
