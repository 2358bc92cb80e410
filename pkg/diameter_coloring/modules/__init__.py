# Modules for Diameter Coloring

from .homomorphism_solver import HomomorphismSolver
from .list_coloring_solver import ListColoringSolver

__all__ = ["HomomorphismSolver", "ListColoringSolver"]
