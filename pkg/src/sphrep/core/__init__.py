"""Core functionality for sphrep."""

from sphrep.core.exceptions import SphrepError
from sphrep.core.generators import get_graph, list_generators
from sphrep.core.graph import Graph, build_graph
from sphrep.core.representation import RepresentationMatrix
from sphrep.core.solver import SolverOptions, solve_primal

__all__ = [
    "Graph",
    "RepresentationMatrix",
    "SolverOptions",
    "SphrepError",
    "build_graph",
    "get_graph",
    "list_generators",
    "solve_primal",
]
