"""Verification engine for topological symmetry groups of the Petersen family graphs."""
from .permgroup import Permutation, PermGroup, parse_permutation
from .spatialgraph import Graph, builtin_graph, automorphism_group

__all__ = ["Permutation", "PermGroup", "parse_permutation", "Graph", "builtin_graph",
           "automorphism_group"]
__version__ = "0.1.0"
