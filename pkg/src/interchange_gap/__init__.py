"""Exact and numerical tools for second eigenspaces of interchange and exclusion processes on weighted graphs."""

from .exactla import RationalMatrix, min_specht_eigenvalue, nullspace, rank, sym_eig
from .graphcore import WeightedGraph, lambda2, parse_graph, read_graph, schur_reduce
from .octopus import correction_matrix, klein_criterion, octopus, young_symmetrizer
from .permgroup import GroupAlgebraElement, Permutation, TranspositionSum
from .processes import exclusion_generator, full_operator_matrix, permutation_module_generator
from .specht import Partition, Tableau, specht_module

__all__ = [
    "GroupAlgebraElement",
    "Partition",
    "Permutation",
    "RationalMatrix",
    "Tableau",
    "TranspositionSum",
    "WeightedGraph",
    "correction_matrix",
    "exclusion_generator",
    "full_operator_matrix",
    "klein_criterion",
    "lambda2",
    "min_specht_eigenvalue",
    "nullspace",
    "octopus",
    "parse_graph",
    "permutation_module_generator",
    "rank",
    "read_graph",
    "schur_reduce",
    "specht_module",
    "sym_eig",
    "young_symmetrizer",
]
