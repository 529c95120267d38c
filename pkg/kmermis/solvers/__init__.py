"""
MIS solvers package.

One solver per algorithm, all implementing BaseMisSolver and all returning the
same lexicographic greedy MIS:

    1  SimpleGreedySolver    every k-mer against every member
    2  ImprovedGreedySolver  neighbour mapping reuse plus homopolymer bounds
    3  BfsSolver             incremental BFS over the k-mer/(k-1)-mer graph
"""

from .base import BaseMisSolver, SolverCounters
from .greedy import (FilterVerdict, MappingTable, ImprovedGreedySolver, SimpleGreedySolver,
                     build_mapping, filter_bounds, run_greedy_improved, run_greedy_simple)
from .bfs import (BfsSolver, DistanceField, GraphVertex, Level, graph_distance,
                  graph_distances_from, graph_neighbors, run_bfs_mis)
from .solver_manager import create_solver, estimate_memory, resolve_algorithm, select_algorithm

__all__ = [
    'BaseMisSolver', 'SolverCounters',
    'FilterVerdict', 'MappingTable', 'ImprovedGreedySolver', 'SimpleGreedySolver',
    'build_mapping', 'filter_bounds', 'run_greedy_improved', 'run_greedy_simple',
    'BfsSolver', 'DistanceField', 'GraphVertex', 'Level', 'graph_distance',
    'graph_distances_from', 'graph_neighbors', 'run_bfs_mis',
    'create_solver', 'estimate_memory', 'resolve_algorithm', 'select_algorithm',
]
