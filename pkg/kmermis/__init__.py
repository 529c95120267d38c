"""
kmermis - Maximal Independent Sets of the k-mer Space
=====================================================

Computes the lexicographic greedy maximal independent set of all k-mers under
edit distance: a set M whose members are pairwise more than d edits apart and
such that every other k-mer lies within d edits of some member.

Main entry points:
    run_greedy_simple / run_greedy_improved / run_bfs_mis   the three algorithms
    verify_mis                                              independent checks
    MisRunner                                               compute/verify/table facade

Usage:
    from kmermis import run_bfs_mis, verify_mis

    result = run_bfs_mis(8, 2)       # 1025 members
    assert verify_mis(result).ok
"""

from .config import load_config, get_config, CONFIG
from .errors import CapacityError, KmerSpaceError, MisFileError, ParameterError, RejectedInputError
from .kmers import (DNA, Alphabet, KmerCode, MisResult, decode, encode, enumerate_space,
                    homopolymer_distances, substitution_neighbors)
from .edit_distance import EditBudget, EditWorkspace, edit_distance_strings, edit_full, edit_within
from .solvers import (FilterVerdict, MappingTable, GraphVertex, Level, DistanceField, build_mapping,
                      filter_bounds, graph_distance, graph_distances_from, graph_neighbors,
                      run_bfs_mis, run_greedy_improved, run_greedy_simple, select_algorithm)
from .verify import VerificationReport, brute_oracle_mis, verify_independent, verify_maximal, verify_mis
from .runner import MisRunner, RunConfig, RunStats, PUBLISHED_SIZES

# Package info
__version__ = "1.0.0"

__all__ = [
    'CONFIG', 'load_config', 'get_config',
    'KmerSpaceError', 'RejectedInputError', 'ParameterError', 'CapacityError', 'MisFileError',
    'DNA', 'Alphabet', 'KmerCode', 'MisResult', 'encode', 'decode', 'enumerate_space',
    'substitution_neighbors', 'homopolymer_distances',
    'EditBudget', 'EditWorkspace', 'edit_full', 'edit_within', 'edit_distance_strings',
    'FilterVerdict', 'MappingTable', 'filter_bounds', 'build_mapping',
    'run_greedy_simple', 'run_greedy_improved',
    'GraphVertex', 'Level', 'DistanceField', 'graph_neighbors', 'graph_distance', 'graph_distances_from',
    'run_bfs_mis', 'select_algorithm',
    'VerificationReport', 'verify_independent', 'verify_maximal', 'verify_mis', 'brute_oracle_mis',
    'MisRunner', 'RunConfig', 'RunStats', 'PUBLISHED_SIZES',
]
