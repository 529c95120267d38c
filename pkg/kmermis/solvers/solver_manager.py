"""
Solver manager for algorithm selection and solver creation.

This module picks the algorithm for a (k, d) cell, creates the matching
solver and reports memory estimates before anything large is allocated.
"""

import logging
from typing import Dict, Union

from ..errors import ParameterError
from ..kmers import DNA, Alphabet
from .base import BaseMisSolver
from .bfs import BfsSolver
from .greedy import ImprovedGreedySolver, SimpleGreedySolver

logger = logging.getLogger(__name__)

AUTO = 'auto'

SOLVERS = {
    1: SimpleGreedySolver,
    2: ImprovedGreedySolver,
    3: BfsSolver,
}


def select_algorithm(k: int, d: int) -> int:
    """
    Pick the fastest algorithm for (k, d).

    Algorithm 1 when d >= k-4 (few members, cheap scans), else Algorithm 3
    when d <= 4 (small BFS balls), else Algorithm 2. The d >= k-4 rule wins
    where the two ranges overlap. All three return the same set.
    """
    if d < 0 or d >= k:
        raise ParameterError(f"d must satisfy 0 <= d < k (k={k}, d={d})")
    if d >= k - 4:
        return 1
    if d <= 4:
        return 3
    return 2


def resolve_algorithm(algorithm: Union[int, str], k: int, d: int) -> int:
    """Turn 'auto' (or 1/2/3 given as strings) into an algorithm number."""
    if str(algorithm).lower() == AUTO:
        chosen = select_algorithm(k, d)
        logger.info(f"Auto-selected algorithm {chosen} for k={k}, d={d}")
        return chosen
    try:
        number = int(algorithm)
    except (TypeError, ValueError):
        raise ParameterError(f"Unknown algorithm {algorithm!r}; use 1, 2, 3 or auto") from None
    if number not in SOLVERS:
        raise ParameterError(f"Unknown algorithm {algorithm!r}; use 1, 2, 3 or auto")
    return number


def create_solver(algorithm: int, alphabet: Alphabet = DNA, memory_budget: int = None,
                  progress_interval: int = None, **kwargs) -> BaseMisSolver:
    """Create the solver for an algorithm number."""
    try:
        solver_class = SOLVERS[algorithm]
    except KeyError:
        raise ParameterError(f"Unknown algorithm {algorithm!r}; use 1, 2, 3 or auto") from None
    solver = solver_class(alphabet, memory_budget, progress_interval, **kwargs)
    logger.debug(f"Created {solver.get_name()} solver for algorithm {algorithm}")
    return solver


def estimate_memory(k: int, d: int, alphabet: Alphabet = DNA) -> Dict[int, int]:
    """Estimated bytes each algorithm allocates for (k, d)."""
    estimates = {}
    for algorithm in SOLVERS:
        solver = create_solver(algorithm, alphabet)
        solver.validate(k, d)
        estimates[algorithm] = solver.estimate_bytes(k, d)
    return estimates
