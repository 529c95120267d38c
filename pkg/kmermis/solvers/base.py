"""
Base MIS solver interface.

This module defines the common interface that all three MIS algorithms implement,
plus the member storage and progress bookkeeping they share.
"""

import logging
import time
from math import comb
from abc import ABC, abstractmethod
from dataclasses import dataclass, asdict
from typing import Dict, Iterator, Tuple

import numpy as np

from ..config import get_config
from ..errors import CapacityError, ParameterError
from ..kmers import DNA, Alphabet, MisResult

logger = logging.getLogger(__name__)

# Layout of the int64 counter vector the kernels update in place
EDIT_CALLS = 0
FILTER_REJECTS = 1
FILTER_ACCEPTS = 2
NEIGHBOR_HITS = 3
VERTICES_EXPLORED = 4
N_COUNTERS = 5


@dataclass
class SolverCounters:
    """Work counters of one solver run."""

    edit_calls: int = 0
    bound_filter_hits: int = 0
    neighbor_hits: int = 0
    vertices_explored: int = 0
    max_dequeues: int = 0

    @classmethod
    def from_vector(cls, counters: np.ndarray, max_dequeues: int = 0) -> 'SolverCounters':
        return cls(
            edit_calls=int(counters[EDIT_CALLS]),
            bound_filter_hits=int(counters[FILTER_REJECTS] + counters[FILTER_ACCEPTS]),
            neighbor_hits=int(counters[NEIGHBOR_HITS]),
            vertices_explored=int(counters[VERTICES_EXPLORED]),
            max_dequeues=max_dequeues,
        )

    def to_dict(self) -> Dict[str, int]:
        return asdict(self)


class MemberStore:
    """
    Growable per-member arrays: codes, digit rows and homopolymer anchors.

    Kernels write into these arrays in place and hand control back when they
    are full; grow() doubles them (bounded by the size of the space).
    """

    def __init__(self, k: int, sigma: int, limit: int, initial: int = 1024):
        self.k = k
        self.sigma = sigma
        self.limit = limit
        capacity = max(1, min(initial, limit))
        self.codes = np.empty(capacity, dtype=np.int64)
        self.digits = np.empty((capacity, k), dtype=np.int8)
        self.anchors = np.empty((capacity, sigma), dtype=np.int8)
        self.seen = np.full(capacity, -1, dtype=np.int64)
        self.count = 0

    @property
    def capacity(self) -> int:
        return len(self.codes)

    def grow(self):
        capacity = min(self.limit, 2 * self.capacity)
        if capacity <= self.capacity:
            raise CapacityError(f"Member store cannot grow beyond {self.limit} entries")
        self.codes = np.resize(self.codes, capacity)
        self.digits = np.resize(self.digits, (capacity, self.k))
        self.anchors = np.resize(self.anchors, (capacity, self.sigma))
        seen = np.full(capacity, -1, dtype=np.int64)
        seen[:self.count] = self.seen[:self.count]
        self.seen = seen
        logger.debug(f"Member store grown to {capacity} entries")

    def result_codes(self) -> np.ndarray:
        return self.codes[:self.count].copy()

    @staticmethod
    def bytes_per_member(k: int, sigma: int) -> int:
        return 8 + k + sigma + 8


class BaseMisSolver(ABC):
    """Abstract base class for all MIS algorithms."""

    algorithm = 0

    def __init__(self, alphabet: Alphabet = DNA, memory_budget: int = None, progress_interval: int = None):
        config = get_config()
        self.alphabet = alphabet
        self.memory_budget = memory_budget if memory_budget is not None else config['memory_budget']
        self.progress_interval = progress_interval if progress_interval is not None else config['progress_interval']
        self.name = self.__class__.__name__.lower().replace('solver', '')
        self.counters = SolverCounters()

    @abstractmethod
    def solve(self, k: int, d: int) -> MisResult:
        """
        Compute the lexicographic greedy MIS of the k-mer space.

        Args:
            k: k-mer length
            d: distance threshold, 0 <= d < k

        Returns:
            MisResult with members in insertion order
        """
        pass

    @abstractmethod
    def estimate_bytes(self, k: int, d: int) -> int:
        """Upper estimate of the tables a run at (k, d) allocates."""
        pass

    def get_name(self) -> str:
        """Get the name of this solver."""
        return self.name

    def validate(self, k: int, d: int) -> Tuple[int, int]:
        k = self.alphabet.validate_k(k)
        if not isinstance(d, (int, np.integer)) or d < 0 or d >= k:
            raise ParameterError(f"d must satisfy 0 <= d < k (k={k}, d={d})")
        return k, int(d)

    def check_capacity(self, k: int, d: int):
        required = self.estimate_bytes(k, d)
        if required > self.memory_budget:
            raise CapacityError(
                f"Algorithm {self.algorithm} at k={k}, d={d} needs about {required:,} bytes, "
                f"budget is {self.memory_budget:,} bytes",
                required_bytes=required, budget_bytes=self.memory_budget)

    def chunks(self, total: int) -> Iterator[Tuple[int, int]]:
        """Split [0, total) into progress_interval-percent ranges."""
        step = max(1, total * max(1, self.progress_interval) // 100)
        for start in range(0, total, step):
            yield start, min(total, start + step)

    def log_start(self, k: int, d: int) -> float:
        logger.info(f"Algorithm {self.algorithm} ({self.name}) started: k={k}, d={d}")
        return time.time()

    def log_progress(self, done: int, total: int, members: int):
        logger.info(f"  {self.name}: {done / total:6.1%} of {total:,} k-mers, |M|={members:,}")

    def log_end(self, k: int, d: int, size: int, started: float):
        logger.info(f"Algorithm {self.algorithm} finished: k={k}, d={d}, |M|={size:,}, "
                    f"{time.time() - started:.2f}s")


def hamming_ball_size(k: int, sigma: int, radius: int) -> int:
    """Number of k-mers within Hamming distance `radius` of a fixed k-mer."""
    return sum(comb(k, i) * (sigma - 1) ** i for i in range(radius + 1))


def member_upper_bound(k: int, d: int, sigma: int) -> int:
    """
    Packing bound on |M|: balls of Hamming radius floor(d/2) around members
    are disjoint (edit distance never exceeds Hamming distance).
    """
    n = sigma ** k
    return max(1, n // hamming_ball_size(k, sigma, d // 2))
