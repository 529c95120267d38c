"""
Edit-distance kernels for kmermis.

Two kernels work on digit arrays (see kmers.fill_digits):

- full_distance: the textbook Levenshtein DP with two rolling rows, used by
  every oracle.
- within_distance: the banded predicate edit <= d, restricted to the 2d+1
  diagonals around the main one, O(d*k) per call, with an early exit as soon
  as a whole band row exceeds d.

Both are numba kernels so solvers and verifiers can call them from their own
compiled loops; the KmerCode-level wrappers below are what library users call.
"""

from dataclasses import dataclass
from typing import Union

import numpy as np
from numba import njit

from .errors import ParameterError
from .kmers import DNA, Alphabet, KmerCode


@njit(cache=True, nogil=True)
def full_distance(a, n, b, m, prev, curr):
    """Levenshtein distance between a[:n] and b[:m]; prev/curr hold >= m+1 cells."""
    for j in range(m + 1):
        prev[j] = j
    for i in range(1, n + 1):
        curr[0] = i
        ai = a[i - 1]
        for j in range(1, m + 1):
            best = prev[j - 1] + (0 if ai == b[j - 1] else 1)
            x = prev[j] + 1
            if x < best:
                best = x
            x = curr[j - 1] + 1
            if x < best:
                best = x
            curr[j] = best
        prev, curr = curr, prev
    return prev[m]


@njit(cache=True, nogil=True)
def within_distance(a, n, b, m, d, prev, curr):
    """
    True iff the Levenshtein distance between a[:n] and b[:m] is <= d.

    Row cells are indexed by diagonal t = j - i + d in [0, 2d]; prev/curr hold
    >= 2d+1 cells. Values saturate at d+1, which is all the predicate needs.
    """
    if n - m > d or m - n > d:
        return False
    width = 2 * d + 1
    big = d + 1
    for t in range(width):
        prev[t] = big
    for j in range(min(m, d) + 1):
        prev[j + d] = j
    for i in range(1, n + 1):
        row_min = big
        for t in range(width):
            curr[t] = big
        j_lo = i - d if i > d else 0
        j_hi = i + d if i + d < m else m
        ai = a[i - 1]
        for j in range(j_lo, j_hi + 1):
            t = j - i + d
            if j == 0:
                val = i
            else:
                val = prev[t] + (0 if ai == b[j - 1] else 1)
                if t + 1 < width:
                    x = prev[t + 1] + 1
                    if x < val:
                        val = x
                if t > 0:
                    x = curr[t - 1] + 1
                    if x < val:
                        val = x
            if val > big:
                val = big
            curr[t] = val
            if val < row_min:
                row_min = val
        if row_min > d:
            return False
        prev, curr = curr, prev
    return prev[m - n + d] <= d


@dataclass(frozen=True)
class EditBudget:
    """The distance threshold d of a run."""

    d: int

    def __post_init__(self):
        if self.d < 0:
            raise ParameterError(f"d must be >= 0, got {self.d}")

    def check_k(self, k: int) -> 'EditBudget':
        if self.d >= k:
            raise ParameterError(f"d must be smaller than k (d={self.d}, k={k})")
        return self


class EditWorkspace:
    """
    Reusable scratch for the distance kernels.

    Not thread-safe: give each worker its own workspace.
    """

    def __init__(self, max_len: int = 32, max_d: int = 32):
        self.a = np.empty(max_len, dtype=np.int64)
        self.b = np.empty(max_len, dtype=np.int64)
        size = max(max_len + 1, 2 * max_d + 1)
        self.prev = np.empty(size, dtype=np.int64)
        self.curr = np.empty(size, dtype=np.int64)

    def fit(self, max_len: int, d: int = 0) -> 'EditWorkspace':
        """Grow the buffers if a call needs more room than they have."""
        if len(self.a) < max_len:
            self.a = np.empty(max_len, dtype=np.int64)
            self.b = np.empty(max_len, dtype=np.int64)
        size = max(max_len + 1, 2 * d + 1)
        if len(self.prev) < size:
            self.prev = np.empty(size, dtype=np.int64)
            self.curr = np.empty(size, dtype=np.int64)
        return self

    def load(self, u: KmerCode, v: KmerCode, alphabet: Alphabet):
        self.a[:u.k] = alphabet.digits(u)
        self.b[:v.k] = alphabet.digits(v)


def edit_full(u: KmerCode, v: KmerCode, alphabet: Alphabet = DNA,
              workspace: EditWorkspace = None) -> int:
    """Levenshtein distance between two k-mers (lengths may differ)."""
    ws = (workspace or EditWorkspace(max(u.k, v.k))).fit(max(u.k, v.k))
    ws.load(u, v, alphabet)
    return int(full_distance(ws.a, u.k, ws.b, v.k, ws.prev, ws.curr))


def edit_within(u: KmerCode, v: KmerCode, budget: Union[EditBudget, int],
                alphabet: Alphabet = DNA, workspace: EditWorkspace = None) -> bool:
    """True iff edit_full(u, v) <= d, computed on a band of 2d+1 diagonals."""
    d = budget.d if isinstance(budget, EditBudget) else EditBudget(int(budget)).d
    ws = (workspace or EditWorkspace(max(u.k, v.k), d)).fit(max(u.k, v.k), d)
    ws.load(u, v, alphabet)
    return bool(within_distance(ws.a, u.k, ws.b, v.k, d, ws.prev, ws.curr))


def edit_distance_strings(s: str, t: str) -> int:
    """Plain-Python Levenshtein distance between two strings."""
    prev = list(range(len(t) + 1))
    for i, cs in enumerate(s, 1):
        curr = [i]
        for j, ct in enumerate(t, 1):
            curr.append(min(prev[j - 1] + (cs != ct), prev[j] + 1, curr[j - 1] + 1))
        prev = curr
    return prev[-1]
