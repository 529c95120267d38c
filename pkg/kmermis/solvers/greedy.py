"""
Greedy MIS solvers (Algorithms 1 and 2).

Both walk the k-mer space in lexicographic order and add a k-mer to M when
no earlier member lies within edit distance d. Algorithm 2 reaches the same
decisions with less work:

1. it first retries the members its substitution neighbours were mapped to,
2. then scans M with the homopolymer bounds
       max_s |v_s - u_s| > d   -> u cannot map v (REJECT)
       min_s  v_s + u_s  <= d  -> u maps v without a DP (ACCEPT)
   where x_s = edit(x, s^k) = k - count_s(x), and runs the banded DP only
   for UNDECIDED members.
"""

import logging
from enum import IntEnum
from typing import Optional, Sequence, Tuple, Union

import numpy as np
from numba import njit

from ..edit_distance import within_distance
from ..kmers import (DNA, Alphabet, KmerCode, MisResult, fill_digits,
                     homopolymer_distances_into, powers, substitution_neighbors_into)
from .base import (BaseMisSolver, MemberStore, SolverCounters, EDIT_CALLS, FILTER_ACCEPTS,
                   FILTER_REJECTS, NEIGHBOR_HITS, N_COUNTERS, member_upper_bound)
from .bfs import multi_source_cover

logger = logging.getLogger(__name__)

UNMAPPED_16 = int(np.iinfo(np.uint16).max)
UNMAPPED_32 = int(np.iinfo(np.uint32).max)
# 16-bit cells hold member indices while |M| <= 65534
INDEX_LIMIT_16 = 65534


class FilterVerdict(IntEnum):
    REJECT = 0
    ACCEPT = 1
    UNDECIDED = 2


@njit(cache=True, nogil=True)
def bound_verdict(vs, us, sigma, d):
    """Homopolymer-bound verdict for candidate member u against query v."""
    max_diff = 0
    min_sum = 1 << 30
    for s in range(sigma):
        a = vs[s]
        b = us[s]
        diff = a - b if a > b else b - a
        if diff > max_diff:
            max_diff = diff
        if a + b < min_sum:
            min_sum = a + b
    if max_diff > d:
        return 0
    if min_sum <= d:
        return 1
    return 2


@njit(cache=True, nogil=True)
def _simple_greedy_chunk(start, stop, k, sigma, d, codes, digits, count, counters, vd, prev, curr):
    """Algorithm 1 over codes [start, stop). Returns (next code, |M|); stops early when `codes` is full."""
    v = start
    while v < stop:
        if count == codes.shape[0]:
            return v, count
        fill_digits(v, k, sigma, vd)
        mapped = False
        for i in range(count):
            counters[EDIT_CALLS] += 1
            if within_distance(digits[i], k, vd, k, d, prev, curr):
                mapped = True
                break
        if not mapped:
            codes[count] = v
            for t in range(k):
                digits[count, t] = vd[t]
            count += 1
        v += 1
    return v, count


@njit(cache=True, nogil=True)
def _improved_greedy_chunk(start, stop, k, sigma, d, pw, mapping, unmapped, index_limit,
                           codes, digits, anchors, seen, count, counters,
                           vd, nbrs, vs, prev, curr):
    """
    Algorithm 2 over codes [start, stop). Returns (next code, |M|).

    Hands control back when the member arrays are full, or when one more member
    would not fit the mapping cell width (the caller widens and resumes).
    seen[i] == v marks member i as already rejected by a DP for query v.
    """
    v = start
    while v < stop:
        if count == codes.shape[0]:
            return v, count
        nn = substitution_neighbors_into(v, k, sigma, pw, vd, nbrs)
        mapped = False
        # shared mappings of already-processed neighbours first
        for j in range(nn):
            m = mapping[nbrs[j]]
            if m == unmapped or seen[m] == v:
                continue
            seen[m] = v
            counters[EDIT_CALLS] += 1
            if within_distance(digits[m], k, vd, k, d, prev, curr):
                mapping[v] = m
                counters[NEIGHBOR_HITS] += 1
                mapped = True
                break
        if mapped:
            v += 1
            continue
        homopolymer_distances_into(vd, k, sigma, vs)
        for i in range(count):
            if seen[i] == v:
                continue
            verdict = bound_verdict(vs, anchors[i], sigma, d)
            if verdict == 0:
                counters[FILTER_REJECTS] += 1
                continue
            if verdict == 1:
                counters[FILTER_ACCEPTS] += 1
                mapping[v] = i
                mapped = True
                break
            counters[EDIT_CALLS] += 1
            if within_distance(digits[i], k, vd, k, d, prev, curr):
                mapping[v] = i
                mapped = True
                break
        if not mapped:
            if count == index_limit:
                return v, count
            codes[count] = v
            for t in range(k):
                digits[count, t] = vd[t]
            for s in range(sigma):
                anchors[count, s] = vs[s]
            mapping[v] = count
            count += 1
        v += 1
    return v, count


class MappingTable:
    """
    For every k-mer code, the index (into the MIS members) of one member
    within edit distance d, or UNMAPPED.

    Cells are 16-bit while the member indices fit, 32-bit otherwise.
    """

    def __init__(self, k: int, d: int, entries: np.ndarray, members: MisResult):
        self.k = k
        self.d = d
        self.entries = entries
        self.members = members
        self.entries.setflags(write=False)

    @property
    def width(self) -> int:
        return self.entries.dtype.itemsize

    @property
    def unmapped(self) -> int:
        return int(np.iinfo(self.entries.dtype).max)

    def __len__(self) -> int:
        return len(self.entries)

    def __getitem__(self, v: Union[int, KmerCode]) -> Optional[int]:
        code = v.code if isinstance(v, KmerCode) else int(v)
        entry = int(self.entries[code])
        return None if entry == self.unmapped else entry

    def lookup(self, v: Union[int, KmerCode]) -> Optional[KmerCode]:
        """The member a k-mer is mapped to."""
        index = self[v]
        if index is None:
            return None
        return KmerCode(self.k, int(self.members.codes[index]))

    def is_complete(self) -> bool:
        return not np.any(self.entries == self.unmapped)

    def cluster_sizes(self) -> np.ndarray:
        """Number of k-mers mapped to each member, in member order."""
        mapped = self.entries[self.entries != self.unmapped]
        return np.bincount(mapped, minlength=len(self.members))

    @staticmethod
    def cell_dtype(member_count: int):
        return np.uint16 if member_count <= INDEX_LIMIT_16 else np.uint32


def homopolymer_anchors(result: MisResult) -> np.ndarray:
    """edit(u, s^k) for every member u (rows) and letter s (columns)."""
    sigma = result.alphabet.size
    anchors = np.empty((len(result), sigma), dtype=np.int64)
    digits = np.empty(result.k, dtype=np.int64)
    for i, code in enumerate(result.codes):
        fill_digits(code, result.k, sigma, digits)
        homopolymer_distances_into(digits, result.k, sigma, anchors[i])
    return anchors


def filter_bounds(v_sigma: Sequence[int], anchors_for_u: Sequence[int], d: int) -> FilterVerdict:
    """
    Classify member u for query v from their homopolymer distances alone.

    REJECT is tested first: u cannot be within d of v. ACCEPT: u is within d
    of v without running a DP. UNDECIDED: a DP is needed.
    """
    vs = np.asarray(v_sigma, dtype=np.int64)
    us = np.asarray(anchors_for_u, dtype=np.int64)
    if vs.shape != us.shape:
        raise ValueError(f"Homopolymer vectors differ in length: {len(vs)} vs {len(us)}")
    return FilterVerdict(bound_verdict(vs, us, len(vs), d))


class SimpleGreedySolver(BaseMisSolver):
    """Algorithm 1: compare every k-mer against every member found so far."""

    algorithm = 1

    def estimate_bytes(self, k: int, d: int) -> int:
        sigma = self.alphabet.size
        return member_upper_bound(k, d, sigma) * MemberStore.bytes_per_member(k, sigma)

    def solve(self, k: int, d: int) -> MisResult:
        k, d = self.validate(k, d)
        self.check_capacity(k, d)
        sigma = self.alphabet.size
        n = sigma ** k
        started = self.log_start(k, d)

        store = MemberStore(k, sigma, limit=n)
        counters = np.zeros(N_COUNTERS, dtype=np.int64)
        vd = np.empty(k, dtype=np.int64)
        prev = np.empty(2 * d + 1, dtype=np.int64)
        curr = np.empty(2 * d + 1, dtype=np.int64)

        for start, stop in self.chunks(n):
            v = start
            while v < stop:
                v, store.count = _simple_greedy_chunk(v, stop, k, sigma, d, store.codes, store.digits,
                                                      store.count, counters, vd, prev, curr)
                if v < stop:
                    store.grow()
            self.log_progress(stop, n, store.count)

        self.counters = SolverCounters.from_vector(counters)
        result = MisResult(k, d, store.result_codes(), self.algorithm, alphabet=self.alphabet)
        self.log_end(k, d, len(result), started)
        return result


class ImprovedGreedySolver(BaseMisSolver):
    """Algorithm 2: neighbour mapping reuse plus homopolymer bound filters."""

    algorithm = 2

    def __init__(self, *args, **kwargs):
        super().__init__(*args, **kwargs)
        self.mapping: Optional[MappingTable] = None

    def estimate_bytes(self, k: int, d: int) -> int:
        sigma = self.alphabet.size
        bound = member_upper_bound(k, d, sigma)
        cell = np.dtype(MappingTable.cell_dtype(bound)).itemsize
        return sigma ** k * cell + bound * MemberStore.bytes_per_member(k, sigma)

    def solve(self, k: int, d: int) -> MisResult:
        result, self.mapping = self.solve_with_mapping(k, d)
        return result

    def solve_with_mapping(self, k: int, d: int) -> Tuple[MisResult, MappingTable]:
        k, d = self.validate(k, d)
        self.check_capacity(k, d)
        sigma = self.alphabet.size
        n = sigma ** k
        pw = powers(sigma, k)
        started = self.log_start(k, d)

        mapping = np.full(n, UNMAPPED_16, dtype=np.uint16)
        unmapped, index_limit = UNMAPPED_16, INDEX_LIMIT_16
        store = MemberStore(k, sigma, limit=n)
        counters = np.zeros(N_COUNTERS, dtype=np.int64)
        vd = np.empty(k, dtype=np.int64)
        nbrs = np.empty(k * (sigma - 1), dtype=np.int64)
        vs = np.empty(sigma, dtype=np.int64)
        prev = np.empty(2 * d + 1, dtype=np.int64)
        curr = np.empty(2 * d + 1, dtype=np.int64)

        for start, stop in self.chunks(n):
            v = start
            while v < stop:
                v, store.count = _improved_greedy_chunk(
                    v, stop, k, sigma, d, pw, mapping, unmapped, index_limit,
                    store.codes, store.digits, store.anchors, store.seen, store.count, counters,
                    vd, nbrs, vs, prev, curr)
                if v >= stop:
                    break
                if store.count == index_limit and mapping.dtype == np.uint16:
                    logger.info(f"Widening mapping table to 32-bit cells at |M|={store.count:,}")
                    wide = mapping.astype(np.uint32)
                    wide[mapping == UNMAPPED_16] = UNMAPPED_32
                    mapping = wide
                    unmapped, index_limit = UNMAPPED_32, UNMAPPED_32 - 1
                else:
                    store.grow()
            self.log_progress(stop, n, store.count)

        self.counters = SolverCounters.from_vector(counters)
        result = MisResult(k, d, store.result_codes(), self.algorithm, alphabet=self.alphabet)
        table = MappingTable(k, d, mapping, result)
        self.log_end(k, d, len(result), started)
        logger.debug(f"Algorithm 2 counters: {self.counters.to_dict()}")
        return result, table


def run_greedy_simple(k: int, d: int, alphabet: Alphabet = DNA, memory_budget: int = None) -> MisResult:
    """Algorithm 1 with default settings."""
    return SimpleGreedySolver(alphabet, memory_budget).solve(k, d)


def run_greedy_improved(k: int, d: int, alphabet: Alphabet = DNA,
                        memory_budget: int = None) -> Tuple[MisResult, MappingTable]:
    """Algorithm 2 with default settings; returns the MIS and its mapping table."""
    return ImprovedGreedySolver(alphabet, memory_budget).solve_with_mapping(k, d)


def build_mapping(result: MisResult, memory_budget: int = None) -> MappingTable:
    """
    Mapping pass for results of Algorithms 1 and 3: every k-mer gets a nearest
    member (graph distance equals edit distance), members map to themselves.
    K-mers with no member within d stay UNMAPPED.
    """
    field, owner = multi_source_cover(result.codes, result.d, result.k, result.alphabet, memory_budget)
    owners = owner[:field.n_full]
    dtype = MappingTable.cell_dtype(len(result))
    entries = np.where(owners < 0, np.iinfo(dtype).max, owners).astype(dtype)
    logger.info(f"Built mapping table for k={result.k}, d={result.d}: "
                f"{len(entries):,} cells of {np.dtype(dtype).itemsize} bytes")
    return MappingTable(result.k, result.d, entries, result)
