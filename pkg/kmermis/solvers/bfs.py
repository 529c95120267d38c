"""
BFS-based MIS solver (Algorithm 3).

The implicit graph has one vertex per k-mer (FULL) and per (k-1)-mer (SHORT).
FULL vertices are joined by substitutions; a FULL and a SHORT vertex are joined
when deleting one character of the k-mer yields the (k-1)-mer. Two SHORT
vertices are never adjacent. Shortest paths between k-mers in this graph have
exactly the length of their edit distance, so a bounded BFS from each new
member marks everything it covers without a single DP.

Vertices live in one flat index space: FULL k-mer c -> c, SHORT (k-1)-mer
c -> |S|**k + c. Edges are generated on the fly.
"""

import logging
from dataclasses import dataclass
from enum import Enum
from typing import List, Optional, Tuple

import numpy as np
from numba import njit

from ..errors import CapacityError, ParameterError, RejectedInputError
from ..kmers import DNA, Alphabet, KmerCode, MisResult, fill_digits, powers
from .base import (BaseMisSolver, MemberStore, SolverCounters, N_COUNTERS, VERTICES_EXPLORED,
                   member_upper_bound)

logger = logging.getLogger(__name__)

UNREACHED = 255
MAX_BFS_D = 254


@njit(cache=True, nogil=True)
def vertex_neighbors_into(x, k, sigma, n_full, pw, digits, out):
    """
    Write the neighbours of flat vertex x into out (needs k*sigma cells).

    FULL: substitutions, then deletions (one per run of equal characters).
    SHORT: insertions; inserting c right after a c is skipped as a repeat.
    Returns the number written.
    """
    n = 0
    if x < n_full:
        fill_digits(x, k, sigma, digits)
        for i in range(k):
            p = pw[k - 1 - i]
            xi = digits[i]
            for c in range(sigma):
                if c != xi:
                    out[n] = x + (c - xi) * p
                    n += 1
        for i in range(k):
            if i > 0 and digits[i] == digits[i - 1]:
                continue
            p = pw[k - 1 - i]
            out[n] = n_full + (x // pw[k - i]) * p + x % p
            n += 1
    else:
        s = x - n_full
        fill_digits(s, k - 1, sigma, digits)
        for i in range(k):
            p = pw[k - 1 - i]
            prefix = s // p
            suffix = s % p
            for c in range(sigma):
                if i > 0 and digits[i - 1] == c:
                    continue
                out[n] = (prefix * sigma + c) * p + suffix
                n += 1
    return n


@njit(cache=True, nogil=True)
def _bfs_mis_chunk(start, stop, k, sigma, d, n_full, pw, dist, queue, codes, count,
                   counters, dequeues, instrument, digits, nbrs):
    """
    Algorithm 3 over FULL codes [start, stop). Returns (next code, |M|).

    Every k-mer still UNREACHED when its turn comes joins M and starts a BFS
    that lowers distances; a vertex is re-enqueued only while its new distance
    is below d. Stops early when `codes` is full.
    """
    v = start
    while v < stop:
        if dist[v] != UNREACHED:
            v += 1
            continue
        if count == codes.shape[0]:
            return v, count
        codes[count] = v
        count += 1
        dist[v] = 0
        if d > 0:
            queue[0] = v
            head = 0
            tail = 1
            while head < tail:
                u = np.int64(queue[head])
                head += 1
                counters[VERTICES_EXPLORED] += 1
                if instrument:
                    dequeues[u] += 1
                nd = np.int64(dist[u]) + 1
                nn = vertex_neighbors_into(u, k, sigma, n_full, pw, digits, nbrs)
                for j in range(nn):
                    w = nbrs[j]
                    if dist[w] > nd:
                        dist[w] = nd
                        if nd < d:
                            queue[tail] = w
                            tail += 1
        v += 1
    return v, count


@njit(cache=True, nogil=True)
def _bfs_field(source, target, k, sigma, n_full, pw, dist, queue, digits, nbrs):
    """Unbounded BFS from source over an int32 field preset to -1; stops early at target (>= 0)."""
    dist[source] = 0
    queue[0] = source
    head = 0
    tail = 1
    while head < tail:
        u = np.int64(queue[head])
        head += 1
        if u == target:
            break
        du = dist[u]
        nn = vertex_neighbors_into(u, k, sigma, n_full, pw, digits, nbrs)
        for j in range(nn):
            w = nbrs[j]
            if dist[w] < 0:
                dist[w] = du + 1
                queue[tail] = w
                tail += 1
    if target >= 0:
        return np.int64(dist[target])
    return np.int64(-1)


@njit(cache=True, nogil=True)
def cover_from_sources(sources, radius, k, sigma, n_full, pw, dist, owner, queue, digits, nbrs):
    """
    Multi-source BFS up to `radius`: dist gets the distance to the nearest
    source, owner the index (into sources) of that source. dist must be preset
    to UNREACHED; a repeated source keeps its first index. Returns the number
    of vertices reached.
    """
    tail = 0
    for i in range(sources.shape[0]):
        s = sources[i]
        if dist[s] == 0:
            continue
        dist[s] = 0
        owner[s] = i
        queue[tail] = s
        tail += 1
    head = 0
    while head < tail:
        u = np.int64(queue[head])
        head += 1
        du = np.int64(dist[u])
        if du >= radius:
            continue
        nn = vertex_neighbors_into(u, k, sigma, n_full, pw, digits, nbrs)
        for j in range(nn):
            w = nbrs[j]
            if dist[w] == UNREACHED:
                dist[w] = du + 1
                owner[w] = owner[u]
                queue[tail] = w
                tail += 1
    return tail


@njit(cache=True, nogil=True)
def first_close_pair(k, sigma, d, n_full, pw, dist, owner, digits, nbrs):
    """
    After a cover of radius floor(d/2): an edge (x, y) whose endpoints belong
    to different sources with dist[x] + 1 + dist[y] <= d proves those two
    sources are within d. Returns their indices (smaller first) or (-1, -1).
    """
    for x in range(dist.shape[0]):
        if dist[x] == UNREACHED:
            continue
        dx = np.int64(dist[x])
        nn = vertex_neighbors_into(x, k, sigma, n_full, pw, digits, nbrs)
        for j in range(nn):
            y = nbrs[j]
            if dist[y] == UNREACHED or owner[y] == owner[x]:
                continue
            if dx + 1 + np.int64(dist[y]) <= d:
                a = np.int64(owner[x])
                b = np.int64(owner[y])
                if a < b:
                    return a, b
                return b, a
    return np.int64(-1), np.int64(-1)


class Level(Enum):
    FULL = 'full'
    SHORT = 'short'


@dataclass(frozen=True)
class GraphVertex:
    """A k-mer (FULL) or (k-1)-mer (SHORT) vertex of the extended graph."""

    level: Level
    code: KmerCode

    @property
    def k(self) -> int:
        """k of the graph this vertex belongs to."""
        return self.code.k if self.level is Level.FULL else self.code.k + 1

    def flat_index(self, alphabet: Alphabet = DNA) -> int:
        if self.level is Level.FULL:
            return self.code.code
        return alphabet.size ** self.k + self.code.code

    @classmethod
    def from_flat_index(cls, index: int, k: int, alphabet: Alphabet = DNA) -> 'GraphVertex':
        n_full = alphabet.size ** k
        if not 0 <= index < n_full + alphabet.size ** (k - 1):
            raise RejectedInputError(f"Vertex index {index} is out of range for k={k}")
        if index < n_full:
            return cls(Level.FULL, KmerCode(k, int(index)))
        return cls(Level.SHORT, KmerCode(k - 1, int(index - n_full)))

    def to_string(self, alphabet: Alphabet = DNA) -> str:
        return alphabet.decode(self.code) if self.code.k else ''


class DistanceField:
    """One unsigned byte per graph vertex; UNREACHED until a member covers it."""

    UNREACHED = UNREACHED

    def __init__(self, k: int, alphabet: Alphabet = DNA):
        self.k = k
        self.alphabet = alphabet
        self.n_full = alphabet.size ** k
        self.n_short = alphabet.size ** (k - 1)
        self.cells = np.full(self.n_full + self.n_short, UNREACHED, dtype=np.uint8)

    def __len__(self) -> int:
        return len(self.cells)

    def __getitem__(self, vertex: GraphVertex) -> Optional[int]:
        value = int(self.cells[vertex.flat_index(self.alphabet)])
        return None if value == UNREACHED else value

    @property
    def full_cells(self) -> np.ndarray:
        return self.cells[:self.n_full]

    def unreached_full(self) -> np.ndarray:
        """Codes of k-mers no member covers."""
        return np.flatnonzero(self.full_cells == UNREACHED)

    @staticmethod
    def nbytes_for(k: int, sigma: int) -> int:
        return sigma ** k + sigma ** (k - 1)


def frontier_capacity(k: int, sigma: int, d: int, n_vertices: int) -> int:
    """Queue cells one source can need: vertices within graph distance d-1, plus one."""
    degree = k * sigma
    total, layer = 0, 1
    for _ in range(d):
        total += layer
        if total >= n_vertices:
            return n_vertices + 1
        layer *= degree
    return min(n_vertices, total) + 1


def queue_dtype(n_vertices: int):
    return np.uint32 if n_vertices < 2 ** 32 else np.int64


class _GraphScratch:
    """Per-call buffers for the neighbour generator."""

    def __init__(self, k: int, alphabet: Alphabet):
        self.k = k
        self.sigma = alphabet.size
        self.n_full = alphabet.size ** k
        self.pw = powers(alphabet.size, k)
        self.digits = np.empty(max(k, 1), dtype=np.int64)
        self.nbrs = np.empty(k * alphabet.size, dtype=np.int64)


def graph_neighbors(x: GraphVertex, alphabet: Alphabet = DNA) -> List[GraphVertex]:
    """Distinct neighbours of x in the extended graph."""
    k = x.k
    if x.level is Level.FULL:
        alphabet.check_code(x.code)
    elif x.code.k and not 0 <= x.code.code < alphabet.size ** x.code.k:
        raise RejectedInputError(f"Code {x.code.code} is out of range for k={x.code.k}")
    scratch = _GraphScratch(k, alphabet)
    n = vertex_neighbors_into(x.flat_index(alphabet), k, scratch.sigma, scratch.n_full,
                              scratch.pw, scratch.digits, scratch.nbrs)
    return [GraphVertex.from_flat_index(int(w), k, alphabet) for w in scratch.nbrs[:n]]


def graph_distances_from(u: KmerCode, alphabet: Alphabet = DNA) -> np.ndarray:
    """Graph distance from FULL u to every k-mer (int32, indexed by code)."""
    alphabet.check_code(u)
    scratch = _GraphScratch(u.k, alphabet)
    n_vertices = scratch.n_full + alphabet.size ** (u.k - 1)
    dist = np.full(n_vertices, -1, dtype=np.int32)
    queue = np.empty(n_vertices, dtype=queue_dtype(n_vertices))
    _bfs_field(u.code, -1, u.k, scratch.sigma, scratch.n_full, scratch.pw, dist, queue,
               scratch.digits, scratch.nbrs)
    return dist[:scratch.n_full]


def graph_distance(u: KmerCode, v: KmerCode, alphabet: Alphabet = DNA) -> int:
    """Shortest-path length between FULL u and FULL v (plain BFS, no budget)."""
    if u.k != v.k:
        raise RejectedInputError(f"Both k-mers must have the same length, got {u.k} and {v.k}")
    alphabet.check_code(u)
    alphabet.check_code(v)
    scratch = _GraphScratch(u.k, alphabet)
    n_vertices = scratch.n_full + alphabet.size ** (u.k - 1)
    dist = np.full(n_vertices, -1, dtype=np.int32)
    queue = np.empty(n_vertices, dtype=queue_dtype(n_vertices))
    return int(_bfs_field(u.code, v.code, u.k, scratch.sigma, scratch.n_full, scratch.pw, dist, queue,
                          scratch.digits, scratch.nbrs))


def cover_bytes(k: int, sigma: int) -> int:
    """Bytes a multi-source cover allocates: distance, owner and queue per vertex."""
    n_vertices = DistanceField.nbytes_for(k, sigma)
    return n_vertices * (1 + 4 + np.dtype(queue_dtype(n_vertices)).itemsize)


def multi_source_cover(sources: np.ndarray, radius: int, k: int, alphabet: Alphabet = DNA,
                       memory_budget: int = None) -> Tuple[DistanceField, np.ndarray]:
    """
    Label every vertex within `radius` of a source with its distance and the
    index of its nearest source.

    Returns the DistanceField and the int32 owner array (-1 where unreached).
    """
    if radius > MAX_BFS_D:
        raise ParameterError(f"Cover radius must be <= {MAX_BFS_D}, got {radius}")
    required = cover_bytes(k, alphabet.size)
    if memory_budget is not None and required > memory_budget:
        raise CapacityError(f"Graph cover at k={k} needs about {required:,} bytes, "
                            f"budget is {memory_budget:,} bytes",
                            required_bytes=required, budget_bytes=memory_budget)
    field = DistanceField(k, alphabet)
    owner = np.full(len(field), -1, dtype=np.int32)
    queue = np.empty(len(field), dtype=queue_dtype(len(field)))
    scratch = _GraphScratch(k, alphabet)
    reached = cover_from_sources(np.asarray(sources, dtype=np.int64), radius, k, scratch.sigma,
                                 scratch.n_full, scratch.pw, field.cells, owner, queue,
                                 scratch.digits, scratch.nbrs)
    logger.debug(f"Graph cover from {len(sources):,} sources, radius {radius}: {reached:,} vertices reached")
    return field, owner


def find_close_pair(field: DistanceField, owner: np.ndarray, d: int) -> Optional[Tuple[int, int]]:
    """Source indices of two sources within distance d, from a radius floor(d/2) cover."""
    scratch = _GraphScratch(field.k, field.alphabet)
    a, b = first_close_pair(field.k, scratch.sigma, d, scratch.n_full, scratch.pw,
                            field.cells, owner, scratch.digits, scratch.nbrs)
    return None if a < 0 else (int(a), int(b))


class BfsSolver(BaseMisSolver):
    """Algorithm 3: incremental multi-source BFS over the extended graph."""

    algorithm = 3

    def __init__(self, alphabet: Alphabet = DNA, memory_budget: int = None,
                 progress_interval: int = None, instrument: bool = False):
        super().__init__(alphabet, memory_budget, progress_interval)
        self.instrument = instrument
        self.field: Optional[DistanceField] = None
        self.dequeues: Optional[np.ndarray] = None

    def validate(self, k: int, d: int) -> Tuple[int, int]:
        k, d = super().validate(k, d)
        if d > MAX_BFS_D:
            raise ParameterError(f"The BFS solver needs d <= {MAX_BFS_D}, got {d}")
        return k, d

    def estimate_bytes(self, k: int, d: int) -> int:
        sigma = self.alphabet.size
        n_vertices = DistanceField.nbytes_for(k, sigma)
        queue = frontier_capacity(k, sigma, d, n_vertices) * np.dtype(queue_dtype(n_vertices)).itemsize
        members = member_upper_bound(k, d, sigma) * MemberStore.bytes_per_member(k, sigma)
        dequeues = 4 * n_vertices if self.instrument else 0
        return n_vertices + queue + members + dequeues

    def solve(self, k: int, d: int) -> MisResult:
        k, d = self.validate(k, d)
        self.check_capacity(k, d)
        sigma = self.alphabet.size
        started = self.log_start(k, d)

        field = DistanceField(k, self.alphabet)
        self.field = field
        n_full = field.n_full
        queue = np.empty(frontier_capacity(k, sigma, d, len(field)), dtype=queue_dtype(len(field)))
        dequeues = np.zeros(len(field) if self.instrument else 1, dtype=np.int32)
        store = MemberStore(k, sigma, limit=n_full)
        counters = np.zeros(N_COUNTERS, dtype=np.int64)
        scratch = _GraphScratch(k, self.alphabet)

        for start, stop in self.chunks(n_full):
            v = start
            while v < stop:
                v, store.count = _bfs_mis_chunk(v, stop, k, sigma, d, n_full, scratch.pw, field.cells, queue,
                                                store.codes, store.count, counters, dequeues, self.instrument,
                                                scratch.digits, scratch.nbrs)
                if v < stop:
                    store.grow()
            self.log_progress(stop, n_full, store.count)

        max_dequeues = int(dequeues.max()) if self.instrument else 0
        self.counters = SolverCounters.from_vector(counters, max_dequeues=max_dequeues)
        self.dequeues = dequeues if self.instrument else None
        result = MisResult(k, d, store.result_codes(), self.algorithm, alphabet=self.alphabet)
        self.log_end(k, d, len(result), started)
        if self.instrument:
            logger.info(f"Most dequeues of a single vertex: {max_dequeues} (d={d})")
        return result


def run_bfs_mis(k: int, d: int, alphabet: Alphabet = DNA, memory_budget: int = None) -> MisResult:
    """Algorithm 3 with default settings."""
    return BfsSolver(alphabet, memory_budget).solve(k, d)
