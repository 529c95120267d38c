"""
Verification of claimed maximal independent sets.

Nothing here reuses the solvers' shortcuts (homopolymer filters or neighbour
reuse). Independence is checked with the unbanded DP over all member pairs or,
for large sets, with a labelled BFS over the k-mer/(k-1)-mer graph whose
witnesses are re-checked by DP. Maximality is checked by scanning every
non-member against the members with the banded DP, by a bounded multi-source
BFS, or on a random sample.
"""

import concurrent.futures
import logging
from dataclasses import dataclass
from typing import Any, Dict, Optional, Tuple

import numpy as np
from numba import njit

from .config import get_config
from .edit_distance import edit_full, full_distance, within_distance
from .errors import CapacityError, ParameterError
from .kmers import DNA, ORACLE_ALGORITHM, Alphabet, KmerCode, MisResult, fill_digits, powers
from .solvers.bfs import cover_bytes, find_close_pair, multi_source_cover

logger = logging.getLogger(__name__)

MODES = ('auto', 'scan', 'graph', 'sampled')
# candidate ranges per worker in a parallel scan
SCAN_SPLIT = 8


@njit(cache=True, nogil=True)
def _first_close_member_pair(member_digits, k, d, prev, curr):
    """First (i, j), i < j, with edit <= d in row-major scan order, plus pairs checked."""
    n = member_digits.shape[0]
    checked = 0
    for i in range(n):
        for j in range(i + 1, n):
            checked += 1
            if full_distance(member_digits[i], k, member_digits[j], k, prev, curr) <= d:
                return i, j, checked
    return -1, -1, checked


@njit(cache=True, nogil=True)
def _first_orphan(candidates, k, sigma, d, sorted_codes, member_digits, vd, prev, curr):
    """
    Index of the first candidate that is not a member and has no member within
    d (-1 if none), plus the number of non-members examined.
    """
    checked = 0
    n_members = sorted_codes.shape[0]
    for idx in range(candidates.shape[0]):
        v = candidates[idx]
        pos = np.searchsorted(sorted_codes, v)
        if pos < n_members and sorted_codes[pos] == v:
            continue
        checked += 1
        fill_digits(v, k, sigma, vd)
        covered = False
        for i in range(member_digits.shape[0]):
            if within_distance(member_digits[i], k, vd, k, d, prev, curr):
                covered = True
                break
        if not covered:
            return idx, checked
    return -1, checked


@njit(cache=True, nogil=True)
def _brute_greedy(n, k, sigma, d, codes, digits, vd, prev, curr):
    count = 0
    for v in range(n):
        fill_digits(v, k, sigma, vd)
        independent = True
        for i in range(count):
            if full_distance(digits[i], k, vd, k, prev, curr) <= d:
                independent = False
                break
        if independent:
            codes[count] = v
            for t in range(k):
                digits[count, t] = vd[t]
            count += 1
    return count


def member_digits(result: MisResult) -> np.ndarray:
    """(|M|, k) int64 digit rows of the members, in member order."""
    sigma = result.alphabet.size
    place = powers(sigma, result.k)[:result.k][::-1]
    return (result.codes[:, None] // place) % sigma


@dataclass
class VerificationReport:
    """
    Outcome of checking a claimed MIS.

    witness holds the offending member pair when independence fails, otherwise
    the orphan k-mer (as a 1-tuple) when maximality fails.
    """

    independent: Optional[bool] = None
    maximal: Optional[bool] = None
    witness: Optional[Tuple[KmerCode, ...]] = None
    witness_distance: Optional[int] = None
    pairs_checked: int = 0
    kmers_checked: int = 0
    mode: str = ''
    coverage: float = 0.0

    @property
    def ok(self) -> bool:
        return bool(self.independent) and bool(self.maximal)

    def merge(self, other: 'VerificationReport') -> 'VerificationReport':
        """Conjunction of two partial reports; the first witness found is kept."""
        return VerificationReport(
            independent=other.independent if self.independent is None else self.independent,
            maximal=other.maximal if self.maximal is None else self.maximal,
            witness=self.witness if self.witness is not None else other.witness,
            witness_distance=self.witness_distance if self.witness is not None else other.witness_distance,
            pairs_checked=self.pairs_checked + other.pairs_checked,
            kmers_checked=self.kmers_checked + other.kmers_checked,
            mode='+'.join(m for m in (self.mode, other.mode) if m),
            coverage=max(self.coverage, other.coverage),
        )

    def to_dict(self, alphabet: Alphabet = DNA) -> Dict[str, Any]:
        return {
            'independent': self.independent,
            'maximal': self.maximal,
            'ok': self.ok,
            'witness': [alphabet.decode(c) for c in self.witness] if self.witness else None,
            'witness_distance': self.witness_distance,
            'pairs_checked': self.pairs_checked,
            'kmers_checked': self.kmers_checked,
            'mode': self.mode,
            'coverage': round(self.coverage, 6),
        }


class MisVerifier:
    """Checks independence and maximality of MisResults."""

    def __init__(self, dp_budget: int = None, max_workers: int = None, memory_budget: int = None,
                 exhaustive_max_k: int = None, seed: int = None):
        config = get_config()
        self.dp_budget = dp_budget if dp_budget is not None else config['verify_dp_budget']
        self.max_workers = max_workers if max_workers is not None else config['verify_max_workers']
        self.memory_budget = memory_budget if memory_budget is not None else config['memory_budget']
        self.exhaustive_max_k = exhaustive_max_k if exhaustive_max_k is not None else config['exhaustive_verify_max_k']
        self.seed = seed if seed is not None else config['random_seed']
        self.default_samples = config['sampled_maximality']

    # -- independence ---------------------------------------------------

    def verify_independent(self, result: MisResult, allow_large: bool = False) -> VerificationReport:
        """
        independent is True iff every pair of members has edit distance > d.

        Pairs are scanned with the unbanded DP while their number fits the DP
        budget; larger sets use a labelled BFS of radius floor(d/2).
        """
        n = len(result)
        pairs = n * (n - 1) // 2
        if pairs <= self.dp_budget:
            return self._independent_pairwise(result)
        if cover_bytes(result.k, result.alphabet.size) <= self.memory_budget:
            return self._independent_graph(result)
        if allow_large:
            logger.warning(f"Running {pairs:,} pairwise DP calls above the budget of {self.dp_budget:,}")
            return self._independent_pairwise(result)
        raise CapacityError(
            f"Independence check of {n:,} members needs {pairs:,} DP calls (budget {self.dp_budget:,}) "
            f"and the graph check does not fit the memory budget; pass allow_large to run it anyway",
            required_bytes=cover_bytes(result.k, result.alphabet.size), budget_bytes=self.memory_budget)

    def _independent_pairwise(self, result: MisResult) -> VerificationReport:
        k = result.k
        prev = np.empty(k + 1, dtype=np.int64)
        curr = np.empty(k + 1, dtype=np.int64)
        i, j, checked = _first_close_member_pair(member_digits(result), k, result.d, prev, curr)
        report = VerificationReport(independent=i < 0, pairs_checked=int(checked), mode='pairwise')
        if i >= 0:
            report.witness = (KmerCode(k, int(result.codes[i])), KmerCode(k, int(result.codes[j])))
            report.witness_distance = self._distance(report.witness, result)
            logger.warning(f"Independence fails: members {i} and {j} are at distance {report.witness_distance}")
        return report

    def _independent_graph(self, result: MisResult) -> VerificationReport:
        k = result.k
        report = VerificationReport(independent=True, mode='graph')
        order = np.argsort(result.codes, kind='stable')
        ordered = result.codes[order]
        repeats = np.flatnonzero(ordered[1:] == ordered[:-1])
        if len(repeats):
            code = KmerCode(k, int(ordered[repeats[0]]))
            report.independent = False
            report.witness = (code, code)
            report.witness_distance = 0
            logger.warning(f"Independence fails: {result.alphabet.decode(code)} is listed twice")
            return report
        cover, owner = multi_source_cover(result.codes, result.d // 2, k, result.alphabet, self.memory_budget)
        pair = find_close_pair(cover, owner, result.d)
        if pair is not None:
            i, j = pair
            report.independent = False
            report.witness = (KmerCode(k, int(result.codes[i])), KmerCode(k, int(result.codes[j])))
            report.witness_distance = self._distance(report.witness, result)
            if report.witness_distance > result.d:
                raise AssertionError(f"Graph witness {pair} has edit distance {report.witness_distance} > d")
            logger.warning(f"Independence fails: members {i} and {j} are at distance {report.witness_distance}")
        return report

    # -- maximality -----------------------------------------------------

    def choose_maximal_mode(self, result: MisResult) -> str:
        n = result.alphabet.space_size(result.k)
        if n * max(1, len(result)) <= self.dp_budget:
            return 'scan'
        if result.k <= self.exhaustive_max_k:
            return 'graph'
        return 'sampled'

    def verify_maximal(self, result: MisResult, mode: str = 'auto', samples: int = None,
                       allow_large: bool = False) -> VerificationReport:
        """
        maximal is True iff every non-member has a member within d.

        mode is 'scan' (every k-mer), 'graph' (bounded multi-source BFS),
        'sampled' (random k-mers; maximal then only means no orphan was found)
        or 'auto'. A scan above the DP budget needs allow_large.
        """
        if mode not in MODES:
            raise ParameterError(f"Unknown maximality mode {mode!r}; use one of {', '.join(MODES)}")
        if mode == 'auto':
            mode = self.choose_maximal_mode(result)
            if mode == 'sampled':
                logger.warning(f"k={result.k} is above exhaustive_verify_max_k={self.exhaustive_max_k}; "
                               f"maximality is checked on a random sample")
        n = result.alphabet.space_size(result.k)
        if mode == 'scan':
            calls = n * max(1, len(result))
            if calls > self.dp_budget and not allow_large:
                raise CapacityError(
                    f"Exhaustive maximality scan needs up to {calls:,} DP calls "
                    f"(budget {self.dp_budget:,}); pass allow_large to run it anyway")
            return self._maximal_scan(result, np.arange(n, dtype=np.int64), 'scan')
        if mode == 'graph':
            return self._maximal_graph(result)
        samples = samples or self.default_samples
        rng = np.random.default_rng(self.seed)
        candidates = rng.integers(0, n, size=samples, dtype=np.int64)
        report = self._maximal_scan(result, candidates, 'sampled')
        report.coverage = len(np.unique(candidates)) / n
        return report

    def _maximal_scan(self, result: MisResult, candidates: np.ndarray, mode: str) -> VerificationReport:
        k, d, sigma = result.k, result.d, result.alphabet.size
        sorted_codes = np.sort(result.codes)
        digits = member_digits(result)
        n_chunks = max(1, min(len(candidates), self.max_workers * SCAN_SPLIT))
        bounds = np.linspace(0, len(candidates), n_chunks + 1, dtype=np.int64)

        def scan(lo: int, hi: int) -> Tuple[int, int]:
            vd = np.empty(k, dtype=np.int64)
            prev = np.empty(2 * d + 1, dtype=np.int64)
            curr = np.empty(2 * d + 1, dtype=np.int64)
            idx, checked = _first_orphan(candidates[lo:hi], k, sigma, d, sorted_codes, digits, vd, prev, curr)
            return (lo + idx if idx >= 0 else -1), checked

        first_orphan = -1
        checked_total = 0
        if self.max_workers > 1 and n_chunks > 1:
            with concurrent.futures.ThreadPoolExecutor(max_workers=self.max_workers) as executor:
                future_to_start = {executor.submit(scan, int(lo), int(hi)): int(lo)
                                   for lo, hi in zip(bounds[:-1], bounds[1:]) if hi > lo}
                for future in concurrent.futures.as_completed(future_to_start):
                    if future.cancelled():
                        continue
                    idx, checked = future.result()
                    checked_total += checked
                    if idx >= 0 and (first_orphan < 0 or idx < first_orphan):
                        first_orphan = idx
                        # later ranges cannot hold an earlier witness
                        for other, start in future_to_start.items():
                            if start > idx:
                                other.cancel()
        else:
            for lo, hi in zip(bounds[:-1], bounds[1:]):
                idx, checked = scan(int(lo), int(hi))
                checked_total += checked
                if idx >= 0:
                    first_orphan = idx
                    break

        report = VerificationReport(maximal=first_orphan < 0, kmers_checked=int(checked_total), mode=mode,
                                    coverage=1.0 if mode == 'scan' else 0.0)
        if first_orphan >= 0:
            orphan = KmerCode(k, int(candidates[first_orphan]))
            report.witness = (orphan,)
            logger.warning(f"Maximality fails: {result.alphabet.decode(orphan)} has no member within d={d}")
        return report

    def _maximal_graph(self, result: MisResult) -> VerificationReport:
        k = result.k
        cover, _ = multi_source_cover(result.codes, result.d, k, result.alphabet, self.memory_budget)
        orphans = cover.unreached_full()
        n = cover.n_full
        report = VerificationReport(maximal=len(orphans) == 0, mode='graph', coverage=1.0,
                                    kmers_checked=int(n - len(np.unique(result.codes))))
        if len(orphans):
            confirm = self._maximal_scan(result, orphans[:1].astype(np.int64), 'graph')
            if confirm.maximal:
                raise AssertionError(f"Graph orphan {int(orphans[0])} is covered according to the DP")
            report.witness = confirm.witness
        return report

    # -- both -----------------------------------------------------------

    def verify_mis(self, result: MisResult, mode: str = 'auto', samples: int = None,
                   allow_large: bool = False) -> VerificationReport:
        """Independence and maximality in one report."""
        logger.info(f"Verifying MIS k={result.k}, d={result.d}, |M|={len(result):,}")
        report = self.verify_independent(result, allow_large).merge(
            self.verify_maximal(result, mode, samples, allow_large))
        status = "valid" if report.ok else "INVALID"
        logger.info(f"Verification {status}: independent={report.independent}, maximal={report.maximal}, "
                    f"mode={report.mode}, coverage={report.coverage:.2%}")
        return report

    @staticmethod
    def _distance(pair: Tuple[KmerCode, KmerCode], result: MisResult) -> int:
        return edit_full(pair[0], pair[1], result.alphabet)


def verify_independent(result: MisResult, allow_large: bool = False) -> VerificationReport:
    return MisVerifier().verify_independent(result, allow_large)


def verify_maximal(result: MisResult, mode: str = 'auto', samples: int = None,
                   allow_large: bool = False) -> VerificationReport:
    return MisVerifier().verify_maximal(result, mode, samples, allow_large)


def verify_mis(result: MisResult, mode: str = 'auto', samples: int = None,
               allow_large: bool = False) -> VerificationReport:
    return MisVerifier().verify_mis(result, mode, samples, allow_large)


def brute_oracle_mis(k: int, d: int, alphabet: Alphabet = DNA) -> MisResult:
    """
    The lexicographic greedy MIS the slow, obvious way: every k-mer against
    every member so far with the unbanded DP. Only for small k.
    """
    max_k = get_config()['brute_oracle_max_k']
    k = alphabet.validate_k(k)
    if k > max_k:
        raise ParameterError(f"The brute-force oracle is limited to k <= {max_k}, got {k}")
    if d < 0 or d >= k:
        raise ParameterError(f"d must satisfy 0 <= d < k (k={k}, d={d})")
    sigma = alphabet.size
    n = sigma ** k
    codes = np.empty(n, dtype=np.int64)
    digits = np.empty((n, k), dtype=np.int64)
    vd = np.empty(k, dtype=np.int64)
    prev = np.empty(k + 1, dtype=np.int64)
    curr = np.empty(k + 1, dtype=np.int64)
    count = _brute_greedy(n, k, sigma, d, codes, digits, vd, prev, curr)
    return MisResult(k, d, codes[:count], algorithm=ORACLE_ALGORITHM, alphabet=alphabet)
