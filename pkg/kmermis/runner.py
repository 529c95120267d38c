"""
Run orchestration for kmermis.

MisRunner is the library facade behind the command line: it computes one
(k, d) cell and writes its files, verifies MIS files, and sweeps the (k, d)
grid for the size/time/memory tables.
"""

import concurrent.futures
import logging
import sys
import time
import tracemalloc
from dataclasses import dataclass, asdict, field, fields
from datetime import datetime, timezone
from pathlib import Path
from typing import Any, Dict, List, Optional, Tuple, Union

import pandas as pd

from .config import get_config
from .errors import CapacityError, ParameterError
from .kmers import DNA, Alphabet, MisResult
from .solvers import build_mapping, create_solver, resolve_algorithm
from .solvers.greedy import MappingTable
from .utils.file_utils import append_stats, read_mis, write_mapping, write_mis, write_records
from .verify import MisVerifier, VerificationReport

try:
    import psutil

    PSUTIL_AVAILABLE = True
except ImportError:
    PSUTIL_AVAILABLE = False

try:
    import resource

    RESOURCE_AVAILABLE = True
except ImportError:
    RESOURCE_AVAILABLE = False

logger = logging.getLogger(__name__)

# Published MIS sizes over DNA: row d, columns k = d+1 .. 15
_PUBLISHED_ROWS = {
    1: [4, 16, 64, 256, 1024, 4096, 16384, 65536, 262144, 1048576, 4194304, 16777216, 67108864, 268435456],
    2: [4, 12, 36, 96, 311, 1025, 3451, 11743, 40604, 141943, 500882, 1782677, 6388106],
    3: [4, 8, 20, 57, 164, 481, 1463, 4574, 14522, 46908, 153767, 510118],
    4: [4, 4, 14, 34, 90, 242, 668, 1894, 5517, 16440, 49992],
    5: [4, 4, 12, 25, 57, 133, 338, 879, 2346, 6486],
    6: [4, 4, 10, 17, 38, 79, 188, 448, 1107],
    7: [4, 4, 9, 13, 28, 54, 112, 251],
    8: [4, 4, 4, 12, 20, 37, 75],
    9: [4, 4, 4, 11, 14, 30],
    10: [4, 4, 4, 10, 13],
    11: [4, 4, 4, 8],
    12: [4, 4, 4],
    13: [4, 4],
    14: [4],
}
PUBLISHED_SIZES: Dict[Tuple[int, int], int] = {
    (d + 1 + i, d): size for d, row in _PUBLISHED_ROWS.items() for i, size in enumerate(row)
}
DEVIATION_TOLERANCE = 0.15


def peak_rss_bytes() -> Optional[int]:
    """Peak resident set size of this process, None where neither source is available."""
    if RESOURCE_AVAILABLE:
        peak = resource.getrusage(resource.RUSAGE_SELF).ru_maxrss
        # ru_maxrss is in bytes on macOS, KiB elsewhere
        return int(peak if sys.platform == 'darwin' else peak * 1024)
    if PSUTIL_AVAILABLE:
        info = psutil.Process().memory_info()
        return int(getattr(info, 'peak_wset', info.rss))
    return None


@dataclass
class RunConfig:
    """Parameters of one compute run."""

    k: int
    d: int
    algorithm: Union[int, str] = 'auto'
    out: Optional[Path] = None
    mapping: Optional[Path] = None
    stats: Optional[Path] = None
    memory_budget: Optional[int] = None
    force_large_k: bool = False
    verify: bool = False
    sampled_maximality: Optional[int] = None

    def __post_init__(self):
        config = get_config()
        if self.memory_budget is None:
            self.memory_budget = config['memory_budget']
        for name in ('out', 'mapping', 'stats'):
            value = getattr(self, name)
            if value is not None:
                setattr(self, name, Path(value))

    def validate(self, alphabet: Alphabet = DNA) -> 'RunConfig':
        ceiling = get_config()['k_ceiling']
        alphabet.validate_k(self.k)
        if self.k > ceiling and not self.force_large_k:
            raise ParameterError(f"k={self.k} is above the ceiling of {ceiling}; pass --force-large-k to run it")
        if not 0 <= self.d < self.k:
            raise ParameterError(f"d must satisfy 0 <= d < k (k={self.k}, d={self.d})")
        if self.memory_budget <= 0:
            raise ParameterError(f"Memory budget must be positive, got {self.memory_budget}")
        return self


@dataclass
class RunStats:
    """What one compute run produced and what it cost."""

    k: int
    d: int
    algorithm: int
    mis_size: int
    wall_seconds: float
    peak_alloc_bytes: Optional[int] = None
    peak_rss_bytes: Optional[int] = None
    edit_calls: int = 0
    bound_filter_hits: int = 0
    neighbor_hits: int = 0
    vertices_explored: int = 0
    cluster_min: Optional[int] = None
    cluster_max: Optional[int] = None
    cluster_mean: Optional[float] = None
    verified: Optional[bool] = None
    timestamp: str = field(default_factory=lambda: datetime.now(timezone.utc).isoformat(timespec='seconds'))

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)


# Every table row carries these, whether the cell ran or failed
TABLE_COLUMNS = [f.name for f in fields(RunStats)] + ['error']


class MisRunner:
    """Compute, verify and tabulate k-mer space MISs."""

    def __init__(self, alphabet: Alphabet = None, memory_budget: int = None):
        self.config = get_config()
        self.alphabet = alphabet or Alphabet(self.config['alphabet'])
        self.memory_budget = memory_budget if memory_budget is not None else self.config['memory_budget']

    # -- compute --------------------------------------------------------

    def solve(self, k: int, d: int, algorithm: Union[int, str] = 'auto', want_mapping: bool = False,
              memory_budget: int = None, trace_memory: bool = True) -> Tuple[MisResult, Optional[MappingTable], RunStats]:
        """Run one solver; returns the MIS, its mapping table (if asked for or free) and stats."""
        budget = memory_budget if memory_budget is not None else self.memory_budget
        number = resolve_algorithm(algorithm, k, d)
        solver = create_solver(number, self.alphabet, budget)

        if trace_memory:
            tracemalloc.start()
        started = time.time()
        try:
            table = None
            if number == 2:
                result, table = solver.solve_with_mapping(k, d)
            else:
                result = solver.solve(k, d)
                if want_mapping:
                    table = build_mapping(result, budget)
            wall = time.time() - started
            peak_alloc = tracemalloc.get_traced_memory()[1] if trace_memory else None
        finally:
            if trace_memory:
                tracemalloc.stop()

        counters = solver.counters
        stats = RunStats(
            k=k, d=d, algorithm=number, mis_size=len(result), wall_seconds=round(wall, 4),
            peak_alloc_bytes=peak_alloc, peak_rss_bytes=peak_rss_bytes(),
            edit_calls=counters.edit_calls, bound_filter_hits=counters.bound_filter_hits,
            neighbor_hits=counters.neighbor_hits, vertices_explored=counters.vertices_explored,
        )
        if table is not None:
            sizes = table.cluster_sizes()
            if len(sizes):
                stats.cluster_min = int(sizes.min())
                stats.cluster_max = int(sizes.max())
                stats.cluster_mean = round(float(sizes.mean()), 3)
        return result, table, stats

    def compute(self, run: RunConfig) -> Tuple[MisResult, RunStats]:
        """
        Compute the MIS for run.k, run.d and write the requested files.

        The MIS file is written when run.out is set and the mapping file when
        run.mapping is set, unless run.verify is on and the check fails. One
        stats record is appended to run.stats either way.
        """
        run.validate(self.alphabet)
        result, table, stats = self.solve(run.k, run.d, run.algorithm, want_mapping=run.mapping is not None,
                                          memory_budget=run.memory_budget)
        if run.verify:
            report = self.verifier(run.memory_budget).verify_mis(result, samples=run.sampled_maximality,
                                                                  mode='sampled' if run.sampled_maximality else 'auto')
            stats.verified = report.ok
            if not report.ok:
                logger.warning(f"Computed set failed verification, not writing it: {report.to_dict(self.alphabet)}")
        if stats.verified is not False:
            if run.out is not None:
                write_mis(result, run.out)
            if run.mapping is not None and table is not None:
                write_mapping(table, run.mapping)
        if run.stats is not None:
            append_stats(stats.to_dict(), run.stats)
        return result, stats

    # -- verify ---------------------------------------------------------

    def read_mis(self, path: Union[str, Path]) -> MisResult:
        """Read an MIS file; a non-DNA runner alphabet overrides the file header."""
        return read_mis(path, self.alphabet if self.alphabet != DNA else None)

    def verifier(self, memory_budget: int = None) -> MisVerifier:
        return MisVerifier(memory_budget=memory_budget if memory_budget is not None else self.memory_budget)

    def verify_file(self, path: Union[str, Path], sampled_maximality: int = None,
                    allow_large: bool = False) -> Tuple[MisResult, VerificationReport]:
        """Parse an MIS file and check independence and maximality."""
        result = self.read_mis(path)
        logger.info(f"Read {len(result):,} k-mers (k={result.k}, d={result.d}) from {path}")
        mode = 'sampled' if sampled_maximality else 'auto'
        report = self.verifier().verify_mis(result, mode=mode, samples=sampled_maximality, allow_large=allow_large)
        return result, report

    # -- table ----------------------------------------------------------

    def table(self, k_max: int, k_min: int = 2, d_values: List[int] = None, max_workers: int = None,
              verify_max_k: int = 0) -> pd.DataFrame:
        """
        Compute every cell k_min <= k <= k_max, 1 <= d < k with automatic
        algorithm selection. One row per cell; a cell that does not fit the
        memory budget records the error and the sweep goes on.
        """
        ceiling = self.config['table_k_ceiling']
        if k_max > ceiling:
            raise ParameterError(f"k_max={k_max} is above table_k_ceiling={ceiling}")
        if k_min < 2 or k_min > k_max:
            raise ParameterError(f"Need 2 <= k_min <= k_max, got k_min={k_min}, k_max={k_max}")
        max_workers = max_workers or self.config['table_max_workers']
        cells = [(k, d) for k in range(k_min, k_max + 1) for d in range(1, k)
                 if d_values is None or d in d_values]
        logger.info(f"Computing {len(cells)} cells for k in [{k_min}, {k_max}] with {max_workers} workers")

        # tracemalloc is process-wide, so per-cell peaks are only measured sequentially
        trace = max_workers == 1

        def run_cell(k: int, d: int) -> Dict[str, Any]:
            record: Dict[str, Any] = {'k': k, 'd': d}
            try:
                result, _, stats = self.solve(k, d, 'auto', trace_memory=trace)
                record.update(stats.to_dict())
                if k <= verify_max_k:
                    record['verified'] = self.verifier().verify_mis(result).ok
            except (CapacityError, ParameterError) as e:
                logger.warning(f"Cell k={k}, d={d} skipped: {e}")
                record['error'] = str(e)
            return record

        records = []
        if max_workers > 1 and len(cells) > 1:
            with concurrent.futures.ThreadPoolExecutor(max_workers=max_workers) as executor:
                future_to_cell = {executor.submit(run_cell, k, d): (k, d) for k, d in cells}
                for future in concurrent.futures.as_completed(future_to_cell):
                    records.append(future.result())
                    k, d = future_to_cell[future]
                    logger.info(f"  cell k={k}, d={d} done ({len(records)}/{len(cells)})")
        else:
            for k, d in cells:
                records.append(run_cell(k, d))

        frame = (pd.DataFrame.from_records(records)
                 .reindex(columns=TABLE_COLUMNS)
                 .sort_values(['d', 'k'])
                 .reset_index(drop=True))
        frame['published_size'] = [PUBLISHED_SIZES.get((k, d)) if self.alphabet == DNA else None
                                   for k, d in zip(frame['k'], frame['d'])]
        self.report_deviations(frame)
        return frame

    @staticmethod
    def report_deviations(frame: pd.DataFrame) -> List[Tuple[int, int, int, int]]:
        """Log cells whose size differs from the published one; returns (k, d, ours, published)."""
        deviations = []
        for row in frame.itertuples(index=False):
            published = getattr(row, 'published_size', None)
            size = getattr(row, 'mis_size', None)
            if published is None or size is None or pd.isna(published) or pd.isna(size):
                continue
            if int(size) != int(published):
                deviations.append((int(row.k), int(row.d), int(size), int(published)))
                relative = abs(int(size) - int(published)) / int(published)
                level = logging.WARNING if relative > DEVIATION_TOLERANCE else logging.INFO
                logger.log(level, f"Size deviation at k={row.k}, d={row.d}: {int(size)} vs published "
                                  f"{int(published)} ({relative:.1%})")
        if not deviations:
            logger.info("All computed sizes match the published table")
        return deviations

    @staticmethod
    def pivot(frame: pd.DataFrame, column: str) -> pd.DataFrame:
        """Grid view: one row per d, one column per k."""
        return frame.pivot(index='d', columns='k', values=column)

    @staticmethod
    def write_table(frame: pd.DataFrame, csv_path: Union[str, Path] = None,
                    records_path: Union[str, Path] = None):
        if csv_path is not None:
            frame.to_csv(csv_path, index=False)
            logger.info(f"Wrote table ({len(frame)} cells) to {csv_path}")
        if records_path is not None:
            clean = frame.astype(object).where(frame.notna(), None)
            write_records(clean.to_dict(orient='records'), records_path, append=True)
            logger.info(f"Appended {len(frame)} records to {records_path}")

