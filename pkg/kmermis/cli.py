"""
Command Line Interface for kmermis
==================================

Subcommands:
    compute   compute the MIS of one (k, d) cell and write it
    verify    check an MIS file for independence and maximality
    table     sweep the (k, d) grid and print size/time/memory tables
    lookup    map k-mers to their MIS member through a mapping file

Exit status: 0 on success, 1 when verification fails, 2 on errors.
"""

import argparse
import json
import sys
import time
from pathlib import Path
from typing import List, Optional

import pandas as pd

from .config import get_config
from .errors import KmerSpaceError
from .kmers import Alphabet
from .runner import MisRunner, RunConfig
from .solvers import estimate_memory, resolve_algorithm
from .utils.file_utils import read_kmer_list, read_mapping
from .utils.logging_utils import get_logger, setup_logging

logger = get_logger(__name__)

EXIT_OK = 0
EXIT_INVALID = 1
EXIT_ERROR = 2

_UNITS = {'K': 1024, 'M': 1024 ** 2, 'G': 1024 ** 3, 'T': 1024 ** 4}


def parse_bytes(value: str) -> int:
    """Byte count, optionally with a K/M/G/T suffix (powers of 1024)."""
    text = value.strip().upper().rstrip('B').rstrip('I')
    try:
        if text and text[-1] in _UNITS:
            return int(float(text[:-1]) * _UNITS[text[-1]])
        return int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a byte count: {value!r}") from None


def format_bytes(n: Optional[float]) -> str:
    if n is None or pd.isna(n):
        return '-'
    for unit in ('B', 'KiB', 'MiB', 'GiB'):
        if abs(n) < 1024:
            return f"{n:.0f} {unit}" if unit == 'B' else f"{n:.1f} {unit}"
        n /= 1024
    return f"{n:.1f} TiB"


def build_parser() -> argparse.ArgumentParser:
    config = get_config()
    parser = argparse.ArgumentParser(
        prog='kmermis',
        description="Maximal independent sets of the k-mer space under edit distance.")
    parser.add_argument('--alphabet', default=config['alphabet'], help="ordered alphabet letters (default: %(default)s)")
    parser.add_argument('--log-level', default=config['log_level'], help="logging level (default: %(default)s)")
    parser.add_argument('--log-file', default=config['log_file'], help="log file, empty to disable (default: %(default)s)")
    sub = parser.add_subparsers(dest='command', required=True)

    compute = sub.add_parser('compute', help="compute one MIS")
    compute.add_argument('-k', type=int, required=True, help="k-mer length")
    compute.add_argument('-d', type=int, required=True, help="edit distance threshold, 0 <= d < k")
    compute.add_argument('--algo', default='auto', choices=['1', '2', '3', 'auto'], help="algorithm (default: auto)")
    compute.add_argument('--out', type=Path, help="MIS text file to write")
    compute.add_argument('--mapping', type=Path, help="mapping file to write")
    compute.add_argument('--stats', type=Path, help="append a JSON stats record to this file")
    compute.add_argument('--mem-limit', type=parse_bytes, default=config['memory_budget'],
                         help="memory budget in bytes, K/M/G suffixes allowed (default: 8G)")
    compute.add_argument('--force-large-k', action='store_true', help=f"allow k above {config['k_ceiling']}")
    compute.add_argument('--verify', action='store_true', help="verify the result; files are only written if it passes")
    compute.add_argument('--sampled-maximality', type=int, metavar='N',
                         help="with --verify: check maximality on N random k-mers")
    compute.add_argument('--dry-run', action='store_true', help="print memory estimates and exit")

    verify = sub.add_parser('verify', help="verify an MIS file")
    verify.add_argument('path', type=Path, help="MIS text file")
    verify.add_argument('--sampled-maximality', type=int, metavar='N',
                        help="check maximality on N random k-mers instead of exhaustively")
    verify.add_argument('--allow-large', action='store_true', help="run exhaustive checks above the DP budget")
    verify.add_argument('--mem-limit', type=parse_bytes, default=config['memory_budget'],
                        help="memory budget for graph-based checks")

    table = sub.add_parser('table', help="compute the (k, d) grid")
    table.add_argument('--k-max', type=int, required=True, help="largest k")
    table.add_argument('--k-min', type=int, default=2, help="smallest k (default: 2)")
    table.add_argument('-d', type=int, nargs='+', dest='d_values', help="only these d values")
    table.add_argument('--workers', type=int, default=config['table_max_workers'], help="parallel cells")
    table.add_argument('--mem-limit', type=parse_bytes, default=config['memory_budget'], help="memory budget per cell")
    table.add_argument('--verify-max-k', type=int, default=0, help="verify cells with k up to this value")
    table.add_argument('--out', type=Path, help="CSV file with one row per cell")
    table.add_argument('--stats', type=Path, help="append one JSON record per cell")

    lookup = sub.add_parser('lookup', help="map k-mers to their MIS member")
    lookup.add_argument('--mis', type=Path, required=True, help="MIS text file")
    lookup.add_argument('--mapping', type=Path, required=True, help="mapping file written by compute")
    lookup.add_argument('kmers', nargs='*', help="k-mers to look up")
    lookup.add_argument('--kmers-file', type=Path, help="file with one k-mer per line")

    return parser


def cmd_compute(args, runner: MisRunner) -> int:
    run = RunConfig(k=args.k, d=args.d, algorithm=args.algo, out=args.out, mapping=args.mapping,
                    stats=args.stats, memory_budget=args.mem_limit, force_large_k=args.force_large_k,
                    verify=args.verify, sampled_maximality=args.sampled_maximality)
    run.validate(runner.alphabet)
    chosen = resolve_algorithm(run.algorithm, run.k, run.d)

    if args.dry_run:
        print(f"📐 Memory estimates for k={run.k}, d={run.d} (budget {format_bytes(run.memory_budget)}):")
        for algorithm, required in estimate_memory(run.k, run.d, runner.alphabet).items():
            marker = "👉" if algorithm == chosen else "  "
            fits = "fits" if required <= run.memory_budget else "over budget"
            print(f"  {marker} Algorithm {algorithm}: {format_bytes(required)} ({fits})")
        return EXIT_OK

    print(f"🚀 Computing MIS for k={run.k}, d={run.d} with algorithm {chosen}...")
    _, stats = runner.compute(run)
    print(f"✅ |M| = {stats.mis_size:,} in {stats.wall_seconds:.2f} seconds")
    print(f"📊 DP calls: {stats.edit_calls:,}, filter verdicts: {stats.bound_filter_hits:,}, "
          f"neighbour hits: {stats.neighbor_hits:,}, vertices explored: {stats.vertices_explored:,}")
    if stats.peak_alloc_bytes is not None:
        print(f"💾 Peak allocations: {format_bytes(stats.peak_alloc_bytes)}")
    if stats.cluster_mean is not None:
        print(f"🧩 Cluster sizes: min {stats.cluster_min}, max {stats.cluster_max}, mean {stats.cluster_mean}")
    written = stats.verified is not False
    if run.out and written:
        print(f"📁 MIS written to {run.out}")
    if run.mapping and written:
        print(f"📁 Mapping written to {run.mapping}")
    if run.verify:
        print("✅ Verified" if stats.verified else "❌ Verification failed")
        if not stats.verified:
            return EXIT_INVALID
    return EXIT_OK


def cmd_verify(args, runner: MisRunner) -> int:
    runner.memory_budget = args.mem_limit
    result, report = runner.verify_file(args.path, args.sampled_maximality, args.allow_large)
    record = {'path': str(args.path), 'k': result.k, 'd': result.d, 'size': len(result)}
    record.update(report.to_dict(result.alphabet))
    print(json.dumps(record))
    return EXIT_OK if report.ok else EXIT_INVALID


def cmd_table(args, runner: MisRunner) -> int:
    runner.memory_budget = args.mem_limit
    started = time.time()
    frame = runner.table(args.k_max, args.k_min, args.d_values, args.workers, args.verify_max_k)
    with pd.option_context('display.width', 200, 'display.max_columns', None):
        print("\n📊 MIS sizes (rows d, columns k):")
        print(runner.pivot(frame, 'mis_size').to_string(na_rep=''))
        print("\n⏱️  Wall time in seconds:")
        print(runner.pivot(frame, 'wall_seconds').to_string(na_rep=''))
        memory_column = 'peak_alloc_bytes' if frame['peak_alloc_bytes'].notna().any() else 'peak_rss_bytes'
        print(f"\n💾 Memory ({memory_column}):")
        print(runner.pivot(frame, memory_column).map(format_bytes).to_string())
    deviations = runner.report_deviations(frame)
    if deviations:
        print(f"\n⚠️  {len(deviations)} cells differ from the published sizes (see log)")
    failed = frame[frame['error'].notna()]
    for row in failed.itertuples(index=False):
        print(f"⚠️  k={row.k}, d={row.d}: {row.error}")
    runner.write_table(frame, args.out, args.stats)
    print(f"\n✅ {len(frame)} cells in {time.time() - started:.1f} seconds")
    if 'verified' in frame.columns and frame['verified'].eq(False).any():
        return EXIT_INVALID
    return EXIT_OK


def cmd_lookup(args, runner: MisRunner) -> int:
    members = runner.read_mis(args.mis)
    table = read_mapping(args.mapping, members)
    queries = [members.alphabet.encode(s) for s in args.kmers]
    if args.kmers_file:
        queries.extend(read_kmer_list(args.kmers_file, members.alphabet))
    if not queries:
        print("❌ No k-mers given")
        return EXIT_ERROR
    for query in queries:
        if query.k != members.k:
            print(f"{members.alphabet.decode(query)}\t-\t(length {query.k}, expected {members.k})")
            continue
        center = table.lookup(query)
        print(f"{members.alphabet.decode(query)}\t{members.alphabet.decode(center) if center is not None else '-'}")
    return EXIT_OK


COMMANDS = {
    'compute': cmd_compute,
    'verify': cmd_verify,
    'table': cmd_table,
    'lookup': cmd_lookup,
}


def main(argv: List[str] = None) -> int:
    """Entry point; returns the process exit status."""
    args = build_parser().parse_args(argv)
    setup_logging(args.log_level, args.log_file or None)
    try:
        runner = MisRunner(Alphabet(args.alphabet))
        return COMMANDS[args.command](args, runner)
    except KeyboardInterrupt:
        print("\n❌ Cancelled by user.")
        return EXIT_ERROR
    except KmerSpaceError as e:
        logger.error(f"{args.command} failed: {e}")
        print(f"❌ {e}")
        return EXIT_ERROR
    except OSError as e:
        logger.error(f"{args.command} failed: {e}")
        print(f"❌ {e}")
        return EXIT_ERROR


if __name__ == '__main__':
    sys.exit(main())
