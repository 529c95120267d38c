"""
File formats for kmermis.

MIS text file:
    #k=<k> d=<d> size=<n> algo=<a> order=lex [alphabet=<letters>]
    with 0 <= d < k and algo 1-3 for the solvers, 0 for the oracle or unknown;
    then n k-mers, one per line, in greedy insertion order.

Mapping file (little-endian):
    16-byte header: magic b'KMIS', k (u16), d (u16), cell width (u8),
    alphabet size (u8), 6 bytes padding; then one u16/u32 cell per k-mer code,
    holding the index of its member (all ones = unmapped).

Stats file: one JSON object per line, appended.
"""

import json
import logging
import struct
from pathlib import Path
from typing import Any, Dict, Iterable, List, Union

import numpy as np

from ..errors import MisFileError, RejectedInputError
from ..kmers import ALGORITHM_IDS, DNA, ORACLE_ALGORITHM, Alphabet, KmerCode, MisResult
from ..solvers.greedy import MappingTable

logger = logging.getLogger(__name__)

MAPPING_MAGIC = b'KMIS'
MAPPING_HEADER = struct.Struct('<4sHHBB6x')
REQUIRED_HEADER_KEYS = ('k', 'd')

PathLike = Union[str, Path]


def ensure_parent_dir(path: PathLike) -> Path:
    """Create the parent directory of an output file if needed."""
    path = Path(path)
    if path.parent and not path.parent.exists():
        path.parent.mkdir(parents=True, exist_ok=True)
        logger.debug(f"Created directory: {path.parent}")
    return path


def format_header(result: MisResult) -> str:
    header = f"#k={result.k} d={result.d} size={len(result)} algo={result.algorithm} order={result.order}"
    if result.alphabet != DNA:
        header += f" alphabet={result.alphabet.letters}"
    return header


def parse_header(line: str, path: PathLike = None) -> Dict[str, str]:
    """Key/value tokens of a '#k=.. d=..' header line."""
    if not line.startswith('#'):
        raise MisFileError("missing '#k=<k> d=<d> ...' header", str(path) if path else None, 1)
    fields = {}
    for token in line[1:].split():
        if '=' not in token:
            raise MisFileError(f"malformed header token {token!r}", str(path) if path else None, 1)
        key, value = token.split('=', 1)
        fields[key] = value
    for key in REQUIRED_HEADER_KEYS:
        if key not in fields:
            raise MisFileError(f"header lacks '{key}='", str(path) if path else None, 1)
    return fields


def write_mis(result: MisResult, path: PathLike) -> Path:
    """Write an MIS text file; returns the path written."""
    path = ensure_parent_dir(path)
    try:
        with open(path, 'w', encoding='ascii', newline='\n') as f:
            f.write(format_header(result) + '\n')
            for kmer in result.strings():
                f.write(kmer + '\n')
    except OSError as e:
        raise OSError(f"Cannot write MIS file {path}: {e.strerror or e}") from e
    logger.info(f"Wrote {len(result):,} k-mers to {path}")
    return path


def read_mis(path: PathLike, alphabet: Alphabet = None) -> MisResult:
    """
    Parse an MIS text file.

    The alphabet comes from the argument, else the header, else DNA. Raises
    MisFileError (with the line number) for malformed headers, k-mers of the
    wrong length, unknown characters or a size that does not match.
    """
    path = Path(path)
    try:
        with open(path, 'r', encoding='ascii', errors='replace') as f:
            lines = f.read().splitlines()
    except OSError as e:
        raise OSError(f"Cannot read MIS file {path}: {e.strerror or e}") from e
    if not lines:
        raise MisFileError("file is empty", str(path), 1)

    fields = parse_header(lines[0].strip(), path)
    try:
        k = int(fields['k'])
        d = int(fields['d'])
        algorithm = int(fields.get('algo', ORACLE_ALGORITHM))
    except ValueError:
        raise MisFileError(f"non-integer header value in {lines[0]!r}", str(path), 1) from None
    if alphabet is None:
        alphabet = Alphabet(fields['alphabet']) if 'alphabet' in fields else DNA
    try:
        alphabet.validate_k(k)
    except ValueError as e:
        raise MisFileError(str(e), str(path), 1) from None
    if not 0 <= d < k:
        raise MisFileError(f"header d={d} is outside 0 <= d < k={k}", str(path), 1)
    if algorithm not in ALGORITHM_IDS:
        raise MisFileError(f"header algo={algorithm} is not one of {ALGORITHM_IDS}", str(path), 1)

    codes = []
    for line_number, line in enumerate(lines[1:], 2):
        kmer = line.strip()
        if not kmer:
            continue
        if len(kmer) != k:
            raise MisFileError(f"k-mer {kmer!r} has length {len(kmer)}, expected {k}", str(path), line_number)
        try:
            codes.append(alphabet.encode(kmer).code)
        except RejectedInputError as e:
            raise MisFileError(str(e), str(path), line_number) from None

    if 'size' in fields and fields['size'] != str(len(codes)):
        raise MisFileError(f"header declares size={fields['size']} but the file lists {len(codes)} k-mers",
                           str(path), 1)
    return MisResult(k, d, codes, algorithm, order=fields.get('order', 'lex'), alphabet=alphabet)


def read_kmer_list(path: PathLike, alphabet: Alphabet = DNA) -> List[KmerCode]:
    """K-mers from a plain text file, one per line; '#' lines are skipped."""
    path = Path(path)
    kmers = []
    try:
        with open(path, 'r', encoding='ascii', errors='replace') as f:
            for line_number, line in enumerate(f, 1):
                line = line.strip()
                if not line or line.startswith('#'):
                    continue
                try:
                    kmers.append(alphabet.encode(line))
                except RejectedInputError as e:
                    raise MisFileError(str(e), str(path), line_number) from None
    except OSError as e:
        raise OSError(f"Cannot read k-mer file {path}: {e.strerror or e}") from e
    return kmers


def write_mapping(table: MappingTable, path: PathLike) -> Path:
    """Write a MappingTable as a flat little-endian mapping file."""
    path = ensure_parent_dir(path)
    sigma = table.members.alphabet.size
    header = MAPPING_HEADER.pack(MAPPING_MAGIC, table.k, table.d, table.width, sigma)
    cells = table.entries.astype(f'<u{table.width}', copy=False)
    try:
        with open(path, 'wb') as f:
            f.write(header)
            f.write(cells.tobytes())
    except OSError as e:
        raise OSError(f"Cannot write mapping file {path}: {e.strerror or e}") from e
    logger.info(f"Wrote mapping table ({len(cells):,} cells x {table.width} bytes) to {path}")
    return path


def read_mapping_header(path: PathLike) -> Dict[str, int]:
    path = Path(path)
    try:
        with open(path, 'rb') as f:
            raw = f.read(MAPPING_HEADER.size)
    except OSError as e:
        raise OSError(f"Cannot read mapping file {path}: {e.strerror or e}") from e
    if len(raw) < MAPPING_HEADER.size:
        raise MisFileError("truncated mapping header", str(path))
    magic, k, d, width, sigma = MAPPING_HEADER.unpack(raw)
    if magic != MAPPING_MAGIC:
        raise MisFileError(f"bad magic {magic!r}, expected {MAPPING_MAGIC!r}", str(path))
    if width not in (2, 4):
        raise MisFileError(f"unsupported cell width {width}", str(path))
    return {'k': k, 'd': d, 'width': width, 'sigma': sigma}


def read_mapping(path: PathLike, members: MisResult) -> MappingTable:
    """
    Open a mapping file as a MappingTable over `members`.

    Cells are memory-mapped, so a lookup reads one cell from disk.
    """
    path = Path(path)
    header = read_mapping_header(path)
    if (header['k'], header['d']) != (members.k, members.d):
        raise MisFileError(f"mapping is for k={header['k']}, d={header['d']} but the MIS is for "
                           f"k={members.k}, d={members.d}", str(path))
    if header['sigma'] != members.alphabet.size:
        raise MisFileError(f"mapping alphabet size {header['sigma']} does not match {members.alphabet.letters}",
                           str(path))
    n = members.alphabet.space_size(members.k)
    expected = MAPPING_HEADER.size + n * header['width']
    actual = path.stat().st_size
    if actual != expected:
        raise MisFileError(f"file has {actual:,} bytes, expected {expected:,}", str(path))
    entries = np.memmap(path, dtype=f"<u{header['width']}", mode='r', offset=MAPPING_HEADER.size, shape=(n,))
    return MappingTable(members.k, members.d, entries, members)


def append_stats(record: Dict[str, Any], path: PathLike) -> Path:
    """Append one JSON record to a stats file."""
    path = ensure_parent_dir(path)
    try:
        with open(path, 'a', encoding='utf-8') as f:
            f.write(json.dumps(record, sort_keys=True) + '\n')
    except OSError as e:
        raise OSError(f"Cannot write stats file {path}: {e.strerror or e}") from e
    return path


def read_stats(path: PathLike) -> List[Dict[str, Any]]:
    path = Path(path)
    with open(path, 'r', encoding='utf-8') as f:
        return [json.loads(line) for line in f if line.strip()]


def count_kmer_lines(path: PathLike) -> int:
    """Number of k-mer lines in an MIS file (header excluded)."""
    with open(path, 'r', encoding='ascii', errors='replace') as f:
        return sum(1 for line in f if line.strip() and not line.startswith('#'))


def write_records(records: Iterable[Dict[str, Any]], path: PathLike, append: bool = False) -> Path:
    """Write several JSON records, one per line."""
    path = ensure_parent_dir(path)
    with open(path, 'a' if append else 'w', encoding='utf-8') as f:
        for record in records:
            f.write(json.dumps(record, sort_keys=True) + '\n')
    return path
