"""
Utility modules for kmermis.

This package contains logging setup and the readers/writers for MIS text files,
mapping files and stats records.
"""

from .logging_utils import get_logger, setup_logging
from .file_utils import (
    write_mis, read_mis, read_kmer_list, write_mapping, read_mapping, read_mapping_header,
    append_stats, read_stats, write_records, count_kmer_lines, ensure_parent_dir
)

__all__ = [
    'get_logger', 'setup_logging',
    'write_mis', 'read_mis', 'read_kmer_list', 'write_mapping', 'read_mapping', 'read_mapping_header',
    'append_stats', 'read_stats', 'write_records', 'count_kmer_lines', 'ensure_parent_dir'
]
