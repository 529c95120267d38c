"""
Exception types for kmermis.

All library errors derive from KmerSpaceError so callers (and the CLI) can catch
them in one place, while still matching the built-in type they specialise.
"""

from typing import Optional


class KmerSpaceError(Exception):
    """Base class for all kmermis errors."""


class RejectedInputError(KmerSpaceError, ValueError):
    """A k-mer, code or alphabet that is not valid for the current run."""


class ParameterError(KmerSpaceError, ValueError):
    """An invalid (k, d) combination or an out-of-range solver parameter."""


class CapacityError(KmerSpaceError, MemoryError):
    """The estimated allocation for a run exceeds the configured memory budget."""

    def __init__(self, message: str, required_bytes: int = 0, budget_bytes: int = 0):
        super().__init__(message)
        self.required_bytes = required_bytes
        self.budget_bytes = budget_bytes


class MisFileError(KmerSpaceError, ValueError):
    """A malformed MIS text file or mapping file."""

    def __init__(self, message: str, path: Optional[str] = None, line_number: Optional[int] = None):
        location = ""
        if path is not None:
            location = f"{path}"
            if line_number is not None:
                location += f":{line_number}"
            location += ": "
        super().__init__(f"{location}{message}")
        self.path = path
        self.line_number = line_number
