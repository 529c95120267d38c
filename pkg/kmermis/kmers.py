"""
K-mer space primitives for kmermis.

This module holds the alphabet, the packed integer form of a k-mer, the
canonical (lexicographic) enumeration of the k-mer space and the neighbour
generators that both greedy solvers and the BFS solver depend on.

A k-mer of length k over an alphabet of size s is packed as its base-s value
with the leftmost character most significant. For the DNA alphabet this is
exactly 2 bits per character, and code order equals string order.
"""

import string
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterator, List, Sequence, Tuple, Union

import numpy as np
from numba import njit

from .errors import ParameterError, RejectedInputError

# codes must fit a signed 64-bit word with headroom for offsets
MAX_SPACE_SIZE = 2 ** 62


@njit(cache=True, nogil=True)
def fill_digits(code, k, sigma, out):
    """Write the k base-sigma digits of code into out, most significant first."""
    for i in range(k - 1, -1, -1):
        out[i] = code % sigma
        code //= sigma


@njit(cache=True, nogil=True)
def substitution_neighbors_into(code, k, sigma, pw, digits, out):
    """
    Write the k*(sigma-1) substitution neighbours of code into out.

    Neighbours come out in ascending code order: first the ones that lower a
    digit (most significant position first), then the ones that raise a digit
    (least significant position first). Returns the number written.
    """
    fill_digits(code, k, sigma, digits)
    n = 0
    for i in range(k):
        p = pw[k - 1 - i]
        x = digits[i]
        for c in range(x):
            out[n] = code + (c - x) * p
            n += 1
    for i in range(k - 1, -1, -1):
        p = pw[k - 1 - i]
        x = digits[i]
        for c in range(x + 1, sigma):
            out[n] = code + (c - x) * p
            n += 1
    return n


@njit(cache=True, nogil=True)
def homopolymer_distances_into(digits, k, sigma, out):
    """out[s] = k - (occurrences of s) = edit distance to the homopolymer s^k."""
    for s in range(sigma):
        out[s] = k
    for i in range(k):
        out[digits[i]] -= 1


@lru_cache(maxsize=None)
def powers(sigma: int, k: int) -> np.ndarray:
    """Return the read-only vector sigma**0 .. sigma**k as int64."""
    pw = np.empty(k + 1, dtype=np.int64)
    value = 1
    for i in range(k + 1):
        pw[i] = value
        value *= sigma
    pw.setflags(write=False)
    return pw


@dataclass(frozen=True, order=True)
class KmerCode:
    """A k-mer packed as an integer in [0, |alphabet|**k)."""

    k: int
    code: int

    def to_string(self, alphabet: 'Alphabet' = None) -> str:
        return (alphabet or DNA).decode(self)


@dataclass(frozen=True)
class Alphabet:
    """
    An ordered alphabet of 2 to 26 distinct uppercase ASCII letters.

    The order of `letters` is the character order used for packing and for
    lexicographic enumeration.
    """

    letters: str = 'ACGT'

    def __post_init__(self):
        letters = self.letters
        if not isinstance(letters, str) or not 2 <= len(letters) <= 26:
            raise RejectedInputError(f"Alphabet must have 2 to 26 letters, got {letters!r}")
        if len(set(letters)) != len(letters):
            raise RejectedInputError(f"Alphabet letters must be distinct: {letters!r}")
        if any(c not in string.ascii_uppercase for c in letters):
            raise RejectedInputError(f"Alphabet letters must be uppercase ASCII: {letters!r}")
        object.__setattr__(self, '_index', {c: i for i, c in enumerate(letters)})

    @classmethod
    def of_size(cls, size: int) -> 'Alphabet':
        """DNA for size 4, otherwise the first `size` uppercase letters."""
        if size == 4:
            return cls('ACGT')
        if not 2 <= size <= 26:
            raise RejectedInputError(f"Alphabet size must be between 2 and 26, got {size}")
        return cls(string.ascii_uppercase[:size])

    @property
    def size(self) -> int:
        return len(self.letters)

    @property
    def max_k(self) -> int:
        """Largest k whose space still packs into one 64-bit word."""
        k = 0
        while self.size ** (k + 1) <= MAX_SPACE_SIZE:
            k += 1
        return k

    def space_size(self, k: int) -> int:
        return self.size ** k

    def validate_k(self, k: int) -> int:
        if not isinstance(k, (int, np.integer)) or not 1 <= k <= self.max_k:
            raise ParameterError(f"k must be between 1 and {self.max_k} for a {self.size}-letter alphabet, got {k}")
        return int(k)

    # -- packing --------------------------------------------------------

    def encode(self, s: str) -> KmerCode:
        """Pack a string over this alphabet into its KmerCode."""
        if not s or len(s) > self.max_k:
            raise RejectedInputError(f"k-mer length must be between 1 and {self.max_k}, got {len(s)}")
        index = self._index
        code = 0
        for ch in s:
            try:
                code = code * self.size + index[ch]
            except KeyError:
                raise RejectedInputError(f"Character {ch!r} in {s!r} is not in alphabet {self.letters}") from None
        return KmerCode(len(s), code)

    def decode(self, c: KmerCode) -> str:
        """Unpack a KmerCode back into its string."""
        self.check_code(c)
        chars = []
        code = c.code
        for _ in range(c.k):
            code, x = divmod(code, self.size)
            chars.append(self.letters[x])
        return ''.join(reversed(chars))

    def check_code(self, c: KmerCode) -> KmerCode:
        if not 1 <= c.k <= self.max_k or not 0 <= c.code < self.size ** c.k:
            raise RejectedInputError(f"Code {c.code} is out of range for k={c.k} over {self.letters}")
        return c

    def digits(self, c: KmerCode) -> np.ndarray:
        """Character indices of a k-mer, leftmost first."""
        self.check_code(c)
        out = np.empty(c.k, dtype=np.int64)
        fill_digits(c.code, c.k, self.size, out)
        return out

    # -- the space ------------------------------------------------------

    def enumerate_space(self, k: int) -> Iterator[KmerCode]:
        """Yield every k-mer once, in strictly increasing (lexicographic) order."""
        k = self.validate_k(k)
        for code in range(self.size ** k):
            yield KmerCode(k, code)

    def substitution_neighbors(self, v: KmerCode) -> List[KmerCode]:
        """The k*(|alphabet|-1) k-mers one substitution away from v, in lexicographic order."""
        self.check_code(v)
        digits = np.empty(v.k, dtype=np.int64)
        out = np.empty(v.k * (self.size - 1), dtype=np.int64)
        n = substitution_neighbors_into(v.code, v.k, self.size, powers(self.size, v.k), digits, out)
        return [KmerCode(v.k, int(code)) for code in out[:n]]

    def homopolymer_distances(self, v: KmerCode) -> Tuple[int, ...]:
        """edit(v, s^k) for every letter s, i.e. k minus the count of s in v."""
        out = np.empty(self.size, dtype=np.int64)
        homopolymer_distances_into(self.digits(v), v.k, self.size, out)
        return tuple(int(x) for x in out)

    def homopolymer(self, letter: Union[str, int], k: int) -> KmerCode:
        """The k-mer made of one repeated letter (given as a letter or its index)."""
        k = self.validate_k(k)
        index = self._index[letter] if isinstance(letter, str) else int(letter)
        if not 0 <= index < self.size:
            raise RejectedInputError(f"Letter index {index} is not in alphabet {self.letters}")
        return KmerCode(k, index * (self.size ** k - 1) // (self.size - 1))


DNA = Alphabet('ACGT')

# 0 marks a set from the brute-force oracle or of unknown origin; 1-3 are the solvers
ORACLE_ALGORITHM = 0
ALGORITHM_IDS = (ORACLE_ALGORITHM, 1, 2, 3)


class MisResult:
    """
    A maximal independent set of the k-mer space plus its provenance.

    Members are kept as an int64 code array in greedy insertion order; the
    `members` view materialises KmerCode objects on demand. Two results are
    equal when k, d and the member sequence agree, whichever algorithm made them.
    """

    def __init__(self, k: int, d: int, codes: Sequence[int], algorithm: int,
                 order: str = 'lex', alphabet: Alphabet = DNA):
        self.k = int(k)
        self.d = int(d)
        self.codes = np.asarray(codes, dtype=np.int64)
        self.algorithm = int(algorithm)
        self.order = order
        self.alphabet = alphabet
        if self.algorithm not in ALGORITHM_IDS:
            raise RejectedInputError(f"Unknown algorithm id {self.algorithm}, expected one of {ALGORITHM_IDS}")
        if self.codes.ndim != 1:
            raise RejectedInputError("MIS member codes must be a flat sequence")
        if len(self.codes) and (self.codes.min() < 0 or self.codes.max() >= alphabet.space_size(self.k)):
            raise RejectedInputError(f"MIS member code out of range for k={self.k}")
        self.codes.setflags(write=False)

    @property
    def members(self) -> List[KmerCode]:
        return [KmerCode(self.k, int(c)) for c in self.codes]

    def strings(self) -> List[str]:
        return [self.alphabet.decode(m) for m in self.members]

    def __len__(self) -> int:
        return len(self.codes)

    def __iter__(self) -> Iterator[KmerCode]:
        return iter(self.members)

    def __eq__(self, other) -> bool:
        if not isinstance(other, MisResult):
            return NotImplemented
        return (self.k, self.d) == (other.k, other.d) and np.array_equal(self.codes, other.codes)

    __hash__ = None

    def __repr__(self) -> str:
        return f"MisResult(k={self.k}, d={self.d}, size={len(self)}, algorithm={self.algorithm}, order={self.order!r})"


# Module-level shortcuts over the DNA alphabet

def encode(s: str, alphabet: Alphabet = DNA) -> KmerCode:
    return alphabet.encode(s)


def decode(c: KmerCode, alphabet: Alphabet = DNA) -> str:
    return alphabet.decode(c)


def enumerate_space(k: int, alphabet: Alphabet = DNA) -> Iterator[KmerCode]:
    return alphabet.enumerate_space(k)


def substitution_neighbors(v: KmerCode, alphabet: Alphabet = DNA) -> List[KmerCode]:
    return alphabet.substitution_neighbors(v)


def homopolymer_distances(v: KmerCode, alphabet: Alphabet = DNA) -> Tuple[int, ...]:
    return alphabet.homopolymer_distances(v)
