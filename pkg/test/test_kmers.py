#!/usr/bin/env python3
"""
Test k-mer packing, enumeration, neighbours and homopolymer distances.
"""

from kmer_test_utils import slow

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from kmermis import DNA, Alphabet, KmerCode, MisResult, RejectedInputError, ParameterError
from kmermis.kmers import (ALGORITHM_IDS, ORACLE_ALGORITHM, decode, encode, enumerate_space, homopolymer_distances,
                           substitution_neighbors)

same_length_pair = st.integers(min_value=1, max_value=31).flatmap(
    lambda k: st.tuples(st.text(alphabet="ACGT", min_size=k, max_size=k),
                        st.text(alphabet="ACGT", min_size=k, max_size=k)))


def test_encode_is_base4_leftmost_first():
    assert encode("AAAA") == KmerCode(4, 0)
    assert encode("TTTT") == KmerCode(4, 255)
    assert encode("ACGT") == KmerCode(4, 27)
    assert decode(KmerCode(4, 27)) == "ACGT"
    assert KmerCode(3, 42).to_string() == "GGG"


def test_encode_rejects_bad_input():
    for bad in ("ACGN", "acgt", ""):
        with pytest.raises(RejectedInputError):
            encode(bad)
    with pytest.raises(RejectedInputError):
        encode("A" * 32)
    with pytest.raises(RejectedInputError):
        decode(KmerCode(2, 16))


def test_max_k():
    assert DNA.max_k == 31
    assert Alphabet("AB").max_k == 62
    assert Alphabet.of_size(4) == DNA
    assert Alphabet.of_size(3).letters == "ABC"
    with pytest.raises(RejectedInputError):
        Alphabet("AAB")
    with pytest.raises(ParameterError):
        DNA.validate_k(32)


def test_enumeration_is_lexicographic():
    kmers = [decode(c) for c in enumerate_space(3)]
    assert len(kmers) == 64
    assert kmers == sorted(kmers)
    assert kmers[0] == "AAA" and kmers[-1] == "TTT"


def test_substitution_neighbors_sorted():
    neighbors = [decode(c) for c in substitution_neighbors(encode("AC"))]
    assert neighbors == ["AA", "AG", "AT", "CC", "GC", "TC"]

    v = encode("GATTACA")
    neighbors = substitution_neighbors(v)
    codes = [c.code for c in neighbors]
    assert len(codes) == 7 * 3
    assert codes == sorted(codes)
    for c in neighbors:
        hamming = sum(a != b for a, b in zip(decode(c), "GATTACA"))
        assert hamming == 1


def test_homopolymer_distances():
    assert homopolymer_distances(encode("AACGT")) == (3, 4, 4, 4)
    assert homopolymer_distances(encode("GGGG")) == (4, 4, 0, 4)
    assert DNA.homopolymer('G', 3) == encode("GGG")
    assert DNA.homopolymer(3, 5) == encode("TTTTT")


def test_small_alphabet():
    binary = Alphabet("AB")
    assert binary.encode("BAB").code == 5
    assert binary.space_size(10) == 1024
    assert [binary.decode(c) for c in binary.substitution_neighbors(binary.encode("AB"))] == ["AA", "BB"]


def test_mis_result_equality():
    a = MisResult(3, 1, [0, 5], algorithm=1)
    b = MisResult(3, 1, [0, 5], algorithm=3)
    c = MisResult(3, 1, [5, 0], algorithm=1)
    assert a == b
    assert a != c
    assert a.strings() == ["AAA", "ACC"]
    assert len(a) == 2
    with pytest.raises(RejectedInputError):
        MisResult(2, 1, [16], algorithm=1)


def test_mis_result_algorithm_ids():
    assert ALGORITHM_IDS == (ORACLE_ALGORITHM, 1, 2, 3)
    assert MisResult(3, 1, [0], algorithm=ORACLE_ALGORITHM).algorithm == 0
    for bad in (-1, 4, 9):
        with pytest.raises(RejectedInputError):
            MisResult(3, 1, [0], algorithm=bad)


@given(st.text(alphabet="ACGT", min_size=1, max_size=31))
def test_packing_round_trips(s):
    code = encode(s)
    assert code.k == len(s)
    assert decode(code) == s
    assert code.code < 4 ** len(s)


@given(same_length_pair)
@settings(max_examples=1000)
def test_code_order_follows_string_order(pair):
    s, t = pair
    u, v = encode(s), encode(t)
    assert (s < t) == (u.code < v.code)
    assert (s == t) == (u.code == v.code)


@slow
def test_code_order_on_random_pairs():
    rng = np.random.default_rng(5)
    letters = np.array(list("ACGT"))
    for _ in range(100_000):
        k = int(rng.integers(1, 16))
        s = "".join(letters[rng.integers(0, 4, size=k)])
        t = "".join(letters[rng.integers(0, 4, size=k)])
        assert (s < t) == (encode(s).code < encode(t).code), (s, t)


if __name__ == "__main__":
    test_encode_is_base4_leftmost_first()
    test_encode_rejects_bad_input()
    test_max_k()
    test_enumeration_is_lexicographic()
    test_substitution_neighbors_sorted()
    test_homopolymer_distances()
    test_small_alphabet()
    test_mis_result_equality()
    test_mis_result_algorithm_ids()
    print("✓ k-mer tests passed")
