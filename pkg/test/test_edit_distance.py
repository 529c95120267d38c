#!/usr/bin/env python3
"""
Test the full and banded edit distance kernels.
"""

import itertools

from kmer_test_utils import banded_disagreements, distances_to, homopolymer_matrix, slow

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from kmermis import DNA, Alphabet, KmerCode, ParameterError
from kmermis.edit_distance import EditBudget, EditWorkspace, edit_distance_strings, edit_full, edit_within
from kmermis.kmers import encode

dna_kmer = st.text(alphabet="ACGT", min_size=1, max_size=15)


def test_known_distances():
    assert edit_full(encode("TGATT"), encode("ATTGA")) == 4
    assert edit_full(encode("ACGT"), encode("ACGT")) == 0
    assert edit_full(encode("AAAA"), encode("TTTT")) == 4
    # shift by one costs one deletion plus one insertion
    assert edit_full(encode("ACGTA"), encode("CGTAC")) == 2
    assert edit_full(encode("TGATT"), encode("GATT")) == 1
    assert edit_distance_strings("kitten", "sitting") == 3


def test_within_matches_full_on_small_spaces():
    ws = EditWorkspace(3, 3)
    for k in range(1, 4):
        kmers = list(DNA.enumerate_space(k))
        for u, v in itertools.product(kmers, repeat=2):
            dist = edit_full(u, v, workspace=ws)
            for d in range(k + 1):
                assert edit_within(u, v, d, workspace=ws) == (dist <= d), (u, v, d)


@pytest.mark.parametrize("k", [1, 2, 3, 4, 5])
def test_banded_kernel_matches_full_exhaustively(k):
    assert banded_disagreements(k, 4) == 0


def test_within_handles_different_lengths():
    assert edit_within(encode("ACGT"), encode("ACG"), 1)
    assert not edit_within(encode("ACGT"), encode("AC"), 1)
    assert edit_within(encode("ACGT"), encode("AC"), 2)
    assert edit_within(encode("AAAA"), encode("AAAA"), 0)
    assert not edit_within(encode("AAAA"), encode("AAAC"), 0)


def test_budget_validation():
    with pytest.raises(ParameterError):
        EditBudget(-1)
    with pytest.raises(ParameterError):
        EditBudget(3).check_k(3)
    assert EditBudget(2).check_k(3).d == 2


def test_homopolymer_formula_matches_dp():
    for k in range(1, 7):
        homopolymers = np.array([DNA.homopolymer(s, k).code for s in range(4)], dtype=np.int64)
        assert np.array_equal(distances_to(k, 4, homopolymers), homopolymer_matrix(k)), k


def test_other_alphabet():
    ab = Alphabet("AB")
    assert edit_full(ab.encode("ABAB"), ab.encode("BABA"), ab) == 2
    assert edit_within(ab.encode("ABAB"), ab.encode("BABA"), 2, ab)
    assert not edit_within(ab.encode("ABAB"), ab.encode("BABA"), 1, ab)


@given(dna_kmer, dna_kmer, st.integers(min_value=0, max_value=15))
@settings(max_examples=500)
def test_kernels_agree_with_reference(s, t, d):
    u, v = encode(s), encode(t)
    expected = edit_distance_strings(s, t)
    assert edit_full(u, v) == expected
    assert edit_within(u, v, d) == (expected <= d)


@given(st.integers(min_value=1, max_value=10).flatmap(
    lambda k: st.tuples(*[st.text(alphabet="ACGT", min_size=k, max_size=k)] * 3)))
@settings(max_examples=500)
def test_metric_axioms(triple):
    u, v, w = (encode(s) for s in triple)
    assert edit_full(u, v) == edit_full(v, u)
    assert (edit_full(u, v) == 0) == (u == v)
    assert edit_full(u, w) <= edit_full(u, v) + edit_full(v, w)


def test_metric_axioms_on_random_triples():
    rng = np.random.default_rng(9)
    ws = EditWorkspace(10, 10)
    for _ in range(10_000):
        k = int(rng.integers(1, 11))
        u, v, w = (KmerCode(k, int(c)) for c in rng.integers(0, 4 ** k, size=3))
        uv, vu = edit_full(u, v, workspace=ws), edit_full(v, u, workspace=ws)
        uw, vw = edit_full(u, w, workspace=ws), edit_full(v, w, workspace=ws)
        assert uv == vu
        assert (uv == 0) == (u == v)
        assert uw <= uv + vw, (u, v, w)


@slow
def test_banded_agrees_on_a_million_random_pairs():
    rng = np.random.default_rng(7)
    ws = EditWorkspace(15, 14)
    for _ in range(1_000_000):
        k = int(rng.integers(2, 16))
        d = int(rng.integers(0, k))
        u = KmerCode(k, int(rng.integers(0, 4 ** k)))
        v = KmerCode(k, int(rng.integers(0, 4 ** k)))
        assert edit_within(u, v, d, workspace=ws) == (edit_full(u, v, workspace=ws) <= d)


if __name__ == "__main__":
    test_known_distances()
    test_within_matches_full_on_small_spaces()
    test_within_handles_different_lengths()
    test_budget_validation()
    test_homopolymer_formula_matches_dp()
    test_other_alphabet()
    print("✓ edit distance tests passed")
