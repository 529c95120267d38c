#!/usr/bin/env python3
"""
Test the extended k-mer/(k-1)-mer graph and the BFS solver (Algorithm 3).
"""

from kmer_test_utils import TABLE_1, distance_matrix, slow

import numpy as np
import pytest

from kmermis import DNA, Alphabet, CapacityError, KmerCode, ParameterError, RejectedInputError
from kmermis.kmers import encode
from kmermis.solvers.bfs import (UNREACHED, BfsSolver, DistanceField, GraphVertex, Level, frontier_capacity,
                                 graph_distance, graph_distances_from, graph_neighbors,
                                 multi_source_cover, run_bfs_mis)
from kmermis.solvers.greedy import run_greedy_simple


def full(s):
    return GraphVertex(Level.FULL, encode(s))


def short(s):
    return GraphVertex(Level.SHORT, encode(s))


def test_full_vertex_neighbors():
    neighbors = graph_neighbors(full("AAA"))
    # 9 substitutions and a single distinct deletion
    assert len(neighbors) == 10
    assert len(set(neighbors)) == 10
    assert short("AA") in neighbors
    assert full("CAA") in neighbors

    neighbors = graph_neighbors(full("TGATT"))
    deletions = {v.to_string() for v in neighbors if v.level is Level.SHORT}
    assert deletions == {"GATT", "TATT", "TGTT", "TGAT"}
    assert len(neighbors) == 15 + 4


def test_short_vertex_neighbors():
    neighbors = graph_neighbors(short("AA"))
    assert all(v.level is Level.FULL for v in neighbors)
    strings = sorted(v.to_string() for v in neighbors)
    assert len(strings) == len(set(strings)) == 10
    assert "AAA" in strings and "CAA" in strings and "AAT" in strings

    neighbors = graph_neighbors(short("AC"))
    assert len(neighbors) == 3 * 4 - 2


def test_vertex_flat_index():
    v = short("GT")
    index = v.flat_index()
    assert index == 64 + encode("GT").code
    assert GraphVertex.from_flat_index(index, 3) == v
    assert GraphVertex.from_flat_index(5, 3) == full("ACC")
    assert v.k == 3
    with pytest.raises(RejectedInputError):
        GraphVertex.from_flat_index(64 + 16, 3)


def test_graph_distance_known_pairs():
    assert graph_distance(encode("TGATT"), encode("ATTGA")) == 4
    assert graph_distance(encode("ACGTA"), encode("CGTAC")) == 2
    assert graph_distance(encode("AAAA"), encode("AAAA")) == 0
    with pytest.raises(RejectedInputError):
        graph_distance(encode("AAAA"), encode("AAA"))


@pytest.mark.parametrize("k", [2, 3, 4])
def test_graph_distance_equals_edit_distance(k):
    dist = distance_matrix(k, 4)
    for u in range(4 ** k):
        assert np.array_equal(graph_distances_from(KmerCode(k, u)), dist[u].astype(np.int32))


def test_graph_distance_other_alphabet():
    abc = Alphabet("ABC")
    dist = distance_matrix(4, 3)
    for u in (0, 17, 80):
        assert np.array_equal(graph_distances_from(KmerCode(4, u), abc), dist[u].astype(np.int32))


@pytest.mark.parametrize("k,d", [(4, 1), (5, 2), (6, 2), (7, 2), (8, 2), (7, 3), (8, 3), (8, 4)])
def test_bfs_sizes(k, d):
    result = run_bfs_mis(k, d)
    assert len(result) == TABLE_1[(k, d)]
    assert result.algorithm == 3


@pytest.mark.parametrize("k", [2, 3, 4, 5, 6])
def test_bfs_equals_simple_greedy(k):
    for d in range(k):
        assert run_bfs_mis(k, d) == run_greedy_simple(k, d), (k, d)


def test_d_zero_makes_every_kmer_a_member():
    solver = BfsSolver()
    result = solver.solve(4, 0)
    assert len(result) == 256
    assert solver.counters.vertices_explored == 0


def test_distance_field_after_solve():
    k, d = 6, 2
    solver = BfsSolver()
    result = solver.solve(k, d)
    cells = solver.field.full_cells
    assert cells.max() <= d
    assert np.all(cells[result.codes] == 0)
    members = np.zeros(4 ** k, dtype=bool)
    members[result.codes] = True
    assert np.all(cells[~members] >= 1)
    assert len(solver.field.unreached_full()) == 0
    assert solver.field[full("A" * k)] == 0


class SnapshotBfsSolver(BfsSolver):
    """Records a copy of the distance field after every chunk."""

    def __init__(self):
        super().__init__(progress_interval=1)
        self.snapshots = []

    def log_progress(self, done, total, members):
        self.snapshots.append(self.field.cells.copy())


@pytest.mark.parametrize("k,d", [(5, 2), (6, 3), (7, 2)])
def test_distance_field_cells_only_decrease(k, d):
    solver = SnapshotBfsSolver()
    solver.solve(k, d)
    assert len(solver.snapshots) > 10
    previous = np.full(len(solver.field), UNREACHED, dtype=np.uint8)
    for cells in solver.snapshots:
        assert np.all(cells <= previous)
        previous = cells
    assert np.array_equal(previous, solver.field.cells)


def test_dequeue_counts_stay_within_d():
    for k, d in [(6, 2), (8, 3)]:
        solver = BfsSolver(instrument=True)
        solver.solve(k, d)
        assert 1 <= solver.counters.max_dequeues <= d
        assert solver.dequeues is not None


def test_multi_source_cover():
    sources = np.array([encode("AAAA").code, encode("TTTT").code], dtype=np.int64)
    field, owner = multi_source_cover(sources, 2, 4)
    assert field[full("AAAA")] == 0
    assert field[full("AACA")] == 1
    assert owner[encode("AACA").code] == 0
    assert owner[encode("TTGT").code] == 1
    assert field[full("ACGT")] is None
    assert owner[encode("ACGT").code] == -1
    assert field.cells.dtype == np.uint8
    assert len(field) == DistanceField.nbytes_for(4, 4)
    assert int(field.cells.max()) == UNREACHED


def test_frontier_capacity():
    assert frontier_capacity(8, 4, 1, 10 ** 6) == 2
    assert frontier_capacity(8, 4, 2, 10 ** 6) == 1 + 32 + 1
    assert frontier_capacity(3, 4, 5, 80) == 81


def test_invalid_parameters():
    with pytest.raises(ParameterError):
        run_bfs_mis(5, 5)
    with pytest.raises(CapacityError):
        BfsSolver(DNA, memory_budget=1024).solve(10, 2)


@slow
def test_bfs_sizes_for_larger_k():
    assert len(run_bfs_mis(10, 3)) == TABLE_1[(10, 3)]
    assert len(run_bfs_mis(9, 3)) == TABLE_1[(9, 3)]


if __name__ == "__main__":
    test_full_vertex_neighbors()
    test_short_vertex_neighbors()
    test_vertex_flat_index()
    test_graph_distance_known_pairs()
    for k in (2, 3, 4):
        test_graph_distance_equals_edit_distance(k)
    for k, d in [(4, 1), (5, 2), (8, 2)]:
        test_bfs_sizes(k, d)
    for k in range(2, 7):
        test_bfs_equals_simple_greedy(k)
    test_d_zero_makes_every_kmer_a_member()
    test_distance_field_after_solve()
    test_dequeue_counts_stay_within_d()
    test_multi_source_cover()
    print("✓ BFS tests passed")
