import random

import numpy as np
import pytest

from pkrank.gf_rank import (
    EchelonBasis,
    MemoryLimitError,
    rank_dense_oracle,
    rank_streaming,
)
from pkrank.incidence import MatrixKind, stream_matrix
from pkrank.ring import make_ring


def test_identity_rank():
    rows = [[1 if i == j else 0 for j in range(4)] for i in range(4)]
    assert rank_streaming(rows, 2).rank == 4


def test_a_2_2_stream_rank():
    stream = stream_matrix(MatrixKind.A, make_ring(2, 1), 2)
    report = rank_streaming(stream, 2)
    assert report.rank == 3
    assert report.rows_consumed == 6
    assert report.cols == 4


def test_w_2_2_stream_rank():
    stream = stream_matrix(MatrixKind.W, make_ring(2, 1), 2)
    assert rank_streaming(stream, 2).rank == 3


def test_all_ones_rank_one():
    rows = [[1] * 5 for _ in range(5)]
    assert rank_streaming(rows, 3).rank == 1


def test_dense_oracle_examples():
    assert rank_dense_oracle([[1, 0], [0, 1]], 5) == 2
    assert rank_dense_oracle([[1, 2], [2, 4]], 5) == 1
    assert rank_dense_oracle([[1, 2], [2, 4]], 3) == 1


def test_oracle_empty_and_zero():
    assert rank_dense_oracle([], 2) == 0
    assert rank_dense_oracle([[0, 0], [0, 0]], 7) == 0


def _random_matrix(rng, p):
    nrows = rng.randrange(1, 41)
    ncols = rng.randrange(1, 41)
    return [[rng.randrange(p) for _ in range(ncols)] for _ in range(nrows)]


@pytest.mark.parametrize("p", [2, 3, 5, 7])
def test_streaming_matches_oracle_random(p):
    rng = random.Random(1000 + p)
    for _ in range(25):
        mat = _random_matrix(rng, p)
        assert rank_streaming(mat, p).rank == rank_dense_oracle(mat, p)


def test_permutation_invariance():
    rng = random.Random(7)
    for p in (2, 5):
        mat = _random_matrix(rng, p)
        base = rank_streaming(mat, p).rank
        for _ in range(10):
            shuffled = mat[:]
            rng.shuffle(shuffled)
            assert rank_streaming(shuffled, p).rank == base


def test_prefix_monotonicity():
    rng = random.Random(21)
    mat = _random_matrix(rng, 3)
    full = rank_streaming(mat, 3).rank
    prev = 0
    for cut in range(len(mat) + 1):
        r = rank_streaming(mat[:cut], 3, ncols=len(mat[0])).rank
        assert prev <= r <= full
        prev = r


@pytest.mark.parametrize("p,k,n", [(2, 1, 2), (2, 2, 1), (2, 2, 2), (3, 1, 2)])
def test_rank_a_equals_rank_astar(p, k, n):
    ring = make_ring(p, k)
    rank_a = rank_streaming(stream_matrix(MatrixKind.A, ring, n), p).rank
    rank_astar = rank_streaming(stream_matrix(MatrixKind.ASTAR, ring, n), p).rank
    assert rank_a == rank_astar


def test_early_exit_stops_consuming():
    rows = [[1 if i == j else 0 for j in range(3)] for i in range(3)]
    rows += [[1, 1, 1]] * 10
    report = rank_streaming(rows, 2)
    assert report.rank == 3
    assert report.rows_consumed == 3


def test_memory_cap_enforced():
    with pytest.raises(MemoryLimitError):
        rank_streaming([[1, 0], [0, 1]], 2, max_mem_bytes=0)
    with pytest.raises(MemoryLimitError):
        rank_streaming([[1, 0], [0, 1]], 3, max_mem_bytes=8)


def test_basis_pivot_columns():
    basis = EchelonBasis(2, 4)
    basis.insert([0, 1, 1, 0])
    basis.insert([0, 1, 0, 1])
    assert basis.rank == 2
    assert basis.pivot_columns() == [1, 2]
    basis_odd = EchelonBasis(5, 3)
    basis_odd.insert([0, 2, 1])
    basis_odd.insert([0, 4, 2])  # multiple of the first
    assert basis_odd.rank == 1
    assert basis_odd.pivot_columns() == [1]


def test_general_residue_rows_are_reduced():
    # entries outside [0, p) must reduce mod p first
    assert rank_streaming([[2, 4], [6, 8]], 2).rank == 0
    assert rank_streaming([[3, 1], [6, 2]], 3).rank == 1


def test_inconsistent_row_length_rejected():
    basis = EchelonBasis(2, 3)
    with pytest.raises(ValueError):
        basis.insert([1, 0])


def test_empty_iterable_needs_ncols():
    with pytest.raises(ValueError):
        rank_streaming(iter(()), 2)
    assert rank_streaming(iter(()), 2, ncols=5).rank == 0


def test_support_insertion_matches_dense():
    ring = make_ring(2, 2)
    stream = stream_matrix(MatrixKind.A, ring, 2)
    via_supports = rank_streaming(stream, 2).rank
    dense_rows = [list(map(int, row)) for row in stream_matrix(MatrixKind.A, ring, 2)]
    assert via_supports == rank_streaming(dense_rows, 2).rank == rank_dense_oracle(dense_rows, 2)


def test_numpy_rows_accepted():
    rows = np.array([[1, 0, 1], [0, 1, 1], [1, 1, 0]], dtype=np.uint8)
    assert rank_streaming(rows, 2).rank == 2
