import numpy as np
import pytest

from wiretap_fca import (
    BitSequence,
    DimensionError,
    Gf2Matrix,
    SingularMatrixError,
    rank_extend,
    solve_gf2,
    xor_sequences,
)
from wiretap_fca.gf2 import RowBasis, invert_packed, pack_bits, parity, rank, unpack_bits


def test_bitsequence_rejects_non_binary():
    with pytest.raises(ValueError):
        BitSequence([0, 1, 2])


def test_bitsequence_round_trip():
    seq = BitSequence.from_string("10110")
    assert seq.to01() == "10110"
    assert len(seq) == 5
    assert seq[0] == 1 and seq[4] == 0
    assert list(seq) == [1, 0, 1, 1, 0]


def test_bitsequence_array_is_read_only():
    seq = BitSequence([1, 0, 1])
    with pytest.raises(ValueError):
        seq.array[0] = 0


def test_xor_identity_and_self_inverse():
    rng = np.random.default_rng(0)
    x = BitSequence(rng.integers(0, 2, 64, dtype=np.uint8))
    zeros = BitSequence.zeros(64)
    assert xor_sequences(x, zeros) == x
    assert xor_sequences(x, x) == zeros
    y = BitSequence(rng.integers(0, 2, 64, dtype=np.uint8))
    assert xor_sequences(xor_sequences(x, y), y) == x


def test_xor_truth_table():
    x = BitSequence([1, 0, 1, 1])
    y = BitSequence([0, 1, 1, 0])
    assert (x ^ y) == BitSequence([1, 1, 0, 1])


def test_xor_length_mismatch():
    with pytest.raises(DimensionError):
        xor_sequences(BitSequence([1, 0]), BitSequence([1]))


def test_solve_identity_returns_rhs():
    b = BitSequence([1, 0, 1, 1, 0])
    assert solve_gf2(Gf2Matrix.identity(5), b) == b


def test_solve_repeated_row_is_singular():
    a = Gf2Matrix([[1, 1, 0], [1, 1, 0], [0, 0, 1]])
    with pytest.raises(SingularMatrixError):
        solve_gf2(a, BitSequence([1, 0, 1]))


def test_solve_shape_errors():
    with pytest.raises(DimensionError):
        solve_gf2(Gf2Matrix([[1, 0], [0, 1], [1, 1]]), BitSequence([1, 0, 1]))
    with pytest.raises(DimensionError):
        solve_gf2(Gf2Matrix.identity(3), BitSequence([1, 0]))


def test_solve_multiply_back_random_systems():
    # 8x8 instances per the worked example, then a spread of sizes
    rng = np.random.default_rng(7)
    solved = 0
    while solved < 25:
        n = int(rng.integers(2, 12))
        a = Gf2Matrix(rng.integers(0, 2, (n, n), dtype=np.uint8))
        b = BitSequence(rng.integers(0, 2, n, dtype=np.uint8))
        try:
            x = solve_gf2(a, b)
        except SingularMatrixError:
            continue
        assert a.matvec(x) == b
        solved += 1


def test_rank_extend_zero_row_dependent():
    a = Gf2Matrix([[1, 0, 1]])
    assert rank_extend(a, BitSequence([0, 0, 0])) is False


def test_rank_extend_unit_row_on_empty_matrix():
    empty = Gf2Matrix(np.zeros((0, 4), dtype=np.uint8))
    assert rank_extend(empty, BitSequence([0, 1, 0, 0])) is True


def test_rank_extend_sum_of_rows_dependent():
    a = Gf2Matrix([[1, 0, 1, 0], [0, 1, 1, 0]])
    assert rank_extend(a, BitSequence([1, 1, 0, 0])) is False
    assert rank_extend(a, BitSequence([0, 0, 0, 1])) is True


def test_rank_extend_dimension_error():
    with pytest.raises(DimensionError):
        rank_extend(Gf2Matrix.identity(3), BitSequence([1, 0]))


def test_rank_matches_brute_force_on_small_matrices():
    # oracle: rank = log2 of the span size enumerated over all row subsets
    rng = np.random.default_rng(3)
    for _ in range(30):
        rows, cols = int(rng.integers(1, 5)), int(rng.integers(1, 5))
        m = rng.integers(0, 2, (rows, cols), dtype=np.uint8)
        span = {0}
        for row in m:
            packed = pack_bits(row)
            span |= {v ^ packed for v in span}
        assert rank(Gf2Matrix(m)) == len(span).bit_length() - 1


def test_row_basis_agrees_with_rank_extend():
    rng = np.random.default_rng(11)
    for _ in range(20):
        cols = int(rng.integers(2, 10))
        basis = RowBasis()
        acc = np.zeros((0, cols), dtype=np.uint8)
        for _ in range(cols * 2):
            row = rng.integers(0, 2, cols, dtype=np.uint8)
            expected = rank_extend(Gf2Matrix(acc), BitSequence(row))
            assert basis.try_add(pack_bits(row)) == expected
            if expected:
                acc = np.concatenate([acc, row.reshape(1, -1)])


def test_greedy_selection_reaches_full_rank():
    # any spanning row set yields exactly k independent rows under greedy picking
    rng = np.random.default_rng(5)
    for _ in range(10):
        k = int(rng.integers(2, 9))
        rows = [rng.integers(0, 2, k, dtype=np.uint8) for _ in range(4 * k)]
        rows.extend(np.eye(k, dtype=np.uint8))  # guarantee spanning
        basis = RowBasis()
        taken = sum(1 for r in rows if basis.try_add(pack_bits(r)))
        assert taken == k


def test_invert_packed_matches_solve():
    rng = np.random.default_rng(13)
    done = 0
    while done < 20:
        k = int(rng.integers(2, 10))
        m = rng.integers(0, 2, (k, k), dtype=np.uint8)
        packed = [pack_bits(r) for r in m]
        inv = invert_packed(packed, k)
        try:
            expected = solve_gf2(Gf2Matrix(m), BitSequence(rng.integers(0, 2, k, dtype=np.uint8)))
        except SingularMatrixError:
            assert inv is None
            continue
        assert inv is not None
        b = pack_bits(expected)  # reuse rhs bits: check A^-1 (A x) = x
        bx = pack_bits((m @ unpack_bits(b, k)) % 2)
        got = sum(parity(inv[i] & bx) << i for i in range(k))
        assert got == b
        done += 1
