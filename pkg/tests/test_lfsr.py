import numpy as np
import pytest

from wiretap_fca import (
    BitSequence,
    ConnectionPolynomial,
    DegenerateKeyError,
    LfsrKey,
    generate,
    output_matrix,
    output_row,
    small_period_ok,
)
from conftest import P15_T4, PRIMITIVE_POLYS, random_key_bits


def test_polynomial_parse_render_round_trip():
    poly = ConnectionPolynomial.from_string("31,21,12,3,2,1,0")
    assert poly.exponents == (0, 1, 2, 3, 12, 21, 31)
    assert poly.degree == 31
    assert poly.taps == 6
    assert poly.to_string() == "31,21,12,3,2,1,0"
    assert ConnectionPolynomial.from_string(poly.to_string()) == poly


def test_polynomial_structural_invariants():
    with pytest.raises(ValueError):
        ConnectionPolynomial((1, 4))      # constant term missing
    with pytest.raises(ValueError):
        ConnectionPolynomial((0, 1, 2, 4))  # even number of coefficients
    with pytest.raises(ValueError):
        ConnectionPolynomial.from_string("a,b")


def test_generate_hand_evaluated_recurrence():
    # a_{j+2} = a_j + a_{j+1} starting from (1, 0)
    poly = ConnectionPolynomial((0, 1, 2))
    out = generate(poly, LfsrKey([1, 0]), 8)
    assert out == BitSequence([1, 0, 1, 1, 0, 1, 1, 0])


def test_generate_shift_invariance():
    poly = ConnectionPolynomial((0, 2, 5))
    seq = generate(poly, LfsrKey([1, 1, 0, 1, 0]), 60)
    start = 17
    segment_key = LfsrKey(seq[start : start + 5])
    again = generate(poly, segment_key, 40)
    assert again == seq[start : start + 45][:40]


def test_generate_period_15_for_degree_4():
    poly = ConnectionPolynomial((0, 1, 4))
    for key_val in range(1, 16):
        key = LfsrKey.from_int(key_val, 4)
        seq = generate(poly, key, 40).array
        # enumerate state windows until the initial one repeats
        first = tuple(seq[:4])
        period = next(
            j for j in range(1, 20) if tuple(seq[j : j + 4]) == first
        )
        assert period == 15


def test_generate_rejects_bad_inputs():
    poly = ConnectionPolynomial((0, 1, 4))
    with pytest.raises(DegenerateKeyError):
        generate(poly, LfsrKey([0, 0, 0, 0]), 10)
    with pytest.raises(ValueError):
        generate(poly, LfsrKey([1, 0, 0, 1]), 3)
    with pytest.raises(ValueError):
        generate(poly, LfsrKey([1, 0]), 10)


@pytest.mark.parametrize("k,exps", sorted(PRIMITIVE_POLYS.items()))
def test_listed_polynomials_have_maximal_period(k, exps):
    assert small_period_ok(ConnectionPolynomial(exps))


def test_five_term_polynomial_is_maximal():
    assert small_period_ok(ConnectionPolynomial(P15_T4))


def test_non_primitive_polynomial_detected():
    # x^4 + x^2 + 1 = (x^2 + x + 1)^2 cannot be maximal-length
    assert not small_period_ok(ConnectionPolynomial((0, 2, 4)))


def test_output_row_unit_vectors_before_degree():
    poly = ConnectionPolynomial((0, 3, 10))
    for j in range(10):
        row = output_row(poly, j)
        expected = np.zeros(10, dtype=np.uint8)
        expected[j] = 1
        assert row == BitSequence(expected)


def test_output_row_at_degree_is_tap_mask():
    poly = ConnectionPolynomial((0, 1, 2, 4, 15))
    row = output_row(poly, 15)
    expected = np.zeros(15, dtype=np.uint8)
    expected[[0, 1, 2, 4]] = 1
    assert row == BitSequence(expected)


def test_output_row_matches_generate_for_50_random_keys():
    poly = ConnectionPolynomial((0, 1, 15))
    row = output_row(poly, 100).array
    rng = np.random.default_rng(23)
    for _ in range(50):
        key_bits = random_key_bits(rng, 15)
        seq = generate(poly, LfsrKey(key_bits), 101)
        assert int(row @ key_bits) % 2 == seq[100]


def test_output_rows_exhaustive_small_degree():
    poly = ConnectionPolynomial((0, 1, 4))
    n = 30
    mat = output_matrix(poly, range(n)).array
    for key_val in range(1, 16):
        key_bits = LfsrKey.from_int(key_val, 4).bits.array
        seq = generate(poly, LfsrKey(key_bits), n).array
        assert ((mat @ key_bits) % 2 == seq).all()


def test_key_int_round_trip():
    key = LfsrKey.from_int(0b1011, 4)
    assert key.bits == BitSequence([1, 1, 0, 1])
    assert key.to_int() == 0b1011
