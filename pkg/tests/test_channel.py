import math

import numpy as np
import pytest

from wiretap_fca import (
    BitSequence,
    ChannelParams,
    ConnectionPolynomial,
    LfsrKey,
    bsc_transmit,
    cascade,
    generate,
    run_pipeline,
)
from conftest import random_key_bits


def test_cascade_worked_values_exact():
    assert cascade(0.2, 0.0) == 0.2
    assert cascade(0.2, 0.1) == 0.26


def test_cascade_half_is_absorbing():
    for x in (0.0, 0.1, 0.3, 0.5):
        assert cascade(0.5, x) == pytest.approx(0.5, abs=1e-15)


def test_cascade_symmetric_and_monotone():
    grid = np.linspace(0.0, 0.5, 11)
    for p1 in grid:
        assert cascade(p1, 0.0) == p1
        for p2 in grid:
            assert cascade(p1, p2) == cascade(p2, p1)
    for p1 in grid:
        values = [cascade(p1, p2) for p2 in grid]
        # constant at the absorbing point, so allow rounding-level wobble
        assert all(b >= a - 1e-12 for a, b in zip(values, values[1:]))


def test_cascade_range_error():
    with pytest.raises(ValueError):
        cascade(-0.1, 0.2)
    with pytest.raises(ValueError):
        cascade(0.2, 1.5)


def test_channel_params_derives_cascade():
    params = ChannelParams(0.2, 0.1)
    assert params.p_prime == cascade(0.2, 0.1)
    with pytest.raises(ValueError):
        ChannelParams(0.6, 0.1)


def test_bsc_noiseless_and_inverting():
    rng = np.random.default_rng(1)
    x = BitSequence(rng.integers(0, 2, 200, dtype=np.uint8))
    assert bsc_transmit(x, 0.0, np.random.default_rng(2)) == x
    flipped = bsc_transmit(x, 1.0, np.random.default_rng(2))
    assert flipped == BitSequence(1 - x.array)


def test_bsc_empirical_rate():
    n, p = 100_000, 0.25
    x = BitSequence.zeros(n)
    out = bsc_transmit(x, p, np.random.default_rng(42))
    rate = out.array.mean()
    assert abs(rate - p) <= 3 * math.sqrt(p * (1 - p) / n)


def _pipeline(p1, p2, n, seed, k=15, exps=(0, 1, 15)):
    poly = ConnectionPolynomial(exps)
    key = LfsrKey(random_key_bits(np.random.default_rng(seed), k))
    return poly, key, run_pipeline(poly, key, ChannelParams(p1, p2), n, seed=seed)


def test_pipeline_noiseless_recovers_sequence():
    poly, key, trace = _pipeline(0.0, 0.0, 500, seed=3)
    assert trace.y == trace.a == generate(poly, key, 500)


def test_pipeline_ciphertext_is_plaintext_xor_keystream():
    _, _, trace = _pipeline(0.2, 0.1, 2000, seed=4)
    assert (trace.s ^ trace.m) == trace.z


def test_pipeline_cascade_error_rate():
    n = 10_000
    _, _, trace = _pipeline(0.2, 0.1, n, seed=5)
    p = cascade(0.2, 0.1)
    rate = trace.y.hamming_distance(trace.a) / n
    assert abs(rate - p) <= 3 * math.sqrt(p * (1 - p) / n)


def test_pipeline_matches_single_bsc_frequency():
    # y xor a should look like one BSC at the cascade rate (1% significance)
    n = 100_000
    _, _, trace = _pipeline(0.2, 0.1, n, seed=6)
    p = cascade(0.2, 0.1)
    flips = int(trace.y.hamming_distance(trace.a))
    z = (flips - n * p) / math.sqrt(n * p * (1 - p))
    assert abs(z) <= 2.576


def test_pipeline_deterministic():
    _, _, t1 = _pipeline(0.3, 0.05, 1000, seed=7)
    _, _, t2 = _pipeline(0.3, 0.05, 1000, seed=7)
    for name in ("a", "z", "m", "s", "y"):
        assert getattr(t1, name) == getattr(t2, name)
