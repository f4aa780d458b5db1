"""Reliability-selection attack: solve for the key from the k most
trustworthy observed bits, then search error patterns by Hamming weight.

The observed positions most likely to agree with the hidden sequence are
the ones satisfying the most parity checks. Their output rows give a
linear system for the initial state; if the unmodified solve fails
verification, patterns of assumed errors are XORed onto the chosen bits
in order of increasing weight until a key verifies. The search cost is
governed by A(k, r) = sum_{i<=r} C(k, i) <= 2^(H(r/k) k) for r errors
among the chosen bits, and r can be estimated ahead of time from the
check statistics.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Optional

import numpy as np
from scipy.stats import binom

from .checks import CheckSystem, ReliabilityModel, build_checks, posterior
from .gf2 import BitSequence, Gf2Matrix, RowBasis, invert_packed, pack_bits, parity
from .lfsr import ConnectionPolynomial, LfsrKey, generate, output_matrix, output_rows_packed


class SelectionFailureError(ValueError):
    """Fewer than k linearly independent reliable positions available."""


@dataclass(frozen=True)
class AttackAConfig:
    poly: ConnectionPolynomial
    y: BitSequence
    p_prime: float
    verification: str = "oracle"          # "oracle" | "threshold"
    margin: float = 3.0                   # std deviations below expected agreement
    true_key: Optional[LfsrKey] = None    # required in oracle mode
    checks: Optional[CheckSystem] = None  # reuse a prebuilt system

    def __post_init__(self):
        if self.verification not in ("oracle", "threshold"):
            raise ValueError(f"unknown verification mode {self.verification!r}")
        if self.verification == "oracle" and self.true_key is None:
            raise ValueError("oracle verification needs the true key")
        if len(self.y) <= self.poly.degree:
            raise ValueError("observed sequence must be longer than the degree")


@dataclass(frozen=True)
class AttackAReport:
    success: bool
    recovered_key: Optional[LfsrKey]
    trials: int
    selected_positions: tuple[int, ...]
    rbar: float
    bound: float
    selected_errors: Optional[int] = None  # known only when ground truth given


def binary_entropy(x: float) -> float:
    """H(x) in bits, with H(0) = H(1) = 0."""
    if not 0.0 <= x <= 1.0:
        raise ValueError(f"entropy argument must be in [0, 1], got {x}")
    if x in (0.0, 1.0):
        return 0.0
    return -x * math.log2(x) - (1.0 - x) * math.log2(1.0 - x)


def bound_trials(k: int, r: int | float) -> tuple[int, float]:
    """Exact search size A(k, r) alongside the entropy estimate 2^(H(r/k) k).

    ``r`` may be fractional (as produced by :func:`estimate_rbar`); the
    exact sum then uses floor(r). The entropy form overshoots the exact
    count for r/k below one half and degenerates above it.
    """
    if r < 0 or r > k:
        raise ValueError(f"need 0 <= r <= k, got r={r}, k={k}")
    exact = sum(math.comb(k, i) for i in range(int(r) + 1))
    bound = 2.0 ** (binary_entropy(float(r) / k) * k)
    return exact, bound


def estimate_rbar(
    k: int, n: int, checks: CheckSystem, model: ReliabilityModel
) -> tuple[float, int, int]:
    """Expected number of wrong bits among the k best, plus (h', m').

    m' is the average per-bit check count (rounded); h' is the largest
    satisfied-check level at which at least k bits are still expected,
    under the two-population binomial mixture of correct and flipped bits.
    """
    m_ref = int(round(checks.mean_c_to()))
    p, s = model.p_prime, model.s
    h_best = 0
    for h in range(m_ref + 1):
        expected = n * (
            (1.0 - p) * binom.sf(h - 1, m_ref, s) + p * binom.sf(h - 1, m_ref, 1.0 - s)
        )
        if expected >= k:
            h_best = h
    rbar = k * (1.0 - posterior(p, s, h_best, m_ref))
    return rbar, h_best, m_ref


def _reliability_order(checks: CheckSystem, y: BitSequence, model: ReliabilityModel) -> tuple[np.ndarray, np.ndarray]:
    """Per-bit reliability log-odds and the descending-reliability ordering.

    Sorting happens in log-odds space so distinct evidence classes never
    collapse by float saturation; ties break toward the lower index.
    """
    n = len(y)
    if model.p_prime == 0.0:
        log_odds = np.full(n, np.inf)
        return log_odds, np.arange(n)
    h = checks.satisfied_counts(y)
    lr = math.log(model.s / (1.0 - model.s))
    log_odds = math.log((1.0 - model.p_prime) / model.p_prime) + (2 * h - checks.c_to) * lr
    order = np.lexsort((np.arange(n), -log_odds))
    return log_odds, order


def select_reliable(
    checks: CheckSystem,
    y: BitSequence,
    model: ReliabilityModel,
    poly: ConnectionPolynomial,
) -> tuple[list[int], Gf2Matrix]:
    """Greedy pick of the k most reliable positions with independent rows."""
    k = poly.degree
    _, order = _reliability_order(checks, y, model)
    packed = output_rows_packed(poly, range(len(y)))
    basis = RowBasis()
    selected: list[int] = []
    for j in order:
        if basis.try_add(packed[j]):
            selected.append(int(j))
            if len(selected) == k:
                break
    if len(selected) < k:
        raise SelectionFailureError(
            f"only {len(selected)} independent positions of {k} required"
        )
    return selected, output_matrix(poly, selected)


def _acceptance_floor(n: int, p_prime: float, margin: float) -> float:
    """Minimum Hamming agreement for the correlation verdict."""
    return n * (1.0 - p_prime) - margin * math.sqrt(n * p_prime * (1.0 - p_prime))


def run_attack_a(cfg: AttackAConfig) -> AttackAReport:
    """Run the full attack; deterministic given the observed sequence.

    Trial 1 solves the unmodified selected bits. Afterwards error patterns
    are tried in increasing Hamming weight, varying the least reliable of
    the selected bits first and lexicographically within a weight, so the
    trial count is reproducible bit for bit. In oracle mode a candidate is
    accepted when it equals the true key (worst-case accounting); in
    threshold mode when the regenerated sequence agrees with the
    observation above the correlation floor.
    """
    poly, y = cfg.poly, cfg.y
    k, n = poly.degree, len(cfg.y)
    checks = cfg.checks if cfg.checks is not None else build_checks(poly, n)
    model = ReliabilityModel.for_poly(cfg.p_prime, poly)

    log_odds, _ = _reliability_order(checks, y, model)
    selected, _matrix = select_reliable(checks, y, model, poly)
    rows = output_rows_packed(poly, selected)
    inverse = invert_packed(rows, k)
    if inverse is None:  # selection guarantees independence
        raise SelectionFailureError("selected rows are singular")

    b0 = 0
    for i, j in enumerate(selected):
        b0 |= int(y[j]) << i

    rbar, _, _ = estimate_rbar(k, n, checks, model)
    _, bound = bound_trials(k, min(rbar, k))

    target = cfg.true_key.to_int() if cfg.true_key is not None else None
    floor = _acceptance_floor(n, cfg.p_prime, cfg.margin)
    y_arr = cfg.y.array

    def verify(candidate: int) -> bool:
        if cfg.verification == "oracle":
            return candidate == target
        key = LfsrKey.from_int(candidate, k)
        if key.is_zero:
            return False
        regen = generate(poly, key, n)
        agreement = n - int(np.count_nonzero(regen.array ^ y_arr))
        return agreement >= floor

    # vary least reliable selected bits first
    flip_order = sorted(range(k), key=lambda i: (log_odds[selected[i]], selected[i]))

    selected_errors = None
    if cfg.true_key is not None:
        a = generate(poly, cfg.true_key, n)
        selected_errors = sum(int(y[j]) ^ int(a[j]) for j in selected)

    trials = 0
    for weight in range(k + 1):
        for combo in itertools.combinations(flip_order, weight):
            pattern = 0
            for i in combo:
                pattern |= 1 << i
            b = b0 ^ pattern
            candidate = 0
            for i in range(k):
                candidate |= parity(inverse[i] & b) << i
            trials += 1
            if verify(candidate):
                return AttackAReport(
                    success=True,
                    recovered_key=LfsrKey.from_int(candidate, k),
                    trials=trials,
                    selected_positions=tuple(selected),
                    rbar=rbar,
                    bound=bound,
                    selected_errors=selected_errors,
                )
    return AttackAReport(
        success=False,
        recovered_key=None,
        trials=trials,
        selected_positions=tuple(selected),
        rbar=rbar,
        bound=bound,
        selected_errors=selected_errors,
    )


def exhaustive_correlation_key(poly: ConnectionPolynomial, y: BitSequence) -> LfsrKey:
    """Brute-force argmax-agreement key over all nonzero states.

    Independent reference for small k; ties break toward the smaller
    packed state value. States are advanced in one vectorized sweep.
    """
    k, n = poly.degree, len(y)
    count = (1 << k) - 1
    states = np.arange(1, count + 1, dtype=np.uint32)
    seq = np.empty((count, n), dtype=np.uint8)
    for i in range(k):
        seq[:, i] = (states >> i) & 1
    taps = poly.feedback_exponents
    for j in range(n - k):
        v = seq[:, j + taps[0]].copy()
        for t in taps[1:]:
            v ^= seq[:, j + t]
        seq[:, j + k] = v
    agreement = (seq == y.array[None, :]).sum(axis=1)
    best = int(np.argmax(agreement))  # argmax returns the first (smallest state)
    return LfsrKey.from_int(int(states[best]), k)
