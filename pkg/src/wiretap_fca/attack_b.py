"""Iterative bit-flipping attack and its correction-capability analysis.

Each round assigns every observed bit the probability that it matches the
hidden sequence given its satisfied checks, refines those probabilities by
feeding posteriors back in place of the prior, and flips the bits that
fall below a threshold. The refinement recomputes each check's even-parity
probability from the current beliefs of the other member bits, so
confidence propagates through shared checks the way it does in
message-passing decoders; with uniform beliefs the first pass reduces
exactly to the closed-form posterior.

Two thresholds appear, on purpose:

* the capability analysis picks the threshold that maximizes the chance a
  flagged bit is actually wrong; its normalized gain C = N_i/(N_w + N_v)
  is the headline predictor, with C <= 0 meaning zero correction
  capability;
* the running attack flips at the threshold maximizing the expected net
  gain N_i = N_w - N_v, which flips nothing when no class of bits is
  more likely wrong than right. Those are exactly the zero-capability regimes,
  which therefore stagnate instead of thrashing.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np
from scipy.stats import binom

from .checks import CheckSystem, ReliabilityModel, build_checks, posterior
from .gf2 import BitSequence
from .lfsr import ConnectionPolynomial, LfsrKey, generate, output_matrix
from . import gf2


class UndefinedRatioError(ValueError):
    """No candidate threshold flags any bits, so C has no value."""


@dataclass(frozen=True)
class CorrectionAnalysis:
    """Expected first-flip population at the analysis threshold.

    n_w / n_v are the expected counts of wrong / correct bits below the
    threshold, n_i = n_w - n_v their difference, and ratio = n_i/(n_w+n_v)
    scales it to [-1, 1].
    """

    n: int
    m_ref: int
    p_thr: float
    h_cut: int          # bits with fewer than h_cut satisfied checks are flagged
    n_w: float
    n_v: float
    n_i: float
    ratio: float


@dataclass(frozen=True)
class FlipRule:
    """Operational flip threshold for the running attack."""

    p_thr: float
    h_cut: int
    n_w: float
    n_v: float
    n_thr_auto: int     # half the expected flagged population, rounded


def _candidate_populations(model: ReliabilityModel, m_ref: int, n: int):
    """Expected (n_w, n_v) for every class cutoff h_cut = 0..m_ref.

    A threshold placed at the class-h_cut posterior flags exactly the bits
    with fewer than h_cut satisfied checks; wrong bits satisfy a check
    with probability 1-s, correct bits with probability s.
    """
    p, s = model.p_prime, model.s
    for h_cut in range(m_ref + 1):
        n_w = n * p * binom.cdf(h_cut - 1, m_ref, 1.0 - s)
        n_v = n * (1.0 - p) * binom.cdf(h_cut - 1, m_ref, s)
        yield h_cut, posterior(p, s, h_cut, m_ref), n_w, n_v


def derive_threshold(model: ReliabilityModel, checks: CheckSystem, n: int) -> CorrectionAnalysis:
    """Capability analysis: threshold maximizing Pr(wrong | flagged).

    Equivalently the candidate with maximal C; evaluated at the average
    check count m_ref, which ties the result to the observed length.
    Raises UndefinedRatioError when every candidate flags nothing (p'=0).
    """
    m_ref = int(round(checks.mean_c_to()))
    best = None
    for h_cut, thr, n_w, n_v in _candidate_populations(model, m_ref, n):
        if n_w + n_v <= 0.0:
            continue
        ratio = (n_w - n_v) / (n_w + n_v)
        if best is None or ratio > best.ratio:
            best = CorrectionAnalysis(
                n=n, m_ref=m_ref, p_thr=thr, h_cut=h_cut,
                n_w=n_w, n_v=n_v, n_i=n_w - n_v, ratio=ratio,
            )
    if best is None:
        raise UndefinedRatioError(
            "no bits are ever expected below any threshold (is p' zero?)"
        )
    return best


def predict_capability(analysis: CorrectionAnalysis) -> str:
    """"zero-capability" when C <= 0 (boundary folded conservatively).

    A positive C does not guarantee convergence; it only licenses hope.
    """
    return "zero-capability" if analysis.ratio <= 0.0 else "possibly-correcting"


def operational_flip_rule(model: ReliabilityModel, m_ref: int, n: int) -> FlipRule:
    """Flip threshold maximizing the expected net gain N_i = N_w - N_v.

    The do-nothing cutoff (flag no class) is a legal candidate with zero
    gain, so regimes where every flip loses in expectation get an empty
    flip set rather than a harmful one.
    """
    best = FlipRule(
        p_thr=posterior(model.p_prime, model.s, 0, m_ref) if model.p_prime > 0 else 0.0,
        h_cut=0, n_w=0.0, n_v=0.0, n_thr_auto=0,
    )
    best_gain = 0.0
    if model.p_prime == 0.0:
        return best
    for h_cut, thr, n_w, n_v in _candidate_populations(model, m_ref, n):
        gain = n_w - n_v
        if gain > best_gain:
            best_gain = gain
            best = FlipRule(
                p_thr=thr, h_cut=h_cut, n_w=n_w, n_v=n_v,
                n_thr_auto=int(round((n_w + n_v) / 2.0)),
            )
    return best


@dataclass(frozen=True)
class AttackBConfig:
    poly: ConnectionPolynomial
    y: BitSequence
    p_prime: float
    alpha: int = 5                       # feedback passes per round before a forced flip
    n_thr: int | str = "auto"
    max_rounds: int = 200
    stall_rounds: int = 3
    flip_prior: str = "reset"            # "reset" | "carry"
    true_key: Optional[LfsrKey] = None   # enables correct-bit traces
    checks: Optional[CheckSystem] = None

    def __post_init__(self):
        if self.alpha < 1:
            raise ValueError("alpha must be at least 1")
        if len(self.y) <= self.poly.degree:
            raise ValueError("observed sequence must be longer than the degree")
        if self.flip_prior not in ("reset", "carry"):
            raise ValueError(f"unknown flip_prior mode {self.flip_prior!r}")
        if isinstance(self.n_thr, str) and self.n_thr != "auto":
            raise ValueError(f"n_thr must be an integer or 'auto', got {self.n_thr!r}")


@dataclass(frozen=True)
class RoundTrace:
    round: int
    bits_flipped: int
    correct_bits: Optional[int]   # oracle-visible only
    min_posterior: float
    mean_posterior: float


@dataclass(frozen=True)
class AttackBReport:
    success: bool
    recovered_key: Optional[LfsrKey]
    outcome: str                  # "success" | "stagnation" | "round-limit"
    rounds: int
    traces: tuple[RoundTrace, ...]
    p_thr: float
    n_thr: int
    corrected: Optional[BitSequence] = None


_BELIEF_CLIP = 1e-9


def _belief_pass(
    prior_log_odds: np.ndarray,
    beliefs: np.ndarray,
    parities: list[np.ndarray],
    checks: CheckSystem,
) -> np.ndarray:
    """One posterior recomputation over all bits.

    Every check contributes the likelihood ratio of its parity given the
    current beliefs of its other member bits; satisfied checks push up,
    violated ones push down.
    """
    margins = np.clip(2.0 * beliefs - 1.0, -1.0 + _BELIEF_CLIP, 1.0 - _BELIEF_CLIP)
    log_odds = prior_log_odds.copy()
    for lev, par in zip(checks.levels, parities):
        c = lev.count
        prod = np.ones(c)
        for off in lev.offsets:
            prod = prod * margins[off : off + c]
        sign = 1.0 - 2.0 * par
        for off in lev.offsets:
            extrinsic = np.clip(
                prod / margins[off : off + c], -1.0 + _BELIEF_CLIP, 1.0 - _BELIEF_CLIP
            )
            log_odds[off : off + c] += sign * (
                np.log1p(extrinsic) - np.log1p(-extrinsic)
            )
    return log_odds


def _sigmoid(x: np.ndarray) -> np.ndarray:
    return 1.0 / (1.0 + np.exp(-np.clip(x, -500.0, 500.0)))


def _read_key(poly: ConnectionPolynomial, y: np.ndarray) -> LfsrKey:
    """Key of a zero-syndrome sequence via k independent output rows."""
    k = poly.degree
    system = output_matrix(poly, range(k))
    solution = gf2.solve_gf2(system, BitSequence(y[:k]))
    return LfsrKey(solution)


def run_attack_b(cfg: AttackBConfig) -> AttackBReport:
    """Iterate flip rounds until zero syndrome, stagnation, or the round cap.

    Fully deterministic: identical configurations yield identical traces.
    """
    poly = cfg.poly
    n = len(cfg.y)
    checks = cfg.checks if cfg.checks is not None else build_checks(poly, n)
    model = ReliabilityModel.for_poly(cfg.p_prime, poly)
    m_ref = int(round(checks.mean_c_to()))
    rule = operational_flip_rule(model, m_ref, n)
    n_thr = rule.n_thr_auto if cfg.n_thr == "auto" else int(cfg.n_thr)

    y = cfg.y.array.copy()
    truth = generate(poly, cfg.true_key, n).array if cfg.true_key is not None else None

    if cfg.p_prime == 0.0:
        # nothing to correct; a clean observation succeeds in round zero
        if checks.syndrome_weight(y) == 0:
            return AttackBReport(
                success=True, recovered_key=_read_key(poly, y), outcome="success",
                rounds=0, traces=(), p_thr=rule.p_thr, n_thr=n_thr,
                corrected=BitSequence(y),
            )
        raise ValueError("p_prime = 0 but the observation violates checks")

    log_thr = math.log(rule.p_thr / (1.0 - rule.p_thr)) if 0.0 < rule.p_thr < 1.0 else -math.inf
    base_prior = math.log((1.0 - cfg.p_prime) / cfg.p_prime)
    carry: np.ndarray | None = None

    traces: list[RoundTrace] = []
    stall = 0
    rounds_done = 0
    for rnd in range(1, cfg.max_rounds + 1):
        if checks.syndrome_weight(y) == 0:
            return AttackBReport(
                success=True, recovered_key=_read_key(poly, y), outcome="success",
                rounds=rnd - 1, traces=tuple(traces), p_thr=rule.p_thr, n_thr=n_thr,
                corrected=BitSequence(y),
            )
        parities = checks.parities(y)
        prior = np.full(n, base_prior) if carry is None else carry
        beliefs = _sigmoid(prior)
        below = np.zeros(n, dtype=bool)
        log_odds = prior
        for _ in range(cfg.alpha):
            log_odds = _belief_pass(prior, beliefs, parities, checks)
            below = log_odds < log_thr
            if int(below.sum()) >= n_thr:
                break
            prior = log_odds        # feedback: previous posterior becomes the prior
            beliefs = _sigmoid(log_odds)
        flipped = int(below.sum())
        y[below] ^= 1
        if cfg.flip_prior == "carry":
            nxt = log_odds.copy()
            nxt[below] = -nxt[below]  # a flipped bit inherits its complementary belief
            carry = nxt
        posteriors = _sigmoid(log_odds)
        traces.append(
            RoundTrace(
                round=rnd,
                bits_flipped=flipped,
                correct_bits=int((y == truth).sum()) if truth is not None else None,
                min_posterior=float(posteriors.min()),
                mean_posterior=float(posteriors.mean()),
            )
        )
        rounds_done = rnd
        stall = stall + 1 if flipped == 0 else 0
        if stall >= cfg.stall_rounds:
            return AttackBReport(
                success=False, recovered_key=None, outcome="stagnation",
                rounds=rounds_done, traces=tuple(traces), p_thr=rule.p_thr, n_thr=n_thr,
                corrected=BitSequence(y),
            )
    if checks.syndrome_weight(y) == 0:
        return AttackBReport(
            success=True, recovered_key=_read_key(poly, y), outcome="success",
            rounds=rounds_done, traces=tuple(traces), p_thr=rule.p_thr, n_thr=n_thr,
            corrected=BitSequence(y),
        )
    return AttackBReport(
        success=False, recovered_key=None, outcome="round-limit",
        rounds=rounds_done, traces=tuple(traces), p_thr=rule.p_thr, n_thr=n_thr,
        corrected=BitSequence(y),
    )
