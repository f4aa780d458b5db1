"""Parity-check systems derived from the feedback polynomial.

The register recurrence makes every tap-spaced window of a clean sequence
sum to zero, and squaring the polynomial repeatedly (exponents double,
coefficients stay put over GF(2)) yields further sparse relations until
the span outgrows the observed length. Each check involves t+1 positions;
a bit participates once per tap position per applicable level, so an
interior bit sits in (t+1) * levels checks.

Bit reliabilities: with flip rate p', a satisfied check is evidence that
the bit agrees with the hidden sequence. ``posterior`` gives
Pr(y_j = a_j | h of m checks satisfied) with prior Pr(y_j = a_j) = 1 - p',
under which fully check-satisfying bits are the most reliable; the
calibration tests verify this orientation against simulation.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterator

import numpy as np

from .gf2 import BitSequence
from .lfsr import ConnectionPolynomial


class InsufficientLengthError(ValueError):
    """Sequence too short to hold even the base-level checks."""


@dataclass(frozen=True)
class Level:
    """One squaring level: base exponents scaled by 2^d."""

    scale: int           # 2^d
    offsets: tuple[int, ...]
    count: int           # number of shifts fitting in the sequence

    @property
    def span(self) -> int:
        return self.offsets[-1]


class CheckSystem:
    """All shifted checks of every squaring level for a sequence of length n.

    Checks are stored as (level, shift) pairs; index sets materialize on
    demand, keeping memory linear in n times the number of levels. The
    ``membership`` mode controls per-bit accounting: "all" counts a bit at
    every tap position it occupies (t+1 per level for interior bits),
    "leading" only where it is the lowest-index term.
    """

    def __init__(self, poly: ConnectionPolynomial, n: int, membership: str = "all"):
        if membership not in ("all", "leading"):
            raise ValueError(f"membership must be 'all' or 'leading', got {membership!r}")
        if n <= poly.degree:
            raise InsufficientLengthError(
                f"need n > k for at least one check, got n={n}, k={poly.degree}"
            )
        self.poly = poly
        self.n = n
        self.membership = membership
        levels = []
        scale = 1
        while scale * poly.degree < n:
            offsets = tuple(e * scale for e in poly.exponents)
            levels.append(Level(scale=scale, offsets=offsets, count=n - offsets[-1]))
            scale *= 2
        self.levels: tuple[Level, ...] = tuple(levels)
        self._c_to: np.ndarray | None = None

    def _count_offsets(self, level: Level) -> tuple[int, ...]:
        return level.offsets if self.membership == "all" else level.offsets[:1]

    @property
    def num_checks(self) -> int:
        return sum(lev.count for lev in self.levels)

    def mean_c_to(self) -> float:
        """Average number of checks a bit participates in (closed form)."""
        incidences = sum(
            len(self._count_offsets(lev)) * lev.count for lev in self.levels
        )
        return incidences / self.n

    @property
    def c_to(self) -> np.ndarray:
        """Per-bit total check counts (computed once, then cached)."""
        if self._c_to is None:
            counts = np.zeros(self.n, dtype=np.int32)
            for lev in self.levels:
                for off in self._count_offsets(lev):
                    counts[off : off + lev.count] += 1
            counts.setflags(write=False)
            self._c_to = counts
        return self._c_to

    def parities(self, y: BitSequence | np.ndarray) -> list[np.ndarray]:
        """Check values per level: 0 where satisfied, 1 where violated."""
        arr = y.array if isinstance(y, BitSequence) else np.asarray(y, dtype=np.uint8)
        if arr.size != self.n:
            raise ValueError(f"sequence length {arr.size} does not match n={self.n}")
        out = []
        for lev in self.levels:
            c = np.zeros(lev.count, dtype=np.uint8)
            for off in lev.offsets:
                c ^= arr[off : off + lev.count]
            out.append(c)
        return out

    def syndrome_weight(self, y: BitSequence | np.ndarray) -> int:
        """Number of violated checks; zero on any clean register sequence."""
        return sum(int(c.sum()) for c in self.parities(y))

    def satisfied_counts(self, y: BitSequence | np.ndarray) -> np.ndarray:
        """Per-bit count of satisfied checks (c_s), honoring the membership mode."""
        cs = np.zeros(self.n, dtype=np.int32)
        for lev, c in zip(self.levels, self.parities(y)):
            sat = (1 - c).astype(np.int32)
            for off in self._count_offsets(lev):
                cs[off : off + lev.count] += sat
        return cs

    def iter_checks(self) -> Iterator[tuple[int, ...]]:
        """All check index sets, lowest level first (test/debug use)."""
        for lev in self.levels:
            for shift in range(lev.count):
                yield tuple(shift + off for off in lev.offsets)

    def bit_checks(self, j: int) -> list[tuple[int, ...]]:
        """Index sets of the checks counted for bit j."""
        if not 0 <= j < self.n:
            raise ValueError(f"bit index {j} out of range")
        out = []
        for lev in self.levels:
            for off in self._count_offsets(lev):
                shift = j - off
                if 0 <= shift < lev.count:
                    out.append(tuple(shift + o for o in lev.offsets))
        return out


def build_checks(poly: ConnectionPolynomial, n: int, membership: str = "all") -> CheckSystem:
    """Construct the check system for an observed length-n sequence."""
    return CheckSystem(poly, n, membership=membership)


def even_parity_prob(p_prime: float, t: int) -> float:
    """Probability that an even number of the other t check bits are flipped.

    Computed by the recursion s(1) = 1 - p', s(j) = (1-p')s(j-1) + p'(1-s(j-1)).
    """
    if t < 1:
        raise ValueError(f"need t >= 1, got {t}")
    s = 1.0 - p_prime
    for _ in range(t - 1):
        s = (1.0 - p_prime) * s + p_prime * (1.0 - s)
    return s


@dataclass(frozen=True)
class ReliabilityModel:
    """Flip rate, tap count, and the derived even-parity probability."""

    p_prime: float
    t: int
    s: float = None  # type: ignore[assignment]

    def __post_init__(self):
        if not 0.0 <= self.p_prime <= 0.5:
            raise ValueError(f"p_prime must be in [0, 0.5], got {self.p_prime}")
        object.__setattr__(self, "s", even_parity_prob(self.p_prime, self.t))

    @classmethod
    def for_poly(cls, p_prime: float, poly: ConnectionPolynomial) -> "ReliabilityModel":
        return cls(p_prime=p_prime, t=poly.taps)


def posterior(p_prime: float, s: float, h: int, m: int) -> float:
    """Pr(bit correct | h of its m checks satisfied).

    Bayes with prior 1 - p' on the correct event; each satisfied check
    multiplies the odds by s/(1-s), each violated one by (1-s)/s. With no
    checks the prior is returned unchanged, and the result is nondecreasing
    in h whenever s > 1/2.
    """
    if m < 0 or h < 0 or h > m:
        raise ValueError(f"need 0 <= h <= m, got h={h}, m={m}")
    if p_prime == 0.0:
        return 1.0
    if p_prime == 0.5:
        return 0.5
    log_odds = math.log((1.0 - p_prime) / p_prime) + (2 * h - m) * math.log(
        s / (1.0 - s)
    )
    return 1.0 / (1.0 + math.exp(-log_odds))


def posterior_log_odds(
    prior_log_odds: np.ndarray | float,
    s: float,
    h: np.ndarray,
    m: np.ndarray,
) -> np.ndarray:
    """Vectorized log-odds update for per-bit (h, m) evidence."""
    return prior_log_odds + (2 * h - m) * math.log(s / (1.0 - s))
