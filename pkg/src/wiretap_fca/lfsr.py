"""Maximal-length LFSR sequences and the key-to-output linear map.

A register of degree k is described by the exponents of the nonzero
coefficients of its feedback polynomial, written as a comma-separated
list such as "31,21,12,3,2,1,0". The structural requirements (constant
term present, even tap count) are enforced; primitivity of the supplied
polynomial is trusted, not verified; use :func:`small_period_ok` to
sanity-check small registers.
"""

from __future__ import annotations

import threading
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .gf2 import BitSequence, Gf2Matrix, pack_bits, unpack_bits


class DegenerateKeyError(ValueError):
    """All-zero initial state generates only zeros."""


@dataclass(frozen=True)
class ConnectionPolynomial:
    """Feedback polynomial given by the exponents of its nonzero coefficients."""

    exponents: tuple[int, ...]

    def __post_init__(self):
        exps = tuple(sorted(set(int(e) for e in self.exponents)))
        object.__setattr__(self, "exponents", exps)
        if len(exps) < 2:
            raise ValueError("polynomial needs at least the constant and leading term")
        if exps[0] != 0:
            raise ValueError("constant coefficient must be nonzero (exponent 0 missing)")
        if any(e < 0 for e in exps):
            raise ValueError("exponents must be non-negative")
        if len(exps) % 2 == 0:
            raise ValueError(
                "number of nonzero coefficients must be odd "
                f"(got {len(exps)}: {exps})"
            )

    @classmethod
    def from_string(cls, text: str) -> "ConnectionPolynomial":
        """Parse an exponent list like '31,21,12,3,2,1,0'."""
        try:
            exps = tuple(int(tok) for tok in text.replace(" ", "").split(",") if tok)
        except ValueError as exc:
            raise ValueError(f"bad polynomial exponent list {text!r}") from exc
        return cls(exps)

    def to_string(self) -> str:
        return ",".join(str(e) for e in reversed(self.exponents))

    @property
    def degree(self) -> int:
        """k, the register length."""
        return self.exponents[-1]

    @property
    def taps(self) -> int:
        """t, the number of feedback taps (even for valid polynomials)."""
        return len(self.exponents) - 1

    @property
    def feedback_exponents(self) -> tuple[int, ...]:
        """Exponents entering the recurrence for the next bit (all but the degree)."""
        return self.exponents[:-1]

    def __str__(self) -> str:
        return self.to_string()


@dataclass(frozen=True)
class LfsrKey:
    """Initial register contents a_0 .. a_{k-1}."""

    bits: BitSequence

    def __init__(self, bits: BitSequence | Iterable[int]):
        if not isinstance(bits, BitSequence):
            bits = BitSequence(bits)
        object.__setattr__(self, "bits", bits)

    @classmethod
    def from_int(cls, value: int, k: int) -> "LfsrKey":
        return cls(BitSequence(unpack_bits(value, k)))

    @classmethod
    def random(cls, k: int, rng: np.random.Generator) -> "LfsrKey":
        """Uniform nonzero initial state."""
        value = int(rng.integers(1, (1 << k) - 1, endpoint=True))
        return cls.from_int(value, k)

    def to_int(self) -> int:
        return pack_bits(self.bits)

    def __len__(self) -> int:
        return len(self.bits)

    @property
    def is_zero(self) -> bool:
        return not self.bits.array.any()


def generate(poly: ConnectionPolynomial, key: LfsrKey, n: int) -> BitSequence:
    """First n output bits; the key occupies positions 0..k-1.

    Each later bit is the XOR of the tapped earlier bits, so for a
    primitive polynomial the state sequence has period 2^k - 1.
    """
    k = poly.degree
    if len(key) != k:
        raise ValueError(f"key length {len(key)} does not match degree {k}")
    if key.is_zero:
        raise DegenerateKeyError("all-zero key")
    if n < k:
        raise ValueError(f"need n >= k, got n={n}, k={k}")
    out = np.empty(n, dtype=np.uint8)
    out[:k] = key.bits.array
    taps = poly.feedback_exponents
    buf = out.tolist()  # plain-int loop is much faster than per-item ndarray access
    for j in range(n - k):
        v = 0
        for t in taps:
            v ^= buf[j + t]
        buf[j + k] = v
    return BitSequence(np.array(buf, dtype=np.uint8))


_row_cache: dict[tuple[int, ...], list[int]] = {}
_row_lock = threading.Lock()


def _packed_rows(poly: ConnectionPolynomial, upto: int) -> list[int]:
    """Packed key-coefficient rows for output positions 0..upto-1, cached per polynomial.

    Row j holds the mask r with a_j = parity(r & key) for every key; rows
    j < k are unit vectors and later rows follow the recurrence. The cache
    only ever grows, so concurrent fills converge to the same content.
    """
    k = poly.degree
    taps = poly.feedback_exponents
    with _row_lock:
        rows = _row_cache.setdefault(poly.exponents, [1 << j for j in range(k)])
        while len(rows) < upto:
            j = len(rows) - k
            r = 0
            for t in taps:
                r ^= rows[j + t]
            rows.append(r)
        return rows[:upto] if len(rows) > upto else list(rows)


def output_row(poly: ConnectionPolynomial, j: int) -> BitSequence:
    """Length-k row r with a_j = r . key over GF(2) for every key."""
    if j < 0:
        raise ValueError("position must be non-negative")
    rows = _packed_rows(poly, j + 1)
    return BitSequence(unpack_bits(rows[j], poly.degree))


def output_rows_packed(poly: ConnectionPolynomial, positions: Sequence[int]) -> list[int]:
    """Packed output rows for several positions at once."""
    if not len(positions):
        return []
    rows = _packed_rows(poly, max(positions) + 1)
    return [rows[j] for j in positions]


def output_matrix(poly: ConnectionPolynomial, positions: Sequence[int]) -> Gf2Matrix:
    k = poly.degree
    packed = output_rows_packed(poly, positions)
    return Gf2Matrix(np.stack([unpack_bits(r, k) for r in packed]))


def small_period_ok(poly: ConnectionPolynomial, limit: int = 16) -> bool:
    """Walk the state cycle of registers with k <= limit.

    Returns True when the period from state 000..01 is exactly 2^k - 1
    (the maximal-length property); True without checking for larger k.
    """
    k = poly.degree
    if k > limit:
        return True
    taps = poly.feedback_exponents
    mask = (1 << k) - 1
    state0 = 1
    state = state0
    full = (1 << k) - 1
    for count in range(1, full + 1):
        fb = 0
        for t in taps:
            fb ^= (state >> t) & 1
        state = ((state >> 1) | (fb << (k - 1))) & mask
        if state == state0:
            return count == full
    return False
