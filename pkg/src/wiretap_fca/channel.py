"""Two-BSC observation model and the known-plaintext pipeline.

The eavesdropper sees the hidden register sequence through a cascade of
two binary symmetric channels: the keystream-correlation channel with
flip rate p1 and the residual post-decoding wiretap channel with flip
rate p2. The cascade acts like a single BSC with flip rate
p' = p1 + p2 - 2*p1*p2.

All randomness flows through an explicit numpy Generator, so runs are
replayable from a seed. Parallel experiments must use independent seeds;
the harness derives run_seed = base_seed + run_index.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .gf2 import BitSequence, xor_sequences
from .lfsr import ConnectionPolynomial, LfsrKey, generate


def cascade(p1: float, p2: float) -> float:
    """Effective flip rate of two BSCs in series: p1 + p2 - 2*p1*p2.

    Symmetric in its arguments; 0.5 is absorbing.
    """
    for name, p in (("p1", p1), ("p2", p2)):
        if not 0.0 <= p <= 1.0:
            raise ValueError(f"{name} must be in [0, 1], got {p}")
    return p1 + p2 - 2.0 * p1 * p2


@dataclass(frozen=True)
class ChannelParams:
    """Flip rates of the two channels plus the derived cascade rate."""

    p1: float
    p2: float
    p_prime: float = None  # type: ignore[assignment]

    def __post_init__(self):
        for name, p in (("p1", self.p1), ("p2", self.p2)):
            if not 0.0 <= p <= 0.5:
                raise ValueError(f"{name} must be in [0, 0.5], got {p}")
        object.__setattr__(self, "p_prime", cascade(self.p1, self.p2))


def bsc_transmit(x: BitSequence, p: float, rng: np.random.Generator) -> BitSequence:
    """Flip each bit independently with probability p."""
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"flip probability must be in [0, 1], got {p}")
    flips = (rng.random(len(x)) < p).astype(np.uint8)
    return BitSequence(x.array ^ flips)


@dataclass(frozen=True)
class PipelineTrace:
    """Every sequence of one known-plaintext observation run.

    s = m XOR z exactly, and y differs from a by the cascade of the two
    channels, so y behaves like a through a single BSC with rate p_prime.
    """

    a: BitSequence  # hidden register output
    z: BitSequence  # keystream (a after channel 1)
    m: BitSequence  # known plaintext
    s: BitSequence  # ciphertext
    y: BitSequence  # recovered noisy keystream
    seed: int
    params: ChannelParams

    def __post_init__(self):
        n = len(self.a)
        for name in ("z", "m", "s", "y"):
            if len(getattr(self, name)) != n:
                raise ValueError(f"sequence {name} has mismatched length")


def run_pipeline(
    poly: ConnectionPolynomial,
    key: LfsrKey,
    params: ChannelParams,
    n: int,
    seed: int,
) -> PipelineTrace:
    """Generate a, pass it through both channels, strip the plaintext.

    Draw order is fixed (keystream flips, plaintext, wiretap flips) so a
    seed pins the whole trace. The plaintext is i.i.d. uniform; y is
    independent of the plaintext choice by construction.
    """
    rng = np.random.default_rng(seed)
    a = generate(poly, key, n)
    z = bsc_transmit(a, params.p1, rng)
    m = BitSequence(rng.integers(0, 2, n, dtype=np.uint8))
    s = xor_sequences(m, z)
    y = xor_sequences(bsc_transmit(s, params.p2, rng), m)
    return PipelineTrace(a=a, z=z, m=m, s=s, y=y, seed=seed, params=params)
