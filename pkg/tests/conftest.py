import numpy as np

# Verified maximal-length polynomials (state-walk checked in test_lfsr).
PRIMITIVE_POLYS = {
    2: (0, 1, 2),
    4: (0, 1, 4),
    5: (0, 2, 5),
    7: (0, 1, 7),
    10: (0, 3, 10),
    15: (0, 1, 15),
}
# Five-term degree-15 polynomial for the four-tap attack scenarios.
P15_T4 = (0, 1, 2, 4, 15)
# The degree-31 seven-term polynomial of the headline scenarios.
P31_T6 = (0, 1, 2, 3, 12, 21, 31)
# Seven-term degree-32 polynomial for the analytic bound surface.
P32_T6 = (0, 1, 2, 3, 4, 10, 32)


def random_key_bits(rng: np.random.Generator, k: int) -> np.ndarray:
    bits = rng.integers(0, 2, k, dtype=np.uint8)
    if not bits.any():
        bits[0] = 1
    return bits
