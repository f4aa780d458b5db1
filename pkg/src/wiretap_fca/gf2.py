"""Bit sequences and dense GF(2) linear algebra.

Everything downstream (sequence generation, parity checks, key solving)
computes on these types. Values are immutable once constructed; operations
are pure functions, so instances can be shared freely across threads.
"""

from __future__ import annotations

from typing import Iterable, Sequence

import numpy as np


class DimensionError(ValueError):
    """Operand shapes do not line up."""


class SingularMatrixError(ValueError):
    """Coefficient matrix has no inverse over GF(2)."""


def _as_bit_array(values) -> np.ndarray:
    arr = np.asarray(values, dtype=np.uint8)
    if arr.ndim != 1:
        raise DimensionError(f"expected a 1-d bit sequence, got shape {arr.shape}")
    if arr.size and int(arr.max(initial=0)) > 1:
        raise ValueError("bit sequences may only contain 0 and 1")
    return arr


class BitSequence:
    """Fixed-length sequence of bits, indexed 0..N-1.

    Wraps a read-only uint8 array. Construct from any iterable of 0/1
    values or from a '0101...' string via :meth:`from_string`.
    """

    __slots__ = ("_bits",)

    def __init__(self, values: Iterable[int] | np.ndarray):
        arr = _as_bit_array(values).copy()
        arr.setflags(write=False)
        self._bits = arr

    @classmethod
    def from_string(cls, text: str) -> "BitSequence":
        return cls([int(c) for c in text.strip()])

    @classmethod
    def zeros(cls, n: int) -> "BitSequence":
        return cls(np.zeros(n, dtype=np.uint8))

    @property
    def array(self) -> np.ndarray:
        """Read-only view of the underlying bits."""
        return self._bits

    def __len__(self) -> int:
        return self._bits.size

    def __getitem__(self, index):
        out = self._bits[index]
        return BitSequence(out) if isinstance(index, slice) else int(out)

    def __iter__(self):
        return iter(int(b) for b in self._bits)

    def __eq__(self, other) -> bool:
        if not isinstance(other, BitSequence):
            return NotImplemented
        return self._bits.shape == other._bits.shape and bool(
            (self._bits == other._bits).all()
        )

    def __hash__(self):
        return hash(self._bits.tobytes())

    def __xor__(self, other: "BitSequence") -> "BitSequence":
        return xor_sequences(self, other)

    def __repr__(self) -> str:
        s = self.to01()
        if len(s) > 40:
            s = s[:37] + "..."
        return f"BitSequence({s!r}, n={len(self)})"

    def to01(self) -> str:
        return "".join("1" if b else "0" for b in self._bits)

    def hamming_distance(self, other: "BitSequence") -> int:
        if len(self) != len(other):
            raise DimensionError(
                f"length mismatch: {len(self)} vs {len(other)}"
            )
        return int(np.count_nonzero(self._bits ^ other._bits))


def xor_sequences(x: BitSequence, y: BitSequence) -> BitSequence:
    """Element-wise XOR of two equal-length sequences."""
    if len(x) != len(y):
        raise DimensionError(f"length mismatch: {len(x)} vs {len(y)}")
    return BitSequence(x.array ^ y.array)


class Gf2Matrix:
    """Dense binary matrix with entries in {0, 1}."""

    __slots__ = ("_entries",)

    def __init__(self, entries):
        arr = np.asarray(entries, dtype=np.uint8)
        if arr.ndim != 2:
            raise DimensionError(f"expected a 2-d matrix, got shape {arr.shape}")
        if arr.size and int(arr.max(initial=0)) > 1:
            raise ValueError("matrix entries may only be 0 and 1")
        arr = arr.copy()
        arr.setflags(write=False)
        self._entries = arr

    @classmethod
    def from_rows(cls, rows: Sequence[BitSequence]) -> "Gf2Matrix":
        return cls(np.stack([r.array for r in rows]))

    @classmethod
    def identity(cls, n: int) -> "Gf2Matrix":
        return cls(np.eye(n, dtype=np.uint8))

    @property
    def rows(self) -> int:
        return self._entries.shape[0]

    @property
    def cols(self) -> int:
        return self._entries.shape[1]

    @property
    def array(self) -> np.ndarray:
        return self._entries

    def row(self, i: int) -> BitSequence:
        return BitSequence(self._entries[i])

    def matvec(self, x: BitSequence) -> BitSequence:
        if len(x) != self.cols:
            raise DimensionError(
                f"matrix has {self.cols} columns, vector has {len(x)}"
            )
        return BitSequence((self._entries @ x.array) % 2)

    def __eq__(self, other) -> bool:
        if not isinstance(other, Gf2Matrix):
            return NotImplemented
        return self._entries.shape == other._entries.shape and bool(
            (self._entries == other._entries).all()
        )

    def __repr__(self) -> str:
        return f"Gf2Matrix({self.rows}x{self.cols})"


def _eliminate(a: np.ndarray) -> tuple[np.ndarray, int]:
    """In-place forward elimination with row-swap pivoting; returns rank."""
    m, n = a.shape
    rank = 0
    for col in range(n):
        if rank == m:
            break
        pivot = None
        for r in range(rank, m):
            if a[r, col]:
                pivot = r
                break
        if pivot is None:
            continue
        if pivot != rank:
            a[[rank, pivot]] = a[[pivot, rank]]
        below = a[rank + 1 :, col].nonzero()[0] + rank + 1
        a[below] ^= a[rank]
        rank += 1
    return a, rank


def rank(a: Gf2Matrix) -> int:
    _, r = _eliminate(a.array.copy())
    return r


def solve_gf2(a: Gf2Matrix, b: BitSequence) -> BitSequence:
    """Solve A x = b over GF(2) by Gaussian elimination.

    A must be square and nonsingular; a pivotless column raises
    SingularMatrixError so the caller can reselect rows.
    """
    if a.rows != a.cols:
        raise DimensionError(f"matrix must be square, got {a.rows}x{a.cols}")
    if len(b) != a.rows:
        raise DimensionError(
            f"right-hand side has length {len(b)}, expected {a.rows}"
        )
    k = a.rows
    aug = np.concatenate([a.array.copy(), b.array.reshape(-1, 1)], axis=1)
    for col in range(k):
        pivot = None
        for r in range(col, k):
            if aug[r, col]:
                pivot = r
                break
        if pivot is None:
            raise SingularMatrixError(f"no pivot in column {col}")
        if pivot != col:
            aug[[col, pivot]] = aug[[pivot, col]]
        others = aug[:, col].nonzero()[0]
        others = others[others != col]
        aug[others] ^= aug[col]
    return BitSequence(aug[:, k])


def rank_extend(a: Gf2Matrix, row: BitSequence) -> bool:
    """True iff appending ``row`` strictly increases the rank of ``a``."""
    if len(row) != a.cols:
        raise DimensionError(
            f"row has length {len(row)}, matrix has {a.cols} columns"
        )
    stacked = np.concatenate([a.array, row.array.reshape(1, -1)])
    return rank(Gf2Matrix(stacked)) > rank(a)


def pack_bits(bits: np.ndarray | BitSequence) -> int:
    """Pack a bit vector into an int, bit i of the result = element i."""
    arr = bits.array if isinstance(bits, BitSequence) else bits
    out = 0
    for i in np.nonzero(arr)[0]:
        out |= 1 << int(i)
    return out


def unpack_bits(value: int, width: int) -> np.ndarray:
    return np.array([(value >> i) & 1 for i in range(width)], dtype=np.uint8)


def parity(x: int) -> int:
    return x.bit_count() & 1


class RowBasis:
    """Incremental row-echelon basis over packed GF(2) rows.

    Equivalent to repeated rank_extend but O(rank) per candidate; used for
    greedy independent-row selection over thousands of candidates.
    """

    def __init__(self):
        self._pivots: dict[int, int] = {}  # leading bit -> reduced row

    def __len__(self) -> int:
        return len(self._pivots)

    def try_add(self, row: int) -> bool:
        """Reduce ``row`` against the basis; add and return True if independent."""
        v = row
        while v:
            lead = v.bit_length() - 1
            existing = self._pivots.get(lead)
            if existing is None:
                self._pivots[lead] = v
                return True
            v ^= existing
        return False


def invert_packed(rows: list[int], k: int) -> list[int] | None:
    """Inverse of a k x k matrix given as packed rows; None if singular.

    Row i of the result is packed the same way, so x = A^-1 b is
    parity(result[i] & b) per coordinate.
    """
    aug = [rows[i] | (1 << (k + i)) for i in range(k)]
    for col in range(k):
        pivot = None
        for r in range(col, k):
            if (aug[r] >> col) & 1:
                pivot = r
                break
        if pivot is None:
            return None
        aug[col], aug[pivot] = aug[pivot], aug[col]
        for r in range(k):
            if r != col and (aug[r] >> col) & 1:
                aug[r] ^= aug[col]
    return [row >> k for row in aug]
