"""Truth tables, the fast Möbius transform and ANF coefficient queries.

Tables are packed 64 entries per ``uint64`` word; entry ``i`` lives in bit
``i & 63`` of word ``i >> 6``. The index of an input ``x`` is the integer
whose binary expansion is ``x_1 x_2 ... x_n`` (``x_1`` most significant), and
the same map indexes ANF coefficients by the characteristic vector of ``I``.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numba
import numpy as np

# in-word butterfly masks: bits whose index has bit j set, for j = 0..5
_HIGH_MASKS = np.array(
    [
        0xAAAAAAAAAAAAAAAA,
        0xCCCCCCCCCCCCCCCC,
        0xF0F0F0F0F0F0F0F0,
        0xFF00FF00FF00FF00,
        0xFFFF0000FFFF0000,
        0xFFFFFFFF00000000,
    ],
    dtype=np.uint64,
)


def n_words(n: int) -> int:
    return max(1, (1 << n) >> 6)


@numba.njit(cache=True)
def _mobius_inplace(words, n, high_masks):
    inword = min(n, 6)
    for w in range(words.shape[0]):
        x = words[w]
        for j in range(inword):
            x ^= (x << np.uint64(1 << j)) & high_masks[j]
        words[w] = x
    for j in range(6, n):
        stride = 1 << (j - 6)
        block = stride << 1
        for base in range(0, words.shape[0], block):
            for w in range(base, base + stride):
                words[w + stride] ^= words[w]


@numba.njit(cache=True)
def _popcount64(x):
    x = x - ((x >> np.uint64(1)) & np.uint64(0x5555555555555555))
    x = (x & np.uint64(0x3333333333333333)) + ((x >> np.uint64(2)) & np.uint64(0x3333333333333333))
    x = (x + (x >> np.uint64(4))) & np.uint64(0x0F0F0F0F0F0F0F0F)
    return (x * np.uint64(0x0101010101010101)) >> np.uint64(56)


@numba.njit(cache=True)
def _masked_popcount(words, mask):
    total = 0
    for w in range(words.shape[0]):
        total += _popcount64(words[w] & mask[w])
    return total


@numba.njit(cache=True)
def _indicator_anf_count(rows, n, table, mask, high_masks):
    """Span -> indicator table -> Möbius -> count; ``table`` is scratch."""
    table[:] = 0
    k = rows.shape[0]
    word = 0
    table[0] |= np.uint64(1)
    # Gray-code walk over all 2^k message vectors
    for i in range(1, 1 << k):
        low = 0
        while not (i >> low) & 1:
            low += 1
        word ^= rows[low]
        table[word >> 6] |= np.uint64(1) << np.uint64(word & 63)
    _mobius_inplace(table, n, high_masks)
    return _masked_popcount(table, mask)


@lru_cache(maxsize=None)
def degree_mask(n: int, d: int) -> np.ndarray:
    """Packed table with a 1 at every index of popcount < ``d``. Read-only."""
    idx = np.arange(1 << n, dtype=np.uint64)
    pop = np.bitwise_count(idx)
    mask = pack_bits((pop < d).astype(np.uint8))
    mask.setflags(write=False)
    return mask


@lru_cache(maxsize=None)
def _degree_schedule(n: int) -> tuple[np.ndarray, ...]:
    idx = np.arange(1 << n, dtype=np.int64)
    pop = np.bitwise_count(idx.astype(np.uint64))
    return tuple(idx[pop == w] for w in range(n + 1))


def pack_bits(values: np.ndarray) -> np.ndarray:
    values = np.asarray(values, dtype=np.uint8)
    size = values.shape[0]
    if size & (size - 1) or size == 0:
        raise ValueError(f"table length {size} is not a power of two")
    padded = np.zeros(max(size, 64), dtype=np.uint8)
    padded[:size] = values & 1
    return np.packbits(padded, bitorder="little").view(np.uint64).copy()


def unpack_bits(words: np.ndarray, size: int) -> np.ndarray:
    raw = np.unpackbits(words.view(np.uint8), bitorder="little")
    return raw[:size].copy()


@dataclass(frozen=True, eq=False)
class _PackedTable:
    n: int
    words: np.ndarray

    def __post_init__(self) -> None:
        if self.words.dtype != np.uint64 or self.words.shape != (n_words(self.n),):
            raise ValueError(f"expected {n_words(self.n)} uint64 words for n={self.n}")

    @classmethod
    def from_values(cls, values) -> "_PackedTable":
        values = np.asarray(values, dtype=np.uint8)
        n = int(values.shape[0]).bit_length() - 1
        return cls(n, pack_bits(values))

    @classmethod
    def zeros(cls, n: int):
        return cls(n, np.zeros(n_words(n), dtype=np.uint64))

    def values(self) -> np.ndarray:
        return unpack_bits(self.words, 1 << self.n)

    def __getitem__(self, index: int) -> int:
        return int(self.words[index >> 6] >> np.uint64(index & 63)) & 1

    def __eq__(self, other) -> bool:
        return (
            type(self) is type(other)
            and self.n == other.n
            and bool(np.array_equal(self.words, other.words))
        )

    def __hash__(self) -> int:
        return hash((type(self).__name__, self.n, self.words.tobytes()))


class TruthTable(_PackedTable):
    """Values of f: F_2^n -> F_2 in lexicographic input order."""

    @classmethod
    def indicator(cls, n: int, support) -> "TruthTable":
        values = np.zeros(1 << n, dtype=np.uint8)
        values[list(support)] = 1
        return cls.from_values(values)


class AnfTable(_PackedTable):
    """ANF coefficients ``a_I``, indexed like inputs by the characteristic vector of I."""


def _transform(words: np.ndarray, n: int) -> np.ndarray:
    out = words.copy()
    _mobius_inplace(out, n, _HIGH_MASKS)
    return out


def mobius_transform(t: TruthTable) -> AnfTable:
    """ANF of ``t`` via the in-place butterfly (n 2^(n-1) XORs, word parallel)."""
    return AnfTable(t.n, _transform(t.words, t.n))


def inverse_mobius(a: AnfTable) -> TruthTable:
    # the transform is an involution over F_2
    return TruthTable(a.n, _transform(a.words, a.n))


def count_coeffs_below(a: AnfTable, d: int) -> int:
    """Number of nonzero coefficients ``a_I`` with ``|I| < d``."""
    if not 1 <= d <= a.n + 1:
        raise ValueError(f"d must be in [1, {a.n + 1}], got {d}")
    return int(_masked_popcount(a.words, degree_mask(a.n, d)))


def min_absent_degree(a: AnfTable) -> int:
    """Smallest ``|I|`` with ``a_I = 0``, or ``n + 1`` if every coefficient is set.

    For the indicator of a linear code this is the minimum distance.
    """
    if a[0] != 1:
        raise ValueError("a_0 = 0: not the indicator of a linear code")
    values = a.values()
    for deg, indices in enumerate(_degree_schedule(a.n)):
        if not values[indices].all():
            return deg
    return a.n + 1
