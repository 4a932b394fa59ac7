"""Bit-packed linear algebra over F_2.

Vectors of F_2^n are plain Python ints. Coordinate 1 is the most significant
of the ``n`` used bits, so the integer value of a vector is also its index in
a lexicographically ordered truth table (see :mod:`lincode_es.boolfun`).
Matrices are tuples of such ints, one per row.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Sequence

MAX_LENGTH = 32


class MatrixFormatError(ValueError):
    """Raised when matrix text cannot be parsed or violates a shape/rank rule."""


class RankError(ValueError):
    pass


def bits_to_int(bits: Iterable[int] | str) -> int:
    """``[1, 0, 1]`` or ``"101"`` -> 0b101 (first coordinate is the high bit)."""
    value = 0
    for b in bits:
        value = (value << 1) | (1 if b in (1, "1", True) else 0)
    return value


def int_to_bits(v: int, n: int) -> str:
    return format(v, f"0{n}b")


def weight(v: int) -> int:
    return v.bit_count()


@dataclass(frozen=True)
class BinMatrix:
    """A k x n binary matrix with rows stored as ints."""

    n: int
    rows: tuple[int, ...]

    def __post_init__(self) -> None:
        if not 1 <= self.n <= MAX_LENGTH:
            raise ValueError(f"row length must be in [1, {MAX_LENGTH}], got {self.n}")
        rows = tuple(int(r) for r in self.rows)
        object.__setattr__(self, "rows", rows)
        limit = 1 << self.n
        for r in rows:
            if not 0 <= r < limit:
                raise ValueError(f"row {r:#x} does not fit in {self.n} bits")

    @property
    def k(self) -> int:
        return len(self.rows)

    @classmethod
    def from_strings(cls, rows: Sequence[str]) -> "BinMatrix":
        n = len(rows[0])
        if any(len(r) != n for r in rows):
            raise ValueError("rows differ in length")
        return cls(n, tuple(bits_to_int(r) for r in rows))

    def to_strings(self) -> list[str]:
        return [int_to_bits(r, self.n) for r in self.rows]

    def __str__(self) -> str:
        return "\n".join(self.to_strings())


class GeneratorMatrix(BinMatrix):
    """A k x n matrix of rank exactly k, 1 <= k <= n."""

    def __post_init__(self) -> None:
        super().__post_init__()
        if not 1 <= self.k <= self.n:
            raise ValueError(f"need 1 <= k <= n, got k={self.k}, n={self.n}")
        if rank_rows(self.rows) != self.k:
            raise RankError(f"generator matrix must have full rank {self.k}")


# -- elimination ----------------------------------------------------------


def _eliminate(rows: Iterable[int]) -> list[int]:
    """Return an echelon basis (distinct leading bits, decreasing) of the row space."""
    basis: list[int] = []
    for r in rows:
        for b in basis:
            r = min(r, r ^ b)
        if r:
            basis.append(r)
            basis.sort(reverse=True)
    return basis


def rank_rows(rows: Iterable[int]) -> int:
    return len(_eliminate(rows))


def rank(m: BinMatrix) -> int:
    """Dimension of the row space of ``m``."""
    return rank_rows(m.rows)


def rref_rows(rows: Iterable[int]) -> tuple[int, ...]:
    """Reduced row echelon form of ``rows`` with zero rows dropped.

    Rows come back sorted by pivot, leftmost (most significant) pivot first, and
    each pivot column is cleared in every other row. The result is a canonical
    basis: two row sets span the same space iff their rref rows are equal.
    """
    basis = _eliminate(rows)
    # back-substitution: clear each pivot bit from the rows above it
    for i in range(len(basis) - 1, -1, -1):
        pivot = 1 << (basis[i].bit_length() - 1)
        for j in range(i):
            if basis[j] & pivot:
                basis[j] ^= basis[i]
    return tuple(basis)


def rref(m: BinMatrix) -> BinMatrix:
    return BinMatrix(m.n, rref_rows(m.rows))


def reduce_vector(basis: Sequence[int], v: int) -> int:
    """Reduce ``v`` against an echelon basis; zero iff ``v`` lies in the span."""
    for b in basis:
        v = min(v, v ^ b)
    return v


def contains(basis_rref: BinMatrix, v: int) -> bool:
    """Membership of ``v`` in the row space of an RREF (or echelon) basis."""
    if not 0 <= v < (1 << basis_rref.n):
        raise ValueError(f"vector does not have length {basis_rref.n}")
    return reduce_vector(basis_rref.rows, v) == 0


def span_rows(rows: Sequence[int]) -> list[int]:
    """All 2^k combinations of ``rows``, in Gray-code order starting at 0."""
    words = [0]
    for r in rows:
        words += [w ^ r for w in words]
    return words


def span(g: BinMatrix) -> "LinearCode":
    from .codes import LinearCode

    return LinearCode(g.n, g.k, frozenset(span_rows(g.rows)))


def intersection_dim(a: Sequence[int], b: Sequence[int]) -> int:
    return rank_rows(a) + rank_rows(b) - rank_rows([*a, *b])


def subspace_distance(a: BinMatrix, b: BinMatrix) -> int:
    """Grassmannian distance ``2 (k - dim(A & B))`` between equal-dimension row spaces."""
    if a.n != b.n or a.k != b.k:
        raise ValueError(f"shape mismatch: {a.k}x{a.n} vs {b.k}x{b.n}")
    return 2 * (rank_rows([*a.rows, *b.rows]) - a.k)


def distance_rows(a: Sequence[int], b: Sequence[int]) -> int:
    # hot-path variant for full-rank row tuples of equal size
    return 2 * (len(_eliminate([*a, *b])) - len(a))


def random_full_rank_rows(k: int, n: int, rng: random.Random) -> tuple[int, ...]:
    rows: list[int] = []
    basis: list[int] = []
    while len(rows) < k:
        v = rng.getrandbits(n)
        if reduce_vector(basis, v) == 0:
            continue
        rows.append(v)
        basis = _eliminate(rows)
    return tuple(rows)


def random_full_rank(k: int, n: int, rng: random.Random) -> GeneratorMatrix:
    """Uniformly random rank-k k x n matrix, by per-row rejection of dependent rows."""
    if not 1 <= k <= n:
        raise ValueError(f"need 1 <= k <= n, got k={k}, n={n}")
    return GeneratorMatrix(n, random_full_rank_rows(k, n, rng))


def gaussian_binomial(n: int, k: int) -> int:
    """Number of k-dimensional subspaces of F_2^n, exactly."""
    if not 0 <= k <= n:
        raise ValueError(f"need 0 <= k <= n, got n={n}, k={k}")
    num = 1
    den = 1
    for i in range(k):
        num *= (1 << (n - i)) - 1
        den *= (1 << (k - i)) - 1
    q, r = divmod(num, den)
    assert r == 0
    return q


# -- text format ----------------------------------------------------------


def format_matrix(m: BinMatrix) -> str:
    return f"{m.n} {m.k}\n" + "".join(row + "\n" for row in m.to_strings())


def parse_matrix(text: str, *, full_rank: bool = True) -> BinMatrix:
    """Parse the ``n k`` header + k rows of 0/1 characters format."""
    lines = text.splitlines()
    if not lines:
        raise MatrixFormatError("empty matrix file")
    header = lines[0].split(" ")
    if len(header) != 2 or not all(h.isdigit() for h in header):
        raise MatrixFormatError(f"bad header {lines[0]!r}, expected 'n k'")
    n, k = int(header[0]), int(header[1])
    if not 1 <= n <= MAX_LENGTH or not 1 <= k <= n:
        raise MatrixFormatError(f"invalid dimensions n={n} k={k}")
    body = lines[1:]
    if len(body) != k:
        raise MatrixFormatError(f"expected {k} rows, found {len(body)}")
    for i, row in enumerate(body, 1):
        if len(row) != n:
            raise MatrixFormatError(f"row {i} has length {len(row)}, expected {n}")
        if set(row) - {"0", "1"}:
            raise MatrixFormatError(f"row {i} contains characters other than 0/1")
    rows = tuple(bits_to_int(r) for r in body)
    if not full_rank:
        return BinMatrix(n, rows)
    if rank_rows(rows) < k:
        raise MatrixFormatError(f"matrix has rank {rank_rows(rows)} < k={k}")
    return GeneratorMatrix(n, rows)


def read_matrix(path: str | Path, *, full_rank: bool = True) -> BinMatrix:
    return parse_matrix(Path(path).read_text(), full_rank=full_rank)


def write_matrix(path: str | Path, m: BinMatrix) -> None:
    Path(path).write_text(format_matrix(m))
