"""Linear codes, the ANF-based fitness and brute-force reference quantities."""

from __future__ import annotations

from dataclasses import dataclass
from math import comb

import numpy as np

from . import boolfun
from .gf2 import BinMatrix, span_rows


@dataclass(frozen=True)
class LinearCode:
    n: int
    k: int
    codewords: frozenset[int]

    def __post_init__(self) -> None:
        if len(self.codewords) != 1 << self.k:
            raise ValueError(f"expected {1 << self.k} codewords, got {len(self.codewords)}")
        if 0 not in self.codewords:
            raise ValueError("a linear code contains the zero word")

    @classmethod
    def from_generator(cls, g: BinMatrix) -> "LinearCode":
        return cls(g.n, g.k, frozenset(span_rows(g.rows)))


@dataclass(frozen=True)
class ProblemInstance:
    n: int
    k: int
    d: int

    def __str__(self) -> str:
        return f"({self.n},{self.k},{self.d})"


class InstanceError(ValueError):
    """An (n, k, d) triple violating a basic bound."""

    def __init__(self, instance: ProblemInstance, bound: str, message: str):
        super().__init__(message)
        self.instance = instance
        self.bound = bound


@dataclass(frozen=True)
class Violation:
    bound: str
    message: str


def validate_instance(inst: ProblemInstance) -> Violation | None:
    """Return ``None`` if the instance is admissible, else the first violated bound."""
    if not 1 <= inst.k <= inst.n:
        return Violation("dimension", f"need 1 <= k <= n, got k={inst.k}, n={inst.n}")
    if inst.d < 1:
        return Violation("distance", f"need d >= 1, got d={inst.d}")
    if inst.d > inst.n - inst.k + 1:
        return Violation(
            "singleton",
            f"d={inst.d} exceeds the Singleton bound n-k+1={inst.n - inst.k + 1}",
        )
    return None


def check_instance(inst: ProblemInstance) -> None:
    v = validate_instance(inst)
    if v is not None:
        raise InstanceError(inst, v.bound, v.message)


def optimal_fitness(inst: ProblemInstance) -> int:
    """Sum of C(n, i) for i < d: every coefficient of degree below d present."""
    return sum(comb(inst.n, i) for i in range(inst.d))


class FitnessEvaluator:
    """Fitness for one instance, with a truth-table buffer reused across calls.

    Not thread-safe; give each run its own evaluator.
    """

    def __init__(self, inst: ProblemInstance):
        self.instance = inst
        self._table = np.zeros(boolfun.n_words(inst.n), dtype=np.uint64)
        self._mask = boolfun.degree_mask(inst.n, inst.d)
        self._rows = np.zeros(inst.k, dtype=np.int64)

    def __call__(self, rows) -> int:
        self._rows[:] = rows
        return int(
            boolfun._indicator_anf_count(
                self._rows, self.instance.n, self._table, self._mask, boolfun._HIGH_MASKS
            )
        )


def fitness(g: BinMatrix, inst: ProblemInstance) -> int:
    """Number of ANF coefficients of degree < d present in the code's indicator.

    Steps: enumerate the span of ``g``, write the indicator truth table, take
    the fast Möbius transform, count low-degree coefficients.
    """
    if (g.k, g.n) != (inst.k, inst.n):
        raise ValueError(f"matrix is {g.k}x{g.n}, instance wants {inst.k}x{inst.n}")
    return FitnessEvaluator(inst)(g.rows)


def indicator_anf(code: LinearCode) -> boolfun.AnfTable:
    table = boolfun.TruthTable.indicator(code.n, code.codewords)
    return boolfun.mobius_transform(table)


def min_distance_anf(code: LinearCode) -> int:
    return boolfun.min_absent_degree(indicator_anf(code))


def min_distance_bruteforce(code: LinearCode) -> int:
    """Minimum weight over nonzero codewords, by direct scan."""
    if len(code.codewords) < 2:
        raise ValueError("minimum distance undefined for a one-word code")
    d = min(w.bit_count() for w in code.codewords if w)
    if __debug__ and code.n <= 8:
        words = sorted(code.codewords)
        pairwise = min((x ^ y).bit_count() for i, x in enumerate(words) for y in words[i + 1 :])
        assert pairwise == d
    return d


@dataclass(frozen=True)
class WeightEnumerator:
    counts: tuple[int, ...]

    def __post_init__(self) -> None:
        if not self.counts or self.counts[0] != 1:
            raise ValueError("a linear code has exactly one weight-0 word")


def weight_enumerator(code: LinearCode) -> WeightEnumerator:
    counts = [0] * (code.n + 1)
    for w in code.codewords:
        counts[w.bit_count()] += 1
    return WeightEnumerator(tuple(counts))
