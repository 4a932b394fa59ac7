"""Two-sided Mann-Whitney-Wilcoxon rank-sum test."""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

EXACT_BELOW = 8


@dataclass(frozen=True)
class MannWhitneyResult:
    u: float
    p: float
    method: str  # "exact" | "normal" | "degenerate"

    @property
    def degenerate(self) -> bool:
        return self.method == "degenerate"


def doubled_midranks(values: Sequence[float]) -> list[int]:
    """Twice the average rank of each value (1-based); integers even with ties."""
    order = sorted(range(len(values)), key=lambda i: values[i])
    ranks = [0] * len(values)
    i = 0
    while i < len(order):
        j = i
        while j + 1 < len(order) and values[order[j + 1]] == values[order[i]]:
            j += 1
        # positions i..j (0-based) share rank (i + j + 2) / 2
        for t in range(i, j + 1):
            ranks[order[t]] = i + j + 2
        i = j + 1
    return ranks


def rank_sum_distribution(doubled: Sequence[int], m: int) -> Counter:
    """Counts of (doubled) rank sums over all m-subsets of the pooled ranks."""
    # table[j] maps partial sum -> number of j-subsets reaching it
    table: list[Counter] = [Counter() for _ in range(m + 1)]
    table[0][0] = 1
    for r in doubled:
        for j in range(min(m, len(doubled)), 0, -1):
            prev = table[j - 1]
            if not prev:
                continue
            cur = table[j]
            for s, c in prev.items():
                cur[s + r] += c
    return table[m]


def _exact_p(doubled: list[int], m: int, observed: int) -> Fraction:
    dist = rank_sum_distribution(doubled, m)
    total = sum(dist.values())
    low = sum(c for s, c in dist.items() if s <= observed)
    high = sum(c for s, c in dist.items() if s >= observed)
    return min(Fraction(1), 2 * Fraction(min(low, high), total))


def mann_whitney_u(a: Sequence[float], b: Sequence[float]) -> MannWhitneyResult:
    """U statistic of ``a`` against ``b`` with a two-sided p-value.

    Exact (full rank-sum distribution under the observed ties) when the smaller
    sample has fewer than 8 values; otherwise the normal approximation with
    tie-corrected variance and continuity correction. If every value is equal
    the test is degenerate and p is 1.
    """
    n1, n2 = len(a), len(b)
    if n1 < 1 or n2 < 1:
        raise ValueError("both samples need at least one value")
    pooled = [*a, *b]
    doubled = doubled_midranks(pooled)
    r1 = sum(doubled[:n1])
    u = r1 / 2 - n1 * (n1 + 1) / 2
    if len(set(pooled)) == 1:
        return MannWhitneyResult(u, 1.0, "degenerate")
    if min(n1, n2) < EXACT_BELOW:
        return MannWhitneyResult(u, float(_exact_p(doubled, n1, r1)), "exact")
    big_n = n1 + n2
    ties = sum(t**3 - t for t in Counter(pooled).values())
    var = n1 * n2 / 12 * ((big_n + 1) - ties / (big_n * (big_n - 1)))
    z = max(abs(u - n1 * n2 / 2) - 0.5, 0.0) / math.sqrt(var)
    return MannWhitneyResult(u, min(1.0, math.erfc(z / math.sqrt(2))), "normal")
