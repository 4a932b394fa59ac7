"""Rank-preserving mutation and crossover on generator matrices.

Both operators work on row tuples (ints) so the ES loop can call them without
constructing matrix objects; the ``GeneratorMatrix`` wrappers at the bottom
are the public entry points.
"""

from __future__ import annotations

import random
from typing import Sequence

from .gf2 import GeneratorMatrix, _eliminate, reduce_vector


def sample_outside_span(basis: Sequence[int], n: int, rng: random.Random) -> int:
    """Uniform vector of F_2^n not in the span of the echelon ``basis``."""
    while True:
        v = rng.getrandbits(n)
        if reduce_vector(basis, v):
            return v


def mutate_rows(
    rows: tuple[int, ...], n: int, p_mut: float, rng: random.Random
) -> tuple[int, ...]:
    """Replace each row, with probability ``p_mut``, by a vector outside the span of the others.

    Rows are visited in order and each trigger sees the matrix as already
    mutated by earlier rows. Returns ``rows`` itself when nothing triggers.
    """
    out = None
    for i in range(len(rows)):
        if rng.random() >= p_mut:
            continue
        if out is None:
            out = list(rows)
        others = _eliminate(out[:i] + out[i + 1 :])
        out[i] = sample_outside_span(others, n, rng)
    return rows if out is None else tuple(out)


def crossover_rows(
    a: tuple[int, ...], b: tuple[int, ...], rng: random.Random
) -> tuple[int, ...]:
    """Shuffle the stacked parent rows and keep the first k independent ones."""
    k = len(a)
    pool = [*a, *b]
    rng.shuffle(pool)
    chosen: list[int] = []
    basis: list[int] = []
    for r in pool:
        if reduce_vector(basis, r):
            chosen.append(r)
            if len(chosen) == k:
                break
            basis = _eliminate(chosen)
    assert len(chosen) == k
    return tuple(chosen)


def mutate(g: GeneratorMatrix, p_mut: float, rng: random.Random) -> GeneratorMatrix:
    if not 0 < p_mut <= 1:
        raise ValueError(f"p_mut must be in (0, 1], got {p_mut}")
    return GeneratorMatrix(g.n, mutate_rows(g.rows, g.n, p_mut, rng))


def crossover(g1: GeneratorMatrix, g2: GeneratorMatrix, rng: random.Random) -> GeneratorMatrix:
    if (g1.k, g1.n) != (g2.k, g2.n):
        raise ValueError(f"parent shapes differ: {g1.k}x{g1.n} vs {g2.k}x{g2.n}")
    return GeneratorMatrix(g1.n, crossover_rows(g1.rows, g2.rows, rng))
