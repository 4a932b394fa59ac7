import random

import pytest

from lincode_es.gf2 import (
    GeneratorMatrix,
    contains,
    random_full_rank,
    rank,
    rank_rows,
    rref,
    subspace_distance,
)
from lincode_es.operators import crossover, crossover_rows, mutate, mutate_rows


class ScriptedRandom:
    """Stream whose ``random()`` values are scripted, for forcing row triggers."""

    def __init__(self, uniforms, seed=0):
        self._uniforms = list(uniforms)
        self._rng = random.Random(seed)

    def random(self):
        return self._uniforms.pop(0)

    def getrandbits(self, n):
        return self._rng.getrandbits(n)


class TestMutate:
    def test_forced_second_row(self):
        g = GeneratorMatrix.from_strings(["100", "010"])
        seen = set()
        for seed in range(200):
            rng = ScriptedRandom([0.9, 0.0], seed)
            out = mutate(g, 0.5, rng)
            assert out.rows[0] == 0b100
            assert out.rows[1] not in (0b000, 0b100)
            assert rank(out) == 2
            seen.add(out.rows[1])
        assert seen == {0b010, 0b001, 0b011, 0b110, 0b101, 0b111}

    def test_no_trigger_identity(self):
        rng = random.Random(0)
        g = random_full_rank(4, 8, rng)
        out = mutate_rows(g.rows, 8, 0.5, ScriptedRandom([0.9] * 4))
        assert out is g.rows

    def test_bad_probability(self):
        g = GeneratorMatrix.from_strings(["10"])
        with pytest.raises(ValueError):
            mutate(g, 0.0, random.Random(0))

    def test_single_row_distance(self):
        rng = random.Random(17)
        counts = {0: 0, 2: 0}
        for _ in range(10_000):
            g = random_full_rank(4, 8, rng)
            i = rng.randrange(4)
            uniforms = [0.0 if j == i else 0.99 for j in range(4)]
            out = mutate(g, 0.5, ScriptedRandom(uniforms, rng.getrandbits(32)))
            d = subspace_distance(g, out)
            v = out.rows[i]
            in_old_span = contains(rref(g), v)
            assert d in (0, 2)
            assert (d == 0) == in_old_span
            counts[d] += 1
        # v is uniform on F_2^8 minus a 2^3 span; landing in span(G) has odds 8 / 248
        assert abs(counts[0] / 10_000 - 8 / 248) < 0.01

    def test_distance_bounded_by_triggers(self):
        rng = random.Random(5)
        for _ in range(500):
            g = random_full_rank(5, 10, rng)
            uniforms = [rng.random() for _ in range(5)]
            triggered = sum(u < 0.4 for u in uniforms)
            out = mutate(g, 0.4, ScriptedRandom(uniforms, rng.getrandbits(32)))
            assert subspace_distance(g, out) <= 2 * triggered

    def test_full_rank_always(self):
        rng = random.Random(2)
        for _ in range(2000):
            n = rng.randint(2, 16)
            k = rng.randint(1, n)
            g = random_full_rank(k, n, rng)
            assert rank_rows(mutate_rows(g.rows, n, rng.random() or 1.0, rng)) == k


class TestCrossover:
    def test_same_subspace_stays(self):
        rng = random.Random(8)
        for _ in range(200):
            g1 = random_full_rank(4, 9, rng)
            # a different basis of the same space
            rows = list(g1.rows)
            rows[0] ^= rows[1]
            rows[2] ^= rows[3] ^ rows[0]
            g2 = GeneratorMatrix(9, tuple(rows))
            child = crossover(g1, g2, rng)
            assert rref(child) == rref(g1)

    def test_identity_parents(self):
        eye = GeneratorMatrix(4, (8, 4, 2, 1))
        assert rref(crossover(eye, eye, random.Random(0))) == rref(eye)

    def test_rows_from_parents_and_rank(self):
        rng = random.Random(21)
        for _ in range(10_000):
            g1 = random_full_rank(5, 10, rng)
            g2 = random_full_rank(5, 10, rng)
            child = crossover_rows(g1.rows, g2.rows, rng)
            assert rank_rows(child) == 5
            assert all(r in g1.rows or r in g2.rows for r in child)
            # child lies in the sum space of the parents
            assert rank_rows([*g1.rows, *g2.rows, *child]) == rank_rows([*g1.rows, *g2.rows])

    def test_shape_mismatch(self):
        with pytest.raises(ValueError):
            crossover(GeneratorMatrix(3, (4,)), GeneratorMatrix(3, (4, 2)), random.Random(0))

    def test_first_row_uniform(self):
        # the shuffle makes every parent row equally likely to lead the child
        g1 = GeneratorMatrix(4, (8, 4))
        g2 = GeneratorMatrix(4, (2, 1))
        rng = random.Random(4)
        counts = {8: 0, 4: 0, 2: 0, 1: 0}
        for _ in range(20_000):
            counts[crossover_rows(g1.rows, g2.rows, rng)[0]] += 1
        for c in counts.values():
            assert abs(c / 20_000 - 0.25) < 0.015
