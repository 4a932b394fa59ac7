import random

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from lincode_es.boolfun import (
    AnfTable,
    TruthTable,
    count_coeffs_below,
    inverse_mobius,
    min_absent_degree,
    mobius_transform,
)
from lincode_es.codes import LinearCode, min_distance_bruteforce
from lincode_es.gf2 import GeneratorMatrix, random_full_rank, span


def anf_by_definition(values):
    """a_I = XOR of f(x) over x with supp(x) inside I, straight from the sum."""
    size = len(values)
    out = np.zeros(size, dtype=np.uint8)
    for I in range(size):
        acc = 0
        for x in range(size):
            if x & ~I == 0:
                acc ^= int(values[x])
        out[I] = acc
    return out


def indicator(n, words):
    return TruthTable.indicator(n, words)


HAMMING_7_4 = GeneratorMatrix.from_strings(["1000110", "0100101", "0010011", "0001111"])


class TestMobius:
    def test_zero(self):
        assert mobius_transform(TruthTable.zeros(5)) == AnfTable.zeros(5)

    def test_constant_one(self):
        anf = mobius_transform(TruthTable.from_values(np.ones(16)))
        vals = anf.values()
        assert vals[0] == 1 and vals[1:].sum() == 0

    def test_repetition_code_indicator(self):
        anf = mobius_transform(indicator(3, [0b000, 0b111])).values()
        expected = anf_by_definition([1, 0, 0, 0, 0, 0, 0, 1])
        assert list(anf) == list(expected)
        assert list(anf) == [1, 1, 1, 1, 1, 1, 1, 0]

    @pytest.mark.parametrize("n", [1, 2, 3, 5, 6, 7, 8])
    def test_matches_definition(self, n):
        rng = np.random.default_rng(n)
        for _ in range(5):
            values = rng.integers(0, 2, 1 << n)
            anf = mobius_transform(TruthTable.from_values(values))
            assert np.array_equal(anf.values(), anf_by_definition(values))

    def test_delta_at_zero_sets_every_coefficient(self):
        for n in range(1, 11):
            anf = mobius_transform(indicator(n, [0]))
            assert anf.values().all()

    def test_inverse_of_zero(self):
        t = TruthTable.zeros(4)
        assert inverse_mobius(mobius_transform(t)) == t

    def test_inverse_of_constant_anf(self):
        a = AnfTable.from_values([1] + [0] * 7)
        assert inverse_mobius(a).values().tolist() == [1] * 8

    @settings(max_examples=200, deadline=None)
    @given(st.integers(1, 12), st.integers(0, 2**32 - 1))
    def test_involution(self, n, seed):
        values = np.random.default_rng(seed).integers(0, 2, 1 << n)
        t = TruthTable.from_values(values)
        assert mobius_transform(mobius_transform(t)).values().tolist() == values.tolist()
        assert inverse_mobius(mobius_transform(t)) == t

    def test_input_not_modified(self):
        t = TruthTable.from_values([1, 0, 1, 1])
        before = t.words.copy()
        mobius_transform(t)
        assert np.array_equal(t.words, before)


class TestCounting:
    def test_zero_anf(self):
        for d in range(1, 7):
            assert count_coeffs_below(AnfTable.zeros(5), d) == 0

    def test_d1_is_constant_term(self):
        assert count_coeffs_below(AnfTable.from_values([1, 0, 1, 1]), 1) == 1
        assert count_coeffs_below(AnfTable.from_values([0, 1, 1, 1]), 1) == 0

    def test_repetition_code(self):
        anf = mobius_transform(indicator(3, [0, 7]))
        assert count_coeffs_below(anf, 3) == 7

    def test_range_check(self):
        with pytest.raises(ValueError):
            count_coeffs_below(AnfTable.zeros(3), 5)

    @settings(max_examples=100, deadline=None)
    @given(st.integers(1, 10), st.integers(0, 2**32 - 1))
    def test_full_count_plus_zeros(self, n, seed):
        values = np.random.default_rng(seed).integers(0, 2, 1 << n)
        a = AnfTable.from_values(values)
        zeros = int((values == 0).sum())
        assert count_coeffs_below(a, n + 1) + zeros == 1 << n
        for d in range(1, n + 2):
            brute = sum(1 for i, v in enumerate(values) if v and bin(i).count("1") < d)
            assert count_coeffs_below(a, d) == brute


class TestMinAbsentDegree:
    def test_full_space(self):
        anf = mobius_transform(TruthTable.from_values(np.ones(8)))
        assert min_absent_degree(anf) == 1

    def test_repetition_code(self):
        assert min_absent_degree(mobius_transform(indicator(3, [0, 7]))) == 3

    def test_hamming(self):
        code = span(HAMMING_7_4)
        assert min_distance_bruteforce(code) == 3
        anf = mobius_transform(indicator(7, code.codewords))
        assert min_absent_degree(anf) == 3

    def test_rejects_non_indicator(self):
        with pytest.raises(ValueError):
            min_absent_degree(AnfTable.from_values([0, 1, 1, 1]))

    def test_all_coefficients_present(self):
        # only the zero vector: d undefined, every coefficient set
        assert min_absent_degree(mobius_transform(indicator(4, [0]))) == 5

    def test_characterises_min_distance(self):
        rng = random.Random(99)
        for _ in range(300):
            n = rng.randint(2, 10)
            k = rng.randint(1, min(n, 5))
            code = span(random_full_rank(k, n, rng))
            anf = mobius_transform(indicator(n, code.codewords))
            assert min_absent_degree(anf) == min_distance_bruteforce(code)
