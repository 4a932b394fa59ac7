"""Permutation equivalence of binary linear codes.

Two codes are equivalent here when some permutation of coordinates maps the
codeword set of one onto the other (symbol swaps are not considered: 0 <-> 1
on a coordinate cannot map a linear code onto a linear code).

Decision procedure for ``is_equivalent(a, b)``:

1. weight enumerators must agree;
2. per-coordinate signatures (how many weight-w words are 1 there, for each
   w) must agree as multisets, and restrict which columns may be matched;
3. backtracking assigns an information set of ``a``'s columns to columns of
   ``b``, keeping only assignments that preserve signatures, the pairwise
   co-occurrence counts per weight class, and linear independence. Once an
   information set is placed, every other column of ``a`` is a fixed
   combination of it and must land on a column of ``b`` with the same
   combination, so the rest of the permutation is forced;
4. the completed permutation is checked by testing that each permuted
   generator row of ``a`` is a member of ``b``.
"""

from __future__ import annotations

from collections import Counter, defaultdict
from dataclasses import dataclass
from itertools import permutations

import numpy as np

from .codes import LinearCode
from .gf2 import BinMatrix, _eliminate, reduce_vector, rref_rows, span_rows

DEFAULT_EFFORT_CAP = 10**7

EQUIVALENT = "equivalent"
INEQUIVALENT = "inequivalent"
UNDECIDED = "undecided"


@dataclass(frozen=True)
class CoordinatePermutation:
    """0-based bijection: coordinate ``j`` of the source goes to ``mapping[j]``."""

    mapping: tuple[int, ...]

    def __post_init__(self) -> None:
        if sorted(self.mapping) != list(range(len(self.mapping))):
            raise ValueError(f"not a permutation: {self.mapping}")

    @property
    def n(self) -> int:
        return len(self.mapping)

    def apply(self, word: int) -> int:
        n = self.n
        out = 0
        for j, target in enumerate(self.mapping):
            if word >> (n - 1 - j) & 1:
                out |= 1 << (n - 1 - target)
        return out

    def compose(self, then: "CoordinatePermutation") -> "CoordinatePermutation":
        """Apply ``self`` first, then ``then``."""
        return CoordinatePermutation(tuple(then.mapping[t] for t in self.mapping))

    def inverse(self) -> "CoordinatePermutation":
        inv = [0] * self.n
        for j, t in enumerate(self.mapping):
            inv[t] = j
        return CoordinatePermutation(tuple(inv))

    def one_based(self) -> list[int]:
        return [t + 1 for t in self.mapping]


@dataclass(frozen=True)
class EquivalenceReport:
    status: str
    witness: CoordinatePermutation | None = None
    pruned_by: str | None = None  # weight-enumerator | signature | search-complete | search-exhausted
    nodes: int = 0

    @property
    def equivalent(self) -> bool:
        return self.status == EQUIVALENT

    @property
    def undecided(self) -> bool:
        return self.status == UNDECIDED


def permute_code(code: LinearCode, perm: CoordinatePermutation) -> LinearCode:
    return LinearCode(code.n, code.k, frozenset(perm.apply(w) for w in code.codewords))


class CodeProfile:
    """Generator, column vectors and weight statistics of one code, computed once."""

    def __init__(self, code: LinearCode | BinMatrix):
        if isinstance(code, BinMatrix):
            rows = rref_rows(code.rows)
            words = span_rows(rows)
            n = code.n
        else:
            rows = rref_rows(code.codewords)
            words = sorted(code.codewords)
            n = code.n
        self.n = n
        self.k = len(rows)
        self.rows = rows
        self.words = np.array(words, dtype=np.int64)
        # columns of the generator as k-bit ints (row 0 is the high bit)
        self.columns = [
            sum(((r >> (n - 1 - j)) & 1) << (self.k - 1 - i) for i, r in enumerate(rows))
            for j in range(n)
        ]
        bits = ((self.words[:, None] >> np.arange(n - 1, -1, -1)) & 1).astype(np.int64)
        weights = bits.sum(axis=1)
        self.enumerator = tuple(np.bincount(weights, minlength=n + 1).tolist())
        present = [w for w in range(1, n + 1) if self.enumerator[w]]
        pair = np.stack([bits[weights == w].T @ bits[weights == w] for w in present], axis=-1)
        self.pair = [[tuple(pair[i, j].tolist()) for j in range(n)] for i in range(n)]
        self.signature = [self.pair[j][j] for j in range(n)]


def _coefficients(basis_cols: list[int], cols: list[int]) -> list[int]:
    """Express each column as a combination (bitmask over positions) of ``basis_cols``."""
    tracked: list[tuple[int, int]] = []
    for t, c in enumerate(basis_cols):
        combo = 1 << t
        for v, m in tracked:
            if c ^ v < c:
                c ^= v
                combo ^= m
        tracked.append((c, combo))
        tracked.sort(reverse=True)
    out = []
    for c in cols:
        combo = 0
        for v, m in tracked:
            if c ^ v < c:
                c ^= v
                combo ^= m
        assert c == 0
        out.append(combo)
    return out


def _information_set(pa: CodeProfile, candidates: list[list[int]]) -> list[int]:
    order = sorted(range(pa.n), key=lambda j: (len(candidates[j]), j))
    chosen: list[int] = []
    basis: list[int] = []
    for j in order:
        if reduce_vector(basis, pa.columns[j]):
            chosen.append(j)
            basis = _eliminate([pa.columns[c] for c in chosen])
            if len(chosen) == pa.k:
                break
    return chosen


def _verify(pa: CodeProfile, pb: CodeProfile, perm: CoordinatePermutation) -> bool:
    return all(reduce_vector(pb.rows, perm.apply(r)) == 0 for r in pa.rows)


def compare_profiles(
    pa: CodeProfile, pb: CodeProfile, effort_cap: int = DEFAULT_EFFORT_CAP
) -> EquivalenceReport:
    if (pa.n, pa.k) != (pb.n, pb.k):
        raise ValueError(f"codes differ in (n, k): {(pa.n, pa.k)} vs {(pb.n, pb.k)}")
    if pa.enumerator != pb.enumerator:
        return EquivalenceReport(INEQUIVALENT, pruned_by="weight-enumerator")
    if Counter(pa.signature) != Counter(pb.signature):
        return EquivalenceReport(INEQUIVALENT, pruned_by="signature")
    n, k = pa.n, pa.k
    by_sig: dict[tuple, list[int]] = defaultdict(list)
    for c in range(n):
        by_sig[pb.signature[c]].append(c)
    candidates = [by_sig[pa.signature[j]] for j in range(n)]
    info = _information_set(pa, candidates)
    rest_a = [j for j in range(n) if j not in info]
    coeff_a = _coefficients([pa.columns[j] for j in info], [pa.columns[j] for j in rest_a])
    need = Counter(coeff_a)

    nodes = 0
    image: list[int] = []
    used = [False] * n

    def complete() -> CoordinatePermutation | None:
        rest_b = [c for c in range(n) if not used[c]]
        coeff_b = _coefficients([pb.columns[c] for c in image], [pb.columns[c] for c in rest_b])
        if Counter(coeff_b) != need:
            return None
        slots: dict[int, list[int]] = defaultdict(list)
        for c, v in zip(rest_b, coeff_b):
            slots[v].append(c)
        mapping = [0] * n
        for j, c in zip(info, image):
            mapping[j] = c
        for j, v in zip(rest_a, coeff_a):
            mapping[j] = slots[v].pop()
        perm = CoordinatePermutation(tuple(mapping))
        return perm if _verify(pa, pb, perm) else None

    def search(depth: int, basis: list[int]) -> CoordinatePermutation | None | bool:
        nonlocal nodes
        if depth == k:
            return complete()
        j = info[depth]
        for c in candidates[j]:
            if used[c]:
                continue
            if any(pa.pair[info[s]][j] != pb.pair[image[s]][c] for s in range(depth)):
                continue
            if not reduce_vector(basis, pb.columns[c]):
                continue
            nodes += 1
            if nodes > effort_cap:
                return False
            used[c] = True
            image.append(c)
            found = search(depth + 1, _eliminate([*basis, pb.columns[c]]))
            image.pop()
            used[c] = False
            if found is not None:
                return found
        return None

    found = search(0, [])
    if found is False:
        return EquivalenceReport(UNDECIDED, pruned_by="search-exhausted", nodes=nodes)
    if found is None:
        return EquivalenceReport(INEQUIVALENT, pruned_by="search-complete", nodes=nodes)
    return EquivalenceReport(EQUIVALENT, witness=found, nodes=nodes)


def is_equivalent(
    a: LinearCode | BinMatrix, b: LinearCode | BinMatrix, effort_cap: int = DEFAULT_EFFORT_CAP
) -> EquivalenceReport:
    """Decide whether a coordinate permutation maps code ``a`` onto code ``b``."""
    return compare_profiles(CodeProfile(a), CodeProfile(b), effort_cap)


@dataclass(frozen=True)
class Partition:
    classes: list[list[int]]
    undecided: list[tuple[int, int]]  # (code index, representative index) pairs left open

    def __len__(self) -> int:
        return len(self.classes)


def partition_classes(
    codes: list[LinearCode | BinMatrix], effort_cap: int = DEFAULT_EFFORT_CAP
) -> Partition:
    """Greedy partition into equivalence classes, one representative per class.

    A code that is undecided against some representative and matches none
    founds its own class; such pairs are listed in ``undecided``.
    """
    profiles = [CodeProfile(c) for c in codes]
    classes: list[list[int]] = []
    undecided: list[tuple[int, int]] = []
    for i, p in enumerate(profiles):
        open_pairs = []
        for cls in classes:
            rep = cls[0]
            report = compare_profiles(profiles[rep], p, effort_cap)
            if report.equivalent:
                cls.append(i)
                break
            if report.undecided:
                open_pairs.append((i, rep))
        else:
            classes.append([i])
            undecided.extend(open_pairs)
    return Partition(classes, undecided)


def equivalent_bruteforce(a: LinearCode, b: LinearCode) -> CoordinatePermutation | None:
    """Try all n! permutations. Only sensible for small n."""
    if (a.n, a.k) != (b.n, b.k):
        return None
    for mapping in permutations(range(a.n)):
        perm = CoordinatePermutation(mapping)
        if all(perm.apply(w) in b.codewords for w in a.codewords):
            return perm
    return None
