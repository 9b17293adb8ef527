"""Colex ranking of k-subsets of {0, ..., n-1} (combinatorial number system)."""

from __future__ import annotations

import itertools
import math

import numpy as np


def colex_rank(subset) -> int:
    """rank(S) = sum_i C(s_i, i+1) over the sorted elements s_0 < s_1 < ..."""
    return sum(math.comb(s, i + 1) for i, s in enumerate(sorted(subset)))


def colex_unrank(rank: int, k: int) -> tuple[int, ...]:
    out = []
    for i in range(k, 0, -1):
        # largest s with C(s, i) <= rank
        s = i - 1
        while math.comb(s + 1, i) <= rank:
            s += 1
        out.append(s)
        rank -= math.comb(s, i)
    return tuple(reversed(out))


def colex_subsets(n: int, k: int) -> list[tuple[int, ...]]:
    """All k-subsets of range(n), in colex order."""
    return sorted(itertools.combinations(range(n), k), key=lambda s: s[::-1])


def binomial_table(n: int, k: int) -> np.ndarray:
    """table[a, b] = C(a, b) for a <= n, b <= k, as int64."""
    table = np.zeros((n + 1, k + 1), dtype=np.int64)
    for a in range(n + 1):
        for b in range(min(a, k) + 1):
            table[a, b] = math.comb(a, b)
    return table


def colex_rank_rows(subsets: np.ndarray, table: np.ndarray) -> np.ndarray:
    """Vectorized colex rank of each row of a sorted (m, k) integer array."""
    k = subsets.shape[1]
    cols = np.arange(1, k + 1)
    return table[subsets, cols].sum(axis=1)
