"""Independent oracles used by the tests.

These deliberately avoid the library's own code paths: the dense-grid
discrepancy maximum enumerates boxes on a fixed uniform lattice, and the
probability oracles work in exact rational arithmetic (Fraction over
math.comb).  They exist to certify the fast implementations, so they are
kept simple even where that costs speed.
"""

from __future__ import annotations

import itertools
import math
from fractions import Fraction

import numpy as np


def dense_grid_star_discrepancy(coords: np.ndarray, m: int = 400) -> float:
    """Max of |count/N - vol| over boxes [0, y) with y_j in {1/m, ..., m/m}.

    Counting is open (x < y) with the same float comparisons a direct
    loop over lattice corners would use.  Points partition each axis into
    at most N+1 index ranges on which the count is constant; within such
    a region the volume is monotone, so the maximum over the region is
    attained at one of its two corners.  This reproduces the brute-force
    lattice maximum exactly while evaluating only O((N+1)^d) corners.
    """
    n, d = coords.shape
    grid = np.arange(1, m + 1) / m
    # a[p, j]: smallest 0-based lattice index i with coords[p, j] < grid[i].
    a = np.empty((n, d), dtype=np.int64)
    for j in range(d):
        a[:, j] = np.searchsorted(grid, coords[:, j], side="right")

    region_starts = []
    for j in range(d):
        starts = np.unique(np.concatenate(([0], a[:, j])))
        region_starts.append(starts[starts <= m - 1])

    best = 0.0
    for lows in itertools.product(*region_starts):
        highs = []
        for j, lo in enumerate(lows):
            starts = region_starts[j]
            nxt = starts[starts > lo]
            highs.append((nxt[0] - 1) if nxt.size else m - 1)
        count = int(np.all(a <= np.array(lows), axis=1).sum())
        vol_lo = 1.0
        vol_hi = 1.0
        for j in range(d):
            vol_lo *= grid[lows[j]]
            vol_hi *= grid[highs[j]]
        best = max(best, count / n - vol_lo, vol_hi - count / n)
    return best


def brute_force_lattice_max(coords: np.ndarray, m: int) -> float:
    """Direct triple-loop version of the dense-grid maximum (tiny m only)."""
    n, d = coords.shape
    grid = np.arange(1, m + 1) / m
    best = 0.0
    for corner_idx in itertools.product(range(m), repeat=d):
        vol = 1.0
        for j in range(d):
            vol *= grid[corner_idx[j]]
        count = 0
        for p in range(n):
            if all(coords[p, j] < grid[corner_idx[j]] for j in range(d)):
                count += 1
        best = max(best, abs(count / n - vol))
    return best


def binom_pmf_frac(n: int, p: Fraction, k: int) -> Fraction:
    if k < 0 or k > n:
        return Fraction(0)
    return math.comb(n, k) * p**k * (1 - p) ** (n - k)


def binom_cdf_frac(n: int, p: Fraction, k: int) -> Fraction:
    return sum((binom_pmf_frac(n, p, i) for i in range(0, min(k, n) + 1)), Fraction(0))


def hypergeom_pmf_frac(n_total: int, n_white: int, n_draws: int, k: int) -> Fraction:
    if k < 0 or k > n_draws or k > n_white or n_draws - k > n_total - n_white:
        return Fraction(0)
    return Fraction(
        math.comb(n_white, k) * math.comb(n_total - n_white, n_draws - k),
        math.comb(n_total, n_draws),
    )


def tv_frac(n_total: int, n_white: int, n_draws: int) -> Fraction:
    """Exact TV distance between H(N, W, n) and B(n, W/N)."""
    p = Fraction(n_white, n_total)
    total = Fraction(0)
    for k in range(n_draws + 1):
        total += abs(hypergeom_pmf_frac(n_total, n_white, n_draws, k) - binom_pmf_frac(n_draws, p, k))
    return total / 2


def tv_by_subset_enumeration(a_probs: list[float], b_probs: list[float]) -> float:
    """max_A |P_a(A) - P_b(A)| over all subsets of the (small) joint support."""
    size = max(len(a_probs), len(b_probs))
    a = a_probs + [0.0] * (size - len(a_probs))
    b = b_probs + [0.0] * (size - len(b_probs))
    best = 0.0
    for mask in range(1 << size):
        pa = sum(a[i] for i in range(size) if mask >> i & 1)
        pb = sum(b[i] for i in range(size) if mask >> i & 1)
        best = max(best, abs(pa - pb))
    return best
