"""Seeded generation of Latin hypercube and uniform Monte Carlo samples.

A Latin hypercube sample places, per coordinate axis, exactly one point in
each of the N cells [k/N, (k+1)/N): coordinate j of point n is
(pi_j(n) - u_nj) / N for a uniform random permutation pi_j of {1..N} and
an independent jitter u_nj ~ Uniform[0,1).  The d permutations and the
d*N jitters are mutually independent; each coordinate axis consumes its
own derived substream, so generation is schedule-independent and a given
(N, d, seed) yields bit-identical output everywhere.
"""

from __future__ import annotations

import numpy as np

from .points import ONE_BELOW, PointSet
from .rng import Stream, derive


def random_permutation(n: int, stream: Stream) -> np.ndarray:
    """Uniformly random permutation of {1, ..., n} (all n! equally likely)."""
    return stream.permutation(n) + 1


def lhs_sample(n_points: int, dim: int, seed: int) -> PointSet:
    """Latin hypercube sample of n_points in [0,1)^dim.

    Coordinates are (pi(n) - u) / N.  A value that rounds up to 1.0
    (jitter zero, or small enough that the division rounds to the cell's
    upper edge) is capped at the largest double below 1.0 to preserve the
    half-open domain; this perturbs a probability ~2**-53 event only.
    """
    if n_points < 1 or dim < 1:
        raise ValueError(f"n_points and dim must be positive, got {n_points} x {dim}")
    coords = np.empty((n_points, dim), dtype=np.float64)
    for j in range(dim):
        col_stream = Stream(derive(seed, f"lhs-col-{j}"))
        pi = random_permutation(n_points, col_stream).astype(np.float64)
        u = col_stream.uniform_block(n_points)
        col = (pi - u) / n_points
        col[col >= 1.0] = ONE_BELOW
        coords[:, j] = col
    return PointSet(coords)


def uniform_sample(n_points: int, dim: int, seed: int) -> PointSet:
    """n_points independent uniform points in [0,1)^dim."""
    if n_points < 1 or dim < 1:
        raise ValueError(f"n_points and dim must be positive, got {n_points} x {dim}")
    coords = np.empty((n_points, dim), dtype=np.float64)
    for j in range(dim):
        col_stream = Stream(derive(seed, f"uniform-col-{j}"))
        coords[:, j] = col_stream.uniform_block(n_points)
    return PointSet(coords)


def latin_check(ps: PointSet) -> bool:
    """True iff every axis has exactly one point per cell [k/N, (k+1)/N)."""
    n = ps.n_points
    cells = np.arange(n)
    for j in range(ps.dim):
        occupied = np.floor(ps.coords[:, j] * n).astype(np.int64)
        if not np.array_equal(np.sort(occupied), cells):
            return False
    return True
