"""Recursive witness-box construction certifying a star-discrepancy lower bound.

Starting from the stripe B_1 = [0, floor(N/4)/N) x [0,1)^(d-1), which for a
Latin hypercube sample contains exactly floor(N/4) points (zero excess),
the construction walks the remaining axes.  At axis j it counts the points
of the current box that fall inside the thin slab where coordinate j lies
in [1 - c/d, 1); for a Latin sample the slab holds exactly n = Nc/d points
overall, and the in-box count Y_j follows a sampling-without-replacement
law.  Whenever Y_j undershoots its mean by half a standard-deviation proxy
(Y_j <= n p_j - sqrt(n p_j)/2, with p_j the in-box fraction W_j/N), the box
is shrunk on axis j by the factor 1 - c/d: the undershoot means the shaved
slab carried fewer points than its volume share, so the surviving box gains
excess.  Otherwise the axis is left at 1 and nothing changes.  Each shrink
adds at least sqrt(c v)/2 * sqrt(N/d) to the excess (v is the floor of the
box volume), so the final excess divided by N is a certified lower bound
for the star discrepancy.

The construction is a deterministic, pure function of the point set; all
randomness lives in the sample.  It is well defined for any point set, but
its probabilistic guarantees hold only under the Latin hypercube law, so a
non-Latin input triggers a warning rather than an error.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field

import numpy as np

from .discrepancy import AnchoredBox, DimensionMismatch, box_volume
from .points import PointSet
from .sampling import latin_check


class NoAdmissibleC(ValueError):
    """No slab constant c in (1/84, 1/80] makes N c / d an integer."""


class PreconditionViolated(ValueError):
    """Instance parameters outside the guaranteed regime."""


class NotLatinWarning(UserWarning):
    """Input is not a Latin hypercube sample; guarantees are void."""


@dataclass(frozen=True)
class SlabConstant:
    """Slab constant c in (1/84, 1/80] with N c / d integral.

    k_int = N c / d is the exact number of points a Latin sample puts in
    each axis slab of width c/d; shrink_coord = 1 - k_int/N is the shrunk
    upper coordinate 1 - c/d, computed once so that every consumer (slab
    membership, box corners, volumes) compares against the same double.
    """

    n_points: int
    dim: int
    k_int: int
    c: float
    shrink_coord: float

    @property
    def n_slab(self) -> int:
        return self.k_int


@dataclass(frozen=True)
class TheoryConstants:
    """Constants derived from c: v = (1/5)(1 - c/2)^2, K = sqrt(c v^3)/80,
    and the expectation constant sqrt(c v^3) / (32 sqrt(2))."""

    v: float
    K: float
    expectation_const: float


@dataclass(frozen=True)
class WitnessStep:
    """Record of one axis decision (axes are numbered 2..d)."""

    j: int
    w_count: int
    p: float
    y_count: int
    threshold: float
    eta: int
    x: float
    volume: float
    excess: float


@dataclass
class WitnessTrace:
    """Full record of the construction on one point set."""

    n_points: int
    dim: int
    slab: SlabConstant
    stripe_upper: float
    stripe_count: int
    stripe_excess: float
    steps: list[WitnessStep] = field(default_factory=list)
    x_choices: list[float] = field(default_factory=list)
    eta_bits: list[int] = field(default_factory=list)
    k_count: int = 0
    final_box: AnchoredBox | None = None
    final_excess: float = 0.0
    lower_bound: float = 0.0


def compute_slab_constant(n_points: int, dim: int, strict: bool = True) -> SlabConstant:
    """Largest c in (1/84, 1/80] with N c / d integral, as c = k d / N.

    k must be the largest integer in (N/(84 d), N/(80 d)], i.e.
    k = floor(N / (80 d)) provided 84 d k > N.  Such a k always exists
    once N >= 1600 d: for N/d in [1600, 1680) the floor is 20 and
    84 d * 20 = 1680 d > N; at N/d = 1680 the floor 21 works; and for
    N/d > 1680 the interval has length N/(1680 d) > 1, so it contains an
    integer.  In strict mode N >= 1600 d is required up front.
    """
    if dim < 2:
        raise PreconditionViolated(f"construction needs dim >= 2, got {dim}")
    if strict and n_points < 1600 * dim:
        raise PreconditionViolated(
            f"strict mode requires N >= 1600 d ({1600 * dim}), got N = {n_points}; "
            "pass strict=False (--force) for exploratory runs"
        )
    k = n_points // (80 * dim)
    if k < 1 or 84 * dim * k <= n_points:
        lo = n_points / (84 * dim)
        hi = n_points / (80 * dim)
        raise NoAdmissibleC(
            f"no integer in ({lo:.6g}, {hi:.6g}] for N = {n_points}, d = {dim}"
        )
    return SlabConstant(
        n_points=n_points,
        dim=dim,
        k_int=k,
        c=k * dim / n_points,
        shrink_coord=1.0 - k / n_points,
    )


def theory_constants(sc: SlabConstant) -> TheoryConstants:
    v = 0.2 * (1.0 - sc.c / 2.0) ** 2
    root = math.sqrt(sc.c * v**3)
    return TheoryConstants(v=v, K=root / 80.0, expectation_const=root / (32.0 * math.sqrt(2.0)))


def build_witness(ps: PointSet, sc: SlabConstant) -> WitnessTrace:
    """Run the construction on ``ps`` and record every intermediate.

    The boxes are products of half-open intervals [0, x_i), the slab on
    axis j is [1 - c/d, 1), and all membership tests use the literal
    strict/non-strict comparisons, so the Latin counting identities
    (stripe count = floor(N/4), slab count = N c / d) hold exactly.
    Thresholds are evaluated in plain binary64: the counts are integers
    while n p - sqrt(n p)/2 is irrational for almost every sample, so the
    non-strict tie rule is safe without a rounding guard.
    """
    n, d = ps.n_points, ps.dim
    if (n, d) != (sc.n_points, sc.dim):
        raise DimensionMismatch(
            f"point set is {n} x {d}, slab constant is for {sc.n_points} x {sc.dim}"
        )
    if not latin_check(ps):
        warnings.warn(
            "input is not a Latin hypercube sample; the excess guarantees are void",
            NotLatinWarning,
            stacklevel=2,
        )

    coords = ps.coords
    stripe_upper = (n // 4) / n
    upper = np.ones(d, dtype=np.float64)
    upper[0] = stripe_upper

    inside = coords[:, 0] < stripe_upper  # remaining axes are full [0,1)
    stripe_count = int(inside.sum())
    volume = box_volume(AnchoredBox(upper))
    trace = WitnessTrace(
        n_points=n,
        dim=d,
        slab=sc,
        stripe_upper=stripe_upper,
        stripe_count=stripe_count,
        stripe_excess=stripe_count - n * volume,
    )

    shrink = sc.shrink_coord
    n_slab = sc.k_int
    for j in range(2, d + 1):
        col = coords[:, j - 1]
        w_count = int(inside.sum())
        p = w_count / n
        y_count = int((inside & (col >= shrink)).sum())
        mean = n_slab * p
        threshold = mean - math.sqrt(mean) / 2.0
        eta = 1 if y_count <= threshold else 0
        if eta:
            x_j = shrink
            upper[j - 1] = shrink
            inside &= col < shrink
        else:
            x_j = 1.0
        volume = box_volume(AnchoredBox(upper))
        exc_j = int(inside.sum()) - n * volume
        trace.steps.append(
            WitnessStep(j=j, w_count=w_count, p=p, y_count=y_count,
                        threshold=threshold, eta=eta, x=x_j,
                        volume=volume, excess=exc_j)
        )
        trace.x_choices.append(x_j)
        trace.eta_bits.append(eta)

    trace.k_count = sum(trace.eta_bits)
    trace.final_box = AnchoredBox(upper.copy())
    final_count = int(np.all(coords < upper, axis=1).sum())
    trace.final_excess = final_count - n * box_volume(trace.final_box)
    trace.lower_bound = trace.final_excess / n
    return trace


def witness_lower_bound(trace: WitnessTrace) -> float:
    """Certified lower bound for the star discrepancy: max(excess, 0) / N."""
    return max(trace.final_excess, 0.0) / trace.n_points
