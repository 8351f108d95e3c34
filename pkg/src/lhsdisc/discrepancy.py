"""Local and star discrepancy of point sets over anchored boxes [0, y).

The star discrepancy is the supremum over y in [0,1]^d of
|count([0,y))/N - volume([0,y))|.  The supremum is attained on the
critical grid whose per-axis values are the distinct point coordinates
plus 1: the deficiency side (volume minus count) is maximal at grid
points with open counting (x < y strictly), and the surplus side is the
limit from above of boxes shrinking onto a grid point, realized by closed
counting (x <= y).  Evaluating both sides on the grid therefore gives the
exact supremum with no epsilon perturbation anywhere; coordinates are
exact binary64 values and strict/non-strict comparisons are well defined.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .points import PointSet
from .rng import Stream, derive


class DimensionMismatch(ValueError):
    """Box dimension differs from the point set dimension."""


class BudgetExceeded(RuntimeError):
    """Exact enumeration would exceed the configured grid budget."""

    def __init__(self, required: int, budget: int):
        super().__init__(
            f"exact enumeration needs {required} grid evaluations, budget is {budget}"
        )
        self.required = required
        self.budget = budget


@dataclass(frozen=True)
class AnchoredBox:
    """Upper corner y of the half-open box [0, y); 0 <= y_j <= 1."""

    upper: np.ndarray

    def __post_init__(self) -> None:
        arr = np.array(self.upper, dtype=np.float64, copy=True)
        if arr.ndim != 1:
            raise ValueError("box corner must be a 1-d vector")
        if arr.size == 0 or np.any(~((arr >= 0.0) & (arr <= 1.0))):
            raise ValueError(f"box corner components must lie in [0, 1], got {arr}")
        arr.flags.writeable = False
        object.__setattr__(self, "upper", arr)

    @property
    def dim(self) -> int:
        return self.upper.shape[0]


@dataclass(frozen=True)
class DiscrepancyCertificate:
    """Exact star discrepancy value with the box attaining it.

    closed_sided is True when the maximum is the limit of boxes shrinking
    onto the corner from above (closed counting), False when the corner
    box itself attains it (open counting).
    """

    value: float
    argmax_box: AnchoredBox
    closed_sided: bool


def box_volume(box: AnchoredBox) -> float:
    """Volume of [0, y): left-to-right product of the corner components."""
    v = 1.0
    for y in box.upper:
        v *= float(y)
    return v


def _require_same_dim(ps: PointSet, box: AnchoredBox) -> None:
    if ps.dim != box.dim:
        raise DimensionMismatch(f"point set has dim {ps.dim}, box has dim {box.dim}")


def count_open(ps: PointSet, box: AnchoredBox) -> int:
    """Number of points (with multiplicity) with x_j < y_j for all j."""
    _require_same_dim(ps, box)
    return int(np.all(ps.coords < box.upper, axis=1).sum())


def count_closed(ps: PointSet, box: AnchoredBox) -> int:
    """Number of points (with multiplicity) with x_j <= y_j for all j."""
    _require_same_dim(ps, box)
    return int(np.all(ps.coords <= box.upper, axis=1).sum())


def local_discrepancy(ps: PointSet, box: AnchoredBox) -> float:
    """| count([0,y))/N - volume([0,y)) |."""
    return abs(count_open(ps, box) / ps.n_points - box_volume(box))


def excess(ps: PointSet, box: AnchoredBox) -> float:
    """Signed surplus of points in [0, y): count - N * volume."""
    return count_open(ps, box) - ps.n_points * box_volume(box)


def _grids(coords: np.ndarray) -> list[np.ndarray]:
    # Distinct coordinates per axis plus 1; 0 enters only as a coordinate.
    out = []
    for j in range(coords.shape[1]):
        vals = np.unique(coords[:, j])
        out.append(np.append(vals, 1.0))
    return out


class _Best:
    __slots__ = ("value", "upper", "closed")

    def __init__(self) -> None:
        self.value = -np.inf
        self.upper: list[float] | None = None
        self.closed = False


def _scan_last_axis(
    n_points: int,
    grid: np.ndarray,
    open_vals: np.ndarray,
    closed_vals: np.ndarray,
    vol_prefix: float,
    prefix: list[float],
    best: _Best,
) -> None:
    open_sorted = np.sort(open_vals)
    closed_sorted = np.sort(closed_vals)
    cnt_open = np.searchsorted(open_sorted, grid, side="left")
    cnt_closed = np.searchsorted(closed_sorted, grid, side="right")
    vols = vol_prefix * grid
    d_plus = cnt_closed / n_points - vols
    d_minus = vols - cnt_open / n_points
    cand = np.where(d_plus >= d_minus, d_plus, d_minus)
    i = int(np.argmax(cand))
    if cand[i] > best.value:
        best.value = float(cand[i])
        best.upper = prefix + [float(grid[i])]
        best.closed = bool(d_plus[i] >= d_minus[i])


def star_discrepancy_exact(ps: PointSet, budget: int = 10**9) -> DiscrepancyCertificate:
    """Exact star discrepancy via critical-grid enumeration.

    Depth-first over the axes with per-prefix filtering of the surviving
    points, so the innermost axis costs O(survivors).  The scan visits
    grid corners in lexicographic order and updates only on strictly
    larger values, which makes the reported argmax the lexicographically
    smallest maximizer.  Raises BudgetExceeded (reporting the required
    grid size) before doing any work if the grid is too large.
    """
    coords = ps.coords
    n, d = coords.shape
    grids = _grids(coords)
    required = 1
    for g in grids:
        required *= len(g)
    if required > budget:
        raise BudgetExceeded(required, budget)

    best = _Best()

    def recurse(axis: int, open_idx: np.ndarray, closed_idx: np.ndarray,
                vol_prefix: float, prefix: list[float]) -> None:
        if axis == d - 1:
            _scan_last_axis(n, grids[axis], coords[open_idx, axis],
                            coords[closed_idx, axis], vol_prefix, prefix, best)
            return
        open_col = coords[open_idx, axis]
        closed_col = coords[closed_idx, axis]
        for y in grids[axis]:
            recurse(axis + 1,
                    open_idx[open_col < y],
                    closed_idx[closed_col <= y],
                    vol_prefix * y,
                    prefix + [float(y)])

    all_idx = np.arange(n)
    recurse(0, all_idx, all_idx, 1.0, [])
    assert best.upper is not None
    return DiscrepancyCertificate(best.value, AnchoredBox(np.array(best.upper)), best.closed)


def star_discrepancy_exact_2d(ps: PointSet) -> DiscrepancyCertificate:
    """Exact star discrepancy in dimension 2, O(N^2) time and O(N) memory.

    Sweeps the first-axis grid in ascending order while keeping the
    second coordinates of the points passed so far in a sorted buffer;
    open/closed counts for the whole second-axis grid come from two
    binary searches per sweep step.  Produces the same candidate values
    and scan order as the generic algorithm, hence bit-equal results.
    """
    if ps.dim != 2:
        raise DimensionMismatch(f"specialization requires dim 2, got {ps.dim}")
    coords = ps.coords
    n = ps.n_points
    gx, gy = _grids(coords)

    order = np.argsort(coords[:, 0], kind="stable")
    xs = coords[order, 0]
    ys = coords[order, 1]

    buf = np.empty(0, dtype=np.float64)  # sorted y's of points with x <= current a
    ptr = 0
    best = _Best()
    for a in gx:
        cnt_open = np.searchsorted(buf, gy, side="left")  # buffer holds x < a here
        start = ptr
        while ptr < n and xs[ptr] == a:
            ptr += 1
        if ptr > start:
            batch = np.sort(ys[start:ptr])
            buf = np.insert(buf, np.searchsorted(buf, batch), batch)
        cnt_closed = np.searchsorted(buf, gy, side="right")  # buffer now holds x <= a
        vols = a * gy
        d_plus = cnt_closed / n - vols
        d_minus = vols - cnt_open / n
        cand = np.where(d_plus >= d_minus, d_plus, d_minus)
        i = int(np.argmax(cand))
        if cand[i] > best.value:
            best.value = float(cand[i])
            best.upper = [float(a), float(gy[i])]
            best.closed = bool(d_plus[i] >= d_minus[i])
    assert best.upper is not None
    return DiscrepancyCertificate(best.value, AnchoredBox(np.array(best.upper)), best.closed)


def _candidate_value(ps: PointSet, box: AnchoredBox) -> tuple[float, bool]:
    # Max of the open evaluation and the closed-limit surplus; each is a
    # valid lower bound for the star discrepancy.
    vol = box_volume(box)
    open_val = abs(count_open(ps, box) / ps.n_points - vol)
    closed_val = count_closed(ps, box) / ps.n_points - vol
    if closed_val >= open_val:
        return closed_val, True
    return open_val, False


def star_discrepancy_lower_estimate(
    ps: PointSet,
    budget: int,
    seed: int = 0,
    extra_boxes: Sequence[AnchoredBox] = (),
) -> tuple[float, AnchoredBox]:
    """Certified lower bound for the star discrepancy.

    Takes the best local discrepancy (open and closed-limit evaluations)
    over the boxes anchored at each point, ``budget`` random corners drawn
    from the critical grid, and any caller-supplied boxes.  For a fixed
    seed the random corners form a prefix stream, so a larger budget never
    lowers the result.
    """
    if budget < 1:
        raise ValueError("budget must be >= 1")
    best_val = -np.inf
    best_box: AnchoredBox | None = None

    def consider(box: AnchoredBox) -> None:
        nonlocal best_val, best_box
        val, _ = _candidate_value(ps, box)
        if val > best_val:
            best_val = val
            best_box = box

    for box in extra_boxes:
        consider(box)
    for row in ps.coords:
        consider(AnchoredBox(row.copy()))

    grids = _grids(ps.coords)
    stream = Stream(derive(seed, "lower-estimate"))
    for _ in range(budget):
        corner = np.array([g[stream.randbelow(len(g))] for g in grids])
        consider(AnchoredBox(corner))

    assert best_box is not None
    return float(best_val), best_box
