"""Point sets in [0,1)^d with multiset semantics and exact text round-trip.

Coordinates are binary64 and serialized with 17 significant digits so a
write/read cycle reproduces every value bit for bit.  Duplicate points are
legal and all counting operations respect multiplicity.
"""

from __future__ import annotations

import io
from dataclasses import dataclass
from typing import IO, Iterable

import numpy as np

HEADER = "# pointset v1"

#: Largest binary64 strictly below 1.0.
ONE_BELOW = float(np.nextafter(1.0, 0.0))


class PointSetError(ValueError):
    """Base class for point-set validation and parsing errors."""


class CoordinateOutOfRange(PointSetError):
    """A coordinate lies outside the half-open domain [0, 1)."""


class ShapeMismatch(PointSetError):
    """Coordinate data inconsistent with the declared (n_points, dim)."""


class ParseError(PointSetError):
    """Malformed pointset text; carries the offending line number."""

    def __init__(self, lineno: int, message: str):
        super().__init__(f"line {lineno}: {message}")
        self.lineno = lineno


@dataclass(frozen=True)
class PointSet:
    """N points in [0,1)^d, stored as a read-only (N, d) float64 array."""

    coords: np.ndarray

    def __post_init__(self) -> None:
        arr = np.array(self.coords, dtype=np.float64, order="C", copy=True)
        if arr.ndim != 2:
            raise ShapeMismatch(f"coords must be 2-dimensional, got ndim={arr.ndim}")
        arr.flags.writeable = False
        object.__setattr__(self, "coords", arr)

    @property
    def n_points(self) -> int:
        return self.coords.shape[0]

    @property
    def dim(self) -> int:
        return self.coords.shape[1]

    @classmethod
    def from_flat(cls, n_points: int, dim: int, values: Iterable[float]) -> "PointSet":
        flat = np.asarray(list(values), dtype=np.float64)
        if n_points <= 0 or dim <= 0:
            raise ShapeMismatch(f"n_points and dim must be positive, got {n_points} x {dim}")
        if flat.size != n_points * dim:
            raise ShapeMismatch(
                f"expected {n_points * dim} coordinates for {n_points} x {dim}, got {flat.size}"
            )
        return cls(flat.reshape(n_points, dim))


def validate_pointset(ps: PointSet) -> None:
    """Raise unless every invariant holds; names the first offending entry."""
    if ps.n_points < 1 or ps.dim < 1:
        raise ShapeMismatch(f"point set must be non-empty, got {ps.n_points} x {ps.dim}")
    coords = ps.coords
    # `not (0 <= v < 1)` also rejects NaN, which fails both comparisons.
    bad = ~((coords >= 0.0) & (coords < 1.0))
    if bad.any():
        row, col = np.argwhere(bad)[0]
        value = coords[row, col]
        raise CoordinateOutOfRange(
            f"coordinate [{row},{col}] = {value!r} outside [0, 1)"
        )


def write_pointset(ps: PointSet, f: IO[str]) -> None:
    """Serialize in pointset v1 format with 17 significant digits per value."""
    f.write(HEADER + "\n")
    f.write(f"{ps.n_points} {ps.dim}\n")
    for row in ps.coords:
        f.write(" ".join("%.16e" % v for v in row) + "\n")


def pointset_to_text(ps: PointSet) -> str:
    buf = io.StringIO()
    write_pointset(ps, buf)
    return buf.getvalue()


def _is_ignorable(line: str) -> bool:
    s = line.strip()
    return not s or s.startswith("#")


def read_pointset(f: IO[str] | Iterable[str]) -> PointSet:
    """Parse pointset v1 text; inverse of write_pointset, bit-exact."""
    lines = list(f)
    if not lines or lines[0].strip() != HEADER:
        raise ParseError(1, f"expected header {HEADER!r}")

    pos = 1  # 0-based index of the next unread line

    def next_content() -> tuple[int, str] | None:
        nonlocal pos
        while pos < len(lines):
            line = lines[pos]
            pos += 1
            if not _is_ignorable(line):
                return pos, line  # 1-based line number
        return None

    got = next_content()
    if got is None:
        raise ParseError(len(lines) + 1, "missing '<N> <d>' line")
    lineno, line = got
    parts = line.split()
    if len(parts) != 2:
        raise ParseError(lineno, f"expected '<N> <d>', got {line.strip()!r}")
    try:
        n_points, dim = int(parts[0]), int(parts[1])
    except ValueError:
        raise ParseError(lineno, f"expected two integers, got {line.strip()!r}") from None
    if n_points < 1:
        raise ParseError(lineno, f"N must be positive, got {n_points}")
    if dim < 1:
        raise ParseError(lineno, f"d must be positive, got {dim}")

    values: list[float] = []
    for _ in range(n_points):
        got = next_content()
        if got is None:
            raise ParseError(len(lines) + 1, f"expected {n_points} data rows, file ended early")
        lineno, line = got
        fields = line.split()
        if len(fields) != dim:
            raise ParseError(lineno, f"expected {dim} fields, got {len(fields)}")
        try:
            values.extend(float(tok) for tok in fields)
        except ValueError:
            raise ParseError(lineno, f"unparseable real number in {line.strip()!r}") from None

    trailing = next_content()
    if trailing is not None:
        raise ParseError(trailing[0], f"found more than the declared {n_points} data rows")

    ps = PointSet.from_flat(n_points, dim, values)
    validate_pointset(ps)
    return ps


def pointset_from_text(text: str) -> PointSet:
    return read_pointset(text.splitlines())
