"""Finite grids [N]^n and exact-density point sets.

The ambient space is [N]^n = {0,1,...,N-1}^n.  Points are plain integer
tuples.  A PointSet keeps its members both as tuples (for geometry) and as
flat indices sum(p_i * N^i) in a frozenset (for O(1) membership), and every
density it reports is an exact Fraction.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from typing import Iterable, Iterator, Sequence, Union

from .exactmath import as_fraction

Point = tuple[int, ...]

# Largest grid an operation may materialize cell-by-cell (full grids,
# exhaustive subset scans, samplers).  The types themselves carry no cap.
MATERIALIZE_LIMIT = 1 << 24


@dataclass(frozen=True)
class GridParams:
    """The grid [N]^n: `base` is N >= 2, `dim` is n >= 0."""

    base: int
    dim: int

    def __post_init__(self) -> None:
        if not isinstance(self.base, int) or self.base < 2:
            raise ValueError(f"grid base must be an integer >= 2, got {self.base!r}")
        if not isinstance(self.dim, int) or self.dim < 0:
            raise ValueError(f"grid dimension must be an integer >= 0, got {self.dim!r}")

    @property
    def size(self) -> int:
        return self.base ** self.dim

    def contains(self, point: Sequence[int]) -> bool:
        return len(point) == self.dim and all(0 <= x < self.base for x in point)

    def check_point(self, point: Sequence[int]) -> Point:
        p = tuple(int(x) for x in point)
        if not self.contains(p):
            raise ValueError(f"point {p} outside grid [{self.base}]^{self.dim}")
        return p

    def index_of(self, point: Sequence[int]) -> int:
        idx = 0
        for i, x in enumerate(point):
            idx += x * self.base ** i
        return idx

    def point_of(self, index: int) -> Point:
        coords = []
        for _ in range(self.dim):
            index, rem = divmod(index, self.base)
            coords.append(rem)
        return tuple(coords)

    def points(self) -> Iterator[Point]:
        """All grid points in lexicographic order. Requires a desk-scale grid."""
        if self.size > MATERIALIZE_LIMIT:
            raise ValueError(f"grid with {self.size} cells is too large to materialize")
        return product(range(self.base), repeat=self.dim)


class PointSet:
    """An immutable finite subset of a grid with exact cardinality/density."""

    __slots__ = ("grid", "_points", "_indices")

    def __init__(self, grid: GridParams, points: Iterable[Sequence[int]]):
        pts = frozenset(grid.check_point(p) for p in points)
        object.__setattr__(self, "grid", grid)
        object.__setattr__(self, "_points", pts)
        object.__setattr__(self, "_indices", frozenset(grid.index_of(p) for p in pts))

    def __setattr__(self, name, value):  # pragma: no cover - immutability guard
        raise AttributeError("PointSet is immutable")

    def __reduce__(self):
        # the immutability guard blocks default slot-state pickling
        return (PointSet, (self.grid, tuple(self._points)))

    @classmethod
    def from_indices(cls, grid: GridParams, indices: Iterable[int]) -> "PointSet":
        return cls(grid, (grid.point_of(i) for i in indices))

    @classmethod
    def full(cls, grid: GridParams) -> "PointSet":
        return cls(grid, grid.points())

    @classmethod
    def empty(cls, grid: GridParams) -> "PointSet":
        return cls(grid, ())

    @property
    def indices(self) -> frozenset[int]:
        return self._indices

    @property
    def tuple_set(self) -> frozenset[Point]:
        return self._points

    def points(self) -> list[Point]:
        """Members as tuples, lexicographically sorted (deterministic)."""
        return sorted(self._points)

    def __contains__(self, point: Sequence[int]) -> bool:
        return tuple(point) in self._points

    def contains_index(self, index: int) -> bool:
        return index in self._indices

    def __len__(self) -> int:
        return len(self._points)

    def __iter__(self) -> Iterator[Point]:
        return iter(self.points())

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, PointSet)
            and self.grid == other.grid
            and self._points == other._points
        )

    def __hash__(self) -> int:
        return hash((self.grid, self._points))

    def __repr__(self) -> str:
        return f"PointSet([{self.grid.base}]^{self.grid.dim}, {len(self)} points)"

    def density(self) -> Fraction:
        return Fraction(len(self._points), self.grid.size)

    def intersection(self, other: "PointSet") -> "PointSet":
        if self.grid != other.grid:
            raise ValueError("intersection requires a common grid")
        return PointSet(self.grid, self._points & other._points)


def density(s: PointSet) -> Fraction:
    """|S| / N^n as an exact rational."""
    return s.density()


def split_by_prefix(s: PointSet, r: int) -> dict[Point, PointSet]:
    """Fibers T_a = {p : a x p in S} for every prefix a of length r.

    Only nonempty fibers appear in the returned map; absent prefixes have
    empty fibers.  The prefix is the first r coordinates.
    """
    n = s.grid.dim
    if not 1 <= r < n:
        raise ValueError(f"prefix length must satisfy 1 <= r < {n}, got {r}")
    inner = GridParams(s.grid.base, n - r)
    buckets: dict[Point, set[Point]] = {}
    for p in s.tuple_set:
        buckets.setdefault(p[:r], set()).add(p[r:])
    return {a: PointSet(inner, suffixes) for a, suffixes in buckets.items()}


def count_heavy_prefixes(s: PointSet, r: int, c) -> int:
    """Number of prefixes a in [N]^r whose fiber has density >= c/2."""
    c = as_fraction(c)
    if not 0 < c <= 1:
        raise ValueError(f"density threshold must lie in (0, 1], got {c}")
    half = c / 2
    fibers = split_by_prefix(s, r)
    return sum(1 for t in fibers.values() if t.density() >= half)


def max_pair_intersection(family: Sequence[PointSet]) -> tuple[int, int, Fraction]:
    """Pair (i, j), i < j, maximizing the density of X_i intersect X_j.

    Indices are 0-based positions in `family`; ties resolve to the first
    pair in scan order.
    """
    if len(family) < 2:
        raise ValueError("need at least two sets")
    grid = family[0].grid
    for x in family[1:]:
        if x.grid != grid:
            raise ValueError("all sets must share one grid")
    best = None
    for i in range(len(family)):
        for j in range(i + 1, len(family)):
            d = Fraction(len(family[i].tuple_set & family[j].tuple_set), grid.size)
            if best is None or d > best[2]:
                best = (i, j, d)
    return best


def entropy_profile(
    samples: Sequence[tuple[int, int]], base: int
) -> tuple[list[Union[Fraction, float]], Union[Fraction, float]]:
    """Values log_base(size_i)/n_i for each (n_i, size_i), plus their maximum.

    The value is an exact Fraction whenever size_i is a power of the base,
    and a float otherwise (the quantity is irrational then).
    """
    if not samples:
        raise ValueError("entropy profile of an empty sample list")
    if base < 2:
        raise ValueError(f"base must be >= 2, got {base}")
    values: list[Union[Fraction, float]] = []
    for n_i, size_i in samples:
        if n_i < 1 or size_i < 1:
            raise ValueError(f"need n >= 1 and size >= 1, got ({n_i}, {size_i})")
        k = 0
        power = 1
        while power < size_i:
            power *= base
            k += 1
        if power == size_i:
            values.append(Fraction(k, n_i))
        else:
            values.append(math.log(size_i, base) / n_i)
    return values, max(values)


def parse_point_set(text: str) -> PointSet:
    """Parse the point-set text format: header "N n", one point per line.

    Duplicate point lines are rejected; the format round-trips through
    format_point_set losslessly.
    """
    lines = [ln.strip() for ln in text.splitlines() if ln.strip()]
    if not lines:
        raise ValueError("empty point-set file")
    header = lines[0].split()
    if len(header) != 2:
        raise ValueError(f"header must be 'N n', got {lines[0]!r}")
    try:
        base, dim = int(header[0]), int(header[1])
    except ValueError as exc:
        raise ValueError(f"header must be two integers, got {lines[0]!r}") from exc
    grid = GridParams(base, dim)
    seen: set[Point] = set()
    for ln in lines[1:]:
        parts = ln.split()
        if len(parts) != dim:
            raise ValueError(f"expected {dim} coordinates, got {ln!r}")
        try:
            p = tuple(int(x) for x in parts)
        except ValueError as exc:
            raise ValueError(f"non-integer coordinate in {ln!r}") from exc
        if p in seen:
            raise ValueError(f"duplicate point line {ln!r}")
        if not grid.contains(p):
            raise ValueError(f"point {p} outside grid [{base}]^{dim}")
        seen.add(p)
    return PointSet(grid, seen)


def format_point_set(s: PointSet) -> str:
    """Serialize in the text format, points in lexicographic order."""
    lines = [f"{s.grid.base} {s.grid.dim}"]
    lines.extend(" ".join(str(x) for x in p) for p in s.points())
    return "\n".join(lines) + "\n"
