"""Geometry of D-dimensional qubit arrays and reclusive cube partitions.

A reclusive partition tiles the array with axis-aligned cubes of linear size
L (truncated at the boundary) and colors them with D+1 colors so that cubes
of the same color are at least L/D apart in the sup distance.  The tiling
comes from the lattice generated by an upper-triangular rational matrix with
unit diagonal; rescaling by any L that is a multiple of D makes all cube
corners integer.

All lattice arithmetic is done exactly (integers and Fractions) so that
"touching" and "distance at least L/D" are decided without floating point.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from .errors import PartitionError


@dataclass(frozen=True)
class ArrayShape:
    """Rectangular cell array: ``dims[k]`` cells along axis k.

    Cells are identified with integer coordinate vectors in
    ``prod([0, dims[k]))`` and with flat indices in row-major (C) order,
    last axis fastest.
    """

    dims: tuple[int, ...]

    def __post_init__(self):
        if len(self.dims) < 1 or any(d < 1 for d in self.dims):
            raise PartitionError(f"invalid array dims {self.dims}")
        object.__setattr__(self, "dims", tuple(int(d) for d in self.dims))

    @property
    def ndim(self) -> int:
        return len(self.dims)

    @property
    def n_cells(self) -> int:
        out = 1
        for d in self.dims:
            out *= d
        return out

    def coord_of(self, index: int) -> tuple[int, ...]:
        if not 0 <= index < self.n_cells:
            raise PartitionError(f"cell index {index} out of range")
        coord = []
        for d in reversed(self.dims):
            coord.append(index % d)
            index //= d
        return tuple(reversed(coord))

    def index_of(self, coord) -> int:
        if len(coord) != self.ndim:
            raise PartitionError(f"coordinate {coord} has wrong dimension")
        idx = 0
        for c, d in zip(coord, self.dims):
            if not 0 <= c < d:
                raise PartitionError(f"coordinate {coord} outside array {self.dims}")
            idx = idx * d + c
        return idx

    def cells(self):
        """Iterate all (index, coordinate) pairs in index order."""
        for i in range(self.n_cells):
            yield i, self.coord_of(i)

    def are_neighbors(self, i: int, j: int) -> bool:
        """True when cells i and j differ by one step along a single axis."""
        a, b = self.coord_of(i), self.coord_of(j)
        diffs = [abs(x - y) for x, y in zip(a, b)]
        return sum(diffs) == 1 and max(diffs) == 1


def generator_matrix(ndim: int) -> list[list[Fraction]]:
    """Upper-triangular lattice generator with unit diagonal, exact rationals.

    Entry (i, j) is 1 on the diagonal and (D - j) / D above it, with rows and
    columns counted from zero (so column j here is column j+1 one-based).
    """
    if ndim < 1:
        raise PartitionError("dimension must be at least 1")
    d = ndim
    return [
        [
            Fraction(1) if i == j else (Fraction(d - j, d) if i < j else Fraction(0))
            for j in range(d)
        ]
        for i in range(d)
    ]


def scaled_generator(ndim: int, size: int) -> list[list[int]]:
    """Integer matrix size * A.  Requires size to be a multiple of ndim."""
    if size < 1:
        raise PartitionError(f"cube size must be positive, got {size}")
    if size % ndim != 0:
        raise PartitionError(
            f"cube size {size} is not a multiple of the dimension {ndim}; "
            "the rescaled lattice would not have integer corners"
        )
    a = generator_matrix(ndim)
    out = []
    for row in a:
        scaled = [f * size for f in row]
        assert all(f.denominator == 1 for f in scaled)
        out.append([int(f) for f in scaled])
    return out


def coefficient_of_cell(coord, la: list[list[int]], size: int) -> tuple[int, ...]:
    """Lattice coefficient vector of the unique cube containing a cell.

    The cube anchored at ``la @ c`` covers the integer box
    ``[anchor, anchor + size - 1]`` per axis; back-substitution down the
    upper-triangular system yields c exactly.
    """
    d = len(coord)
    c = [0] * d
    for i in range(d - 1, -1, -1):
        t = sum(la[i][j] * c[j] for j in range(i + 1, d))
        c[i] = (coord[i] - t) // size
    return tuple(c)


def anchor_of(coeff, la: list[list[int]]) -> tuple[int, ...]:
    d = len(coeff)
    return tuple(sum(la[i][j] * coeff[j] for j in range(d)) for i in range(d))


def color_of(coeff, ndim: int) -> int:
    """Deterministic cube color in [1, ndim + 1].

    Touching cubes get distinct colors; validity is certified by
    :func:`coloring_is_valid` (exhaustively, per dimension).
    """
    s = sum((j + 1) * cj for j, cj in enumerate(coeff))
    return s % (ndim + 1) + 1


def _touching(delta, a: list[list[Fraction]]) -> bool:
    """Closed unit cubes anchored at lattice points differing by ``delta``
    touch or overlap exactly when the sup norm of A @ delta is <= 1."""
    d = len(delta)
    for i in range(d):
        v = sum(a[i][j] * delta[j] for j in range(d))
        if v > 1 or v < -1:
            return False
    return True


@lru_cache(maxsize=None)
def coloring_is_valid(ndim: int) -> bool:
    """Exhaustive scan certifying the color formula for this dimension.

    By lattice translation invariance, a touching same-color pair exists
    somewhere iff it exists for some coefficient offset in the scanned
    window, so scanning offsets in [-(D+2), D+2]^D covers all pairs.
    """
    a = generator_matrix(ndim)
    w = ndim + 2
    for delta in itertools.product(range(-w, w + 1), repeat=ndim):
        if all(x == 0 for x in delta):
            continue
        if not _touching(delta, a):
            continue
        if sum((j + 1) * dj for j, dj in enumerate(delta)) % (ndim + 1) == 0:
            return False
    return True


def greedy_touching_coloring(coeffs, ndim: int) -> dict[tuple[int, ...], int]:
    """Fallback coloring over the touching graph of the given cubes.

    Deterministic: cubes are processed in sorted coefficient order and take
    the smallest color not used by an already-colored touching neighbor.
    Only used if :func:`coloring_is_valid` ever fails for a dimension.
    """
    a = generator_matrix(ndim)
    ordered = sorted(coeffs)
    colors: dict[tuple[int, ...], int] = {}
    for c in ordered:
        used = set()
        for other, col in colors.items():
            delta = tuple(x - y for x, y in zip(c, other))
            if _touching(delta, a):
                used.add(col)
        k = 1
        while k in used:
            k += 1
        colors[c] = k
    return colors


@dataclass(frozen=True)
class Cube:
    """One (possibly truncated) cube of the partition.

    ``anchor`` is the corner with the smallest coordinates of the untruncated
    box; ``cells`` are the flat indices of the array cells it contains.
    """

    color: int
    anchor: tuple[int, ...]
    cells: tuple[int, ...]
    coeff: tuple[int, ...]


@dataclass(frozen=True)
class ReclusivePartition:
    shape: ArrayShape
    size: int
    classes: tuple[tuple[Cube, ...], ...]

    @property
    def ndim(self) -> int:
        return self.shape.ndim

    def all_cubes(self):
        for cls in self.classes:
            yield from cls

    def to_json(self) -> str:
        payload = {
            "L": self.size,
            "classes": [
                [
                    {
                        "anchor": list(cube.anchor),
                        "cells": [list(self.shape.coord_of(i)) for i in cube.cells],
                    }
                    for cube in cls
                ]
                for cls in self.classes
            ],
        }
        return json.dumps(payload, separators=(",", ":"), sort_keys=True)


def enumerate_cubes(shape: ArrayShape, size: int):
    """All cubes whose open interior meets the array, with their clipped cells.

    Returns a list of (coefficient, anchor, cells) sorted by anchor.  Every
    array cell lands in exactly one cube: the cell's half-open unit box has
    its interior point inside exactly one open lattice cube.
    """
    la = scaled_generator(shape.ndim, size)
    groups: dict[tuple[int, ...], list[int]] = {}
    for idx, coord in shape.cells():
        c = coefficient_of_cell(coord, la, size)
        groups.setdefault(c, []).append(idx)
    out = [(c, anchor_of(c, la), tuple(sorted(ix))) for c, ix in groups.items()]
    out.sort(key=lambda t: t[1])
    return out


def reclusive_partition(shape: ArrayShape, size: int) -> ReclusivePartition:
    """Partition the array into size-L cubes colored with ndim + 1 colors.

    Construction is O(n) in the cell count.  The lattice is anchored so the
    cube with zero coefficient has its minimal corner at the array origin.
    """
    cubes = enumerate_cubes(shape, size)
    d = shape.ndim
    if coloring_is_valid(d):
        colored = [Cube(color_of(c, d), anchor, cells, c) for c, anchor, cells in cubes]
        n_classes = d + 1
    else:
        fallback = greedy_touching_coloring([c for c, _, _ in cubes], d)
        colored = [Cube(fallback[c], anchor, cells, c) for c, anchor, cells in cubes]
        n_classes = max(fallback.values())
    classes: list[list[Cube]] = [[] for _ in range(n_classes)]
    for cube in colored:
        classes[cube.color - 1].append(cube)
    return ReclusivePartition(shape, size, tuple(tuple(cls) for cls in classes))


def box_distance(anchor_a, anchor_b, size: int) -> Fraction:
    """Sup distance between the closed untruncated boxes of two cubes."""
    gaps = [max(0, abs(a - b) - size) for a, b in zip(anchor_a, anchor_b)]
    return Fraction(max(gaps))


def check_partition(partition: ReclusivePartition) -> None:
    """Raise PartitionError if any structural invariant fails.

    Checks the exact tiling (each cell in exactly one cube), the cube size
    bound, and the minimum same-color box distance of size / ndim.
    """
    shape, size = partition.shape, partition.size
    seen: dict[int, tuple[int, ...]] = {}
    for cube in partition.all_cubes():
        if len(cube.cells) > size ** shape.ndim:
            raise PartitionError(f"cube at {cube.anchor} holds too many cells")
        for cell in cube.cells:
            if cell in seen:
                raise PartitionError(
                    f"cell {cell} lies in cubes at {seen[cell]} and {cube.anchor}")
            seen[cell] = cube.anchor
    if len(seen) != shape.n_cells:
        raise PartitionError("partition does not cover the array")
    need = Fraction(size, shape.ndim)
    for cls_index, cls in enumerate(partition.classes, start=1):
        for i in range(len(cls)):
            for j in range(i + 1, len(cls)):
                dist = box_distance(cls[i].anchor, cls[j].anchor, size)
                if dist < need:
                    raise PartitionError(
                        f"color {cls_index} cubes at {cls[i].anchor} and "
                        f"{cls[j].anchor} are {dist} apart, need {need}")
