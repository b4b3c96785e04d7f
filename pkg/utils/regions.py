"""Boxes, shapes and region parsing."""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass
from typing import Iterable, Iterator, Sequence, Tuple

from models.pydantic_models import RegionModel
from utils.exceptions import DimensionMismatchError, PreconditionError
from utils.lattice import Vector, vec_add, vec_sub

Shape = Tuple[Vector, ...]

_RANGE = re.compile(r"^\s*(-?\d+)\s*\.\.\s*(-?\d+)\s*$")


@dataclass(frozen=True)
class Box:
    """Inclusive integer box lo <= v <= hi (coordinatewise)."""

    lo: Vector
    hi: Vector

    def __post_init__(self):
        if len(self.lo) != len(self.hi):
            raise DimensionMismatchError(len(self.lo), len(self.hi), "box corner")
        if not self.lo:
            raise PreconditionError("box needs at least one axis")
        if any(a > b for a, b in zip(self.lo, self.hi)):
            raise PreconditionError(f"empty box {self.lo}..{self.hi}")

    @classmethod
    def cube(cls, dimension: int, lo: int, hi: int) -> "Box":
        return cls((lo,) * dimension, (hi,) * dimension)

    @classmethod
    def around(cls, points: Iterable[Sequence[int]]) -> "Box":
        pts = [tuple(p) for p in points]
        if not pts:
            raise PreconditionError("cannot bound an empty point set")
        d = len(pts[0])
        return cls(
            tuple(min(p[i] for p in pts) for i in range(d)),
            tuple(max(p[i] for p in pts) for i in range(d)),
        )

    @property
    def dimension(self) -> int:
        return len(self.lo)

    @property
    def shape(self) -> Tuple[int, ...]:
        return tuple(b - a + 1 for a, b in zip(self.lo, self.hi))

    @property
    def size(self) -> int:
        out = 1
        for s in self.shape:
            out *= s
        return out

    def points(self) -> Iterator[Vector]:
        """All points in lexicographic order (row-major)."""
        return itertools.product(*(range(a, b + 1) for a, b in zip(self.lo, self.hi)))

    def contains(self, v: Sequence[int]) -> bool:
        return all(a <= x <= b for a, x, b in zip(self.lo, v, self.hi))

    def expand(self, low: Sequence[int], high: Sequence[int]) -> "Box":
        """Move the lower corner by low and the upper corner by high."""
        return Box(vec_add(self.lo, low), vec_add(self.hi, high))

    def translate(self, v: Sequence[int]) -> "Box":
        return Box(vec_add(self.lo, v), vec_add(self.hi, v))

    def hull(self, other: "Box") -> "Box":
        return Box(
            tuple(min(a, b) for a, b in zip(self.lo, other.lo)),
            tuple(max(a, b) for a, b in zip(self.hi, other.hi)),
        )

    def index_of(self, v: Sequence[int]) -> Tuple[int, ...]:
        return tuple(vec_sub(v, self.lo))

    def to_text(self) -> str:
        return ",".join(f"{a}..{b}" for a, b in zip(self.lo, self.hi))

    def to_model(self) -> RegionModel:
        return RegionModel(lo=list(self.lo), hi=list(self.hi))


def parse_region(text: str, dimension: int) -> Box:
    """Parse 'a..b' (replicated on every axis) or 'a..b,c..d,...'."""
    parts = [p for p in text.split(",") if p.strip()]
    ranges = []
    for part in parts:
        match = _RANGE.match(part)
        if match is None:
            raise PreconditionError(f"bad range {part!r}, expected a..b")
        ranges.append((int(match.group(1)), int(match.group(2))))
    if len(ranges) == 1:
        ranges = ranges * dimension
    if len(ranges) != dimension:
        raise DimensionMismatchError(dimension, len(ranges), "region")
    return Box(tuple(a for a, _ in ranges), tuple(b for _, b in ranges))


def canonical_shape(points: Iterable[Sequence[int]]) -> Shape:
    """Deduplicated shape in lexicographic order."""
    shape = tuple(sorted({tuple(int(x) for x in p) for p in points}))
    if not shape:
        raise PreconditionError("shape must be nonempty")
    d = len(shape[0])
    for p in shape:
        if len(p) != d:
            raise DimensionMismatchError(d, len(p), "shape point")
    return shape


def rectangle(m: int, n: int) -> Shape:
    """[0, m) x [0, n)."""
    if m < 1 or n < 1:
        raise PreconditionError("rectangle sides must be positive")
    return tuple(itertools.product(range(m), range(n)))


def block(sizes: Sequence[int]) -> Shape:
    """Axis-aligned block [0, s_1) x ... x [0, s_d)."""
    if any(s < 1 for s in sizes):
        raise PreconditionError("block sides must be positive")
    return tuple(itertools.product(*(range(s) for s in sizes)))


def hypercube(n: int, dimension: int) -> Shape:
    return block((n,) * dimension)


def shape_box(shape: Sequence[Sequence[int]]) -> Box:
    return Box.around(shape)


def anchors_inside(region: Box, shape: Sequence[Sequence[int]]) -> Box:
    """Anchors v with v + shape inside region."""
    sb = shape_box(shape)
    lo = vec_sub(region.lo, sb.lo)
    hi = vec_sub(region.hi, sb.hi)
    if any(a > b for a, b in zip(lo, hi)):
        raise PreconditionError(
            f"region {region.to_text()} is too small for the shape"
        )
    return Box(lo, hi)
