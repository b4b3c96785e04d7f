"""Beatty configurations floor(<w, v> * alpha) for quadratic irrationals alpha.

alpha = (p + s*sqrt(q)) / r. Floors are computed with integer square roots
only, so values are exact for every integer argument.
"""

from dataclasses import dataclass
from functools import lru_cache
from math import isqrt
from typing import Sequence

import numpy as np

from configurations.base import Configuration
from utils.exceptions import DimensionMismatchError, PreconditionError
from utils.lattice import Vector
from utils.regions import Box


@dataclass(frozen=True)
class QuadraticIrrational:
    p: int
    s: int
    q: int
    r: int

    def __post_init__(self):
        if self.r == 0:
            raise PreconditionError("denominator r must be nonzero")
        if self.q < 0:
            raise PreconditionError("radicand q must be non-negative")

    @classmethod
    def golden(cls) -> "QuadraticIrrational":
        return cls(1, 1, 5, 2)

    def text(self) -> str:
        return f"({self.p} + {self.s}*sqrt({self.q}))/{self.r}"


def _floor_sqrt_multiple(t: int, q: int):
    """(floor(t*sqrt(q)), exact?) for integer t."""
    radicand = t * t * q
    root = isqrt(radicand)
    exact = root * root == radicand
    if t >= 0:
        return root, exact
    return (-root if exact else -root - 1), exact


@lru_cache(maxsize=1 << 16)
def beatty_floor(p: int, s: int, q: int, r: int, k: int) -> int:
    """floor(k * (p + s*sqrt(q)) / r), exactly.

    >>> beatty_floor(1, 1, 5, 2, 2)
    3
    >>> beatty_floor(1, 1, 5, 2, -1)
    -2
    """
    if r == 0:
        raise PreconditionError("denominator r must be nonzero")
    if q < 0:
        raise PreconditionError("radicand q must be non-negative")
    whole, exact = _floor_sqrt_multiple(k * s, q)
    # k*alpha*r = A + theta with A integer and 0 <= theta < 1
    a = k * p + whole
    if r > 0:
        return a // r
    if exact:
        return (-a) // (-r)
    return (-a - 1) // (-r)


class BeattyConfig(Configuration):
    """c(v) = floor(<w, v> * alpha)."""

    def __init__(self, alpha: QuadraticIrrational, weights: Sequence[int]):
        weights = tuple(int(w) for w in weights)
        if not weights:
            raise PreconditionError("weight vector must be nonempty")
        self.alpha = alpha
        self.weights = weights
        super().__init__(len(weights))

    def _floor(self, k: int) -> int:
        a = self.alpha
        return beatty_floor(a.p, a.s, a.q, a.r, k)

    def _value(self, v: Vector) -> int:
        return self._floor(sum(w * x for w, x in zip(self.weights, v)))

    def _window(self, box: Box) -> np.ndarray:
        if len(box.lo) != self.dimension:
            raise DimensionMismatchError(self.dimension, len(box.lo), "box corner")
        grid = np.indices(box.shape)
        k = sum(w * (grid[i] + box.lo[i]) for i, w in enumerate(self.weights))
        values = {key: self._floor(int(key)) for key in set(np.asarray(k).flat)}
        return np.vectorize(values.__getitem__, otypes=[object])(k)
