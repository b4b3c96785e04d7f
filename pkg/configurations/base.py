"""Configuration oracles over Z^d."""

from abc import ABC, abstractmethod
from typing import FrozenSet, Iterable, Optional, Sequence, Tuple

import numpy as np

from configurations.structure import PeriodicStructure
from logger.logging import get_logger
from models.pydantic_models import ExactnessClass
from utils.exceptions import DimensionMismatchError, PreconditionError, VerificationFailure
from utils.lattice import Vector, vec_add
from utils.regions import Box

logger = get_logger(__name__)


class Configuration(ABC):
    """Deterministic integer coefficient oracle c: Z^d -> Z.

    Subclasses implement ``_value`` and may override ``_window`` with a
    vectorized version and ``structure`` with a finite certificate of
    periodicity. Windows are numpy object arrays so big integers survive;
    axis i of ``window(box)`` is coordinate i and ``array[idx]`` holds the
    value at ``box.lo + idx``.
    """

    def __init__(self, dimension: int, alphabet: Optional[Iterable[int]] = None):
        if dimension < 1:
            raise PreconditionError("dimension must be at least 1")
        self._dimension = dimension
        self._alphabet: Optional[FrozenSet[int]] = (
            frozenset(int(a) for a in alphabet) if alphabet is not None else None
        )

    @property
    def dimension(self) -> int:
        return self._dimension

    @property
    def alphabet(self) -> Optional[FrozenSet[int]]:
        """Declared finite value set, or None when unbounded/undeclared."""
        return self._alphabet

    @property
    def kind(self) -> str:
        return type(self).__name__

    @abstractmethod
    def _value(self, v: Vector) -> int:
        """Coefficient at v, no validation."""

    def structure(self) -> Optional[PeriodicStructure]:
        return None

    @property
    def exactness_class(self) -> ExactnessClass:
        structure = self.structure()
        if structure is None:
            return ExactnessClass.ORACLE_ONLY
        return structure.exactness_class

    def _check_dimension(self, v: Sequence[int], what: str = "position"):
        if len(v) != self._dimension:
            raise DimensionMismatchError(self._dimension, len(v), what)

    def coefficient(self, v: Sequence[int]) -> int:
        self._check_dimension(v)
        value = self._value(tuple(int(x) for x in v))
        if self._alphabet is not None and value not in self._alphabet:
            raise VerificationFailure(
                f"value {value} outside declared alphabet {sorted(self._alphabet)}",
                position=tuple(v),
                value=value,
            )
        return value

    def _window(self, box: Box) -> np.ndarray:
        out = np.empty(box.shape, dtype=object)
        for p in box.points():
            out[box.index_of(p)] = self._value(p)
        return out

    def window(self, box: Box) -> np.ndarray:
        self._check_dimension(box.lo, "box corner")
        out = self._window(box)
        if self._alphabet is not None:
            seen = set(out.flat)
            stray = seen - self._alphabet
            if stray:
                value = min(stray)
                idx = tuple(int(i) for i in np.argwhere(out == value)[0])
                raise VerificationFailure(
                    f"value {value} outside declared alphabet {sorted(self._alphabet)}",
                    position=vec_add(box.lo, idx),
                    value=value,
                )
        return out

    def pattern(self, v: Sequence[int], shape: Sequence[Sequence[int]]) -> Tuple[int, ...]:
        self._check_dimension(v)
        return tuple(self._value(vec_add(v, u)) for u in shape)

    def __repr__(self) -> str:
        return f"{self.kind}(d={self._dimension})"


def coefficient(c: Configuration, v: Sequence[int]) -> int:
    return c.coefficient(v)


def window(c: Configuration, box: Box) -> np.ndarray:
    return c.window(box)


def pattern(c: Configuration, v: Sequence[int], shape: Sequence[Sequence[int]]) -> Tuple[int, ...]:
    """D-pattern at v; shape is expected in canonical (lexicographic) order."""
    return c.pattern(v, shape)


def pattern_matrix(
    c: Configuration, shape: Sequence[Sequence[int]], anchors: Box
) -> np.ndarray:
    """Row k is the shape-pattern at the k-th anchor (anchors in lexicographic order).

    One window covering ``anchors + shape`` is materialized and each shape
    cell contributes a shifted slice of it.
    """
    shape = [tuple(u) for u in shape]
    d = c.dimension
    low = tuple(min(u[i] for u in shape) for i in range(d))
    high = tuple(max(u[i] for u in shape) for i in range(d))
    cover = Box(vec_add(anchors.lo, low), vec_add(anchors.hi, high))
    big = c.window(cover)
    columns = []
    for u in shape:
        start = tuple(a - b for a, b in zip(u, low))
        sl = tuple(slice(s, s + n) for s, n in zip(start, anchors.shape))
        columns.append(big[sl].reshape(-1))
    return np.stack(columns, axis=1)
