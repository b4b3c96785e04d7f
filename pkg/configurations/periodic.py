"""Lattice-periodic and fiber-periodic configurations."""

from typing import Callable, Dict, Iterable, Mapping, Optional, Sequence

from configurations.base import Configuration
from configurations.structure import PeriodicStructure, fiber_structure
from logger.logging import get_logger
from utils.exceptions import DimensionMismatchError, PreconditionError
from utils.lattice import HermiteLattice, Vector, reduce_along, unit_vector

logger = get_logger(__name__)


class FullPeriodicConfig(Configuration):
    """Values read from a table indexed by canonical coset representatives.

    The period lattice is given by d independent basis vectors; the table
    holds exactly one value per coset of Z^d modulo the lattice, keyed by the
    Hermite-reduced representative.
    """

    def __init__(self, basis: Sequence[Sequence[int]], table: Mapping[Sequence[int], int]):
        self.lattice = HermiteLattice(basis)
        reduced: Dict[Vector, int] = {}
        for key, value in table.items():
            key = tuple(int(x) for x in key)
            if len(key) != self.lattice.dimension:
                raise DimensionMismatchError(self.lattice.dimension, len(key), "table key")
            rep = self.lattice.reduce(key)
            if rep in reduced:
                raise PreconditionError(f"two table entries for the coset of {rep}")
            reduced[rep] = int(value)
        if len(reduced) != self.lattice.index:
            raise PreconditionError(
                f"table has {len(reduced)} entries, lattice has {self.lattice.index} cosets"
            )
        self.table = reduced
        super().__init__(self.lattice.dimension, alphabet=set(reduced.values()))

    @classmethod
    def from_function(
        cls, basis: Sequence[Sequence[int]], fn: Callable[[Vector], int]
    ) -> "FullPeriodicConfig":
        lattice = HermiteLattice(basis)
        return cls(basis, {r: fn(r) for r in lattice.representatives()})

    def _value(self, v: Vector) -> int:
        return self.table[self.lattice.reduce(v)]

    def structure(self) -> PeriodicStructure:
        return PeriodicStructure(
            self.dimension,
            self.lattice.index,
            tuple(self.lattice.representatives()),
        )


class FiberPeriodicConfig(Configuration):
    """Periodic along one vector u, nonzero on finitely many lines.

    ``seeds`` maps points to values; each point stands for its whole class
    modulo Z*u, so the configuration is u-periodic and supported on the lines
    through the seeds.
    """

    def __init__(self, period: Sequence[int], seeds: Mapping[Sequence[int], int]):
        period = tuple(int(x) for x in period)
        if len(period) < 2:
            raise PreconditionError("fiber-periodic configurations need dimension >= 2")
        if not any(period):
            raise PreconditionError("period vector must be nonzero")
        self.period = period
        reduced: Dict[Vector, int] = {}
        for key, value in seeds.items():
            key = tuple(int(x) for x in key)
            if len(key) != len(period):
                raise DimensionMismatchError(len(period), len(key), "seed")
            rep = reduce_along(key, period)
            if rep in reduced and reduced[rep] != int(value):
                raise PreconditionError(f"conflicting seeds for the class of {rep}")
            if value:
                reduced[rep] = int(value)
        self.seeds = reduced
        super().__init__(len(period), alphabet=set(reduced.values()) | {0})

    def _value(self, v: Vector) -> int:
        return self.seeds.get(reduce_along(v, self.period), 0)

    def structure(self) -> PeriodicStructure:
        return fiber_structure(self.period, self.seeds)


def constant(dimension: int, value: int) -> FullPeriodicConfig:
    basis = [unit_vector(dimension, i) for i in range(dimension)]
    return FullPeriodicConfig(basis, {(0,) * dimension: value})


def zero(dimension: int) -> FullPeriodicConfig:
    return constant(dimension, 0)


def indicator_lattice(
    basis: Sequence[Sequence[int]], residues: Optional[Iterable[Sequence[int]]] = None
) -> FullPeriodicConfig:
    """Binary indicator of the union of cosets ``residues + L`` (default: L itself)."""
    lattice = HermiteLattice(basis)
    if residues is None:
        residues = [(0,) * lattice.dimension]
    ones = {lattice.reduce(r) for r in residues}
    return FullPeriodicConfig.from_function(basis, lambda r: 1 if r in ones else 0)
