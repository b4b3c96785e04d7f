"""Co-tiler verification for cluster tiles."""

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from itertools import permutations
from typing import Iterable, List, Optional, Sequence, Tuple

import numpy as np
from sympy import isprime

from algebra.laurent import LaurentPoly, difference_poly
from configurations.derived import poly_apply
from configurations.periodic import FullPeriodicConfig, indicator_lattice
from logger.logging import get_logger
from models.pydantic_models import (
    AnnihilationStatus,
    LatticeCotilerSearch,
    PrimePeriodReport,
    TilingResidualReport,
    TilingStatus,
    TilingVerdict,
)
from services.annihilator_service import AnnihilatorService
from utils.config_loader import ConfigLoader
from utils.exceptions import DimensionMismatchError, PreconditionError, VerificationFailure
from utils.lattice import Vector, sublattices_of_index, vec_neg, vec_scale, vec_sub
from utils.regions import Box

logger = get_logger(__name__)


@dataclass(frozen=True)
class ClusterTile:
    """Finite nonempty D in Z^d, cells kept sorted and distinct."""

    cells: Tuple[Vector, ...]

    def __post_init__(self):
        cells = sorted({tuple(int(x) for x in c) for c in self.cells})
        if not cells:
            raise PreconditionError("a tile needs at least one cell")
        d = len(cells[0])
        for c in cells:
            if len(c) != d:
                raise DimensionMismatchError(d, len(c), "tile cell")
        object.__setattr__(self, "cells", tuple(cells))

    @classmethod
    def of(cls, cells: Iterable[Sequence[int]]) -> "ClusterTile":
        return cls(tuple(tuple(c) for c in cells))

    @property
    def dimension(self) -> int:
        return len(self.cells[0])

    @property
    def size(self) -> int:
        return len(self.cells)

    def polynomial(self) -> LaurentPoly:
        """f(X) = sum of X^v over the cells."""
        return LaurentPoly(self.dimension, {v: 1 for v in self.cells})


@dataclass(frozen=True)
class CoTilerSet:
    """Lattice-periodic set C given by its binary indicator."""

    indicator: FullPeriodicConfig

    def __post_init__(self):
        if not self.indicator.alphabet <= {0, 1}:
            raise PreconditionError("a co-tiler indicator must be binary")

    @classmethod
    def lattice(
        cls, basis: Sequence[Sequence[int]], residues: Optional[Iterable[Sequence[int]]] = None
    ) -> "CoTilerSet":
        return cls(indicator_lattice(basis, residues))

    @property
    def dimension(self) -> int:
        return self.indicator.dimension

    @property
    def fundamental_domain(self) -> List[Vector]:
        return self.indicator.lattice.representatives()


def reflect_tile(tile: ClusterTile) -> ClusterTile:
    """-D, which has the same co-tilers as D."""
    return ClusterTile.of(vec_neg(c) for c in tile.cells)


class TilingService:
    """Exact cover counting over the fundamental domain of the co-tiler's lattice.

    The cover count (f * 1_C)(x) = #{v in D : x - v in C} is periodic with
    the lattice of C, so checking every coset representative decides
    D + C = Z^d.
    """

    def __init__(
        self,
        config_loader: Optional[ConfigLoader] = None,
        annihilator: Optional[AnnihilatorService] = None,
    ):
        try:
            self.config = config_loader or ConfigLoader()
            self.workers = int(self.config.get("tiling.workers", 4))
            self.annihilator = annihilator or AnnihilatorService(self.config)
            logger.info("TilingService initialized")

        except Exception as e:
            error_msg = f"Error in TilingService Initialization -> {str(e)}"
            logger.error(error_msg)
            raise Exception(error_msg)

    @staticmethod
    def _check(tile: ClusterTile, cotiler: CoTilerSet):
        if tile.dimension != cotiler.dimension:
            raise DimensionMismatchError(cotiler.dimension, tile.dimension, "tile")

    def _domain_counts(self, tile: ClusterTile, cotiler: CoTilerSet) -> List[Tuple[Vector, int]]:
        indicator = cotiler.indicator

        def count(x: Vector) -> int:
            return sum(indicator.coefficient(vec_sub(x, v)) for v in tile.cells)

        domain = cotiler.fundamental_domain
        with ThreadPoolExecutor(max_workers=self.workers) as pool:
            counts = list(pool.map(count, domain))
        return list(zip(domain, counts))

    def is_cotiler(self, tile: ClusterTile, cotiler: CoTilerSet) -> TilingVerdict:
        """Decide whether the translates D + c, c in C, partition Z^d.

        Returns:
            TilingVerdict ``proven_constant_one``, or ``cover_mismatch`` with
            the first fundamental-domain point not covered exactly once.
        """
        self._check(tile, cotiler)
        counts = self._domain_counts(tile, cotiler)
        for x, n in counts:
            if n != 1:
                logger.info(f"Tile does not cover {x} exactly once (count {n})")
                return TilingVerdict(
                    status=TilingStatus.COVER_MISMATCH,
                    fundamental_domain_size=len(counts),
                    position=list(x),
                    cover_count=n,
                )
        logger.info(f"Co-tiler verified on {len(counts)} coset representatives")
        return TilingVerdict(
            status=TilingStatus.PROVEN_CONSTANT_ONE,
            fundamental_domain_size=len(counts),
        )

    def tiling_identity_check(self, tile: ClusterTile, cotiler: CoTilerSet) -> TilingResidualReport:
        """Max |f * 1_C - 1| over the fundamental domain, with its first position."""
        self._check(tile, cotiler)
        worst, position = 0, None
        for x, n in self._domain_counts(tile, cotiler):
            if abs(n - 1) > worst:
                worst, position = abs(n - 1), list(x)
        return TilingResidualReport(max_deviation=worst, position=position)

    def prime_periodicity_check(self, tile: ClusterTile, cotiler: CoTilerSet) -> PrimePeriodReport:
        """Verify that C is p(v - u)-periodic for all u != v in D, p = |D| prime.

        Raises:
            PreconditionError: |D| is not prime or C is not a co-tiler of D.
            VerificationFailure: some p(v - u) is not a period of C.
        """
        p = tile.size
        if not isprime(p):
            raise PreconditionError(f"tile size {p} is not prime")
        verdict = self.is_cotiler(tile, cotiler)
        if verdict.status != TilingStatus.PROVEN_CONSTANT_ONE.value:
            raise PreconditionError(
                f"not a co-tiler: {tuple(verdict.position)} covered {verdict.cover_count} times"
            )
        periods = sorted({vec_scale(p, vec_sub(v, u)) for u, v in permutations(tile.cells, 2)})
        for period in periods:
            check = self.annihilator.verify_annihilator(difference_poly(period), cotiler.indicator)
            if check.status != AnnihilationStatus.PROVEN_ZERO.value:
                raise VerificationFailure(
                    f"{period} is not a period of the co-tiler",
                    position=check.position,
                    value=check.value,
                )
        logger.info(f"All {len(periods)} prime-multiple differences are periods")
        return PrimePeriodReport(p=p, periods=[list(v) for v in periods])

    def find_lattice_cotilers(
        self, tile: ClusterTile, limit: Optional[int] = None
    ) -> LatticeCotilerSearch:
        """Brute-force search over the sublattices of index |D| for co-tilers.

        A lattice co-tiler of D has exactly |D| cosets, so every candidate is
        one of the finitely many Hermite bases of that index. Stops after
        ``limit`` co-tilers when given.
        """
        report = LatticeCotilerSearch(tile=[list(v) for v in tile.cells], index=tile.size)
        for basis in sublattices_of_index(tile.dimension, tile.size):
            report.lattices_checked += 1
            verdict = self.is_cotiler(tile, CoTilerSet.lattice(basis))
            if verdict.status == TilingStatus.PROVEN_CONSTANT_ONE.value:
                report.cotilers.append([list(b) for b in basis])
                if limit is not None and len(report.cotilers) >= limit:
                    break
        logger.info(
            f"{len(report.cotilers)} lattice co-tilers among {report.lattices_checked} "
            f"sublattices of index {tile.size}"
        )
        return report

    def cover_counts(self, tile: ClusterTile, cotiler: CoTilerSet, box: Box) -> np.ndarray:
        """Window of f * 1_C, the number of translates covering each point."""
        self._check(tile, cotiler)
        return poly_apply(tile.polynomial(), cotiler.indicator).window(box)
