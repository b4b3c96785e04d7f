"""Tests for co-tiler verification of cluster tiles."""

import numpy as np
import pytest

from configurations import library
from configurations.periodic import FullPeriodicConfig
from models.pydantic_models import TilingStatus
from services.tiling_service import ClusterTile, CoTilerSet, TilingService, reflect_tile
from utils.exceptions import DimensionMismatchError, PreconditionError
from utils.regions import Box


def tile_and_cotiler(pair):
    cells, indicator = pair
    return ClusterTile.of(cells), CoTilerSet(indicator)


class TestIsCotiler:
    def setup_method(self):
        self.service = TilingService()

    def test_interval(self):
        tile, cotiler = tile_and_cotiler(library.interval_tile(3))
        verdict = self.service.is_cotiler(tile, cotiler)
        assert verdict.status == TilingStatus.PROVEN_CONSTANT_ONE.value
        assert verdict.fundamental_domain_size == 3
        assert verdict.position is None

    def test_corner(self):
        tile, cotiler = tile_and_cotiler(library.corner_tile())
        verdict = self.service.is_cotiler(tile, cotiler)
        assert verdict.status == TilingStatus.PROVEN_CONSTANT_ONE.value
        assert verdict.fundamental_domain_size == 3
        counts = self.service.cover_counts(tile, cotiler, Box.cube(2, -5, 5))
        assert set(counts.flat) == {1}

    def test_reflected_tile_has_same_cotiler(self):
        tile, cotiler = tile_and_cotiler(library.corner_tile())
        verdict = self.service.is_cotiler(reflect_tile(tile), cotiler)
        assert verdict.status == TilingStatus.PROVEN_CONSTANT_ONE.value

    def test_gap_reported(self):
        tile = ClusterTile.of([(0,), (1,)])
        verdict = self.service.is_cotiler(tile, CoTilerSet.lattice([(3,)]))
        assert verdict.status == TilingStatus.COVER_MISMATCH.value
        assert verdict.position == [2]
        assert verdict.cover_count == 0

    def test_overlap_reported(self):
        tile = ClusterTile.of([(0,), (1,)])
        verdict = self.service.is_cotiler(tile, CoTilerSet.lattice([(1,)]))
        assert verdict.status == TilingStatus.COVER_MISMATCH.value
        assert verdict.position == [0]
        assert verdict.cover_count == 2

    def test_dimension_checked(self):
        tile = ClusterTile.of([(0, 0)])
        with pytest.raises(DimensionMismatchError):
            self.service.is_cotiler(tile, CoTilerSet.lattice([(2,)]))


class TestTileTypes:
    def test_cells_sorted_and_deduplicated(self):
        tile = ClusterTile.of([(1, 0), (0, 0), (1, 0)])
        assert tile.cells == ((0, 0), (1, 0))
        assert tile.size == 2

    def test_empty_tile_rejected(self):
        with pytest.raises(PreconditionError):
            ClusterTile.of([])

    def test_mixed_dimensions_rejected(self):
        with pytest.raises(DimensionMismatchError):
            ClusterTile.of([(0,), (0, 1)])

    def test_cotiler_must_be_binary(self):
        with pytest.raises(PreconditionError):
            CoTilerSet(FullPeriodicConfig.from_function([(2,)], lambda r: 2 * r[0]))

    def test_polynomial_counts_cells(self):
        tile, cotiler = tile_and_cotiler(library.interval_tile(3))
        counts = TilingService().cover_counts(tile, cotiler, Box.cube(1, -7, 7))
        assert np.all(counts == 1)


class TestIdentityCheck:
    def setup_method(self):
        self.service = TilingService()

    def test_exact_tiling_has_no_residual(self):
        tile, cotiler = tile_and_cotiler(library.corner_tile())
        report = self.service.tiling_identity_check(tile, cotiler)
        assert report.max_deviation == 0
        assert report.position is None

    def test_gap_residual(self):
        report = self.service.tiling_identity_check(
            ClusterTile.of([(0,), (1,)]), CoTilerSet.lattice([(3,)])
        )
        assert report.max_deviation == 1
        assert report.position == [2]


class TestPrimePeriods:
    def setup_method(self):
        self.service = TilingService()

    def test_corner_periods(self):
        tile, cotiler = tile_and_cotiler(library.corner_tile())
        report = self.service.prime_periodicity_check(tile, cotiler)
        assert report.p == 3
        assert report.periods == [[-3, 0], [-3, 3], [0, -3], [0, 3], [3, -3], [3, 0]]

    def test_interval_periods(self):
        tile, cotiler = tile_and_cotiler(library.interval_tile(3))
        report = self.service.prime_periodicity_check(tile, cotiler)
        assert report.periods == [[-6], [-3], [3], [6]]

    def test_size_must_be_prime(self):
        tile, cotiler = tile_and_cotiler(library.interval_tile(4))
        with pytest.raises(PreconditionError):
            self.service.prime_periodicity_check(tile, cotiler)

    def test_needs_cotiler(self):
        tile, _ = tile_and_cotiler(library.interval_tile(3))
        with pytest.raises(PreconditionError):
            self.service.prime_periodicity_check(tile, CoTilerSet.lattice([(2,)]))


class TestLatticeSearch:
    def setup_method(self):
        self.service = TilingService()

    def test_corner_has_one_lattice_cotiler(self):
        tile = ClusterTile.of(library.corner_tile()[0])
        search = self.service.find_lattice_cotilers(tile)
        assert search.index == 3
        assert search.lattices_checked == 4
        assert search.cotilers == [[[1, 1], [0, 3]]]
        box = Box.cube(2, -6, 6)
        found = CoTilerSet.lattice(search.cotilers[0]).indicator.window(box)
        assert np.array_equal(found, library.corner_tile()[1].window(box))
        report = self.service.prime_periodicity_check(tile, CoTilerSet.lattice(search.cotilers[0]))
        assert report.p == 3

    def test_interval(self):
        tile = ClusterTile.of(library.interval_tile(5)[0])
        search = self.service.find_lattice_cotilers(tile)
        assert search.lattices_checked == 1
        assert search.cotilers == [[[5]]]

    def test_no_lattice_cotiler(self):
        search = self.service.find_lattice_cotilers(ClusterTile.of([(0,), (2,)]))
        assert search.lattices_checked == 1
        assert search.cotilers == []

    def test_limit_stops_early(self):
        tile = ClusterTile.of([(0, 0), (1, 0)])
        everything = self.service.find_lattice_cotilers(tile)
        assert len(everything.cotilers) == 2
        first = self.service.find_lattice_cotilers(tile, limit=1)
        assert first.cotilers == everything.cotilers[:1]
