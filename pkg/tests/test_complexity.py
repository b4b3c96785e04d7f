"""Tests for pattern counting, Nivat scans, block lines and period search."""

import random
from fractions import Fraction
from math import isqrt

import numpy as np
import pytest

from algebra.laurent import difference_poly
from algebra.parser import parse_poly
from configurations import library
from configurations.periodic import FullPeriodicConfig, constant
from models.pydantic_models import AnnihilationStatus, ComplexityVerdict, ScanFlag
from services.complexity_service import ComplexityService
from utils.exceptions import DimensionMismatchError, PreconditionError
from utils.regions import Box, hypercube, rectangle


def golden_floor(k: int) -> int:
    """floor(k * phi) straight from the integer square root."""
    if k >= 0:
        return (k + isqrt(5 * k * k)) // 2
    return -golden_floor(-k) - 1


def golden_grid(lo: int, hi: int) -> np.ndarray:
    """Brute-force golden difference values on [lo, hi]^2, axis 0 is x."""
    floors = {k: golden_floor(k) for k in range(2 * lo, 2 * hi + 1)}
    return np.array(
        [
            [floors[i + j] - floors[i] - floors[j] for j in range(lo, hi + 1)]
            for i in range(lo, hi + 1)
        ],
        dtype=np.int64,
    )


def window_count(grid: np.ndarray, m: int, n: int, anchors: int) -> int:
    views = np.lib.stride_tricks.sliding_window_view(grid, (m, n))[:anchors, :anchors]
    return len({bytes(block) for block in views.reshape(anchors * anchors, m * n)})


def line_block_counts(lo: int, hi: int, M: int, N: int, key) -> dict:
    """Distinct golden M x N blocks per line, anchors in [lo, hi]^2 grouped by key(i, j)."""
    grid = golden_grid(lo, hi + max(M, N))
    lines = {}
    for i in range(lo, hi + 1):
        for j in range(lo, hi + 1):
            block = grid[i - lo : i - lo + M, j - lo : j - lo + N].tobytes()
            lines.setdefault(key(i, j), set()).add(block)
    return {k: len(v) for k, v in lines.items()}


def distinct_period_table():
    return FullPeriodicConfig.from_function([(3, 0), (0, 2)], lambda r: r[0] + 3 * r[1])


class TestDistinctPatterns:
    def setup_method(self):
        self.service = ComplexityService()

    def test_constant_has_one_pattern(self):
        report = self.service.distinct_patterns(constant(2, 7), rectangle(3, 2), Box.cube(2, -3, 3))
        assert report.count == 1
        assert report.verdict == ComplexityVerdict.EXACT.value

    def test_two_lines_cube_of_four(self):
        report = self.service.distinct_patterns(
            library.two_lines(4), hypercube(4, 3), Box.cube(3, -12, 12)
        )
        assert report.count == 33
        assert report.verdict == ComplexityVerdict.EXACT.value

    @pytest.mark.parametrize("n", [3, 5, 6])
    def test_two_lines_formula(self, n):
        report = self.service.distinct_patterns(
            library.two_lines(n), hypercube(n, 3), Box.cube(3, -12, 12)
        )
        assert report.count == 2 * n * n + 1
        assert report.verdict == ComplexityVerdict.EXACT.value

    def test_small_region_is_only_a_lower_bound(self):
        report = self.service.distinct_patterns(
            library.two_lines(4), hypercube(4, 3), Box.cube(3, 20, 21)
        )
        assert report.count < 33
        assert report.verdict == ComplexityVerdict.WINDOW_LOWER_BOUND.value

    def test_doubly_periodic_bounded_by_index(self):
        c = distinct_period_table()
        for m, n in [(1, 1), (2, 3), (5, 4)]:
            report = self.service.complexity_rect(c, m, n, Box.cube(2, -10, 10))
            assert report.count <= 6
            assert report.verdict == ComplexityVerdict.EXACT.value

    def test_binary_single_cell(self):
        report = self.service.complexity_rect(library.checkerboard(), 1, 1, Box.cube(2, 0, 4))
        assert report.count <= 2

    def test_golden_three_by_three_matches_oracle(self):
        grid = golden_grid(-64, 66)
        report = self.service.complexity_rect(
            library.golden_difference(), 3, 3, Box.cube(2, -64, 64)
        )
        assert report.count == window_count(grid, 3, 3, 129)
        assert report.count > 9
        assert report.verdict == ComplexityVerdict.WINDOW_LOWER_BOUND.value

    def test_rectangle_needs_plane(self):
        with pytest.raises(DimensionMismatchError):
            self.service.complexity_rect(library.two_lines(), 2, 2, Box.cube(3, 0, 3))

    def test_shape_dimension_checked(self):
        with pytest.raises(DimensionMismatchError):
            self.service.distinct_patterns(constant(2, 1), [(0, 0, 0)], Box.cube(2, 0, 1))

    def test_monotone_in_shape_and_region(self):
        c = library.golden_difference()
        small = self.service.complexity_rect(c, 2, 2, Box.cube(2, -10, 10)).count
        wider = self.service.complexity_rect(c, 3, 2, Box.cube(2, -10, 10)).count
        larger_region = self.service.complexity_rect(c, 2, 2, Box.cube(2, -20, 20)).count
        assert small <= wider
        assert small <= larger_region


class TestNivatScan:
    def setup_method(self):
        self.service = ComplexityService()

    def test_constant_rows_are_at_or_below(self):
        rows = self.service.nivat_scan(constant(2, 0), 3, 3, Box.cube(2, -4, 4))
        assert [(r.m, r.n) for r in rows] == [(m, n) for m in range(1, 4) for n in range(1, 4)]
        assert all(r.flag == ScanFlag.AT_OR_BELOW_BOUND.value for r in rows)
        assert not any(r.inconclusive for r in rows)

    def test_golden_scan_matches_oracle(self):
        grid = golden_grid(-64, 69)
        rows = self.service.nivat_scan(library.golden_difference(), 6, 6, Box.cube(2, -64, 64))
        for row in rows:
            assert row.count == window_count(grid, row.m, row.n, 129)
            if row.m >= 2 and row.n >= 2:
                assert row.flag == ScanFlag.ABOVE_BOUND.value

    def test_periodic_rows_from_the_period_on(self):
        c = FullPeriodicConfig([(2, 0), (0, 1)], {(0, 0): 1, (1, 0): 0})
        rows = self.service.nivat_scan(c, 5, 1, Box.cube(2, -12, 12))
        by_m = {r.m: r for r in rows}
        assert by_m[1].flag == ScanFlag.ABOVE_BOUND.value
        for m in range(2, 6):
            assert by_m[m].count == 2
            assert by_m[m].flag == ScanFlag.AT_OR_BELOW_BOUND.value
            assert by_m[m].verdict == ComplexityVerdict.EXACT.value
            assert not by_m[m].inconclusive

    def test_striped_rows(self):
        rows = self.service.nivat_scan(library.striped_fiber(2), 5, 1, Box.cube(2, -12, 12))
        by_m = {r.m: r for r in rows}
        assert by_m[2].count == 3
        assert by_m[2].flag == ScanFlag.ABOVE_BOUND.value
        for m in (3, 4, 5):
            assert by_m[m].count == 3
            assert by_m[m].flag == ScanFlag.AT_OR_BELOW_BOUND.value
            assert by_m[m].verdict == ComplexityVerdict.EXACT.value

    def test_bounds_must_be_positive(self):
        with pytest.raises(PreconditionError):
            self.service.nivat_scan(constant(2, 0), 0, 2)


class TestBlockLines:
    def setup_method(self):
        self.service = ComplexityService()

    def test_constant_lines(self):
        report = self.service.block_lines(constant(2, 1), (1, 0), 2, 2, Box.cube(2, -5, 5))
        assert all(line.distinct_blocks == 1 for line in report.lines)
        assert report.disjoint_line_count <= 1

    def test_samples_lie_on_their_line(self):
        report = self.service.block_lines(
            library.golden_difference(), (1, 1), 2, 2, Box.cube(2, -6, 6), include_blocks=True
        )
        assert sum(line.sample_count for line in report.lines) == 13 * 13
        for line in report.lines:
            assert line.distinct_blocks <= line.sample_count
            assert len(line.blocks) == line.distinct_blocks

    @pytest.mark.parametrize("M,N,bound", [(4, 3, 6), (6, 4, 10)])
    def test_disjoint_lines_bound(self, M, N, bound):
        c = library.sloped_line((2, 1))
        f = difference_poly((2, 1))
        assert self.service.disjoint_lines_bound(f, M, N) == bound
        report = self.service.block_lines(c, (2, 1), M, N, Box.cube(2, -12, 12))
        assert report.disjoint_line_count == M + 2 * N - 1
        assert report.disjoint_line_count >= bound

    def test_bound_needs_line_polynomial(self):
        with pytest.raises(PreconditionError):
            self.service.disjoint_lines_bound(parse_poly("x + y + x*y", 2), 4, 4)

    def test_complex_lines_bound(self):
        assert self.service.complex_lines_bound((2, 2), (1, 1), 5, 7) == Fraction(4)
        assert self.service.complex_lines_bound((1, 1), (2, 1), 5, 3) == Fraction(5, 2)
        with pytest.raises(PreconditionError):
            self.service.complex_lines_bound((1, 1), (1, 0), 5, 3)

    def test_golden_diagonal_lines(self):
        rows = self.service.check_complex_lines(
            library.golden_difference(),
            parse_poly("x*y - 1", 2),
            (1, 1),
            4,
            4,
            Box.cube(2, -20, 20),
        )
        expected = line_block_counts(-20, 20, 4, 4, lambda i, j: (0, j - i))
        assert {tuple(r.anchor): r.distinct_blocks for r in rows} == expected
        for r in rows:
            assert r.bound == 4.0
            assert r.satisfied == (r.distinct_blocks >= 4)
            if abs(r.anchor[1]) <= 10:
                assert r.satisfied

    def test_golden_horizontal_block_lines(self):
        report = self.service.block_lines(
            library.golden_difference(), (1, 0), 4, 4, Box.cube(2, -20, 20)
        )
        expected = line_block_counts(-20, 20, 4, 4, lambda i, j: (0, j))
        assert {tuple(line.anchor): line.distinct_blocks for line in report.lines} == expected
        assert len(report.lines) == 41
        for line in report.lines:
            assert line.sample_count == 41
            assert line.distinct_blocks >= 5

    def test_very_thin(self):
        phi = library.golden_annihilator()
        row = self.service.very_thin_check(library.golden_difference(), phi, 2, 2, Box.cube(2, -30, 30))
        assert not row.fits
        assert row.above_bound
        row = self.service.very_thin_check(library.golden_difference(), phi, 3, 3, Box.cube(2, -30, 30))
        assert row.fits


class TestFindPeriod:
    def setup_method(self):
        self.service = ComplexityService()

    def test_lattice_period(self):
        result = self.service.find_period(distinct_period_table(), 4)
        assert result.period == [0, 2]
        assert result.status == AnnihilationStatus.PROVEN_ZERO.value

    def test_constant_first_candidate(self):
        result = self.service.find_period(constant(2, 3), 2)
        assert result.period == [0, 1]
        assert result.label == "proven period"

    def test_golden_has_no_period(self):
        result = self.service.find_period(library.golden_difference(), 10, Box.cube(2, -40, 40))
        assert result.period is None
        assert result.label == "none"

    def test_proven_period_vanishes_on_windows(self):
        c = library.split_demo()[1]
        result = self.service.find_period(c, 4)
        v = tuple(result.period)
        rng = random.Random(5)
        for _ in range(5):
            x, y = rng.randint(-50, 50), rng.randint(-50, 50)
            box = Box((x, y), (x + 6, y + 6))
            assert np.array_equal(c.window(box), c.window(box.translate(v)))


class TestMorseHedlund:
    def test_alternating(self):
        result = ComplexityService.morse_hedlund_1d([0, 1] * 5, 3)
        assert result.factor_count == 2
        assert result.period == 2
        assert result.conclusion == "on-window"

    def test_constant_word(self):
        result = ComplexityService.morse_hedlund_1d([4] * 12, 5)
        assert result.factor_count == 1
        assert result.period == 1

    def test_golden_word(self):
        word = library.golden_word(100)
        result = ComplexityService.morse_hedlund_1d(word, 5)
        assert result.factor_count == 6
        assert result.period is None

    def test_sturmian_counts(self):
        word = library.golden_word(1000)
        for n in range(1, 31):
            assert ComplexityService.morse_hedlund_1d(word, n).factor_count == n + 1

    def test_eventually_periodic_words(self):
        rng = random.Random(20240917)
        for _ in range(50):
            period = rng.randint(1, 10)
            block = [rng.randint(0, 2) for _ in range(period)]
            prefix = [rng.randint(0, 2) for _ in range(rng.randint(0, 2))]
            word = (prefix + block * 120)[:120]
            n = period + 2
            result = ComplexityService.morse_hedlund_1d(word, n)
            assert result.factor_count <= n
            assert result.period is not None
            assert period % result.period == 0

    def test_short_word_rejected(self):
        with pytest.raises(PreconditionError):
            ComplexityService.morse_hedlund_1d([0, 1, 0], 2)
