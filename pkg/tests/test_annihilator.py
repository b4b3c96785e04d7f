"""Tests for annihilator verification, discovery and classification."""

import pytest

from algebra.laurent import LaurentPoly, difference_poly, to_text
from algebra.parser import parse_poly
from configurations import library
from configurations.base import Configuration
from configurations.derived import poly_apply, scale, sum_of
from configurations.periodic import FullPeriodicConfig, constant
from models.pydantic_models import (
    AnnihilationStatus,
    DifferenceProductCertificate,
    ExactnessClass,
    NormalizationStatus,
    PeriodicityKind,
)
from services.annihilator_service import (
    AnnihilatorService,
    certificate_polynomial,
    factor_polynomials,
    first_nonzero,
    integral_multiple,
)
from utils.exceptions import DimensionMismatchError, PreconditionError
from utils.regions import Box, block, rectangle


def vector_set(cert):
    return {tuple(v) for v in cert.vectors}


class Ramp(Configuration):
    """c(v) = v[0], with no declared alphabet."""

    def __init__(self):
        super().__init__(2)

    def _value(self, v):
        return v[0]


class TestVerify:
    def setup_method(self):
        self.service = AnnihilatorService()

    def test_two_lines_product_is_proven(self):
        verdict = self.service.verify_annihilator(library.two_lines_annihilator(), library.two_lines(4))
        assert verdict.status == AnnihilationStatus.PROVEN_ZERO.value
        assert verdict.exactness_class == ExactnessClass.FIBER_PERIODIC_FINITE.value
        assert verdict.checked_points > 0

    def test_single_factor_is_refuted_with_witness(self):
        c = library.two_lines(4)
        f = difference_poly((1, 0, 0))
        verdict = self.service.verify_annihilator(f, c)
        assert verdict.refuted
        x = tuple(verdict.position)
        assert poly_apply(f, c).coefficient(x) == verdict.value != 0

    def test_golden_triple_product_on_region(self):
        verdict = self.service.verify_annihilator(
            library.golden_annihilator(), library.golden_difference(), Box.cube(2, -100, 100)
        )
        assert verdict.status == AnnihilationStatus.ZERO_ON_REGION.value
        assert verdict.checked_points == 201 * 201

    def test_golden_pair_is_refuted(self):
        f = difference_poly((1, 0)) * difference_poly((0, 1))
        verdict = self.service.verify_annihilator(f, library.golden_difference(), Box.cube(2, -30, 30))
        assert verdict.status == AnnihilationStatus.NONZERO_AT.value

    def test_rational_polynomial_cleared(self):
        f = parse_poly("1/2*x - 1/2", 2)
        assert integral_multiple(f) == difference_poly((1, 0))
        verdict = self.service.verify_annihilator(f, constant(2, 3))
        assert verdict.status == AnnihilationStatus.PROVEN_ZERO.value

    def test_zero_polynomial_rejected(self):
        with pytest.raises(PreconditionError):
            self.service.verify_annihilator(LaurentPoly.zero(2), constant(2, 1))

    def test_dimension_mismatch(self):
        with pytest.raises(DimensionMismatchError):
            self.service.verify_annihilator(difference_poly((1, 0)), library.two_lines())

    def test_first_nonzero_is_lexicographic(self):
        import numpy as np

        values = np.array([[0, 0], [0, 5], [3, 0]], dtype=object)
        assert first_nonzero(values, (10, 20)) == ((11, 21), 5)


class TestFindAnnihilator:
    def setup_method(self):
        self.service = AnnihilatorService()

    def test_golden_pattern_matrix(self):
        c = library.golden_difference()
        found = self.service.find_annihilator(c, rectangle(3, 3), Box.cube(2, -64, 64))
        assert found is not None
        assert not found.f.is_zero()
        assert found.f.is_integral()
        verdict = self.service.verify_annihilator(found.f, c, Box.cube(2, -80, 80))
        assert verdict.status == AnnihilationStatus.ZERO_ON_REGION.value

    def test_full_rank_gives_none(self):
        c = library.golden_difference()
        assert self.service.find_annihilator(c, rectangle(2, 1), Box.cube(2, -20, 20)) is None

    def test_constant_producer(self):
        c = library.checkerboard()
        producers = self.service.constant_producers(c, rectangle(2, 1), Box.cube(2, -6, 6))
        assert producers
        for p in producers:
            values = poly_apply(p.g, c).window(Box.cube(2, -4, 4))
            assert set(values.flat) == {p.kappa}


class TestNormalize:
    def setup_method(self):
        self.service = AnnihilatorService()

    def test_constant_two(self):
        witness = self.service.normalize(constant(2, 2), rectangle(1, 1), Box.cube(2, -3, 3))
        assert witness.status == NormalizationStatus.NORMALIZING.value
        assert (witness.a, witness.b) == (1, -2)
        shifted = self.service.normalized_config(constant(2, 2), witness)
        assert set(shifted.window(Box.cube(2, 0, 2)).flat) == {0}

    def test_checkerboard_is_normalizing(self):
        c = library.checkerboard()
        witness = self.service.normalize(c, rectangle(2, 1), Box.cube(2, -6, 6))
        assert witness.status == NormalizationStatus.NORMALIZING.value
        assert witness.a > 0
        assert witness.sigma == 2
        assert witness.kappa == 1

    def test_two_lines_already_normalized(self):
        c = library.two_lines(2)
        witness = self.service.normalize(c, block((2, 1, 2)), Box.cube(3, -6, 6))
        assert witness.status == NormalizationStatus.ALREADY_NORMALIZED.value
        assert self.service.normalized_config(c, witness) is c

    def test_random_is_inconclusive(self):
        from configurations.random_config import RandomConfig

        witness = self.service.normalize(RandomConfig(2, 11), rectangle(2, 2), Box.cube(2, -10, 10))
        assert witness.status == NormalizationStatus.INCONCLUSIVE.value

    def test_unbounded_oracle_is_inconclusive(self):
        witness = self.service.normalize(Ramp(), rectangle(2, 1), Box.cube(2, -10, 10))
        assert witness.status == NormalizationStatus.INCONCLUSIVE.value
        assert witness.witnesses_checked > 0
        assert self.service.normalized_config(Ramp(), witness).coefficient((5, 0)) == 5

    def test_scaled_shifted_golden(self):
        c = sum_of(scale(2, library.golden_difference()), constant(2, 3))
        witness = self.service.normalize(c, rectangle(3, 3), Box.cube(2, -40, 40))
        assert witness.status == NormalizationStatus.ALREADY_NORMALIZED.value
        assert witness.witnesses_checked >= 1
        normalized = self.service.normalized_config(c, witness)
        window = Box.cube(2, -30, 30)
        for producer in self.service.constant_producers(c, rectangle(3, 3), Box.cube(2, -40, 40)):
            assert set(poly_apply(producer.g, normalized).window(window).flat) == {0}


class TestDifferenceProducts:
    def setup_method(self):
        self.service = AnnihilatorService()

    def test_lattice_period(self):
        c = FullPeriodicConfig.from_function([(2, 0), (0, 3)], lambda r: r[0] + 2 * r[1])
        cert = self.service.find_difference_product(c, 2, 2)
        assert vector_set(cert) == {(2, 0)}
        assert cert.verdict.status == AnnihilationStatus.PROVEN_ZERO.value

    def test_two_lines(self):
        cert = self.service.find_difference_product(library.two_lines(4), 1, 2)
        assert vector_set(cert) == {(0, 0, 1), (1, 0, 0)}
        assert cert.verdict.status == AnnihilationStatus.PROVEN_ZERO.value
        f = certificate_polynomial(cert, 3)
        assert f == library.two_lines_annihilator()
        assert len(factor_polynomials(cert)) == 2

    def test_golden(self):
        cert = self.service.find_difference_product(
            library.golden_difference(), 1, 3, Box.cube(2, -30, 30)
        )
        assert vector_set(cert) == {(0, 1), (1, -1), (1, 0)}
        assert cert.verdict.status == AnnihilationStatus.ZERO_ON_REGION.value

    def test_budget_exhausted(self):
        assert self.service.find_difference_product(library.golden_difference(), 1, 2, Box.cube(2, -20, 20)) is None

    def test_factor_budget_validated(self):
        with pytest.raises(PreconditionError):
            self.service.find_difference_product(constant(2, 1), 1, 0)


class TestClassify:
    def setup_method(self):
        self.service = AnnihilatorService()

    def test_constant_is_doubly_periodic(self):
        c = constant(2, 4)
        cert = self.service.find_difference_product(c, 1, 1)
        assert vector_set(cert) == {(0, 1)}
        result = self.service.classify_periodicity(cert, c)
        assert result.kind == PeriodicityKind.DOUBLY_PERIODIC.value
        assert result.m_star == 0
        assert len(result.periods) == 2

    def test_striped_is_one_periodic(self):
        c = library.striped_fiber(2)
        cert = self.service.find_difference_product(c, 2, 1)
        assert vector_set(cert) == {(2, 0)}
        result = self.service.classify_periodicity(cert, c)
        assert result.kind == PeriodicityKind.ONE_PERIODIC.value
        assert result.direction == [1, 0]

    def test_factors_with_periodic_image_are_dropped(self):
        c = library.checkerboard()
        f = difference_poly((1, 0)) * difference_poly((2, 0))
        cert = DifferenceProductCertificate(
            vectors=[[1, 0], [2, 0]],
            product=to_text(f),
            verdict=self.service.verify_annihilator(f, c),
        )
        assert cert.verdict.status == AnnihilationStatus.PROVEN_ZERO.value
        result = self.service.classify_periodicity(cert, c)
        assert result.m_star == 0
        assert result.surviving_vectors == []
        assert result.kind == PeriodicityKind.DOUBLY_PERIODIC.value

    def test_golden_is_non_periodic(self):
        c = library.golden_difference()
        region = Box.cube(2, -30, 30)
        cert = self.service.find_difference_product(c, 1, 3, region)
        result = self.service.classify_periodicity(cert, c, 4, region)
        assert result.kind == PeriodicityKind.NON_PERIODIC_EVIDENCE.value
        assert result.m_star >= 2


class TestExpansion:
    def setup_method(self):
        self.service = AnnihilatorService()

    def test_powers_keep_annihilating(self):
        rows = self.service.expansion_check(
            library.two_lines_annihilator(), library.two_lines(3), [2, 3, 5]
        )
        assert [r.n for r in rows] == [2, 3, 5]
        assert all(r.verdict.status == AnnihilationStatus.PROVEN_ZERO.value for r in rows)

    def test_non_annihilator_rejected(self):
        with pytest.raises(PreconditionError):
            self.service.expansion_check(difference_poly((1, 0)), library.checkerboard(), [2])

    def test_radical_check_consistent(self):
        c = library.striped_fiber(2)
        report = self.service.radical_check(difference_poly((2, 0)), c, 3)
        assert report.consistent
        assert report.power_verdict.status == AnnihilationStatus.PROVEN_ZERO.value

    def test_radical_check_needs_line(self):
        with pytest.raises(PreconditionError):
            self.service.radical_check(parse_poly("x + y + x*y", 2), library.checkerboard())
