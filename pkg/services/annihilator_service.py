"""Discovery and verification of annihilating polynomials."""

import itertools
from dataclasses import dataclass
from fractions import Fraction
from functools import reduce
from math import lcm
from typing import List, Optional, Sequence, Tuple

import numpy as np

from algebra.laurent import (
    LaurentPoly,
    coefficient_sum,
    difference_poly,
    line_info,
    power,
    product,
    substitute_power,
    support,
    to_text,
)
from configurations.base import Configuration, pattern_matrix
from configurations.derived import poly_apply, scale, sum_of
from configurations.periodic import constant
from configurations.structure import witness_anchors
from logger.logging import get_logger
from models.pydantic_models import (
    AnnihilationStatus,
    AnnihilationVerdict,
    AnnihilatorResult,
    DifferenceProductCertificate,
    ExactnessClass,
    ExpansionRow,
    NormalizationStatus,
    NormalizationWitness,
    PeriodicityClassification,
    PeriodicityKind,
    RadicalCheckReport,
)
from utils.config_loader import ConfigLoader
from utils.exceptions import (
    DimensionMismatchError,
    PreconditionError,
    VerificationFailure,
)
from utils.lattice import (
    Vector,
    hermite_normal_form,
    integer_nullspace,
    primitive,
    unit_vector,
    vec_neg,
    vec_sub,
    vectors_by_norm,
)
from utils.regions import Box, anchors_inside, canonical_shape

logger = get_logger(__name__)


@dataclass(frozen=True)
class Annihilator:
    """g with g*c constant on the search region and f = (X^e1 - 1) g."""

    g: LaurentPoly
    f: LaurentPoly
    constant: int
    report: AnnihilatorResult


@dataclass(frozen=True)
class ConstantProducer:
    g: LaurentPoly
    sigma: int
    kappa: int


def rational_nullspace(matrix: Sequence[Sequence]) -> List[Vector]:
    """Integral, content-free basis of {x : M x = 0}."""
    return integer_nullspace([[Fraction(x) for x in row] for row in matrix])


def integral_multiple(f: LaurentPoly) -> LaurentPoly:
    """f scaled by the lcm of its coefficient denominators."""
    den = reduce(lcm, (c.denominator for _, c in f.items()), 1)
    return f * den if den != 1 else f


def product_window(f: LaurentPoly, big: np.ndarray, big_box: Box, region: Box) -> np.ndarray:
    """(f c) on region, computed from a window of c covering region - supp(f)."""
    out = np.zeros(region.shape, dtype=object)
    for e, coeff in f.items():
        start = vec_sub(vec_sub(region.lo, e), big_box.lo)
        if any(s < 0 for s in start) or any(
            s + n > m for s, n, m in zip(start, region.shape, big.shape)
        ):
            raise PreconditionError("precomputed window does not cover the product")
        sl = tuple(slice(s, s + n) for s, n in zip(start, region.shape))
        out = out + int(coeff) * big[sl]
    return out


def first_nonzero(values: np.ndarray, lo: Sequence[int]) -> Optional[Tuple[Vector, int]]:
    """Lexicographically first nonzero entry (row-major order is lexicographic)."""
    hits = np.argwhere(values != 0)
    if len(hits) == 0:
        return None
    idx = tuple(int(i) for i in hits[0])
    return tuple(a + i for a, i in zip(lo, idx)), int(values[idx])


class AnnihilatorService:
    """Finds, verifies and post-processes annihilators of configurations.

    Verdicts come in three tiers. Certified configurations (those exposing a
    periodic structure) are decided on finitely many witness anchors and
    yield ``proven_zero``; other configurations are evaluated on a region
    and yield ``zero_on_region``. Any nonzero evaluation yields
    ``nonzero_at`` with the first failing position.
    """

    def __init__(self, config_loader: Optional[ConfigLoader] = None):
        try:
            self.config = config_loader or ConfigLoader()
            self.verification_radius = int(self.config.get("search.verification_radius", 40))
            self.default_max_norm = int(self.config.get("search.max_norm", 2))
            self.default_max_factors = int(self.config.get("search.max_factors", 3))
            self.default_period_bound = int(self.config.get("search.period_bound", 6))
            logger.info("AnnihilatorService initialized")

        except Exception as e:
            error_msg = f"Error in AnnihilatorService Initialization -> {str(e)}"
            logger.error(error_msg)
            raise Exception(error_msg)

    def default_region(self, c: Configuration) -> Box:
        r = self.verification_radius
        return Box.cube(c.dimension, -r, r)

    # --- verification ---

    def verify_annihilator(
        self, f: LaurentPoly, c: Configuration, region: Optional[Box] = None
    ) -> AnnihilationVerdict:
        """Decide or test whether f*c = 0.

        Args:
            f: Nonzero polynomial; rational coefficients are cleared first.
            c: Configuration under test.
            region: Evaluation box for uncertified configurations (defaults
                to the configured verification radius).

        Returns:
            AnnihilationVerdict with the tier reached and, on failure, the
            first nonzero position and value.
        """
        if f.is_zero():
            raise PreconditionError("the zero polynomial annihilates everything")
        if f.dimension != c.dimension:
            raise DimensionMismatchError(c.dimension, f.dimension, "polynomial")
        f = integral_multiple(f)
        structure = c.structure()
        text = to_text(f)

        if structure is not None:
            shape = sorted(vec_neg(e) for e in support(f))
            anchors = sorted(witness_anchors(structure, shape))
            terms = [(e, int(a)) for e, a in f.items()]
            for x in anchors:
                value = sum(a * c.coefficient(vec_sub(x, e)) for e, a in terms)
                if value != 0:
                    logger.info(f"{text} fails at witness anchor {x} (value {value})")
                    return AnnihilationVerdict(
                        status=AnnihilationStatus.NONZERO_AT,
                        polynomial=text,
                        exactness_class=structure.exactness_class,
                        checked_domain="witness anchors",
                        checked_points=len(anchors),
                        position=list(x),
                        value=value,
                    )
            logger.debug(f"{text} vanishes on {len(anchors)} witness anchors")
            return AnnihilationVerdict(
                status=AnnihilationStatus.PROVEN_ZERO,
                polynomial=text,
                exactness_class=structure.exactness_class,
                checked_domain="witness anchors",
                checked_points=len(anchors),
            )

        region = region or self.default_region(c)
        if len(region.lo) != c.dimension:
            raise DimensionMismatchError(c.dimension, len(region.lo), "region")
        values = poly_apply(f, c).window(region)
        return self._region_verdict(text, values, region)

    def _region_verdict(self, text: str, values: np.ndarray, region: Box) -> AnnihilationVerdict:
        hit = first_nonzero(values, region.lo)
        common = dict(
            polynomial=text,
            exactness_class=ExactnessClass.ORACLE_ONLY,
            checked_domain=f"region {region.to_text()}",
            checked_points=region.size,
            region=region.to_model(),
        )
        if hit is None:
            return AnnihilationVerdict(status=AnnihilationStatus.ZERO_ON_REGION, **common)
        position, value = hit
        return AnnihilationVerdict(
            status=AnnihilationStatus.NONZERO_AT,
            position=list(position),
            value=value,
            **common,
        )

    def region_checker(self, c: Configuration, region: Box, margin: int):
        """Fast zero test on region for products with support in [-margin, margin]^d."""
        big_box = region.expand((-margin,) * c.dimension, (margin,) * c.dimension)
        big = c.window(big_box)

        def vanishes(f: LaurentPoly) -> bool:
            values = product_window(integral_multiple(f), big, big_box, region)
            return first_nonzero(values, region.lo) is None

        return vanishes

    # --- Lemma-3 style searches ---

    def _kernel(self, c: Configuration, shape, region: Box):
        shape = canonical_shape(shape)
        anchors = anchors_inside(region, shape)
        rows = pattern_matrix(c, shape, anchors)
        distinct = sorted(set(map(tuple, rows)))
        matrix = [[1, *row] for row in distinct]
        return shape, anchors, distinct, rational_nullspace(matrix)

    @staticmethod
    def _producer(shape, vector: Vector, dimension: int) -> ConstantProducer:
        g = LaurentPoly(dimension, [(vec_neg(u), a) for u, a in zip(shape, vector[1:])])
        return ConstantProducer(g=g, sigma=int(coefficient_sum(g)), kappa=-vector[0])

    def constant_producers(
        self, c: Configuration, shape, region: Box
    ) -> List[ConstantProducer]:
        """Kernel basis read as polynomials g with g*c constant on the region."""
        shape, _, _, kernel = self._kernel(c, shape, region)
        return [self._producer(shape, v, c.dimension) for v in kernel]

    def find_annihilator(
        self, c: Configuration, shape, region: Box
    ) -> Optional[Annihilator]:
        """Annihilator from the pattern matrix over a finite shape.

        Rows (1, c_{v+u_1}, ..., c_{v+u_n}) are collected for every anchor v
        with v + shape inside the region. A kernel vector (a_0, .., a_n)
        gives g = sum a_i X^{-u_i} with g*c = -a_0 on the region, and
        f = (X^{e_1} - 1) g.

        Returns:
            Annihilator, or None when the kernel is trivial.
        """
        shape, anchors, distinct, kernel = self._kernel(c, shape, region)
        if not kernel:
            logger.info(
                f"No annihilator: {len(distinct)} distinct patterns give a full-rank matrix"
            )
            return None
        producer = self._producer(shape, kernel[0], c.dimension)
        f = difference_poly(unit_vector(c.dimension, 0)) * producer.g
        report = AnnihilatorResult(
            g=to_text(producer.g),
            f=to_text(f),
            constant=producer.kappa,
            kernel_dimension=len(kernel),
            distinct_rows=len(distinct),
            anchors=anchors.size,
        )
        logger.info(
            f"Annihilator found: kernel dimension {len(kernel)}, {len(distinct)} distinct patterns"
        )
        return Annihilator(g=producer.g, f=f, constant=producer.kappa, report=report)

    def normalize(self, c: Configuration, shape, region: Box) -> NormalizationWitness:
        """Find (a, b) such that a*c + b is normalized.

        A witness g with g*c = kappa and sigma(g) != 0 gives a = sigma(g),
        b = -kappa, signed so that a > 0. When every witness has
        sigma(g) = 0 the configuration is reported as already normalized,
        provided it declares a finite alphabet. Otherwise that case is
        inconclusive.
        """
        producers = self.constant_producers(c, shape, region)
        if not producers:
            logger.warning("normalize: no constant-producing polynomial in the search space")
            return NormalizationWitness(status=NormalizationStatus.INCONCLUSIVE)
        for producer in producers:
            if producer.sigma != 0:
                sign = 1 if producer.sigma > 0 else -1
                g = producer.g * sign
                return NormalizationWitness(
                    status=NormalizationStatus.NORMALIZING,
                    a=sign * producer.sigma,
                    b=-sign * producer.kappa,
                    witness=to_text(g),
                    sigma=sign * producer.sigma,
                    kappa=sign * producer.kappa,
                    witnesses_checked=len(producers),
                )
        if c.alphabet is None:
            logger.warning(
                "normalize: every witness has sigma(g) = 0 but the configuration "
                "declares no finite alphabet"
            )
            return NormalizationWitness(
                status=NormalizationStatus.INCONCLUSIVE,
                witnesses_checked=len(producers),
            )
        return NormalizationWitness(
            status=NormalizationStatus.ALREADY_NORMALIZED,
            a=1,
            b=0,
            witnesses_checked=len(producers),
        )

    def normalized_config(self, c: Configuration, witness: NormalizationWitness) -> Configuration:
        """a*c + b as a configuration (c itself when nothing needs changing)."""
        if witness.status != NormalizationStatus.NORMALIZING.value:
            return c
        return sum_of(scale(witness.a, c), constant(c.dimension, witness.b))

    def expansion_check(
        self,
        f: LaurentPoly,
        c: Configuration,
        n_list: Sequence[int],
        region: Optional[Box] = None,
    ) -> List[ExpansionRow]:
        """Verdicts for f(X^n), n in n_list, given that f annihilates c."""
        base = self.verify_annihilator(f, c, region)
        if base.refuted:
            raise PreconditionError(f"{to_text(f)} does not annihilate the configuration")
        rows = []
        for n in n_list:
            verdict = self.verify_annihilator(substitute_power(f, n), c, region)
            rows.append(ExpansionRow(n=n, verdict=verdict))
        return rows

    # --- products of differences ---

    def find_difference_product(
        self,
        c: Configuration,
        max_norm: Optional[int] = None,
        max_factors: Optional[int] = None,
        region: Optional[Box] = None,
    ) -> Optional[DifferenceProductCertificate]:
        """First product of differences (X^v1 - 1)...(X^vm - 1) annihilating c.

        Vectors are canonical (one of v, -v) in increasing Chebyshev norm;
        sets are tried by increasing size, then lexicographically in that
        order, skipping sets with repeated directions.
        """
        max_norm = self.default_max_norm if max_norm is None else max_norm
        max_factors = self.default_max_factors if max_factors is None else max_factors
        if max_factors < 1:
            raise PreconditionError("max_factors must be at least 1")
        if max_norm < 1:
            raise PreconditionError("max_norm must be at least 1")
        candidates = list(vectors_by_norm(c.dimension, max_norm))
        certified = c.structure() is not None
        region = region or self.default_region(c)
        vanishes = None
        if not certified:
            vanishes = self.region_checker(c, region, max_norm * max_factors)

        checked = 0
        for m in range(1, max_factors + 1):
            for combo in itertools.combinations(candidates, m):
                if len({primitive(v)[0] for v in combo}) < m:
                    continue
                checked += 1
                f = product(difference_poly(v) for v in combo)
                if vanishes is not None and not vanishes(f):
                    continue
                verdict = self.verify_annihilator(f, c, region)
                if verdict.refuted:
                    continue
                logger.info(
                    f"Difference product found with {m} factor(s) after {checked} candidates "
                    f"({verdict.status})"
                )
                return DifferenceProductCertificate(
                    vectors=[list(v) for v in combo],
                    product=to_text(f),
                    verdict=verdict,
                    candidates_checked=checked,
                )
        logger.warning(f"No difference product within norm {max_norm}, {max_factors} factors")
        return None

    def independent_periods(
        self,
        c: Configuration,
        bound: int,
        region: Optional[Box] = None,
        need: Optional[int] = None,
    ) -> List[Vector]:
        """Up to ``need`` linearly independent verified periods of norm <= bound."""
        need = need or c.dimension
        region = region or self.default_region(c)
        vanishes = None
        if c.structure() is None:
            vanishes = self.region_checker(c, region, bound)
        found: List[Vector] = []
        for v in vectors_by_norm(c.dimension, bound):
            rows, _ = hermite_normal_form(found + [v])
            if len(rows) == len(found):
                continue
            f = difference_poly(v)
            if vanishes is not None:
                ok = vanishes(f)
            else:
                ok = not self.verify_annihilator(f, c, region).refuted
            if ok:
                found.append(v)
                if len(found) == need:
                    break
        return found

    def classify_periodicity(
        self,
        cert: DifferenceProductCertificate,
        c: Configuration,
        bound: Optional[int] = None,
        region: Optional[Box] = None,
    ) -> PeriodicityClassification:
        """Reduce a certificate and classify c as doubly, one- or non-periodic.

        Factors are tried in certificate order. A factor is dropped when the
        product of the remaining factors maps c to a configuration with d
        independent periods of norm <= bound (so the dropped direction only
        carried a fully periodic part). This is weaker than asking the
        remaining product to annihilate c: an annihilating product gives the
        zero image, which qualifies, and so does a doubly periodic nonzero
        image. Dropping every factor of a doubly periodic c is therefore
        allowed. The surviving count m* bounds the number of one-periodic
        directions.
        """
        bound = bound or self.default_period_bound
        region = region or self.default_region(c)
        if cert.verdict.status == AnnihilationStatus.NONZERO_AT.value:
            raise PreconditionError("certificate was refuted")

        surviving = [tuple(v) for v in cert.vectors]
        i = 0
        while i < len(surviving):
            rest = surviving[:i] + surviving[i + 1 :]
            image = poly_apply(product((difference_poly(v) for v in rest), c.dimension), c)
            if len(self.independent_periods(image, bound, region)) == c.dimension:
                logger.debug(f"Dropping factor {surviving[i]}")
                surviving = rest
            else:
                i += 1

        m_star = len(surviving)
        if m_star == 0:
            periods = self.independent_periods(c, bound, region)
            if len(periods) < c.dimension:
                raise VerificationFailure(
                    "all factors dropped but no full set of periods was found"
                )
            kind, direction = PeriodicityKind.DOUBLY_PERIODIC, None
        elif m_star == 1:
            direction = primitive(surviving[0])[0]
            periods = [surviving[0]]
            kind = PeriodicityKind.ONE_PERIODIC
        else:
            from services.complexity_service import ComplexityService

            found = ComplexityService(annihilator=self).find_period(c, bound, region)
            if found.period is not None:
                raise VerificationFailure(
                    f"{m_star} surviving factors but period {tuple(found.period)} found "
                    f"({found.label})",
                    position=found.period,
                )
            kind, direction, periods = PeriodicityKind.NON_PERIODIC_EVIDENCE, None, []

        logger.info(f"Periodicity: {kind.value}, m* = {m_star}")
        return PeriodicityClassification(
            kind=kind,
            m_star=m_star,
            surviving_vectors=[list(v) for v in surviving],
            direction=list(direction) if direction is not None else None,
            periods=[list(p) for p in periods],
        )

    def radical_check(
        self, f: LaurentPoly, c: Configuration, k: int = 2, region: Optional[Box] = None
    ) -> RadicalCheckReport:
        """Verify f^k and f; a proven f^k with an unproven f is inconsistent."""
        if line_info(f) is None:
            raise PreconditionError(f"{to_text(f)} is not a line polynomial")
        if k < 1:
            raise PreconditionError("power must be positive")
        power_verdict = self.verify_annihilator(power(f, k), c, region)
        base_verdict = self.verify_annihilator(f, c, region)
        proven = AnnihilationStatus.PROVEN_ZERO.value
        consistent = not (power_verdict.status == proven and base_verdict.status != proven)
        if not consistent:
            logger.warning(f"{to_text(f)}^{k} annihilates but {to_text(f)} does not")
        return RadicalCheckReport(
            power=k,
            power_verdict=power_verdict,
            base_verdict=base_verdict,
            consistent=consistent,
        )


def certificate_polynomial(cert: DifferenceProductCertificate, dimension: int) -> LaurentPoly:
    return product((difference_poly(v) for v in cert.vectors), dimension)


def factor_polynomials(cert: DifferenceProductCertificate) -> List[LaurentPoly]:
    return [difference_poly(v) for v in cert.vectors]
