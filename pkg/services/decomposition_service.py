"""Decomposition of configurations into periodic components."""

import threading
from collections import OrderedDict
from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from algebra.laurent import LaurentPoly, difference_poly, line_info, product, support, to_text
from configurations.base import Configuration
from configurations.derived import SublatticeMaskConfig, difference, poly_apply, sum_of
from logger.logging import get_logger
from models.pydantic_models import (
    ComponentEvidence,
    CosetClassification,
    CosetKind,
    DecompositionReport,
    SublatticeSplitReport,
)
from services.annihilator_service import (
    AnnihilatorService,
    factor_polynomials,
    first_nonzero,
)
from utils.config_loader import ConfigLoader
from utils.exceptions import (
    DimensionMismatchError,
    InconclusiveError,
    PreconditionError,
    VerificationFailure,
)
from utils.lattice import Vector, plane_coordinates, vec_add, vec_scale
from utils.regions import Box

logger = get_logger(__name__)

DEFAULT_LINE_CACHE = 4096


class IntegratedConfig(Configuration):
    """c' with f*c' = c and g*c' = 0, for line polynomials f and g.

    Positions are written x = z + a*u + b*v with u, v the directions of f
    and g and z the canonical anchor of the coset of <u, v>. On every line
    (z, b) the values c'[a] vanish on the band 0 <= a < n (n = deg f) and
    the rest follow from sum_i a_i c'[a - i] = c[a], propagated outwards
    from the band. Computed stretches of the most recently used lines are
    cached, at most max_lines of them; an evicted line is recomputed from
    its band and gives the same values.
    """

    def __init__(
        self,
        f: LaurentPoly,
        c: Configuration,
        g: LaurentPoly,
        max_lines: Optional[int] = None,
    ):
        if f.dimension != c.dimension or g.dimension != c.dimension:
            raise DimensionMismatchError(c.dimension, f.dimension, "integration polynomial")
        f_line, g_line = line_info(f), line_info(g)
        if f_line is None:
            raise PreconditionError(f"{to_text(f)} is not a line polynomial")
        if g_line is None:
            raise PreconditionError(f"{to_text(g)} is not a line polynomial")
        if f_line.direction == g_line.direction:
            raise PreconditionError("f and g must have different directions")
        if not f.is_integral():
            raise PreconditionError(f"{to_text(f)} must have integer coefficients")
        coeffs = tuple(int(a) for a in f_line.coefficients)
        if abs(coeffs[0]) != 1 or abs(coeffs[-1]) != 1:
            raise PreconditionError(
                f"{to_text(f)} needs unit extreme coefficients for an integral solution"
            )
        super().__init__(c.dimension)
        self.child = c
        self.f = f
        self.g = g
        self.u = f_line.direction.vector
        self.v = g_line.direction.vector
        self.offset = f_line.offset
        self.coeffs = coeffs
        self.degree = f_line.degree
        self.max_lines = DEFAULT_LINE_CACHE if max_lines is None else max_lines
        if self.max_lines < 1:
            raise PreconditionError("line cache size must be positive")
        self._lines: "OrderedDict[Tuple[Vector, int], Dict[int, int]]" = OrderedDict()
        self._lock = threading.Lock()

    def _point(self, z: Vector, a: int, b: int) -> Vector:
        return vec_add(z, vec_add(vec_scale(a, self.u), vec_scale(b, self.v)))

    def _line_value(self, z: Vector, b: int, a: int) -> int:
        n, coeffs = self.degree, self.coeffs
        with self._lock:
            line = self._lines.get((z, b))
            if line is None:
                line = {k: 0 for k in range(n)}
                self._lines[(z, b)] = line
                if len(self._lines) > self.max_lines:
                    self._lines.popitem(last=False)
            else:
                self._lines.move_to_end((z, b))
            if a in line:
                return line[a]
            if a >= n:
                for t in range(max(line) + 1, a + 1):
                    rhs = self.child._value(self._point(z, t, b))
                    rhs -= sum(coeffs[i] * line[t - i] for i in range(1, n + 1))
                    line[t] = rhs * coeffs[0]
            else:
                for t in range(min(line) - 1, a - 1, -1):
                    rhs = self.child._value(self._point(z, t + n, b))
                    rhs -= sum(coeffs[i] * line[t + n - i] for i in range(n))
                    line[t] = rhs * coeffs[n]
            return line[a]

    def _value(self, w: Vector) -> int:
        # c'(w) = c''(w + offset) where c'' solves the offset-free recurrence
        z, a, b = plane_coordinates(vec_add(w, self.offset), self.u, self.v)
        return self._line_value(z, b, a)


@dataclass
class Decomposition:
    """c = sum(components) with factors[i] * components[i] = 0."""

    components: List[Configuration]
    factors: List[LaurentPoly]
    report: DecompositionReport


def shrink_for(f: LaurentPoly, window: Box) -> Box:
    """Positions x whose product (f c)(x) only reads c inside the window."""
    exps = list(support(f))
    d = f.dimension
    high = tuple(max(e[i] for e in exps) for i in range(d))
    low = tuple(min(e[i] for e in exps) for i in range(d))
    lo = vec_add(window.lo, high)
    hi = vec_add(window.hi, low)
    if any(a > b for a, b in zip(lo, hi)):
        raise PreconditionError(
            f"window {window.to_text()} is too small for {to_text(f)}"
        )
    return Box(lo, hi)


def discrete_integrate(
    f: LaurentPoly, c: Configuration, g: LaurentPoly, max_lines: Optional[int] = None
) -> IntegratedConfig:
    return IntegratedConfig(f, c, g, max_lines)


class DecompositionService:
    """Builds periodic decompositions and checks them on evidence windows."""

    def __init__(
        self,
        config_loader: Optional[ConfigLoader] = None,
        annihilator: Optional[AnnihilatorService] = None,
    ):
        try:
            self.config = config_loader or ConfigLoader()
            self.annihilator = annihilator or AnnihilatorService(self.config)
            self.window_radius = int(self.config.get("decomposition.window_radius", 20))
            self.line_cache_size = int(
                self.config.get("decomposition.line_cache_size", DEFAULT_LINE_CACHE)
            )
            logger.info("DecompositionService initialized")

        except Exception as e:
            error_msg = f"Error in DecompositionService Initialization -> {str(e)}"
            logger.error(error_msg)
            raise Exception(error_msg)

    def default_window(self, c: Configuration) -> Box:
        r = self.window_radius
        return Box.cube(c.dimension, -r, r)

    def integrate(
        self,
        f: LaurentPoly,
        c: Configuration,
        g: LaurentPoly,
        window: Optional[Box] = None,
    ) -> IntegratedConfig:
        """Discrete integration of c along f, keeping the annihilator g.

        Args:
            f: Line polynomial with unit extreme coefficients.
            c: Configuration annihilated by g.
            g: Line polynomial in a direction other than f's.
            window: Region for the precondition check on uncertified c.

        Returns:
            Lazy configuration c' with f*c' = c and g*c' = 0.
        """
        verdict = self.annihilator.verify_annihilator(g, c, window or self.default_window(c))
        if verdict.refuted:
            raise PreconditionError(
                f"{to_text(g)} does not annihilate the configuration "
                f"(nonzero at {tuple(verdict.position)})"
            )
        return discrete_integrate(f, c, g, self.line_cache_size)

    @staticmethod
    def _check_factors(factors: Sequence[LaurentPoly], dimension: int):
        if not factors:
            raise PreconditionError("at least one factor is needed")
        directions = []
        for f in factors:
            if f.dimension != dimension:
                raise DimensionMismatchError(dimension, f.dimension, "factor")
            info = line_info(f)
            if info is None:
                raise PreconditionError(f"{to_text(f)} is not a line polynomial")
            directions.append(info.direction)
        if len(set(directions)) != len(directions):
            raise PreconditionError("factor directions must be pairwise distinct")

    def _components(
        self, c: Configuration, factors: Sequence[LaurentPoly]
    ) -> List[Configuration]:
        if len(factors) == 1:
            return [c]
        last = factors[-1]
        inner = self._components(poly_apply(last, c), factors[:-1])
        lifted: List[Configuration] = [
            discrete_integrate(last, b, g, self.line_cache_size)
            for b, g in zip(inner, factors[:-1])
        ]
        lifted.append(difference(c, sum_of(*lifted)))
        return lifted

    def decompose_by_factors(
        self,
        c: Configuration,
        factors: Sequence[LaurentPoly],
        window: Optional[Box] = None,
        include_dumps: bool = False,
    ) -> Decomposition:
        """Split c into components c_i with f_i * c_i = 0 and c = sum c_i.

        The product of factors must annihilate c. The last factor f_m is
        peeled off: f_m * c is decomposed under the others into b_i, each
        b_i is integrated along f_m against f_i, and the remainder
        c - sum c_i is annihilated by f_m.

        Args:
            c: Configuration annihilated by the product of factors.
            factors: Line polynomials in pairwise distinct directions.
            window: Evidence window (defaults to the configured radius).
            include_dumps: Attach row-major window values per component.

        Returns:
            Decomposition with per-component verdicts and the sum residual.
        """
        self._check_factors(factors, c.dimension)
        window = window or self.default_window(c)
        if len(window.lo) != c.dimension:
            raise DimensionMismatchError(c.dimension, len(window.lo), "window")

        verdict = self.annihilator.verify_annihilator(
            product(factors, c.dimension), c, window
        )
        if verdict.refuted:
            raise PreconditionError(
                f"product of factors does not annihilate the configuration "
                f"(nonzero at {tuple(verdict.position)})"
            )

        components = self._components(c, list(factors))
        logger.info(f"Decomposing into {len(components)} component(s) on {window.to_text()}")

        total = np.zeros(window.shape, dtype=object)
        evidence = []
        for i, (component, f) in enumerate(zip(components, factors)):
            values = component.window(window)
            total = total + values
            check = self.annihilator.verify_annihilator(f, component, shrink_for(f, window))
            if check.refuted:
                raise VerificationFailure(
                    f"component {i} is not annihilated by {to_text(f)}",
                    position=check.position,
                    value=check.value,
                )
            flat = list(values.flat)
            evidence.append(
                ComponentEvidence(
                    index=i,
                    factor=to_text(f),
                    verdict=check,
                    max_abs_value=max((abs(int(x)) for x in flat), default=0),
                    integral=all(isinstance(x, (int, np.integer)) for x in flat),
                    window_dump=values.tolist() if include_dumps else None,
                )
            )

        residual = c.window(window) - total
        hit = first_nonzero(residual, window.lo)
        report = DecompositionReport(
            factors=[to_text(f) for f in factors],
            window=window.to_model(),
            components=evidence,
            residual_max_abs=max((abs(int(x)) for x in residual.flat), default=0),
            residual_position=list(hit[0]) if hit else None,
        )
        if hit is not None:
            position, value = hit
            raise VerificationFailure(
                f"components do not sum to the configuration at {position}",
                position=position,
                value=value,
            )
        return Decomposition(components=components, factors=list(factors), report=report)

    def decompose_auto(
        self,
        c: Configuration,
        max_norm: Optional[int] = None,
        max_factors: Optional[int] = None,
        window: Optional[Box] = None,
        include_dumps: bool = False,
    ) -> Decomposition:
        """Find a difference-product annihilator, then decompose along its factors."""
        window = window or self.default_window(c)
        cert = self.annihilator.find_difference_product(c, max_norm, max_factors, window)
        if cert is None:
            raise InconclusiveError("no difference-product annihilator in the search space")
        return self.decompose_by_factors(c, factor_polynomials(cert), window, include_dumps)

    def sublattice_split(
        self, c: Configuration, m: int, n: int, window: Optional[Box] = None
    ) -> Tuple[Configuration, Configuration, SublatticeSplitReport]:
        """Split a binary c annihilated by (x^m - 1)(y^n - 1) into disjoint parts.

        Each coset r + <(m,0),(0,n)> is read on the window as an array
        e[i, j] = c(r + (i m, j n)) and tested for period (1,0) and (0,1).
        Horizontally periodic cosets (including doubly periodic ones) go to
        the first part, vertically periodic ones to the second.

        Raises:
            VerificationFailure: a coset is periodic in neither direction.
        """
        if c.dimension != 2:
            raise DimensionMismatchError(2, c.dimension, "sublattice split configuration")
        if m < 1 or n < 1:
            raise PreconditionError("m and n must be positive")
        window = window or self.default_window(c)
        values = c.window(window)
        if not set(values.flat) <= {0, 1}:
            raise PreconditionError("sublattice split needs a binary configuration")
        f = product([difference_poly((m, 0)), difference_poly((0, n))])
        verdict = self.annihilator.verify_annihilator(f, c, window)
        if verdict.refuted:
            raise PreconditionError(
                f"{to_text(f)} does not annihilate the configuration "
                f"(nonzero at {tuple(verdict.position)})"
            )

        cosets: List[CosetClassification] = []
        first, second = [], []
        for r0 in range(m):
            for r1 in range(n):
                s0 = (r0 - window.lo[0]) % m
                s1 = (r1 - window.lo[1]) % n
                sub = values[s0::m, s1::n]
                horizontal = bool(np.all(sub[1:, :] == sub[:-1, :]))
                vertical = bool(np.all(sub[:, 1:] == sub[:, :-1]))
                if horizontal and vertical:
                    kind = CosetKind.DOUBLY
                elif horizontal:
                    kind = CosetKind.HORIZONTAL
                elif vertical:
                    kind = CosetKind.VERTICAL
                else:
                    i, j = (int(x) for x in np.argwhere(sub[1:, :] != sub[:-1, :])[0])
                    position = (window.lo[0] + s0 + i * m, window.lo[1] + s1 + j * n)
                    raise VerificationFailure(
                        f"coset {(r0, r1)} is neither ({m},0)- nor (0,{n})-periodic",
                        position=position,
                        value=c.coefficient(position),
                    )
                cosets.append(CosetClassification(residue=[r0, r1], kind=kind))
                (second if kind == CosetKind.VERTICAL else first).append((r0, r1))

        basis = [(m, 0), (0, n)]
        c1 = SublatticeMaskConfig(c, basis, first)
        c2 = SublatticeMaskConfig(c, basis, second)
        logger.info(
            f"Sublattice split ({m},{n}): {len(first)} coset(s) horizontal, "
            f"{len(second)} vertical"
        )
        report = SublatticeSplitReport(m=m, n=n, window=window.to_model(), cosets=cosets)
        return c1, c2, report
