"""Acceptance checks on the built-in configurations."""

import random
import time
from typing import Any, Callable, Dict, List

from algebra.laurent import LaurentPoly, difference_poly, frobenius_residue
from configurations import library
from logger.logging import get_logger
from models.pydantic_models import (
    AnnihilationStatus,
    ComplexityVerdict,
    ScanFlag,
    TilingStatus,
)
from services.annihilator_service import AnnihilatorService
from services.complexity_service import ComplexityService
from services.decomposition_service import DecompositionService
from services.tiling_service import ClusterTile, CoTilerSet, TilingService
from utils.config_loader import ConfigLoader
from utils.regions import Box, hypercube, rectangle

logger = get_logger(__name__)

SEED = 20240917


def eventually_periodic_word(rng: random.Random, length: int = 120):
    """Random prefix of length <= 2 followed by a random block of length <= 10, repeated."""
    period = rng.randint(1, 10)
    block = [rng.randint(0, 2) for _ in range(period)]
    prefix = [rng.randint(0, 2) for _ in range(rng.randint(0, 2))]
    body = (block * (length // period + 1))[: length - len(prefix)]
    return prefix + body, period


def random_integer_poly(rng: random.Random, dimension: int = 2) -> LaurentPoly:
    terms = {}
    for _ in range(rng.randint(1, 6)):
        exp = tuple(rng.randint(-3, 3) for _ in range(dimension))
        terms[exp] = rng.randint(-9, 9)
    return LaurentPoly(dimension, terms)


class AcceptanceEvaluator:
    """Runs the desk-scale acceptance criteria and records pass/fail with details."""

    def __init__(self, config_loader: ConfigLoader = None):
        self.config = config_loader or ConfigLoader()
        self.annihilator = AnnihilatorService(self.config)
        self.complexity = ComplexityService(self.config, self.annihilator)
        self.decomposition = DecompositionService(self.config, self.annihilator)
        self.tiling = TilingService(self.config, self.annihilator)

    def two_lines_complexity(self) -> Dict[str, Any]:
        c = library.two_lines(4)
        report = self.complexity.distinct_patterns(c, hypercube(4, 3), Box.cube(3, -12, 12))
        return {
            "passed": report.count == 33 and report.verdict == ComplexityVerdict.EXACT.value,
            "count": report.count,
            "verdict": report.verdict,
        }

    def two_lines_formula(self) -> Dict[str, Any]:
        rows = {}
        for n in (3, 4, 5, 6):
            report = self.complexity.distinct_patterns(
                library.two_lines(n), hypercube(n, 3), Box.cube(3, -12, 12)
            )
            rows[n] = {"count": report.count, "expected": 2 * n * n + 1, "verdict": report.verdict}
        passed = all(
            r["count"] == r["expected"] and r["verdict"] == ComplexityVerdict.EXACT.value
            for r in rows.values()
        )
        return {"passed": passed, "rows": rows}

    def two_lines_annihilator(self) -> Dict[str, Any]:
        verdict = self.annihilator.verify_annihilator(
            library.two_lines_annihilator(), library.two_lines(4)
        )
        return {
            "passed": verdict.status == AnnihilationStatus.PROVEN_ZERO.value,
            "status": verdict.status,
            "exactness_class": verdict.exactness_class,
        }

    def golden_configuration(self) -> Dict[str, Any]:
        c = library.golden_difference()
        values = set(c.window(Box.cube(2, -200, 200)).flat)
        verdict = self.annihilator.verify_annihilator(
            library.golden_annihilator(), c, Box.cube(2, -100, 100)
        )
        period = self.complexity.find_period(c, 12, Box.cube(2, -100, 100))
        passed = (
            values <= {0, 1}
            and verdict.status == AnnihilationStatus.ZERO_ON_REGION.value
            and period.period is None
        )
        return {
            "passed": passed,
            "values": sorted(values),
            "status": verdict.status,
            "period": period.label,
        }

    def pattern_matrix_annihilator(self) -> Dict[str, Any]:
        c = library.golden_difference()
        found = self.annihilator.find_annihilator(c, rectangle(3, 3), Box.cube(2, -64, 64))
        if found is None:
            return {"passed": False, "reason": "no annihilator"}
        verdict = self.annihilator.verify_annihilator(found.f, c, Box.cube(2, -80, 80))
        passed = (
            not found.f.is_zero()
            and found.f.is_integral()
            and verdict.status == AnnihilationStatus.ZERO_ON_REGION.value
        )
        return {"passed": passed, "f": found.report.f, "status": verdict.status}

    def decomposition_round_trip(self) -> Dict[str, Any]:
        results = {}
        cases = {
            "two-lines": (
                library.two_lines(4),
                [difference_poly((1, 0, 0)), difference_poly((0, 0, 1))],
            ),
            "golden": (
                library.golden_difference(),
                [difference_poly((1, 0)), difference_poly((0, 1)), difference_poly((1, -1))],
            ),
        }
        for name, (c, factors) in cases.items():
            window = Box.cube(c.dimension, -20, 20)
            report = self.decomposition.decompose_by_factors(c, factors, window).report
            results[name] = {
                "residual_max_abs": report.residual_max_abs,
                "components": len(report.components),
                "integral": all(e.integral for e in report.components),
                "max_abs_value": max(e.max_abs_value for e in report.components),
            }
        passed = all(
            r["residual_max_abs"] == 0 and r["integral"] for r in results.values()
        )
        return {"passed": passed, "cases": results}

    def morse_hedlund(self) -> Dict[str, Any]:
        rng = random.Random(SEED)
        failures = []
        for k in range(50):
            word, period = eventually_periodic_word(rng)
            result = self.complexity.morse_hedlund_1d(word, period + 2)
            if result.factor_count > period + 2 or result.period is None or period % result.period:
                failures.append({"case": k, "period": period, "result": result.model_dump()})
        word = library.golden_word(1000)
        sturmian = [
            n for n in range(1, 31) if self.complexity.morse_hedlund_1d(word, n).factor_count != n + 1
        ]
        return {
            "passed": not failures and not sturmian,
            "periodic_failures": failures,
            "sturmian_failures": sturmian,
        }

    def frobenius(self) -> Dict[str, Any]:
        rng = random.Random(SEED)
        bad = 0
        for _ in range(100):
            f = random_integer_poly(rng)
            for p in (2, 3, 5, 7):
                if not frobenius_residue(f, p).is_zero():
                    bad += 1
        return {"passed": bad == 0, "failures": bad}

    def prime_tiling(self) -> Dict[str, Any]:
        results = {}
        cells, indicator = library.interval_tile()
        cases = [("interval", ClusterTile.of(cells), CoTilerSet(indicator))]
        corner = ClusterTile.of(library.corner_tile()[0])
        search = self.tiling.find_lattice_cotilers(corner, limit=1)
        if not search.cotilers:
            return {"passed": False, "error": "no lattice co-tiler found for the corner tile"}
        cases.append(("corner", corner, CoTilerSet.lattice(search.cotilers[0])))
        for name, tile, cotiler in cases:
            verdict = self.tiling.is_cotiler(tile, cotiler)
            periods = self.tiling.prime_periodicity_check(tile, cotiler)
            results[name] = {"status": verdict.status, "periods": periods.periods}
        results["corner"]["basis"] = search.cotilers[0]
        results["corner"]["lattices_checked"] = search.lattices_checked
        passed = all(
            r["status"] == TilingStatus.PROVEN_CONSTANT_ONE.value for r in results.values()
        )
        return {"passed": passed, "cases": results}

    def disjoint_lines(self) -> Dict[str, Any]:
        c = library.sloped_line((2, 1))
        f = difference_poly((2, 1))
        rows = []
        for M, N in ((4, 3), (6, 4)):
            report = self.complexity.block_lines(c, (2, 1), M, N, Box.cube(2, -12, 12))
            bound = self.complexity.disjoint_lines_bound(f, M, N)
            rows.append({"M": M, "N": N, "observed": report.disjoint_line_count, "bound": bound})
        return {"passed": all(r["observed"] >= r["bound"] for r in rows), "rows": rows}

    def nivat_scan(self) -> Dict[str, Any]:
        rows = self.complexity.nivat_scan(library.golden_difference(), 6, 6, Box.cube(2, -64, 64))
        checked = [r for r in rows if r.m >= 2 and r.n >= 2]
        passed = all(r.flag == ScanFlag.ABOVE_BOUND.value for r in checked)
        return {"passed": passed, "counts": {f"{r.m}x{r.n}": r.count for r in rows}}

    def checks(self) -> List[tuple]:
        return [
            ("two_lines_complexity", self.two_lines_complexity),
            ("two_lines_formula", self.two_lines_formula),
            ("two_lines_annihilator", self.two_lines_annihilator),
            ("golden_configuration", self.golden_configuration),
            ("pattern_matrix_annihilator", self.pattern_matrix_annihilator),
            ("decomposition_round_trip", self.decomposition_round_trip),
            ("morse_hedlund", self.morse_hedlund),
            ("frobenius", self.frobenius),
            ("prime_tiling", self.prime_tiling),
            ("disjoint_lines", self.disjoint_lines),
            ("nivat_scan", self.nivat_scan),
        ]

    def evaluate(self) -> Dict[str, Any]:
        results: Dict[str, Any] = {}
        for name, check in self.checks():
            results[name] = self._timed(name, check)
        passed = sum(1 for r in results.values() if r.get("passed"))
        return {"total": len(results), "passed": passed, "checks": results}

    @staticmethod
    def _timed(name: str, check: Callable[[], Dict[str, Any]]) -> Dict[str, Any]:
        start = time.perf_counter()
        try:
            result = check()
        except Exception as e:
            logger.error(f"Check {name} raised -> {str(e)}")
            result = {"passed": False, "error": str(e)}
        result["seconds"] = round(time.perf_counter() - start, 2)
        logger.info(f"{name}: {'PASS' if result['passed'] else 'FAIL'} ({result['seconds']}s)")
        return result
