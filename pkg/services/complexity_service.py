"""Pattern counting, Nivat scans, lines of blocks and period detection."""

from concurrent.futures import ThreadPoolExecutor
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Set, Tuple

import numpy as np

from algebra.laurent import Direction, LaurentPoly, bounding_box, difference_poly, fits_in, line_info
from configurations.base import Configuration
from configurations.structure import witness_anchors
from logger.logging import get_logger
from models.pydantic_models import (
    AnnihilationStatus,
    BlockLine,
    BlockLinesReport,
    ComplexityReport,
    ComplexityVerdict,
    ComplexLinesRow,
    MorseHedlundResult,
    NivatScanRow,
    PeriodSearchResult,
    ScanFlag,
    VeryThinRow,
)
from services.annihilator_service import AnnihilatorService
from utils.config_loader import ConfigLoader
from utils.exceptions import DimensionMismatchError, PreconditionError
from utils.lattice import Vector, reduce_along, vec_add, vectors_by_norm
from utils.regions import Box, canonical_shape, rectangle

logger = get_logger(__name__)

Pattern = Tuple[int, ...]


def _require_plane(c: Configuration, what: str):
    if c.dimension != 2:
        raise DimensionMismatchError(2, c.dimension, what)


def _pattern_rows(
    big: np.ndarray, big_box: Box, shape: Sequence[Vector], anchors: Box
) -> np.ndarray:
    columns = []
    for u in shape:
        start = tuple(a + x - b for a, x, b in zip(anchors.lo, u, big_box.lo))
        sl = tuple(slice(s, s + n) for s, n in zip(start, anchors.shape))
        columns.append(big[sl].reshape(-1))
    return np.stack(columns, axis=1)


def _cover_box(anchors: Box, shape: Sequence[Vector]) -> Box:
    d = len(anchors.lo)
    low = tuple(min(u[i] for u in shape) for i in range(d))
    high = tuple(max(u[i] for u in shape) for i in range(d))
    return Box(vec_add(anchors.lo, low), vec_add(anchors.hi, high))


class ComplexityService:
    """Counts D-patterns over finite regions and certifies when the count is exact.

    A count is Exact when the configuration exposes a periodic structure and
    every pattern occurring at its witness anchors was also seen in the
    region; otherwise the count is a lower bound on P_c(D).
    """

    def __init__(
        self,
        config_loader: Optional[ConfigLoader] = None,
        annihilator: Optional[AnnihilatorService] = None,
    ):
        try:
            self.config = config_loader or ConfigLoader()
            self.workers = int(self.config.get("complexity.workers", 4))
            self.scan_radius = int(self.config.get("complexity.scan_radius", 64))
            self.annihilator = annihilator or AnnihilatorService(self.config)
            logger.info("ComplexityService initialized")

        except Exception as e:
            error_msg = f"Error in ComplexityService Initialization -> {str(e)}"
            logger.error(error_msg)
            raise Exception(error_msg)

    # --- counting ---

    def _verdict(
        self, c: Configuration, shape: Sequence[Vector], seen: Set[Pattern]
    ) -> Tuple[ComplexityVerdict, Optional[int]]:
        structure = c.structure()
        if structure is None:
            return ComplexityVerdict.WINDOW_LOWER_BOUND, None
        anchors = witness_anchors(structure, shape)
        needed = {c.pattern(w, shape) for w in anchors}
        if needed <= seen:
            return ComplexityVerdict.EXACT, len(anchors)
        return ComplexityVerdict.WINDOW_LOWER_BOUND, len(anchors)

    def pattern_set(self, c: Configuration, shape, region: Box) -> Set[Pattern]:
        """Distinct shape-patterns with anchor in region."""
        shape = canonical_shape(shape)
        if len(shape[0]) != c.dimension:
            raise DimensionMismatchError(c.dimension, len(shape[0]), "shape")
        cover = _cover_box(region, shape)
        rows = _pattern_rows(c.window(cover), cover, shape, region)
        return set(map(tuple, rows))

    def distinct_patterns(self, c: Configuration, shape, region: Box) -> ComplexityReport:
        """Count distinct D-patterns with anchors in region.

        Args:
            c: Configuration.
            shape: Finite nonempty shape D.
            region: Box of anchors v; patterns c_{v+D} are read for each.

        Returns:
            ComplexityReport with the count and its verdict.
        """
        shape = canonical_shape(shape)
        seen = self.pattern_set(c, shape, region)
        verdict, witnesses = self._verdict(c, shape, seen)
        logger.info(f"P(D) over {region.to_text()}: {len(seen)} ({verdict.value})")
        return ComplexityReport(
            shape=[list(u) for u in shape],
            region=region.to_model(),
            count=len(seen),
            verdict=verdict,
            exactness_class=c.exactness_class,
            witness_anchors=witnesses,
        )

    def complexity_rect(self, c: Configuration, m: int, n: int, region: Box) -> ComplexityReport:
        """P_c(m, n) for the m x n rectangle [0,m) x [0,n)."""
        _require_plane(c, "rectangle complexity")
        return self.distinct_patterns(c, rectangle(m, n), region)

    def nivat_scan(
        self, c: Configuration, m_max: int, n_max: int, region: Optional[Box] = None
    ) -> List[NivatScanRow]:
        """One row per (m, n) in [1, m_max] x [1, n_max], in row-major order."""
        _require_plane(c, "Nivat scan")
        if m_max < 1 or n_max < 1:
            raise PreconditionError("scan bounds must be positive")
        region = region or Box.cube(2, -self.scan_radius, self.scan_radius)
        cover = region.expand((0, 0), (m_max - 1, n_max - 1))
        big = c.window(cover)

        def row(mn: Tuple[int, int]) -> NivatScanRow:
            m, n = mn
            shape = rectangle(m, n)
            seen = set(map(tuple, _pattern_rows(big, cover, shape, region)))
            verdict, _ = self._verdict(c, shape, seen)
            count = len(seen)
            flag = ScanFlag.ABOVE_BOUND if count > m * n else ScanFlag.AT_OR_BELOW_BOUND
            inconclusive = (
                flag == ScanFlag.AT_OR_BELOW_BOUND
                and verdict == ComplexityVerdict.WINDOW_LOWER_BOUND
            )
            if inconclusive:
                logger.warning(f"Scan row ({m},{n}): count {count} <= {m * n} on window only")
            return NivatScanRow(
                m=m, n=n, count=count, mn=m * n, flag=flag, verdict=verdict, inconclusive=inconclusive
            )

        pairs = [(m, n) for m in range(1, m_max + 1) for n in range(1, n_max + 1)]
        with ThreadPoolExecutor(max_workers=self.workers) as pool:
            rows = list(pool.map(row, pairs))
        above = sum(1 for r in rows if r.flag == ScanFlag.ABOVE_BOUND.value)
        logger.info(f"Nivat scan {m_max}x{n_max}: {above}/{len(rows)} rows above mn")
        return rows

    # --- lines of blocks ---

    def block_lines(
        self,
        c: Configuration,
        v: Sequence[int],
        M: int,
        N: int,
        region: Box,
        include_blocks: bool = False,
    ) -> BlockLinesReport:
        """Group M x N blocks anchored in region into lines along v.

        Lines are keyed by the canonical representative of the anchor modulo
        Z*v. The disjoint-line count is greedy over lines in key order: a
        line is taken when its observed block set meets none taken before.
        """
        _require_plane(c, "block lines")
        direction = Direction.of(v).vector
        shape = rectangle(M, N)
        cover = _cover_box(region, shape)
        rows = _pattern_rows(c.window(cover), cover, shape, region)

        lines: Dict[Vector, Set[Pattern]] = {}
        samples: Dict[Vector, int] = {}
        for anchor, block in zip(region.points(), map(tuple, rows)):
            key = reduce_along(anchor, direction)
            lines.setdefault(key, set()).add(block)
            samples[key] = samples.get(key, 0) + 1

        used: Set[Pattern] = set()
        disjoint = 0
        report_lines = []
        for key in sorted(lines):
            blocks = lines[key]
            if used.isdisjoint(blocks):
                used |= blocks
                disjoint += 1
            report_lines.append(
                BlockLine(
                    direction=list(direction),
                    anchor=list(key),
                    distinct_blocks=len(blocks),
                    sample_count=samples[key],
                    blocks=[list(b) for b in sorted(blocks)] if include_blocks else [],
                )
            )
        logger.info(f"{len(report_lines)} lines along {direction}, {disjoint} pairwise disjoint")
        return BlockLinesReport(
            direction=list(direction),
            block_width=M,
            block_height=N,
            region=region.to_model(),
            lines=report_lines,
            disjoint_line_count=disjoint,
        )

    @staticmethod
    def disjoint_lines_bound(f: LaurentPoly, M: int, N: int) -> int:
        """(M - m_f) n + m (N - n_f) for a line polynomial f with direction bbox (m, n)."""
        info = line_info(f)
        if info is None:
            raise PreconditionError("disjoint-lines bound needs a line polynomial")
        if f.dimension != 2:
            raise DimensionMismatchError(2, f.dimension, "polynomial")
        m_f, n_f = bounding_box(f).extents
        m, n = (abs(x) for x in info.direction.vector)
        return (M - m_f) * n + m * (N - n_f)

    @staticmethod
    def complex_lines_bound(phi_bbox: Sequence[int], v: Sequence[int], M: int, N: int) -> Fraction:
        """min((M - m_phi + 1)/m, (N - n_phi + 1)/n) for a direction v = (m, n) off the axes."""
        m, n = (abs(x) for x in Direction.of(v).vector)
        if m == 0 or n == 0:
            raise PreconditionError("complex-lines bound needs a non-axis direction")
        m_phi, n_phi = phi_bbox
        return min(Fraction(M - m_phi + 1, m), Fraction(N - n_phi + 1, n))

    def check_complex_lines(
        self, c: Configuration, phi: LaurentPoly, v: Sequence[int], M: int, N: int, region: Box
    ) -> List[ComplexLinesRow]:
        bound = self.complex_lines_bound(bounding_box(phi).extents, v, M, N)
        report = self.block_lines(c, v, M, N, region)
        return [
            ComplexLinesRow(
                anchor=line.anchor,
                distinct_blocks=line.distinct_blocks,
                bound=float(bound),
                satisfied=line.distinct_blocks >= bound,
            )
            for line in report.lines
        ]

    def very_thin_check(
        self, c: Configuration, phi: LaurentPoly, M: int, N: int, region: Box
    ) -> VeryThinRow:
        """P_c(M, N) for a rectangle no multiple of phi fits in."""
        fits = fits_in(phi, rectangle(M, N)) is not None
        report = self.complexity_rect(c, M, N, region)
        return VeryThinRow(
            m=M, n=N, count=report.count, fits=fits, above_bound=report.count > M * N
        )

    # --- periodicity ---

    def find_period(
        self, c: Configuration, bound: Optional[int] = None, region: Optional[Box] = None
    ) -> PeriodSearchResult:
        """First v (by norm, then lexicographic) with (X^v - 1) c = 0.

        Certified configurations give proven periods; otherwise the first
        vector vanishing on the region is returned as a candidate period.
        """
        bound = bound or self.annihilator.default_period_bound
        region = region or self.annihilator.default_region(c)
        certified = c.structure() is not None
        vanishes = None if certified else self.annihilator.region_checker(c, region, bound)

        checked = 0
        for v in vectors_by_norm(c.dimension, bound):
            checked += 1
            f = difference_poly(v)
            if certified:
                if self.annihilator.verify_annihilator(f, c).refuted:
                    continue
                status, label = AnnihilationStatus.PROVEN_ZERO, "proven period"
            else:
                if not vanishes(f):
                    continue
                status, label = AnnihilationStatus.ZERO_ON_REGION, "candidate period"
            logger.info(f"Period {v} found after {checked} candidates ({label})")
            return PeriodSearchResult(
                period=list(v), status=status, label=label, candidates_checked=checked
            )
        logger.info(f"No period of norm <= {bound} ({checked} candidates)")
        return PeriodSearchResult(label="none", candidates_checked=checked)

    @staticmethod
    def morse_hedlund_1d(word: Sequence[int], n: int) -> MorseHedlundResult:
        """Count length-n factors; with at most n of them, find a period.

        The period search tries p = 1..count and accepts the first p that
        holds on a suffix covering at least half of the word; ``onset`` is
        where that suffix starts.
        """
        word = list(word)
        if n < 1:
            raise PreconditionError("factor length must be positive")
        if len(word) < 2 * n:
            raise PreconditionError(f"word of length {len(word)} is shorter than 2n = {2 * n}")
        factors = {tuple(word[i : i + n]) for i in range(len(word) - n + 1)}
        count = len(factors)
        period = onset = None
        if count <= n:
            for p in range(1, count + 1):
                breaks = [i for i in range(len(word) - p) if word[i] != word[i + p]]
                start = breaks[-1] + 1 if breaks else 0
                if len(word) - start >= len(word) / 2:
                    period, onset = p, start
                    break
        return MorseHedlundResult(n=n, factor_count=count, period=period, onset=onset)
