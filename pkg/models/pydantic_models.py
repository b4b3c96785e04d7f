"""Pydantic models for reports, verdicts and API payloads."""

from datetime import datetime
from enum import Enum
from typing import Any, Dict, List, Optional

from pydantic import BaseModel, ConfigDict, Field, field_validator


class ExactnessClass(str, Enum):
    """What a configuration lets us decide from finite data."""

    FULL_LATTICE_PERIODIC = "full_lattice_periodic"
    FIBER_PERIODIC_FINITE = "fiber_periodic_finite"
    ORACLE_ONLY = "oracle_only"


class ComplexityVerdict(str, Enum):
    EXACT = "exact"
    WINDOW_LOWER_BOUND = "window_lower_bound"


class ScanFlag(str, Enum):
    ABOVE_BOUND = "above_bound"
    AT_OR_BELOW_BOUND = "at_or_below_bound"


class AnnihilationStatus(str, Enum):
    """Verification tiers for a product f*c."""

    PROVEN_ZERO = "proven_zero"
    ZERO_ON_REGION = "zero_on_region"
    NONZERO_AT = "nonzero_at"


class PeriodicityKind(str, Enum):
    DOUBLY_PERIODIC = "doubly_periodic"
    ONE_PERIODIC = "one_periodic"
    NON_PERIODIC_EVIDENCE = "non_periodic_evidence"


class NormalizationStatus(str, Enum):
    NORMALIZING = "normalizing"
    ALREADY_NORMALIZED = "already_normalized"
    INCONCLUSIVE = "inconclusive"


class TilingStatus(str, Enum):
    PROVEN_CONSTANT_ONE = "proven_constant_one"
    COVER_MISMATCH = "cover_mismatch"


class CosetKind(str, Enum):
    HORIZONTAL = "horizontal"
    VERTICAL = "vertical"
    DOUBLY = "doubly"


# --- shared pieces ---


class RegionModel(BaseModel):
    """Inclusive integer box."""

    lo: List[int] = Field(..., description="Lower corner (inclusive)")
    hi: List[int] = Field(..., description="Upper corner (inclusive)")

    @field_validator("hi")
    @classmethod
    def corners_must_match(cls, v, info):
        lo = info.data.get("lo")
        if lo is not None and len(lo) != len(v):
            raise ValueError("lo and hi must have the same dimension")
        return v


# --- complexity ---


class ComplexityReport(BaseModel):
    """Distinct-pattern count for a shape over a region."""

    shape: List[List[int]] = Field(..., description="Shape D, lexicographic order")
    region: RegionModel = Field(..., description="Anchors scanned")
    count: int = Field(..., description="Distinct D-patterns seen")
    verdict: ComplexityVerdict = Field(..., description="Exact or lower bound")
    exactness_class: ExactnessClass = Field(..., description="Configuration class")
    witness_anchors: Optional[int] = Field(
        None, description="Size of the certified witness set, when one exists"
    )

    model_config = ConfigDict(use_enum_values=True)


class NivatScanRow(BaseModel):
    m: int
    n: int
    count: int
    mn: int
    flag: ScanFlag
    verdict: ComplexityVerdict
    inconclusive: bool = Field(
        False, description="At or below mn but only window evidence"
    )

    model_config = ConfigDict(use_enum_values=True)


class BlockLine(BaseModel):
    direction: List[int] = Field(..., description="Primitive direction of the line")
    anchor: List[int] = Field(..., description="Canonical transverse representative")
    distinct_blocks: int = Field(..., description="Distinct M x N blocks on the line")
    sample_count: int = Field(..., description="Anchors sampled on the line")
    blocks: List[List[int]] = Field(
        default_factory=list, description="Observed blocks, sorted"
    )


class BlockLinesReport(BaseModel):
    direction: List[int]
    block_width: int = Field(..., description="M")
    block_height: int = Field(..., description="N")
    region: RegionModel
    lines: List[BlockLine] = Field(default_factory=list)
    disjoint_line_count: int = Field(
        0, description="Greedy count of pairwise disjoint observed block sets"
    )


class PeriodSearchResult(BaseModel):
    period: Optional[List[int]] = Field(None, description="First period found")
    status: Optional[AnnihilationStatus] = Field(
        None, description="Verification tier of the returned period"
    )
    label: str = Field("", description="proven period, candidate period or none")
    candidates_checked: int = Field(0)

    model_config = ConfigDict(use_enum_values=True)


class MorseHedlundResult(BaseModel):
    n: int
    factor_count: int
    period: Optional[int] = Field(None, description="Period valid on the given word")
    onset: Optional[int] = Field(None, description="First index from which the period holds")
    conclusion: str = Field("on-window", description="Scope of the conclusion")


class ComplexLinesRow(BaseModel):
    anchor: List[int]
    distinct_blocks: int
    bound: float
    satisfied: bool


class VeryThinRow(BaseModel):
    m: int
    n: int
    count: int
    fits: bool = Field(..., description="Whether some annihilator fits the rectangle")
    above_bound: bool


# --- annihilators ---


class AnnihilationVerdict(BaseModel):
    """Evidence for or against f*c = 0."""

    status: AnnihilationStatus
    polynomial: str = Field(..., description="The polynomial checked")
    exactness_class: ExactnessClass
    checked_domain: str = Field(
        "", description="Witness anchors or region that was evaluated"
    )
    checked_points: int = Field(0)
    region: Optional[RegionModel] = Field(None)
    position: Optional[List[int]] = Field(None, description="First nonzero position")
    value: Optional[int] = Field(None, description="Value of f*c at position")

    model_config = ConfigDict(use_enum_values=True)

    @property
    def refuted(self) -> bool:
        return self.status == AnnihilationStatus.NONZERO_AT.value


class AnnihilatorResult(BaseModel):
    g: str = Field(..., description="g with g*c constant on the region")
    f: str = Field(..., description="Annihilator (X^e1 - 1) * g")
    constant: int = Field(..., description="Value of g*c on the region")
    kernel_dimension: int
    distinct_rows: int
    anchors: int


class DifferenceProductCertificate(BaseModel):
    vectors: List[List[int]] = Field(..., description="v_1..v_m")
    product: str = Field(..., description="prod (X^v_i - 1)")
    verdict: AnnihilationVerdict
    candidates_checked: int = Field(0)


class NormalizationWitness(BaseModel):
    status: NormalizationStatus
    a: Optional[int] = Field(None, description="Scale, sigma(g)")
    b: Optional[int] = Field(None, description="Shift, -kappa(g)")
    witness: Optional[str] = Field(None, description="g with g*c = kappa")
    sigma: Optional[int] = None
    kappa: Optional[int] = None
    witnesses_checked: int = 0

    model_config = ConfigDict(use_enum_values=True)


class ExpansionRow(BaseModel):
    n: int
    verdict: AnnihilationVerdict


class PeriodicityClassification(BaseModel):
    kind: PeriodicityKind
    m_star: int = Field(..., description="Surviving factor count (opc surrogate)")
    surviving_vectors: List[List[int]] = Field(default_factory=list)
    direction: Optional[List[int]] = None
    periods: List[List[int]] = Field(default_factory=list)

    model_config = ConfigDict(use_enum_values=True)


class RadicalCheckReport(BaseModel):
    power: int
    power_verdict: AnnihilationVerdict
    base_verdict: AnnihilationVerdict
    consistent: bool


# --- decomposition ---


class ComponentEvidence(BaseModel):
    index: int
    factor: str
    verdict: AnnihilationVerdict
    max_abs_value: int
    integral: bool = True
    window_dump: Optional[List[Any]] = Field(None, description="Row-major values")


class DecompositionReport(BaseModel):
    factors: List[str]
    window: RegionModel
    components: List[ComponentEvidence] = Field(default_factory=list)
    residual_max_abs: int = Field(0, description="max |c - sum c_i| on the window")
    residual_position: Optional[List[int]] = None


class CosetClassification(BaseModel):
    residue: List[int]
    kind: CosetKind

    model_config = ConfigDict(use_enum_values=True)


class SublatticeSplitReport(BaseModel):
    m: int
    n: int
    window: RegionModel
    cosets: List[CosetClassification] = Field(default_factory=list)


# --- tiling ---


class TilingVerdict(BaseModel):
    status: TilingStatus
    fundamental_domain_size: int
    position: Optional[List[int]] = None
    cover_count: Optional[int] = None

    model_config = ConfigDict(use_enum_values=True)


class TilingResidualReport(BaseModel):
    max_deviation: int
    position: Optional[List[int]] = None


class PrimePeriodReport(BaseModel):
    p: int
    periods: List[List[int]] = Field(default_factory=list)


class LatticeCotilerSearch(BaseModel):
    """Lattices L with |Z^d / L| = |D| for which D + L = Z^d."""

    tile: List[List[int]]
    index: int = Field(..., description="Number of cosets, equal to |D|")
    lattices_checked: int = 0
    cotilers: List[List[List[int]]] = Field(
        default_factory=list, description="Hermite bases of the co-tiling lattices"
    )


# --- runs and API ---


class RunManifest(BaseModel):
    """Everything needed to reproduce a CLI run."""

    command: str
    inputs: List[str] = Field(default_factory=list)
    parameters: Dict[str, Any] = Field(default_factory=dict)
    outputs: List[str] = Field(default_factory=list)
    seed: Optional[int] = None
    version: str = "1.0.0"


class VerifyRequest(BaseModel):
    config: Dict[str, Any] = Field(..., description="Configuration descriptor")
    poly: str = Field(..., description="Polynomial text")
    region: Optional[str] = Field(None, description="Region 'a..b[,a..b]'")

    @field_validator("poly")
    @classmethod
    def poly_must_not_be_empty(cls, v):
        if not v or not v.strip():
            raise ValueError("Polynomial cannot be empty")
        return v.strip()


class ComplexityRequest(BaseModel):
    config: Dict[str, Any]
    shape: List[List[int]] = Field(..., description="Shape D")
    region: str


class ScanRequest(BaseModel):
    config: Dict[str, Any]
    max_m: int = Field(6, ge=1, le=32)
    max_n: int = Field(6, ge=1, le=32)
    region: str


class AnnihilateRequest(BaseModel):
    config: Dict[str, Any]
    region: Optional[str] = None
    max_norm: int = Field(2, ge=1, le=8)
    max_factors: int = Field(3, ge=1, le=4)


class TileRequest(BaseModel):
    tile: List[List[int]] = Field(..., description="Cluster tile cells")
    basis: List[List[int]] = Field(..., description="Co-tiler lattice basis")
    residues: Optional[List[List[int]]] = Field(
        None, description="Coset representatives in C (default: the lattice itself)"
    )


class HealthResponse(BaseModel):
    status: str = Field("ok", description="Service status")
    services: Dict[str, str] = Field(default_factory=dict)
    version: str = Field("1.0.0", description="API version")
    timestamp: datetime = Field(default_factory=datetime.now)
