"""JSON descriptors for configurations."""

from enum import Enum
from typing import List, Optional

from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator


class DescriptorType(str, Enum):
    FULL_PERIODIC = "full_periodic"
    FIBER_PERIODIC = "fiber_periodic"
    BEATTY = "beatty"
    CONSTANT = "constant"
    RANDOM = "random"
    EXAMPLE = "example"
    SUM = "sum"
    DIFFERENCE = "difference"
    SCALE = "scale"
    TRANSLATE = "translate"
    MIRROR = "mirror"
    POLY_APPLY = "poly_apply"
    BINARIZE = "binarize"


class TableEntry(BaseModel):
    at: List[int] = Field(..., description="A point of the coset or line")
    value: int


class AlphaModel(BaseModel):
    """alpha = (p + s*sqrt(q)) / r."""

    p: int
    s: int
    q: int = Field(..., ge=0)
    r: int

    @field_validator("r")
    @classmethod
    def r_must_be_nonzero(cls, v):
        if v == 0:
            raise ValueError("r must be nonzero")
        return v


_REQUIRED = {
    DescriptorType.FULL_PERIODIC: ("basis", "table"),
    DescriptorType.FIBER_PERIODIC: ("period", "table"),
    DescriptorType.BEATTY: ("alpha", "weights"),
    DescriptorType.CONSTANT: ("value",),
    DescriptorType.RANDOM: ("seed",),
    DescriptorType.EXAMPLE: ("name",),
    DescriptorType.SCALE: ("factor",),
    DescriptorType.TRANSLATE: ("vector",),
    DescriptorType.MIRROR: ("axis",),
    DescriptorType.POLY_APPLY: ("poly",),
    DescriptorType.BINARIZE: ("ones",),
}

_OPERANDS = {
    DescriptorType.SUM: None,
    DescriptorType.DIFFERENCE: 2,
    DescriptorType.SCALE: 1,
    DescriptorType.TRANSLATE: 1,
    DescriptorType.MIRROR: 1,
    DescriptorType.POLY_APPLY: 1,
    DescriptorType.BINARIZE: 1,
}


class ConfigDescriptor(BaseModel):
    """One node of a configuration description, discriminated on ``type``."""

    dim: int = Field(..., ge=1, description="Ambient dimension d")
    type: DescriptorType
    basis: Optional[List[List[int]]] = Field(None, description="Period lattice basis")
    period: Optional[List[int]] = Field(None, description="Fiber period vector")
    table: Optional[List[TableEntry]] = Field(None, description="Values per coset or line")
    default: Optional[int] = Field(None, description="Value of cosets missing from table")
    alpha: Optional[AlphaModel] = None
    weights: Optional[List[int]] = None
    value: Optional[int] = None
    seed: Optional[int] = None
    alphabet: Optional[List[int]] = Field(None, description="Declared value set")
    name: Optional[str] = Field(None, description="Built-in example name")
    n: Optional[int] = Field(None, ge=1, description="Example parameter")
    factor: Optional[int] = None
    vector: Optional[List[int]] = None
    axis: Optional[int] = Field(None, ge=0)
    poly: Optional[str] = None
    ones: Optional[List[int]] = None
    operands: List["ConfigDescriptor"] = Field(default_factory=list)

    model_config = ConfigDict(use_enum_values=True)

    @model_validator(mode="after")
    def fields_match_type(self):
        kind = DescriptorType(self.type)
        missing = [f for f in _REQUIRED.get(kind, ()) if getattr(self, f) is None]
        if missing:
            raise ValueError(f"{kind.value} descriptor needs {', '.join(missing)}")
        expected = _OPERANDS.get(kind, 0)
        count = len(self.operands)
        if expected is None:
            if count < 1:
                raise ValueError("sum descriptor needs at least one operand")
        elif count != expected:
            raise ValueError(f"{kind.value} descriptor takes {expected} operand(s), got {count}")
        for child in self.operands:
            if child.dim != self.dim:
                raise ValueError(f"operand dimension {child.dim} differs from {self.dim}")
        return self


ConfigDescriptor.model_rebuild()
