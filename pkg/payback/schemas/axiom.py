"""Pydantic schemas for the axiom harness."""

from enum import Enum as PyEnum
from fractions import Fraction
from typing import Dict, List, Optional, Tuple

from pydantic import Field, field_validator

from payback.schemas.fields import ExtendedTimeField, PaybackSchema, ProjectField, RationalField


class AxiomName(PyEnum):
    """Axioms checked by the harness."""
    COMP = "COMP"
    ACONS = "ACONS"
    MON = "MON"
    LSC = "LSC"
    ALPHA_COMP = "ALPHA_COMP"
    ALPHA_MON = "ALPHA_MON"


class GeneratorParams(PaybackSchema):
    """Random project generator parameters."""

    max_events: int = Field(12, ge=0)
    time_range: RationalField = Field(Fraction(10))
    amount_range: RationalField = Field(Fraction(100))
    max_denominator: int = Field(64, ge=1)
    time_grid: Optional[Tuple[RationalField, ...]] = Field(
        None, description="Restrict event times to these values"
    )

    @field_validator("time_range", "amount_range")
    @classmethod
    def validate_positive(cls, v):
        if v <= 0:
            raise ValueError("ranges must be positive")
        return v


class Witness(PaybackSchema):
    """A concrete axiom violation; replaying the functional reproduces ``observed``."""

    axiom: AxiomName
    inputs: List[ProjectField]
    parameters: Dict[str, RationalField] = Field(default_factory=dict)
    observed: List[ExtendedTimeField]
    expected_relation: str


class AxiomReport(PaybackSchema):
    """Outcome of one axiom suite against one functional."""

    axiom: AxiomName
    functional: str
    trials: int = Field(..., ge=0)
    seed: Optional[int] = None
    violations: List[Witness] = Field(default_factory=list)
    violation_count: int = 0
    applicable: bool = True
    note: Optional[str] = None
    stable_delta: Optional[RationalField] = Field(
        None, description="LSC: largest tested radius with no dropping perturbation"
    )

    @property
    def passed(self) -> bool:
        return self.applicable and self.violation_count == 0
