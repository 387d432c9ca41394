"""Pydantic schemas for metric, comparison and portfolio reports."""

from enum import Enum as PyEnum
from typing import List, Optional

from pydantic import Field

from payback.models.project import ProjectTag
from payback.schemas.fields import ExtendedTimeField, PaybackSchema, ProjectField, RationalField


class MetricKind(PyEnum):
    """Payback metric recipes."""
    LAST_BREAKEVEN = "LAST_BREAKEVEN"
    FIRST_BREAKEVEN = "FIRST_BREAKEVEN"
    MODIFIED = "MODIFIED"
    DISCOUNTED_LAST = "DISCOUNTED_LAST"


class MetricReport(PaybackSchema):
    """One metric evaluated on one project."""

    kind: MetricKind = Field(..., description="Metric recipe")
    value: ExtendedTimeField = Field(..., description="Metric value; +inf when the balance never settles")
    breakeven_points: List[RationalField] = Field(
        default_factory=list,
        description="Break-even points of the stream the metric is computed on",
    )
    acceptable: Optional[bool] = Field(None, description="value <= mapp, when a MAPP was given")
    mapp: Optional[RationalField] = Field(None, description="Maximum acceptable payback period")
    approximate: bool = Field(False, description="Computed from an approximate discount factor")
    project: Optional[str] = Field(None, description="Project name")


class AnalysisReport(PaybackSchema):
    """Result of the analyze command."""

    project: str
    events: ProjectField
    reports: List[MetricReport]


class ComparisonReport(PaybackSchema):
    """All metrics of one project side by side."""

    project: str
    events: ProjectField
    classification: ProjectTag
    phase_switch: Optional[RationalField] = None
    terminal_value: RationalField
    breakeven_points: List[RationalField]
    last_breakeven: ExtendedTimeField
    first_breakeven: ExtendedTimeField
    modified: ExtendedTimeField
    modified_stream: ProjectField
    discounted_last: Optional[ExtendedTimeField] = None


class PortfolioReport(PaybackSchema):
    """Per-project metrics, the pooled project and the max-rule check."""

    kind: MetricKind
    projects: List[MetricReport]
    pool: MetricReport
    max_rule_bound: ExtendedTimeField = Field(..., description="Max of the component values")
    max_rule_holds: bool = Field(..., description="pool value <= max_rule_bound")
