"""Annotated field types that keep rationals exact through JSON.

Rationals serialize as ``"p/q"`` strings, extended times as
``{"finite": true, "value": "p/q"}`` / ``{"finite": false}`` and projects as
``[[time, amount], ...]`` with string literals.
"""

from fractions import Fraction
from typing import Annotated, Any, Dict, List

from pydantic import BaseModel, ConfigDict, PlainSerializer, PlainValidator

from payback.models.project import INFINITY, ExtendedTime, Project, make_project
from payback.utils.rational import format_rational, to_rational


def _validate_rational(value: Any) -> Fraction:
    try:
        return to_rational(value)
    except ValueError as e:
        raise ValueError(str(e)) from e


def extended_time_to_json(value: ExtendedTime) -> Dict[str, Any]:
    if not value.is_finite:
        return {"finite": False}
    return {"finite": True, "value": format_rational(value.value)}


def _validate_extended_time(value: Any) -> ExtendedTime:
    if isinstance(value, ExtendedTime):
        return value
    if isinstance(value, dict):
        if not value.get("finite", False):
            return INFINITY
        return ExtendedTime(_validate_rational(value["value"]))
    if isinstance(value, str) and value.strip().lower() in ("inf", "+inf", "infinity"):
        return INFINITY
    return ExtendedTime(_validate_rational(value))


def project_to_json(value: Project) -> List[List[str]]:
    return [[format_rational(e.time), format_rational(e.amount)] for e in value.events]


def _validate_project(value: Any) -> Project:
    if isinstance(value, Project):
        return value
    return make_project((_validate_rational(t), _validate_rational(c)) for t, c in value)


RationalField = Annotated[
    Fraction,
    PlainValidator(_validate_rational),
    PlainSerializer(format_rational, return_type=str),
]

ExtendedTimeField = Annotated[
    ExtendedTime,
    PlainValidator(_validate_extended_time),
    PlainSerializer(extended_time_to_json, return_type=dict),
]

ProjectField = Annotated[
    Project,
    PlainValidator(_validate_project),
    PlainSerializer(project_to_json, return_type=list),
]


class PaybackSchema(BaseModel):
    """Base for report envelopes carrying domain values."""

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)
