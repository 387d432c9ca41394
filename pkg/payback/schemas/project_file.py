"""Schema of JSON cash flow documents."""

from typing import List, Optional

from pydantic import Field

from payback.schemas.fields import PaybackSchema, RationalField


class EventIn(PaybackSchema):
    """One raw cash flow: ``{"t": time, "c": amount}``."""

    t: RationalField = Field(..., description="Event time")
    c: RationalField = Field(..., description="Net cash flow")


class ProjectFile(PaybackSchema):
    """A named raw event list as read from disk."""

    name: Optional[str] = Field(None, description="Project name")
    events: List[EventIn] = Field(default_factory=list)

    def raw_events(self):
        return [(e.t, e.c) for e in self.events]
