"""Projects as right-continuous step functions of the cumulative balance.

A project x = sum_k c_k 1_{tau_k} is stored in canonical form: events sorted
by strictly increasing time, one event per time, no zero amounts. Two
projects have the same balance function iff their canonical event tuples
are equal. The balance is constant between events, so every pointwise
quantifier is decided on the finite event grid.
"""

from bisect import bisect_right
from dataclasses import dataclass, field
from enum import Enum as PyEnum
from fractions import Fraction
from functools import cached_property, total_ordering
from itertools import chain
from typing import FrozenSet, Iterable, List, Optional, Tuple, Union

from payback.exceptions import InvalidEventError
from payback.utils.rational import RationalLike, format_rational, to_rational

ZERO = Fraction(0)


@total_ordering
@dataclass(frozen=True, slots=True)
class ExtendedTime:
    """A nonnegative rational time or +inf; +inf is the maximum."""

    value: Optional[Fraction]

    def __post_init__(self):
        if self.value is not None and self.value < 0:
            raise InvalidEventError(f"negative time {self.value}")

    @classmethod
    def of(cls, value: RationalLike) -> "ExtendedTime":
        return cls(to_rational(value))

    @classmethod
    def infinity(cls) -> "ExtendedTime":
        return cls(None)

    @property
    def is_finite(self) -> bool:
        return self.value is not None

    def __lt__(self, other: "ExtendedTime") -> bool:
        if not isinstance(other, ExtendedTime):
            return NotImplemented
        if self.value is None:
            return False
        if other.value is None:
            return True
        return self.value < other.value

    def __str__(self) -> str:
        return "inf" if self.value is None else format_rational(self.value)


INFINITY = ExtendedTime.infinity()
TIME_ZERO = ExtendedTime(ZERO)


@dataclass(frozen=True, slots=True)
class Event:
    """One dated net cash flow: the pair (c_k, tau_k) of a term c_k 1_{tau_k}."""

    time: Fraction
    amount: Fraction


@dataclass(frozen=True, slots=True)
class Interval:
    """Half-open interval [start, end); end may be +inf."""

    start: Fraction
    end: ExtendedTime

    def contains(self, t: Fraction) -> bool:
        return t >= self.start and (not self.end.is_finite or t < self.end.value)


@dataclass(frozen=True)
class Project:
    """A project in canonical form; the empty tuple is the zero project."""

    events: Tuple[Event, ...] = ()

    def __post_init__(self):
        previous = None
        for event in self.events:
            if event.time < 0:
                raise InvalidEventError(f"negative event time {event.time}")
            if event.amount == 0:
                raise InvalidEventError(f"zero amount at time {event.time} in canonical project")
            if previous is not None and event.time <= previous:
                raise InvalidEventError("canonical project events must have strictly increasing times")
            previous = event.time

    @cached_property
    def times(self) -> Tuple[Fraction, ...]:
        return tuple(e.time for e in self.events)

    @cached_property
    def balances(self) -> Tuple[Fraction, ...]:
        """Balance at each event time (prefix sums of amounts)."""
        running = ZERO
        out = []
        for e in self.events:
            running += e.amount
            out.append(running)
        return tuple(out)

    @property
    def is_zero(self) -> bool:
        return not self.events

    def pairs(self) -> List[Tuple[Fraction, Fraction]]:
        return [(e.time, e.amount) for e in self.events]

    def __call__(self, t: RationalLike) -> Fraction:
        return evaluate(self, t)

    def __add__(self, other: "Project") -> "Project":
        if not isinstance(other, Project):
            return NotImplemented
        return add(self, other)

    def __neg__(self) -> "Project":
        return negate(self)

    def __sub__(self, other: "Project") -> "Project":
        if not isinstance(other, Project):
            return NotImplemented
        return add(self, negate(other))

    def __mul__(self, factor: RationalLike) -> "Project":
        return scale(self, factor)

    __rmul__ = __mul__

    def __le__(self, other: "Project") -> bool:
        """Pointwise order x <= y of balance functions."""
        if not isinstance(other, Project):
            return NotImplemented
        return dominates(self, other)

    def __str__(self) -> str:
        if not self.events:
            return "[]"
        inner = ", ".join(f"({format_rational(e.time)}, {format_rational(e.amount)})" for e in self.events)
        return f"[{inner}]"


ZERO_PROJECT = Project()

RawEvent = Union[Event, Tuple[RationalLike, RationalLike]]


class ProjectTag(PyEnum):
    """Structural class of a balance function, most specific first."""

    ZERO = "ZERO"
    NONNEGATIVE = "NONNEGATIVE"
    P0 = "P0"
    P2 = "P2"
    P1 = "P1"
    GENERAL = "GENERAL"


@dataclass(frozen=True)
class ProjectClass:
    """Classification result; memberships holds every class the project is in."""

    tag: ProjectTag
    phase_switch: Optional[Fraction] = None
    memberships: FrozenSet[ProjectTag] = field(default_factory=frozenset)


def make_project(raw_events: Iterable[RawEvent]) -> Project:
    """Normalize raw (time, amount) pairs to the canonical project.

    Same-time amounts are summed, zero net amounts dropped and events sorted.
    """
    merged = {}
    for raw in raw_events:
        if isinstance(raw, Event):
            time, amount = raw.time, raw.amount
        else:
            time, amount = raw
            time, amount = to_rational(time), to_rational(amount)
        if time < 0:
            raise InvalidEventError(f"negative event time {time}")
        merged[time] = merged.get(time, ZERO) + amount
    return Project(tuple(Event(t, merged[t]) for t in sorted(merged) if merged[t] != 0))


def evaluate(x: Project, t: RationalLike) -> Fraction:
    """Balance x(t): sum of amounts dated at or before t."""
    t = to_rational(t)
    if t < 0:
        raise InvalidEventError(f"balance is undefined at negative time {t}")
    idx = bisect_right(x.times, t)
    return x.balances[idx - 1] if idx else ZERO


def add(x: Project, y: Project) -> Project:
    if x.is_zero:
        return y
    if y.is_zero:
        return x
    return make_project(chain(x.events, y.events))


def scale(x: Project, factor: RationalLike) -> Project:
    factor = to_rational(factor)
    if factor == 0:
        return ZERO_PROJECT
    return Project(tuple(Event(e.time, e.amount * factor) for e in x.events))


def negate(x: Project) -> Project:
    return scale(x, -1)


def dominates(x: Project, y: Project) -> bool:
    """True iff x <= y pointwise, i.e. the balance of y - x is never negative."""
    return all(b >= 0 for b in add(y, negate(x)).balances)


def terminal_value(x: Project) -> Fraction:
    """Balance after the last event."""
    return x.balances[-1] if x.events else ZERO


def negative_set(x: Project, tolerance: Fraction = ZERO) -> List[Interval]:
    """Maximal intervals on which the balance is below -tolerance, in order."""
    intervals = []
    start = None
    for event, balance in zip(x.events, x.balances):
        if balance < -tolerance:
            if start is None:
                start = event.time
        elif start is not None:
            intervals.append(Interval(start, ExtendedTime(event.time)))
            start = None
    if start is not None:
        intervals.append(Interval(start, INFINITY))
    return intervals


def in_p0(x: Project) -> bool:
    """x = -a 1_0 + b 1_tau with 0 < a <= b, tau > 0."""
    if len(x.events) != 2:
        return False
    first, second = x.events
    return first.time == 0 and first.amount < 0 and second.amount >= -first.amount


def in_p1(x: Project) -> bool:
    """x(0) < 0, x nondecreasing and nonnegative from some finite time on."""
    if not x.events or x.events[0].time != 0 or x.events[0].amount >= 0:
        return False
    return all(e.amount > 0 for e in x.events[1:]) and terminal_value(x) >= 0


def in_p2(x: Project) -> bool:
    """Negative on [0, tau) and nonnegative on [tau, inf) for some tau > 0."""
    neg = negative_set(x)
    return len(neg) == 1 and neg[0].start == 0 and neg[0].end.is_finite


def classify(x: Project) -> ProjectClass:
    """Most specific class with precedence ZERO > NONNEGATIVE > P0 > P2 > P1 > GENERAL."""
    if x.is_zero:
        return ProjectClass(ProjectTag.ZERO, None, frozenset({ProjectTag.ZERO, ProjectTag.NONNEGATIVE}))

    neg = negative_set(x)
    if not neg:
        return ProjectClass(ProjectTag.NONNEGATIVE, None, frozenset({ProjectTag.NONNEGATIVE}))

    memberships = set()
    if in_p0(x):
        memberships.add(ProjectTag.P0)
    if in_p1(x):
        memberships.add(ProjectTag.P1)
    if len(neg) == 1 and neg[0].start == 0 and neg[0].end.is_finite:
        memberships.add(ProjectTag.P2)
    if not memberships:
        return ProjectClass(ProjectTag.GENERAL, None, frozenset({ProjectTag.GENERAL}))

    for tag in (ProjectTag.P0, ProjectTag.P2, ProjectTag.P1):
        if tag in memberships:
            return ProjectClass(tag, neg[0].end.value, frozenset(memberships))
    raise AssertionError("unreachable")
