"""Payback metrics: the last break-even point, its oracles and the rival recipes."""

from fractions import Fraction
from typing import Dict, List, Optional

import structlog

from payback.config import analysis_config
from payback.exceptions import PreconditionError, UsageError
from payback.models.discount import DiscountFunction
from payback.models.project import (
    INFINITY,
    TIME_ZERO,
    ZERO,
    ExtendedTime,
    Project,
    dominates,
    evaluate,
    make_project,
    negative_set,
    terminal_value,
)
from payback.schemas.report import MetricKind, MetricReport
from payback.services.discount import discount_stream, is_exact_for
from payback.utils.logging import log_metric_event
from payback.utils.rational import RationalLike, to_rational

logger = structlog.get_logger(__name__)


def payback(x: Project, tolerance: Fraction = ZERO) -> ExtendedTime:
    """inf{tau >= 0 : x(t) >= 0 for all t >= tau}.

    ``tolerance`` widens "nonnegative" to ">= -tolerance"; it is zero except
    for approximately discounted streams.
    """
    if terminal_value(x) < -tolerance:
        return INFINITY
    neg = negative_set(x, tolerance)
    if not neg:
        return TIME_ZERO
    return neg[-1].end


def _candidate_times(x: Project) -> List[Fraction]:
    """Positive grid on which feasibility of tau is decided.

    Event times, midpoints between them, one point past the last event, and
    one point below the first positive event time.
    """
    times = x.times
    positive = [t for t in times if t > 0]
    candidates = set(positive)
    candidates.update((a + b) / 2 for a, b in zip(times, times[1:]))
    candidates.add((times[-1] if times else ZERO) + 1)
    candidates.add(positive[0] / 2 if positive else Fraction(1, 2))
    return sorted(c for c in candidates if c > 0)


def payback_oracle_dominance(x: Project) -> ExtendedTime:
    """inf{tau > 0 : -a 1_0 + b 1_tau <= x for some 0 < a <= b}.

    A candidate tau is tested by building the two-transaction project with
    a = b = max(1, -min balance on [0, tau)) + 1 and checking dominance.
    """
    candidates = _candidate_times(x)
    feasible = None
    for tau in candidates:
        before = [b for t, b in zip(x.times, x.balances) if t < tau]
        a = max(Fraction(1), -min(before, default=ZERO)) + 1
        witness = make_project([(0, -a), (tau, a)])
        if dominates(witness, x):
            feasible = tau
            break
    if feasible is None:
        return INFINITY
    if feasible == candidates[0]:
        # feasible below every positive event time: every tau > 0 is
        return TIME_ZERO
    return ExtendedTime(feasible)


def payback_oracle_grid(x: Project) -> ExtendedTime:
    """Brute-force scan of the balance on event times, midpoints and beyond."""
    times = list(x.times)
    grid = set(times) | {ZERO}
    grid.update((a + b) / 2 for a, b in zip(times, times[1:]))
    beyond = (times[-1] if times else ZERO) + 1
    grid.add(beyond)

    last_negative = None
    for point in sorted(grid, reverse=True):
        if evaluate(x, point) < 0:
            last_negative = point
            break
    if last_negative is None:
        return TIME_ZERO
    if last_negative == beyond:
        return INFINITY
    return ExtendedTime(min(t for t in times if t > last_negative))


def first_breakeven(x: Project) -> ExtendedTime:
    """sup{tau > 0 : x(t) < 0 on [0, tau]}, with sup of the empty set = 0."""
    if evaluate(x, 0) >= 0:
        return TIME_ZERO
    for event, balance in zip(x.events, x.balances):
        if balance >= 0:
            return ExtendedTime(event.time)
    return INFINITY


def breakeven_points(x: Project) -> List[Fraction]:
    """Event times where the balance recovers from negative to nonnegative."""
    points = []
    before = ZERO
    for event, balance in zip(x.events, x.balances):
        if before < 0 <= balance:
            points.append(event.time)
        before = balance
    return points


def modified_project(x: Project) -> Project:
    """(0, -A) plus every inflow, A being the total outflow of x."""
    outflow = sum((-e.amount for e in x.events if e.amount < 0), ZERO)
    inflows = [e for e in x.events if e.amount > 0]
    return make_project([(ZERO, -outflow)] + inflows)


def modified_payback(x: Project) -> ExtendedTime:
    """First time the cumulative inflow reaches the total outflow."""
    return payback(modified_project(x))


def discounted_payback(
    x: Project,
    alpha: DiscountFunction,
    tolerance: Optional[Fraction] = None,
) -> ExtendedTime:
    """payback(x^(alpha)); the sign tolerance only applies to approximate factors."""
    if tolerance is None:
        tolerance = ZERO if is_exact_for(x, alpha) else analysis_config.get_sign_tolerance()
    return payback(discount_stream(x, alpha), tolerance)


def metric_value(x: Project, kind: MetricKind, alpha: Optional[DiscountFunction] = None) -> ExtendedTime:
    """Dispatch on the metric kind."""
    if kind is MetricKind.LAST_BREAKEVEN:
        return payback(x)
    if kind is MetricKind.FIRST_BREAKEVEN:
        return first_breakeven(x)
    if kind is MetricKind.MODIFIED:
        return modified_payback(x)
    if alpha is None:
        raise UsageError("the discounted metric needs a discount function (--rate or --discount-table)")
    return discounted_payback(x, alpha)


def is_acceptable(
    x: Project,
    mapp: RationalLike,
    kind: MetricKind = MetricKind.LAST_BREAKEVEN,
    alpha: Optional[DiscountFunction] = None,
) -> bool:
    """Screen against a maximum acceptable payback period (inclusive)."""
    mapp = to_rational(mapp)
    if mapp <= 0:
        raise PreconditionError(f"MAPP must be positive, got {mapp}")
    return metric_value(x, kind, alpha) <= ExtendedTime(mapp)


class MetricsService:
    """Builds metric reports for named projects."""

    def __init__(self, alpha: Optional[DiscountFunction] = None):
        self.alpha = alpha

    def report(
        self,
        x: Project,
        kind: MetricKind,
        mapp: Optional[Fraction] = None,
        name: Optional[str] = None,
    ) -> MetricReport:
        """Evaluate one metric and wrap it in a MetricReport."""
        approximate = False
        if kind is MetricKind.DISCOUNTED_LAST:
            if self.alpha is None:
                raise UsageError("the discounted metric needs a discount function (--rate or --discount-table)")
            stream = discount_stream(x, self.alpha)
            approximate = not is_exact_for(x, self.alpha)
        elif kind is MetricKind.MODIFIED:
            stream = modified_project(x)
        else:
            stream = x

        value = metric_value(x, kind, self.alpha)
        acceptable = None
        if mapp is not None:
            acceptable = is_acceptable(x, mapp, kind, self.alpha)

        log_metric_event(
            logger,
            project=name or "<anonymous>",
            kind=kind.value,
            value=str(value),
            acceptable=acceptable,
            approximate=approximate,
        )
        return MetricReport(
            kind=kind,
            value=value,
            breakeven_points=breakeven_points(stream),
            acceptable=acceptable,
            mapp=mapp,
            approximate=approximate,
            project=name,
        )

    def report_all(
        self,
        x: Project,
        kinds: List[MetricKind],
        mapp: Optional[Fraction] = None,
        name: Optional[str] = None,
    ) -> List[MetricReport]:
        return [self.report(x, kind, mapp, name) for kind in kinds]

    def values(self, x: Project) -> Dict[MetricKind, ExtendedTime]:
        """Every available metric value, keyed by kind."""
        out = {
            MetricKind.LAST_BREAKEVEN: payback(x),
            MetricKind.FIRST_BREAKEVEN: first_breakeven(x),
            MetricKind.MODIFIED: modified_payback(x),
        }
        if self.alpha is not None:
            out[MetricKind.DISCOUNTED_LAST] = discounted_payback(x, self.alpha)
        return out
