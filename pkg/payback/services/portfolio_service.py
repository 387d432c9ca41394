"""Portfolio pooling and the max-rule report."""

from fractions import Fraction
from typing import Optional, Sequence, Tuple

import structlog

from payback.exceptions import UsageError
from payback.models.discount import DiscountFunction
from payback.models.project import ZERO_PROJECT, Project, add
from payback.schemas.report import MetricKind, PortfolioReport
from payback.services.metrics import MetricsService

logger = structlog.get_logger(__name__)


class PortfolioService:
    """Pools projects and checks the max rule: F(sum) <= max of F(components)."""

    def __init__(self, alpha: Optional[DiscountFunction] = None):
        self.metrics = MetricsService(alpha)

    def build(
        self,
        named_projects: Sequence[Tuple[str, Project]],
        kind: MetricKind = MetricKind.LAST_BREAKEVEN,
        mapp: Optional[Fraction] = None,
    ) -> PortfolioReport:
        if not named_projects:
            raise UsageError("portfolio needs at least one project")

        reports = [self.metrics.report(x, kind, mapp, name) for name, x in named_projects]
        pool = ZERO_PROJECT
        for _, x in named_projects:
            pool = add(pool, x)
        pool_report = self.metrics.report(pool, kind, mapp, "pool")

        bound = max(r.value for r in reports)
        holds = pool_report.value <= bound
        if not holds:
            logger.warning(
                "Max rule fails for pooled portfolio",
                kind=kind.value,
                pool=str(pool_report.value),
                bound=str(bound),
                projects=len(named_projects),
            )
        return PortfolioReport(
            kind=kind,
            projects=reports,
            pool=pool_report,
            max_rule_bound=bound,
            max_rule_holds=holds,
        )
