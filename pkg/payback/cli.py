"""Command-line front end.

Reports go to stdout (text, or JSON with ``--json``); logs and warnings go
to stderr. Exit codes come from the exception hierarchy.
"""

import argparse
import csv
import json
import sys
from fractions import Fraction
from typing import List, Optional, Sequence, TextIO

import structlog

from payback.config import analysis_config, settings
from payback.exceptions import PaybackError, UsageError
from payback.models.discount import DiscountFunction
from payback.models.project import Project, classify, make_project, terminal_value
from payback.schemas.axiom import AxiomName, AxiomReport
from payback.schemas.report import AnalysisReport, ComparisonReport, MetricKind, MetricReport, PortfolioReport
from payback.services import metrics
from payback.services.axioms import AxiomHarness, builtin
from payback.services.discount import discount_stream
from payback.services.portfolio_service import PortfolioService
from payback.utils.ingest import parse_discount_table, parse_events
from payback.utils.logging import setup_logging
from payback.utils.rational import to_rational

logger = structlog.get_logger(__name__)

METRIC_CHOICES = {
    "last": MetricKind.LAST_BREAKEVEN,
    "first": MetricKind.FIRST_BREAKEVEN,
    "modified": MetricKind.MODIFIED,
    "discounted": MetricKind.DISCOUNTED_LAST,
}

AXIOM_CHOICES = {
    "comp": AxiomName.COMP,
    "acons": AxiomName.ACONS,
    "mon": AxiomName.MON,
    "lsc": AxiomName.LSC,
    "alpha-comp": AxiomName.ALPHA_COMP,
    "alpha-mon": AxiomName.ALPHA_MON,
}


def _rational_arg(text: str) -> Fraction:
    try:
        return to_rational(text)
    except PaybackError as e:
        raise argparse.ArgumentTypeError(str(e)) from e


def _seed_arg(text: str) -> int:
    try:
        seed = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"seed must be an integer, got {text!r}") from None
    if not 0 <= seed < 2 ** 64:
        raise argparse.ArgumentTypeError("seed must be a 64-bit unsigned integer")
    return seed


def _add_discount_options(parser: argparse.ArgumentParser):
    group = parser.add_mutually_exclusive_group()
    group.add_argument("--rate", type=_rational_arg, help="exponential discount rate r > -1")
    group.add_argument("--discount-table", metavar="FILE", help="CSV discount table 'time,factor'")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="payback",
        description="Exact payback periods for nonconventional cash flows",
    )
    subparsers = parser.add_subparsers(dest="command", required=True)

    analyze = subparsers.add_parser("analyze", help="compute payback metrics for one project")
    analyze.add_argument("file")
    analyze.add_argument("--metric", choices=[*METRIC_CHOICES, "all"], default="last")
    analyze.add_argument("--mapp", type=_rational_arg, help="maximum acceptable payback period")
    analyze.add_argument("--json", action="store_true", help="emit JSON")
    _add_discount_options(analyze)

    portfolio = subparsers.add_parser("portfolio", help="pool projects and check the max rule")
    portfolio.add_argument("files", nargs="+")
    portfolio.add_argument("--metric", choices=list(METRIC_CHOICES), default="last")
    portfolio.add_argument("--mapp", type=_rational_arg, help="maximum acceptable payback period")
    portfolio.add_argument("--json", action="store_true", help="emit JSON")
    _add_discount_options(portfolio)

    compare = subparsers.add_parser("compare", help="all metrics of one project side by side")
    compare.add_argument("file")
    compare.add_argument("--json", action="store_true", help="emit JSON")
    _add_discount_options(compare)

    axioms = subparsers.add_parser("axioms", help="run axiom suites against a payback functional")
    axioms.add_argument("functional", help="LAST_BE, FIRST_BE, MODIFIED, CONST_ZERO, OBS3_RESTRICTED or DISCOUNTED_LAST_BE")
    axioms.add_argument("--axiom", choices=[*AXIOM_CHOICES, "all"], default="all")
    axioms.add_argument("--trials", type=int, default=None, help="trials per suite")
    axioms.add_argument("--seed", type=_seed_arg, default=0)
    axioms.add_argument("--json", action="store_true", help="emit JSON")
    _add_discount_options(axioms)

    plot = subparsers.add_parser("plot-data", help="CSV step series of the balance")
    plot.add_argument("file")
    plot.add_argument("--float", action="store_true", help="decimal floats instead of rational literals")
    _add_discount_options(plot)
    return parser


def _discount(args) -> Optional[DiscountFunction]:
    if getattr(args, "rate", None) is not None:
        return DiscountFunction.exponential(args.rate, analysis_config.get_exponential_precision())
    if getattr(args, "discount_table", None):
        return DiscountFunction.tabulated(parse_discount_table(args.discount_table))
    return None


def _load(path: str):
    name, raw = parse_events(path)
    return name, make_project(raw)


def _write_json(out: TextIO, payload):
    out.write(json.dumps(payload, indent=2))
    out.write("\n")


def _points(points: Sequence[Fraction]) -> str:
    return ", ".join(str(p) for p in points) or "-"


def _metric_line(report: MetricReport) -> str:
    line = f"{report.kind.value:<16} {report.value}  break-even points: {_points(report.breakeven_points)}"
    if report.acceptable is not None:
        line += f"  acceptable: {'yes' if report.acceptable else 'no'} (mapp {report.mapp})"
    if report.approximate:
        line += "  (approximate)"
    return line


def cmd_analyze(args, out: TextIO) -> int:
    alpha = _discount(args)
    name, x = _load(args.file)
    if args.metric == "all":
        kinds = [MetricKind.LAST_BREAKEVEN, MetricKind.FIRST_BREAKEVEN, MetricKind.MODIFIED]
        if alpha is not None:
            kinds.append(MetricKind.DISCOUNTED_LAST)
    else:
        kinds = [METRIC_CHOICES[args.metric]]

    reports = metrics.MetricsService(alpha).report_all(x, kinds, args.mapp, name)
    analysis = AnalysisReport(project=name, events=x, reports=reports)
    if args.json:
        _write_json(out, analysis.model_dump(mode="json"))
    else:
        out.write(f"project: {name}\n")
        out.write(f"events: {x}\n")
        for report in reports:
            out.write(_metric_line(report) + "\n")
    return 0


def cmd_portfolio(args, out: TextIO) -> int:
    alpha = _discount(args)
    named = [_load(path) for path in args.files]
    report: PortfolioReport = PortfolioService(alpha).build(named, METRIC_CHOICES[args.metric], args.mapp)
    if not report.max_rule_holds:
        sys.stderr.write(
            f"warning: pooled {report.kind.value} {report.pool.value} exceeds "
            f"the largest component value {report.max_rule_bound}\n"
        )
    if args.json:
        _write_json(out, report.model_dump(mode="json"))
    else:
        for r in report.projects:
            out.write(f"{r.project}: {_metric_line(r)}\n")
        out.write(f"pool: {_metric_line(report.pool)}\n")
        out.write(f"max rule: pool {report.pool.value} <= {report.max_rule_bound}: "
                  f"{'holds' if report.max_rule_holds else 'fails'}\n")
    return 0


def compare_report(name: str, x: Project, alpha: Optional[DiscountFunction] = None) -> ComparisonReport:
    """All metrics of x side by side."""
    project_class = classify(x)
    return ComparisonReport(
        project=name,
        events=x,
        classification=project_class.tag,
        phase_switch=project_class.phase_switch,
        terminal_value=terminal_value(x),
        breakeven_points=metrics.breakeven_points(x),
        last_breakeven=metrics.payback(x),
        first_breakeven=metrics.first_breakeven(x),
        modified=metrics.modified_payback(x),
        modified_stream=metrics.modified_project(x),
        discounted_last=metrics.discounted_payback(x, alpha) if alpha is not None else None,
    )


def cmd_compare(args, out: TextIO) -> int:
    alpha = _discount(args)
    name, x = _load(args.file)
    report = compare_report(name, x, alpha)
    if args.json:
        _write_json(out, report.model_dump(mode="json"))
        return 0
    out.write(f"project: {name}\n")
    out.write(f"events: {x}\n")
    phase = f" (phase switch {report.phase_switch})" if report.phase_switch is not None else ""
    out.write(f"class: {report.classification.value}{phase}\n")
    out.write(f"terminal value: {report.terminal_value}\n")
    out.write(f"break-even points: {_points(report.breakeven_points)}\n")
    out.write(f"LAST_BREAKEVEN   {report.last_breakeven}\n")
    out.write(f"FIRST_BREAKEVEN  {report.first_breakeven}\n")
    out.write(f"MODIFIED         {report.modified}  stream: {report.modified_stream}\n")
    if report.discounted_last is not None:
        out.write(f"DISCOUNTED_LAST  {report.discounted_last}\n")
    return 0


def _axiom_text(report: AxiomReport) -> str:
    status = "n/a" if not report.applicable else ("pass" if report.passed else "FAIL")
    lines = [f"{report.axiom.value:<10} {status:<5} trials={report.trials} violations={report.violation_count}"]
    if report.note:
        lines.append(f"    note: {report.note}")
    for witness in report.violations:
        inputs = "; ".join(str(p) for p in witness.inputs)
        observed = ", ".join(str(v) for v in witness.observed)
        lines.append(f"    witness: {inputs} -> {observed}  expected {witness.expected_relation}")
    return "\n".join(lines)


def cmd_axioms(args, out: TextIO) -> int:
    alpha = _discount(args) or DiscountFunction.tabulated(analysis_config.get_default_discount_table())
    F = builtin(args.functional, alpha)
    trials = args.trials if args.trials is not None else int(analysis_config.get_axiom_setting("trials"))
    if trials <= 0:
        raise UsageError("--trials must be positive")
    selected = list(AXIOM_CHOICES.values()) if args.axiom == "all" else [AXIOM_CHOICES[args.axiom]]

    harness = AxiomHarness(alpha)
    reports = harness.run(F, selected, trials, args.seed)
    if args.json:
        _write_json(out, [r.model_dump(mode="json") for r in reports])
    else:
        out.write(f"functional: {F.name}  seed: {args.seed}\n")
        for report in reports:
            out.write(_axiom_text(report) + "\n")

    regressions = harness.regressions(F, reports)
    if regressions:
        logger.error(
            "Axiom regression",
            functional=F.name,
            axioms=[r.axiom.value for r in regressions],
        )
        return 1
    return 0


def balance_series(x: Project) -> List[tuple]:
    """(t, balance just before t, balance at t) at each event time and one point beyond."""
    rows = []
    before = Fraction(0)
    for event, balance in zip(x.events, x.balances):
        rows.append((event.time, before, balance))
        before = balance
    beyond = x.times[-1] + 1 if x.events else Fraction(1)
    rows.append((beyond, before, before))
    return rows


def cmd_plot_data(args, out: TextIO) -> int:
    alpha = _discount(args)
    _, x = _load(args.file)
    if alpha is not None:
        x = discount_stream(x, alpha)
    render = float if args.float else str
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(["t", "balance_before", "balance_at"])
    for row in balance_series(x):
        writer.writerow([render(v) for v in row])
    return 0


COMMANDS = {
    "analyze": cmd_analyze,
    "portfolio": cmd_portfolio,
    "compare": cmd_compare,
    "axioms": cmd_axioms,
    "plot-data": cmd_plot_data,
}


def run(argv: Optional[Sequence[str]] = None, out: Optional[TextIO] = None) -> int:
    """Parse ``argv`` and execute the command; returns the exit code."""
    out = out or sys.stdout
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as e:
        return e.code if isinstance(e.code, int) else 2

    try:
        return COMMANDS[args.command](args, out)
    except PaybackError as e:
        logger.error("Command failed", command=args.command, error=str(e), exit_code=e.exit_code)
        sys.stderr.write(f"error: {e}\n")
        return e.exit_code


def main():
    setup_logging()
    logger.debug("Starting", app=settings.app_name)
    sys.exit(run())


if __name__ == "__main__":
    main()
