"""Logging configuration and setup for structured logging."""

import logging
import sys
from typing import Optional

import structlog
from pythonjsonlogger import jsonlogger

from payback.config import settings


def setup_logging(log_level: Optional[str] = None):
    """Setup structured logging configuration.

    Everything goes to stderr: stdout is reserved for command output
    (JSON reports, CSV series).
    """
    level_name = (log_level or settings.log_level).upper()
    level = getattr(logging, level_name, logging.INFO)

    renderer = (
        structlog.processors.JSONRenderer()
        if settings.structured_logging
        else structlog.dev.ConsoleRenderer(colors=False)
    )

    # Configure structlog
    structlog.configure(
        processors=[
            structlog.stdlib.filter_by_level,
            structlog.stdlib.add_logger_name,
            structlog.stdlib.add_log_level,
            structlog.stdlib.PositionalArgumentsFormatter(),
            structlog.processors.TimeStamper(fmt="iso"),
            structlog.processors.StackInfoRenderer(),
            structlog.processors.format_exc_info,
            structlog.processors.UnicodeDecoder(),
            renderer,
        ],
        context_class=dict,
        logger_factory=structlog.stdlib.LoggerFactory(),
        wrapper_class=structlog.stdlib.BoundLogger,
        cache_logger_on_first_use=True,
    )

    # Configure standard library logging
    root_logger = logging.getLogger()
    root_logger.setLevel(level)

    # Remove existing handlers
    root_logger.handlers.clear()

    console_handler = logging.StreamHandler(sys.stderr)
    if settings.structured_logging:
        console_handler.setFormatter(
            jsonlogger.JsonFormatter(
                fmt="%(asctime)s %(name)s %(levelname)s %(message)s",
                datefmt="%Y-%m-%d %H:%M:%S",
            )
        )
    console_handler.setLevel(level)
    root_logger.addHandler(console_handler)

    structlog.get_logger(__name__).debug(
        "Logging configuration initialized",
        log_level=level_name,
        structured_logging=settings.structured_logging,
        debug=settings.debug,
    )


def log_ingest_event(
    logger: structlog.BoundLogger,
    path: str,
    source_format: str,
    events: int,
    error: str = None,
):
    """Log a cash flow / discount table ingest."""
    log_data = {"path": path, "format": source_format, "events": events}
    if error:
        log_data["error"] = error
        logger.error("Ingest failed", **log_data)
    else:
        logger.info("Ingest completed", **log_data)


def log_metric_event(
    logger: structlog.BoundLogger,
    project: str,
    kind: str,
    value: str,
    acceptable: bool = None,
    approximate: bool = False,
):
    """Log a computed metric."""
    logger.info(
        f"Metric computed: {kind}",
        project=project,
        kind=kind,
        value=value,
        acceptable=acceptable,
        approximate=approximate,
    )


def log_axiom_report(
    logger: structlog.BoundLogger,
    functional: str,
    axiom: str,
    trials: int,
    violations: int,
    applicable: bool = True,
):
    """Log the outcome of an axiom suite."""
    log_data = {
        "functional": functional,
        "axiom": axiom,
        "trials": trials,
        "violations": violations,
        "applicable": applicable,
    }
    if violations:
        logger.warning("Axiom violations found", **log_data)
    else:
        logger.info("Axiom suite completed", **log_data)
