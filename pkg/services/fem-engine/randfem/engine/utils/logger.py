# randfem - Logging Configuration
# Structured Logging on standard error

"""
Logging configuration for randfem.
Implements structured logging with structlog; an optional log file is handled
by a loguru sink. Everything goes to standard error so that standard output
carries only command results.
"""

import logging
import sys
from pathlib import Path
from typing import Any

import structlog
from loguru import logger as loguru_logger

from randfem.engine.utils.config import get_settings


class _LoguruForwarder(logging.Handler):
    """Forward stdlib records into loguru so the file sink sees every event."""

    def emit(self, record: logging.LogRecord) -> None:
        try:
            level: str | int = loguru_logger.level(record.levelname).name
        except ValueError:
            level = record.levelno
        loguru_logger.opt(depth=6, exception=record.exc_info).log(
            level, record.getMessage()
        )


def setup_logging(
    level: str | None = None,
    format_type: str | None = None,
    log_file: Path | None = None,
) -> None:
    """Setup logging for the library and the CLI."""

    monitoring = get_settings().monitoring
    level = (level or monitoring.log_level).upper()
    format_type = format_type or monitoring.log_format
    log_file = log_file or monitoring.log_file

    # Configure standard library logging
    logging.basicConfig(
        level=getattr(logging, level),
        format="%(message)s",
        stream=sys.stderr,
        force=True,
    )

    shared_processors: list[Any] = [
        structlog.stdlib.filter_by_level,
        structlog.stdlib.add_logger_name,
        structlog.stdlib.add_log_level,
        structlog.stdlib.PositionalArgumentsFormatter(),
        structlog.processors.TimeStamper(fmt="iso"),
        structlog.processors.StackInfoRenderer(),
        structlog.processors.format_exc_info,
        structlog.processors.UnicodeDecoder(),
    ]

    if format_type == "json":
        shared_processors.append(structlog.processors.JSONRenderer())
    else:
        shared_processors.append(structlog.dev.ConsoleRenderer(colors=False))

    structlog.configure(
        processors=shared_processors,
        context_class=dict,
        logger_factory=structlog.stdlib.LoggerFactory(),
        wrapper_class=structlog.stdlib.BoundLogger,
        cache_logger_on_first_use=True,
    )

    loguru_logger.remove()
    if log_file:
        loguru_logger.add(
            log_file,
            format="{time:YYYY-MM-DD HH:mm:ss} | {level} | {message}",
            level=level,
            rotation="10 MB",
            retention="1 week",
            serialize=(format_type == "json"),
        )
        logging.getLogger().addHandler(_LoguruForwarder())

    # Quiet third-party libraries
    for name in ("numpy", "scipy", "matplotlib"):
        logging.getLogger(name).setLevel(logging.WARNING)
