"""Logging setup for the ``SSAL_LOG`` switch."""

from __future__ import annotations

import logging
import os
from typing import Final

from rich.console import Console
from rich.logging import RichHandler

__all__ = ["LOG_ENV_VAR", "TRACE", "LogFieldFormatter", "configure_logging"]

LOG_ENV_VAR: Final = "SSAL_LOG"
TRACE: Final = 5

logging.addLevelName(TRACE, "TRACE")

_LEVELS = {"off": logging.WARNING, "info": logging.INFO, "trace": TRACE}

# attributes every LogRecord carries; anything else arrived through ``extra=``
_RESERVED = set(logging.LogRecord("", 0, "", 0, "", None, None).__dict__) | {
    "message",
    "asctime",
}


class LogFieldFormatter(logging.Formatter):
    """Render the event name followed by its ``extra`` fields as key=value pairs."""

    def format(self, record: logging.LogRecord) -> str:
        message = super().format(record)
        fields = {
            key: value for key, value in record.__dict__.items() if key not in _RESERVED
        }
        if not fields:
            return message
        rendered = " ".join(f"{key}={_render(value)}" for key, value in sorted(fields.items()))
        return f"{message} {rendered}"


def _render(value: object) -> str:
    if isinstance(value, float):
        return f"{value:.6g}"
    return str(value)


def configure_logging(mode: str | None = None, console: Console | None = None) -> int:
    """Install a stderr RichHandler on the ``ssal`` logger and return the level in effect.

    ``mode`` falls back to the SSAL_LOG environment variable, then to ``off``.
    """

    selected = (mode or os.environ.get(LOG_ENV_VAR) or "off").strip().lower()
    if selected not in _LEVELS:
        raise ValueError(f"{LOG_ENV_VAR} must be one of {sorted(_LEVELS)} (got '{selected}')")
    level = _LEVELS[selected]
    root = logging.getLogger("ssal")
    for handler in list(root.handlers):
        if getattr(handler, "_ssal_handler", False):
            root.removeHandler(handler)
    handler = RichHandler(
        console=console or Console(stderr=True),
        show_path=False,
        markup=False,
        rich_tracebacks=False,
    )
    handler.setFormatter(LogFieldFormatter("%(message)s"))
    handler._ssal_handler = True  # type: ignore[attr-defined]
    root.addHandler(handler)
    root.setLevel(level)
    root.propagate = False
    return level
