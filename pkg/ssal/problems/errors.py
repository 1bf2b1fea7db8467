"""Failure type shared by the instance generators."""

from __future__ import annotations

__all__ = ["GeneratorError"]


class GeneratorError(RuntimeError):
    """Raised when a generator cannot produce a valid instance for the requested seed."""
