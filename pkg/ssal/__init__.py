"""Splitting augmented Lagrangian solver for sparse semicontinuous problems."""

from .version import __version__

__all__ = ["__version__"]
