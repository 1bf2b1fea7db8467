"""Seeded instance generators, recovery metrics and the hard-threshold baseline."""

from .cs import CsInstance, baseline_hard_threshold, gen_cs
from .errors import GeneratorError
from .metrics import log10_ratio, mse, relative_difference
from .portfolio import PortfolioInstance, PortfolioParams, gen_portfolio
from .rng import MAX_SEED, make_generator, standard_normal, uniform

__all__ = [
    "MAX_SEED",
    "CsInstance",
    "GeneratorError",
    "PortfolioInstance",
    "PortfolioParams",
    "baseline_hard_threshold",
    "gen_cs",
    "gen_portfolio",
    "log10_ratio",
    "make_generator",
    "mse",
    "relative_difference",
    "standard_normal",
    "uniform",
]
