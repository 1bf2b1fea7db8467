"""The one pseudo-random stream every generator draws from.

Streams are numpy ``Generator`` objects over the Philox 4x64 counter-based bit generator,
keyed by ``SeedSequence((seed, attempt))``. Only ``Generator.random``, ``permutation``
and the Box–Muller transform below are used, so identical seeds give identical draws on
every platform numpy supports.
"""

from __future__ import annotations

import numpy as np

from ssal.model import Vector

__all__ = ["MAX_SEED", "make_generator", "standard_normal", "uniform"]

MAX_SEED = 2**64 - 1


def make_generator(seed: int, attempt: int = 0) -> np.random.Generator:
    if not 0 <= seed <= MAX_SEED:
        raise ValueError(f"seed must be a 64-bit unsigned integer (got {seed})")
    if attempt < 0:
        raise ValueError(f"attempt must be nonnegative (got {attempt})")
    return np.random.Generator(np.random.Philox(np.random.SeedSequence((seed, attempt))))


def uniform(
    gen: np.random.Generator, low: float, high: float, size: int | tuple[int, ...]
) -> Vector:
    return low + (high - low) * gen.random(size)


def standard_normal(gen: np.random.Generator, size: int | tuple[int, ...]) -> Vector:
    """Standard Gaussian draws by the Box–Muller transform of uniform pairs."""

    shape = (size,) if isinstance(size, int) else tuple(size)
    count = int(np.prod(shape))
    pairs = (count + 1) // 2
    u1 = 1.0 - gen.random(pairs)
    u2 = gen.random(pairs)
    radius = np.sqrt(-2.0 * np.log(u1))
    angle = 2.0 * np.pi * u2
    draws = np.empty(2 * pairs)
    draws[0::2] = radius * np.cos(angle)
    draws[1::2] = radius * np.sin(angle)
    return draws[:count].reshape(shape)
