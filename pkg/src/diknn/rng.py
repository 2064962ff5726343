"""Seeded random streams.

Every random draw in the package goes through :func:`stream`, which builds a
``numpy.random.Generator`` on the PCG64 bit generator from a
``numpy.random.SeedSequence(base_seed, spawn_key=keys)``. PCG64 and
SeedSequence are specified bit-for-bit by numpy and are stable across
platforms, so a ``(base_seed, keys)`` pair names one reproducible stream.

Key layout used by the harness::

    (trial,)                      data for one trial
    (trial, 1, direction, l)      surrogate ``l`` of a significance test
    (0xD1, row_count)             de-duplication jitter

Gaussian variates are produced by the inverse normal CDF applied to uniform
draws on the open unit interval (one uniform per variate, no rejection), so
the number of raw draws never depends on the values drawn.
"""

from __future__ import annotations

import numpy as np
from scipy.special import ndtri

_TWO53 = float(2**53)


def stream(seed: int | np.random.Generator, *keys: int) -> np.random.Generator:
    """Return the generator for ``(seed, keys)``.

    Passing an existing ``Generator`` returns it unchanged so callers can
    thread one stream through several draws.
    """
    if isinstance(seed, np.random.Generator):
        return seed
    if seed < 0:
        raise ValueError(f"seed must be non-negative, got {seed}")
    ss = np.random.SeedSequence(int(seed), spawn_key=tuple(int(k) for k in keys))
    return np.random.Generator(np.random.PCG64(ss))


def uniform_open(rng: np.random.Generator, size) -> np.ndarray:
    """Uniform draws on (0, 1), 53-bit resolution, never exactly 0 or 1."""
    raw = rng.integers(0, 2**53, size=size, dtype=np.uint64)
    return (raw.astype(np.float64) + 0.5) / _TWO53


def standard_normal(rng: np.random.Generator, size) -> np.ndarray:
    return ndtri(uniform_open(rng, size))
