"""Surrogate significance test for a directed-information estimate.

The driving series (X for ``X->Y``, Y for ``Y->X``) is replaced L times by a
surrogate while the driven series is left untouched, and the observed value is
ranked against the surrogate estimates:

    p = (1 + #{surrogate >= observed}) / (L + 1)

Surrogate l draws from ``rng.stream(base_seed, *key, l)``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from math import ceil

import numpy as np

from . import rng as _rng
from .di import DIRECTIONS, estimate_di
from .errors import UsageError
from .series import SeriesPair

SURROGATES = ("permutation", "circular", "bootstrap")


@dataclass(frozen=True)
class SignificanceReport:
    observed: float
    surrogates: list = field(default_factory=list)
    p_value: float = 1.0
    epsilon_p: float = 0.05
    significant: bool = False

    @property
    def zeroed_value(self) -> float:
        return self.observed if self.significant else 0.0

    def to_dict(self) -> dict:
        return {
            "observed": self.observed,
            "p_value": self.p_value,
            "epsilon_p": self.epsilon_p,
            "significant": self.significant,
            "zeroed_value": self.zeroed_value,
            "surrogates": list(self.surrogates),
        }


def min_surrogates(epsilon_p: float) -> int:
    """Smallest L for which p = 1/(L+1) can reach ``epsilon_p``."""
    if not 0.0 < epsilon_p < 1.0:
        raise UsageError(f"epsilon_p must lie in (0, 1), got {epsilon_p}")
    # guard against 1/0.05 landing a hair above 20
    return max(ceil(1.0 / epsilon_p - 1e-9) - 1, 1)


def shuffle_surrogate(x, rng_stream: np.random.Generator) -> np.ndarray:
    """Uniform random permutation of ``x``."""
    x = np.asarray(x, dtype=float)
    return x[rng_stream.permutation(x.shape[0])]


def circular_surrogate(x, rng_stream: np.random.Generator) -> np.ndarray:
    """Cyclic shift by a uniform non-zero offset; keeps the series' own dynamics."""
    x = np.asarray(x, dtype=float)
    if x.shape[0] < 2:
        return x.copy()
    return np.roll(x, int(rng_stream.integers(1, x.shape[0])))


def bootstrap_surrogate(x, rng_stream: np.random.Generator) -> np.ndarray:
    """Resample with replacement."""
    x = np.asarray(x, dtype=float)
    return x[rng_stream.integers(0, x.shape[0], x.shape[0])]


_MAKERS = {"permutation": shuffle_surrogate, "circular": circular_surrogate, "bootstrap": bootstrap_surrogate}


def p_value(observed: float, surrogates) -> float:
    s = np.asarray(surrogates, dtype=float)
    return (1.0 + float(np.count_nonzero(s >= observed))) / (s.size + 1.0)


def significance_test(
    pair: SeriesPair,
    method: str,
    m: int,
    k: int = 8,
    L: int = 19,
    epsilon_p: float = 0.05,
    base_seed: int = 0,
    direction: str = "X->Y",
    surrogate: str = "permutation",
    key: tuple = (),
    observed: float | None = None,
    strict: bool | None = None,
) -> SignificanceReport:
    """Estimate DI on ``pair`` and on L surrogates of the driving series.

    ``observed`` may be passed to reuse an estimate already computed with the
    same settings.
    """
    if L < min_surrogates(epsilon_p):
        raise UsageError(f"L={L} surrogates cannot reach epsilon_p={epsilon_p}; need L >= {min_surrogates(epsilon_p)}")
    if surrogate not in _MAKERS:
        raise UsageError(f"unknown surrogate {surrogate!r}; choose from {SURROGATES}")
    if direction not in DIRECTIONS:
        raise UsageError(f"direction must be one of {DIRECTIONS}, got {direction!r}")
    if observed is None:
        observed = estimate_di(pair, method, m, k, direction, strict).value

    make = _MAKERS[surrogate]
    values = []
    for l in range(L):
        s = _rng.stream(base_seed, *key, l)
        if direction == "X->Y":
            sp = pair.with_x(make(pair.x, s))
        else:
            sp = SeriesPair(pair.x, make(pair.y, s), pair.seed, pair.metadata)
        values.append(estimate_di(sp, method, m, k, direction, strict).value)

    p = p_value(observed, values)
    return SignificanceReport(float(observed), values, p, epsilon_p, p <= epsilon_p)
