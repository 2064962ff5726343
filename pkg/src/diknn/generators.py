"""Seeded synthetic benchmarks with known causal direction X -> Y.

Every generator takes ``seed`` plus an optional ``key`` tuple and draws from
``rng.stream(seed, *key, part)`` where ``part`` separates independent inputs
(0: driving series / initial conditions, 1: observation noise, ...). Keeping
the noise on its own stream means two runs that differ only in noise gain
share the same underlying trajectory.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from math import cos, exp

import numpy as np

from . import rng as _rng
from .errors import NumericalError, UsageError
from .series import SeriesPair

KINDS = ("linear", "quadratic", "henon", "sigmoid")
HENON_BURN_IN = 100_000
HENON_MIN_BURN_IN = 10_000
HENON_MAX_ATTEMPTS = 100
HENON_BOUND = 10.0
SIGMOID_BOUND = 1e6


def _check_unit(name: str, value: float) -> None:
    if not 0.0 <= value <= 1.0:
        raise UsageError(f"{name} must lie in [0, 1], got {value}")


def _check_n(n: int) -> None:
    if n < 2:
        raise UsageError(f"n must be >= 2, got {n}")


def _lagged_regression(f, beta1, beta2, n, seed, key):
    _check_unit("beta1", beta1)
    _check_unit("beta2", beta2)
    _check_n(n)
    x = _rng.standard_normal(_rng.stream(seed, *key, 0), n)
    z = _rng.standard_normal(_rng.stream(seed, *key, 1), n)
    # x history before the first sample is taken as zero
    lag1 = np.concatenate(([0.0], x[:-1]))
    lag2 = np.concatenate(([0.0, 0.0], x[:-2]))
    y = beta1 * f(lag1) + beta2 * f(lag2) + z
    return x, y


def gen_linear(beta1: float, beta2: float, n: int, seed: int, key: tuple = ()) -> SeriesPair:
    """y_i = beta1 x_{i-1} + beta2 x_{i-2} + z_i."""
    x, y = _lagged_regression(lambda v: v, beta1, beta2, n, seed, key)
    return SeriesPair(x, y, seed, {"kind": "linear", "beta1": beta1, "beta2": beta2})


def gen_quadratic(beta1: float, beta2: float, n: int, seed: int, key: tuple = ()) -> SeriesPair:
    """y_i = beta1 x_{i-1}^2 + beta2 x_{i-2}^2 + z_i."""
    x, y = _lagged_regression(np.square, beta1, beta2, n, seed, key)
    return SeriesPair(x, y, seed, {"kind": "quadratic", "beta1": beta1, "beta2": beta2})


def henon_burn_in(n: int) -> int:
    return max(HENON_MIN_BURN_IN, round(HENON_BURN_IN * n / 3000))


def _henon_orbit(beta: float, total: int, init: np.ndarray):
    xs = np.empty(total)
    ys = np.empty(total)
    xs[0], xs[1], ys[0], ys[1] = init
    a, b = 1.4, 0.3
    xp, xc, yp, yc = xs[0], xs[1], ys[0], ys[1]
    for i in range(2, total):
        xn = a - xc * xc + b * xp
        yn = a - (beta * xc + (1.0 - beta) * yc) * yc + b * yp
        if abs(xn) > HENON_BOUND or abs(yn) > HENON_BOUND:
            return None, None
        xs[i] = xn
        ys[i] = yn
        xp, xc, yp, yc = xc, xn, yc, yn
    return xs, ys


def henon_clean(beta: float, n: int, seed: int, key: tuple = (), burn_in: int | None = None):
    """Noise-free coupled Henon orbits (last ``n`` samples) as ``(x, y)`` arrays."""
    _check_unit("beta", beta)
    _check_n(n)
    burn = henon_burn_in(n) if burn_in is None else burn_in
    if burn < 0:
        raise UsageError("burn_in must be >= 0")
    init_stream = _rng.stream(seed, *key, 0)
    for _ in range(HENON_MAX_ATTEMPTS):
        init = _rng.uniform_open(init_stream, 4)
        xs, ys = _henon_orbit(beta, burn + n, init)
        if xs is not None:
            return xs[burn:], ys[burn:]
    raise NumericalError(f"Henon orbit diverged from {HENON_MAX_ATTEMPTS} initial conditions (beta={beta})")


def gen_henon(beta: float, gamma: float, n: int, seed: int, key: tuple = (), burn_in: int | None = None) -> SeriesPair:
    """Henon map X driving Henon map Y with coupling ``beta``, plus
    ``gamma``-scaled Gaussian observation noise on both outputs."""
    if gamma < 0:
        raise UsageError(f"gamma must be >= 0, got {gamma}")
    xt, yt = henon_clean(beta, n, seed, key, burn_in)
    zx = _rng.standard_normal(_rng.stream(seed, *key, 1), n)
    zy = _rng.standard_normal(_rng.stream(seed, *key, 2), n)
    return SeriesPair(xt + gamma * zx, yt + gamma * zy, seed, {"kind": "henon", "beta": beta, "gamma": gamma})


def sigmoid(theta: float) -> float:
    return 1.0 / (1.0 + exp(-theta))


def gen_sigmoid(beta: float, n: int, seed: int, key: tuple = (), burn_in: int = 0) -> SeriesPair:
    """Nonlinear X driving Y through sigmoid(x)^2.

    The drive term of the update producing sample t+1 is ``2 cos(1.2 t)``
    with t the 1-based time index of the current sample.
    """
    _check_unit("beta", beta)
    _check_n(n)
    if burn_in < 0:
        raise UsageError("burn_in must be >= 0")
    total = n + burn_in
    x = np.empty(total)
    y = np.empty(total)
    x[0], y[0] = _rng.uniform_open(_rng.stream(seed, *key, 0), 2)
    zx = _rng.standard_normal(_rng.stream(seed, *key, 1), total)
    zy = _rng.standard_normal(_rng.stream(seed, *key, 2), total)
    for t in range(1, total):
        xc, yc = x[t - 1], y[t - 1]
        x[t] = 0.125 * xc + 25.0 * xc / (4.0 * (xc * xc + 1.0)) + 2.0 * cos(1.2 * t) + zx[t - 1]
        s = sigmoid(xc)
        y[t] = 0.1 * yc * yc - beta * (s * s - 0.3) + zy[t - 1]
        if abs(y[t]) > SIGMOID_BOUND:
            raise NumericalError(f"sigmoid model diverged at step {t}")
    return SeriesPair(x[burn_in:], y[burn_in:], seed, {"kind": "sigmoid", "beta": beta})


@dataclass(frozen=True)
class GeneratorSpec:
    """Generator id, parameters, output length, seed and optional burn-in.

    ``params`` uses ``beta1``/``beta2`` for linear and quadratic, ``beta`` and
    (Henon only) ``gamma`` for the nonlinear maps.
    """

    kind: str
    params: dict = field(default_factory=dict)
    n: int = 3000
    seed: int = 0
    burn_in: int | None = None

    _ALLOWED = {
        "linear": ("beta1", "beta2"),
        "quadratic": ("beta1", "beta2"),
        "henon": ("beta", "gamma"),
        "sigmoid": ("beta",),
    }

    def __post_init__(self):
        if self.kind not in KINDS:
            raise UsageError(f"unknown generator {self.kind!r}; choose from {KINDS}")
        extra = set(self.params) - set(self._ALLOWED[self.kind])
        if extra:
            raise UsageError(f"{self.kind} does not take parameters {sorted(extra)}")
        if self.n < 100:
            raise UsageError(f"n must be >= 100, got {self.n}")

    def with_param(self, name: str, value: float) -> "GeneratorSpec":
        params = dict(self.params)
        params[name] = value
        return GeneratorSpec(self.kind, params, self.n, self.seed, self.burn_in)

    def generate(self, key: tuple = ()) -> SeriesPair:
        p = self.params
        if self.kind == "linear":
            return gen_linear(p.get("beta1", 0.0), p.get("beta2", 0.0), self.n, self.seed, key)
        if self.kind == "quadratic":
            return gen_quadratic(p.get("beta1", 0.0), p.get("beta2", 0.0), self.n, self.seed, key)
        if self.kind == "henon":
            return gen_henon(p.get("beta", 0.0), p.get("gamma", 0.0), self.n, self.seed, key, self.burn_in)
        return gen_sigmoid(p.get("beta", 0.0), self.n, self.seed, key, self.burn_in or 0)
