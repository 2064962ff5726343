"""Directed-information rate estimators under an order-m Markov model.

For the X -> Y direction the rate is

    I(X -> Y) = h(Y, Y-) - h(Y-) - h(Y, Y-, X-) + h(Y-, X-)

with ``Y- = y[i-m..i-1]`` and ``X- = x[i-m..i-1]``. Every term is estimated on
the same embedded rows using the k-NN radius of the full ``(X-, Y-, Y)``
space, so the log-radius and log-N contributions cancel and only the
marginal counts survive in the combined form.

Boundary convention: with the max-norm the k-th neighbor lies exactly on the
boundary of every projection containing its farthest coordinate, so counting
``<=`` adds one to those counts and biases the KSG value by about -1/n.
``strict=None`` therefore means strict ``<`` for KSG and ``<=`` for GOV (for
the Euclidean ball the two differ only on exact ties).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from math import acosh, log, log2

import numpy as np

from .errors import InsufficientDataError, NumericalError, UsageError
from .knn import embed, neighbor_stats, unit_ball_volume
from .series import SeriesPair
from .special import digamma

LOG2E = 1.0 / log(2.0)
MAX_ORDER = 20
DIRECTIONS = ("X->Y", "Y->X")
METHODS = ("KSG", "GOV")
_TERM_SPACES = ("y_past", "y_past_y", "y_past_x_past")


@dataclass(frozen=True)
class DIEstimate:
    """One directed-information estimate in nats.

    ``terms`` holds the four entropy estimates keyed ``y_past``, ``y_past_y``,
    ``y_past_x_past`` and ``joint``.
    """

    value: float
    direction: str
    method: str
    m: int
    k: int
    n_effective: int
    terms: dict = field(default_factory=dict)

    @property
    def bits(self) -> float:
        return self.value * LOG2E

    def term_sum(self) -> float:
        t = self.terms
        return t["y_past_y"] - t["y_past"] - t["joint"] + t["y_past_x_past"]

    def to_dict(self, units: str = "nats") -> dict:
        scale = LOG2E if units == "bits" else 1.0
        return {
            "direction": self.direction,
            "method": self.method,
            "value": self.value * scale,
            "units": units,
            "m": self.m,
            "k": self.k,
            "n_effective": self.n_effective,
            "terms": {key: v * scale for key, v in self.terms.items()},
        }


def _prepare(pair: SeriesPair, m: int, k: int, direction: str):
    if not 1 <= m <= MAX_ORDER:
        raise UsageError(f"Markov order must be in [1, {MAX_ORDER}], got {m}")
    if k < 1:
        raise UsageError(f"k must be >= 1, got {k}")
    if direction not in DIRECTIONS:
        raise UsageError(f"direction must be one of {DIRECTIONS}, got {direction!r}")
    if len(pair) <= m + k + 1:
        raise InsufficientDataError(f"need N > m + k + 1, got N={len(pair)}, m={m}, k={k}")
    if direction == "Y->X":
        pair = pair.reversed()
    return embed(pair, m, k)


def _check(value: float) -> float:
    if not np.isfinite(value):
        raise NumericalError(f"non-finite directed information estimate: {value}")
    return float(value)


def di_ksg(pair: SeriesPair, m: int, k: int = 8, direction: str = "X->Y", strict: bool | None = None) -> DIEstimate:
    """Max-norm estimator with digamma-corrected marginal counts."""
    ds = _prepare(pair, m, k, direction)
    strict = True if strict is None else strict
    n = ds.n_effective
    st = neighbor_stats(ds, k, np.inf, _TERM_SPACES, strict)
    psi = {name: digamma(st.counts[name] + 1.0) for name in _TERM_SPACES}
    value = digamma(k) + float(np.mean(psi["y_past"] - psi["y_past_y"] - psi["y_past_x_past"]))

    mean_log_rho = float(np.mean(np.log(st.rho)))
    log_c = log(2.0)  # log c_{1,inf}; c_{d,inf} = 2^d
    terms = {
        "y_past": log(n) + m * log_c + m * mean_log_rho - float(np.mean(psi["y_past"])),
        "y_past_y": log(n) + (m + 1) * log_c + (m + 1) * mean_log_rho - float(np.mean(psi["y_past_y"])),
        "y_past_x_past": log(n) + 2 * m * log_c + 2 * m * mean_log_rho - float(np.mean(psi["y_past_x_past"])),
        "joint": log(n) + (2 * m + 1) * log_c + (2 * m + 1) * mean_log_rho - digamma(k),
    }
    return DIEstimate(_check(value), direction, "KSG", m, k, n, terms)


def _log_c2(d: int) -> float:
    return log(unit_ball_volume(d, 2))


def gov_constant(m: int) -> float:
    """Ball-volume constant of the Euclidean estimator, log(c_{m+1} c_{2m} / (c_{2m+1} c_m))."""
    return _log_c2(m + 1) + _log_c2(2 * m) - _log_c2(2 * m + 1) - _log_c2(m)


def gov_constant_unit_denominator(m: int) -> float:
    """Variant with c_1 in place of c_m in the denominator; equal to
    :func:`gov_constant` only at m = 1. Kept for comparison."""
    return _log_c2(m + 1) + _log_c2(2 * m) - _log_c2(2 * m + 1) - _log_c2(1)


def di_gov(pair: SeriesPair, m: int, k: int = 8, direction: str = "X->Y", strict: bool | None = None) -> DIEstimate:
    """Euclidean-ball estimator; the value is the signed sum of four entropy terms."""
    ds = _prepare(pair, m, k, direction)
    strict = False if strict is None else strict
    n = ds.n_effective
    st = neighbor_stats(ds, k, 2, _TERM_SPACES, strict)
    mean_log_rho = float(np.mean(np.log(st.rho)))
    mean_log_n = {name: float(np.mean(np.log(np.maximum(st.counts[name], 1)))) for name in _TERM_SPACES}
    dims = {"y_past": m, "y_past_y": m + 1, "y_past_x_past": 2 * m}
    terms = {name: log(n) + _log_c2(d) + d * mean_log_rho - mean_log_n[name] for name, d in dims.items()}
    terms["joint"] = log(n) + _log_c2(2 * m + 1) + (2 * m + 1) * mean_log_rho - digamma(k)
    value = terms["y_past_y"] - terms["y_past"] - terms["joint"] + terms["y_past_x_past"]
    return DIEstimate(_check(value), direction, "GOV", m, k, n, terms)


def di_gov_combined(pair: SeriesPair, m: int, k: int = 8, direction: str = "X->Y", strict: bool | None = None) -> float:
    """Closed form psi(k) + const + mean(log n_Y- - log n_(Y-,Y) - log n_(Y-,X-))."""
    ds = _prepare(pair, m, k, direction)
    strict = False if strict is None else strict
    st = neighbor_stats(ds, k, 2, _TERM_SPACES, strict)
    logs = {name: np.log(np.maximum(st.counts[name], 1)) for name in _TERM_SPACES}
    return digamma(k) + gov_constant(m) + float(np.mean(logs["y_past"] - logs["y_past_y"] - logs["y_past_x_past"]))


def estimate_di(pair: SeriesPair, method: str, m: int, k: int = 8, direction: str = "X->Y", strict: bool | None = None) -> DIEstimate:
    method = method.upper()
    if method == "KSG":
        return di_ksg(pair, m, k, direction, strict)
    if method == "GOV":
        return di_gov(pair, m, k, direction, strict)
    raise UsageError(f"unknown method {method!r}; use KSG or GOV")


def di_rate_linear_theory(beta1: float, beta2: float) -> float:
    """Directed-information rate in bits for y_i = b1 x_{i-1} + b2 x_{i-2} + z_i
    with x, z i.i.d. standard Gaussian."""
    if beta1 != 0 and beta2 != 0:
        prod = abs(beta1 * beta2)
        return 0.5 * LOG2E * (log(prod) + acosh((beta1**2 + beta2**2 + 1.0) / (2.0 * prod)))
    b = beta1 if beta1 != 0 else beta2
    return 0.5 * log2(1.0 + b * b)
