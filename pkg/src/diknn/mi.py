"""Mutual information between paired samples: 3KL, KSG and GOV estimators.

All three take ``x`` of shape (n, dx) and ``y`` of shape (n, dy) (1-D input is
one column) and return nats. Negative estimates are returned as computed.

``mi_ksg`` counts marginal neighbors strictly inside the joint max-norm
radius by default; ``strict=False`` switches to ``<=``.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import log

import numpy as np

from .entropy import entropy_kl
from .errors import UsageError
from .knn import as_points, joint_neighbor_stats, unit_ball_volume
from .special import digamma


@dataclass(frozen=True)
class MIEstimate:
    value: float
    method: str
    k: int
    n_samples: int


def _pair(x, y):
    x = as_points(x)
    y = as_points(y)
    if x.shape[0] != y.shape[0]:
        raise UsageError(f"length mismatch: {x.shape[0]} vs {y.shape[0]}")
    return x, y, np.hstack([x, y])


def _groups(x, y):
    dx, dy = x.shape[1], y.shape[1]
    return {"x": list(range(dx)), "y": list(range(dx, dx + dy))}


def mi_3kl(x, y, k: int = 8, p=np.inf) -> MIEstimate:
    """h(X) + h(Y) - h(X,Y), each by an independent KL estimate."""
    x, y, xy = _pair(x, y)
    value = entropy_kl(x, k, p).value + entropy_kl(y, k, p).value - entropy_kl(xy, k, p).value
    return MIEstimate(value, "3KL", k, x.shape[0])


def mi_ksg(x, y, k: int = 8, strict: bool = True) -> MIEstimate:
    x, y, xy = _pair(x, y)
    n = x.shape[0]
    st = joint_neighbor_stats(xy, _groups(x, y), k, np.inf, strict)
    marg = digamma(st.counts["x"] + 1.0) + digamma(st.counts["y"] + 1.0)
    value = digamma(k) + log(n) - float(np.mean(marg))
    return MIEstimate(value, "KSG", k, n)


def gov_correction(dx: int, dy: int) -> float:
    """log(c_dx c_dy / c_{dx+dy}) for Euclidean balls."""
    return log(unit_ball_volume(dx, 2) * unit_ball_volume(dy, 2) / unit_ball_volume(dx + dy, 2))


def mi_gov(x, y, k: int = 8, strict: bool = False) -> MIEstimate:
    """Euclidean-ball variant: log-counts plus a ball-volume correction."""
    x, y, xy = _pair(x, y)
    n = x.shape[0]
    st = joint_neighbor_stats(xy, _groups(x, y), k, 2, strict)
    nx = np.maximum(st.counts["x"], 1)
    ny = np.maximum(st.counts["y"], 1)
    value = log(n) + digamma(k) + gov_correction(x.shape[1], y.shape[1]) - float(np.mean(np.log(nx) + np.log(ny)))
    return MIEstimate(value, "GOV", k, n)
