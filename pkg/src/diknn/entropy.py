"""k-NN differential entropy estimators (nats)."""

from __future__ import annotations

from dataclasses import dataclass
from math import log

import numpy as np

from .knn import as_points, joint_neighbor_stats, norm_p, unit_ball_volume
from .special import digamma


@dataclass(frozen=True)
class EntropyEstimate:
    value: float
    n_samples: int
    k: int
    p: float


def _log_terms(points, k, p):
    pts = as_points(points)
    p = norm_p(p)
    rho = joint_neighbor_stats(pts, {}, k, p).rho
    n, d = pts.shape
    return pts, p, n, d, log(n) + log(unit_ball_volume(d, p)) + d * float(np.mean(np.log(rho)))


def entropy_naive(points, k: int = 8, p=2) -> EntropyEstimate:
    """Plug-in estimate mean(log(N c_d rho_k^d / k)), without bias correction."""
    _, p, n, _, base = _log_terms(points, k, p)
    return EntropyEstimate(base - log(k), n, k, p)


def entropy_kl(points, k: int = 8, p=2) -> EntropyEstimate:
    """Kozachenko-Leonenko estimate log N - psi(k) + log c_d + d mean(log rho_k)."""
    _, p, n, _, base = _log_terms(points, k, p)
    return EntropyEstimate(base - digamma(k), n, k, p)
