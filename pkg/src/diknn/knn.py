"""Metric geometry, delay embedding and k-NN statistics.

All distances are l2 or l-infinity. ``p`` may be given as ``2``, ``np.inf``,
or the strings ``"2"``, ``"inf"``, ``"max"``.

Counting convention: ``range_count`` and ``neighbor_stats`` count points
``j != i`` with ``d(x_i, x_j) <= radius`` by default (``strict=False``);
pass ``strict=True`` for ``<``.

Queries run on a compiled k-d tree (``_kdtree``) for 256 rows and up and on
a linear scan below that. Both evaluate distances with the same
floating-point operations as :func:`_pairwise_to`, so counts at a radius
taken from ``knn_distance`` are exact, boundary point included.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from math import gamma, pi

import numpy as np

from . import _kdtree
from . import rng as _rng
from .errors import InsufficientDataError, UsageError
from .series import SeriesPair

BRUTE_FORCE_BELOW = 256
JITTER_SCALE = 1e-10


def norm_p(p) -> float:
    """Normalize a norm selector to ``2.0`` or ``inf``."""
    if isinstance(p, str):
        key = p.strip().lower()
        if key in ("inf", "infinity", "max", "chebyshev"):
            return np.inf
        if key in ("2", "l2", "euclidean"):
            return 2.0
    elif p == 2 or p == np.inf:
        return float(p)
    raise UsageError(f"unsupported norm {p!r}; use 2 or inf")


def as_points(data) -> np.ndarray:
    """Coerce to a finite float64 array of shape (n, d); 1-D input is one column."""
    pts = np.asarray(data, dtype=np.float64)
    if pts.ndim == 1:
        pts = pts[:, None]
    if pts.ndim != 2 or pts.shape[1] < 1:
        raise UsageError(f"expected an (n, d) array, got shape {pts.shape}")
    if not np.all(np.isfinite(pts)):
        raise UsageError("points contain non-finite coordinates")
    return pts


def _pairwise_to(points: np.ndarray, center: np.ndarray, p: float) -> np.ndarray:
    diff = np.abs(points - center)
    if p == np.inf:
        return diff.max(axis=-1)
    # coordinate-by-coordinate, matching the compiled kernels
    acc = diff[..., 0] ** 2
    for t in range(1, diff.shape[-1]):
        acc = acc + diff[..., t] ** 2
    return np.sqrt(acc)


def lp_distance(a, b, p=2) -> float:
    p = norm_p(p)
    a = np.asarray(a, dtype=np.float64).ravel()
    b = np.asarray(b, dtype=np.float64).ravel()
    if a.shape != b.shape:
        raise UsageError(f"dimension mismatch: {a.size} vs {b.size}")
    return float(_pairwise_to(a, b, p))


def unit_ball_volume(d: int, p=2) -> float:
    """Volume of the unit l_p ball in ``d`` dimensions, 2^d G(1+1/p)^d / G(1+d/p).

    Any ``p >= 1`` is accepted here, unlike the neighbor queries.
    """
    p = np.inf if isinstance(p, str) and p.strip().lower() in ("inf", "max") else float(p)
    if not p >= 1:
        raise UsageError(f"p must be >= 1, got {p}")
    if d < 1:
        raise UsageError(f"dimension must be >= 1, got {d}")
    if p == np.inf:
        return float(2.0**d)
    if d == 2 and p == 2:
        return pi
    return 2.0**d * gamma(1.0 + 1.0 / p) ** d / gamma(1.0 + d / p)


# -- delay embedding ---------------------------------------------------------

SUBSPACES = {
    # name -> blocks of the joint row: x = X past, y = Y past, t = current Y
    "x_past": ("x",),
    "y_past": ("y",),
    "y": ("t",),
    "y_past_y": ("y", "t"),
    "y_past_x_past": ("x", "y"),
    "joint": ("x", "y", "t"),
}


@dataclass(frozen=True)
class EmbeddedDataset:
    """Rows ``[x_{i-m..i-1}, y_{i-m..i-1}, y_i]`` for time indices i = m..N-1."""

    joint: np.ndarray
    m: int
    index_map: np.ndarray

    @property
    def n_effective(self) -> int:
        return self.joint.shape[0]

    def columns(self, subspace: str) -> list[int]:
        try:
            blocks = SUBSPACES[subspace]
        except KeyError:
            raise UsageError(f"unknown subspace {subspace!r}") from None
        m = self.m
        cols = []
        for b in ("x", "y", "t"):
            if b not in blocks:
                continue
            if b == "x":
                cols.extend(range(0, m))
            elif b == "y":
                cols.extend(range(m, 2 * m))
            else:
                cols.append(2 * m)
        return cols

    def project(self, subspace: str) -> np.ndarray:
        return self.joint[:, self.columns(subspace)]

    def groups(self, subspaces) -> dict[str, list[int]]:
        return {s: self.columns(s) for s in subspaces}


def embed(pair: SeriesPair, m: int, k: int = 1) -> EmbeddedDataset:
    """Delay-embed ``pair`` at order ``m`` for the X -> Y direction."""
    if m < 1:
        raise UsageError(f"Markov order must be >= 1, got {m}")
    n = len(pair)
    if n <= m + k:
        raise InsufficientDataError(f"need N > m + k, got N={n}, m={m}, k={k}")
    x, y = pair.x, pair.y
    rows = n - m
    joint = np.empty((rows, 2 * m + 1))
    for lag in range(m):
        # column `lag` holds x_{i-m+lag}
        joint[:, lag] = x[lag : lag + rows]
        joint[:, m + lag] = y[lag : lag + rows]
    joint[:, 2 * m] = y[m:]
    joint.setflags(write=False)
    return EmbeddedDataset(joint=joint, m=m, index_map=np.arange(m, n))


# -- neighbor queries --------------------------------------------------------


def _check_k(n: int, k: int) -> None:
    if k < 1:
        raise UsageError(f"k must be >= 1, got {k}")
    if k >= n:
        raise InsufficientDataError(f"k={k} requires more than {k} points, got {n}")


def _kth_radius(pts: np.ndarray, k: int, p: float) -> np.ndarray:
    n = pts.shape[0]
    if n >= BRUTE_FORCE_BELOW:
        return _kdtree.kth_radius(np.ascontiguousarray(pts), k, p == np.inf, _kdtree.LEAF_SIZE)
    rho = np.empty(n)
    for i in range(n):
        d = _pairwise_to(pts, pts[i], p)
        d[i] = np.inf
        rho[i] = np.partition(d, k - 1)[k - 1]
    return rho


def knn_distance(points, k: int, p=2) -> np.ndarray:
    """Distance from every point to its k-th nearest other point (self excluded)."""
    pts = as_points(points)
    p = norm_p(p)
    _check_k(pts.shape[0], k)
    return _kth_radius(pts, k, p)


def range_count(points, center_index: int, radius: float, p=2, strict: bool = False) -> int:
    """Number of points j != center within ``radius`` of the center point (linear scan)."""
    pts = as_points(points)
    p = norm_p(p)
    if radius < 0:
        raise UsageError("radius must be non-negative")
    d = _pairwise_to(pts, pts[center_index], p)
    hit = d < radius if strict else d <= radius
    return int(hit.sum() - hit[center_index])


def range_counts(points, radii, p=2, strict: bool = False) -> np.ndarray:
    """:func:`range_count` for every point at once, one radius per point."""
    pts = as_points(points)
    p = norm_p(p)
    radii = np.asarray(radii, dtype=np.float64)
    if radii.shape != (pts.shape[0],):
        raise UsageError("need one radius per point")
    if np.any(radii < 0):
        raise UsageError("radius must be non-negative")
    n = pts.shape[0]
    if n >= BRUTE_FORCE_BELOW:
        return _kdtree.radius_counts(np.ascontiguousarray(pts), radii, p == np.inf, strict, _kdtree.LEAF_SIZE)
    return np.array([range_count(pts, i, radii[i], p, strict) for i in range(n)], dtype=np.int64)


def nearest_excluding(points, labels, k: int, exclude_within: int, p=np.inf):
    """k nearest neighbors of every point, ignoring points whose label is within
    ``exclude_within`` of the query's label.

    Returns ``(neighbor_labels, distances)``, each (n, k), ordered by distance
    with ties broken by smaller label.
    """
    pts = as_points(points)
    p = norm_p(p)
    labels = np.asarray(labels, dtype=np.int64)
    out_lab, out_dist = _kdtree.knn_excluding(
        np.ascontiguousarray(pts), labels, k, exclude_within, p == np.inf, _kdtree.LEAF_SIZE
    )
    if np.any(out_lab < 0):
        raise InsufficientDataError(f"fewer than k={k} non-overlapping neighbors for some rows")
    return out_lab, out_dist


@dataclass(frozen=True)
class NeighborStats:
    """Joint k-NN radius per row plus per-subspace counts inside that radius."""

    rho: np.ndarray
    counts: dict[str, np.ndarray]
    k: int
    p: float
    strict: bool = False
    jittered: bool = False
    points: np.ndarray = field(repr=False, default=None)


def dejitter_points(points: np.ndarray, seed: int = 0) -> np.ndarray:
    """Add deterministic noise of 1e-10 x per-column standard deviation to break
    exact ties. Constant columns stay constant."""
    scale = points.std(axis=0)
    stream = _rng.stream(seed, 0xD1, points.shape[0])
    noise = _rng.standard_normal(stream, points.shape)
    return points + JITTER_SCALE * scale * noise


def joint_neighbor_stats(
    points,
    groups: dict[str, list[int]],
    k: int,
    p=np.inf,
    strict: bool = False,
) -> NeighborStats:
    """k-NN radius in the full space of ``points`` and range counts in each column group.

    ``groups`` maps a name to the columns forming that projection. If any
    radius is exactly zero the points are jittered once (see
    :func:`dejitter_points`) and everything is recomputed.
    """
    pts = as_points(points)
    p = norm_p(p)
    _check_k(pts.shape[0], k)

    rho = _kth_radius(pts, k, p)
    jittered = False
    if np.any(rho == 0):
        pts = dejitter_points(pts)
        rho = _kth_radius(pts, k, p)
        jittered = True
        if np.any(rho == 0):
            raise InsufficientDataError("fewer than k+1 distinct points; k-NN radius is zero")

    counts = {name: range_counts(pts[:, list(cols)], rho, p, strict) for name, cols in groups.items()}
    return NeighborStats(rho=rho, counts=counts, k=k, p=p, strict=strict, jittered=jittered, points=pts)


def neighbor_stats(
    ds: EmbeddedDataset,
    k: int,
    p=np.inf,
    subspaces=("y_past", "y_past_y", "y_past_x_past"),
    strict: bool = False,
) -> NeighborStats:
    if ds.n_effective <= k:
        raise InsufficientDataError(f"{ds.n_effective} embedded rows, need more than k={k}")
    return joint_neighbor_stats(ds.joint, ds.groups(subspaces), k, p, strict)
