"""Markov-order selection by k-NN prediction of the next Y sample.

For each candidate order m the embedded rows ``(X-, Y-) -> Y`` are used as a
k-NN regression: every row's response is predicted by the mean response of
its k nearest rows (max-norm on the predictor) and the candidate with the
smallest mean squared error wins, ties going to the smaller m. Neighbor rows
whose time window overlaps the query window (``|i - j| <= m``) are never
used. All candidates are scored on the same targets, the time indices
available to the largest candidate.

``method="ragwitz"`` predicts from ``Y-`` only.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import InsufficientDataError, UsageError
from .knn import EmbeddedDataset, _pairwise_to, embed, nearest_excluding
from .series import SeriesPair

DEFAULT_CANDIDATES = (1, 2, 3, 4, 5)
_PREDICTORS = {"joint": "y_past_x_past", "ragwitz": "y_past"}


@dataclass(frozen=True)
class OrderSelection:
    m_hat: int
    losses: dict = field(default_factory=dict)
    method: str = "joint"

    def to_dict(self) -> dict:
        return {"m_hat": self.m_hat, "method": self.method, "losses": {str(m): v for m, v in self.losses.items()}}


def _predictor(ds: EmbeddedDataset, method: str) -> np.ndarray:
    try:
        return ds.project(_PREDICTORS[method])
    except KeyError:
        raise UsageError(f"unknown order-selection method {method!r}; use joint or ragwitz") from None


def _combine(responses: np.ndarray, dists: np.ndarray, weighted: bool) -> np.ndarray:
    if not weighted:
        return responses.mean(axis=-1)
    with np.errstate(divide="ignore"):
        w = 1.0 / dists
    exact = np.isinf(w)
    # any zero-distance neighbor takes all the weight
    w = np.where(exact.any(axis=-1, keepdims=True), exact.astype(float), w)
    return (w * responses).sum(axis=-1) / w.sum(axis=-1)


def knn_predict_next(ds: EmbeddedDataset, row: int, k: int = 8, method: str = "joint", weighted: bool = False, rows=None) -> float:
    """Predict the response of ``row`` from its k nearest non-overlapping rows.

    ``rows`` optionally restricts the candidate pool (row indices into ``ds``).
    Linear scan; ties in distance go to the earlier row.
    """
    pred = _predictor(ds, method)
    pool = np.arange(ds.n_effective) if rows is None else np.asarray(rows)
    times = ds.index_map
    pool = pool[np.abs(times[pool] - times[row]) > ds.m]
    if pool.size < k:
        raise InsufficientDataError(f"row {row}: only {pool.size} non-overlapping candidates for k={k}")
    d = _pairwise_to(pred[pool], pred[row], np.inf)
    pick = np.lexsort((pool, d))[:k]
    resp = ds.joint[pool[pick], 2 * ds.m]
    return float(_combine(resp, d[pick], weighted))


def predict_rows(ds: EmbeddedDataset, k: int = 8, method: str = "joint", weighted: bool = False, first_time: int | None = None):
    """Leave-window-out k-NN predictions for all rows with time index >= ``first_time``.

    Returns ``(targets, predictions, neighbor_rows)``; ``neighbor_rows`` holds
    row indices into ``ds``.
    """
    start = 0 if first_time is None else int(first_time) - ds.m
    if start < 0:
        raise UsageError("first_time precedes the first embedded row")
    pred = _predictor(ds, method)[start:]
    times = ds.index_map[start:]
    targets = ds.joint[start:, 2 * ds.m]
    labels, dists = nearest_excluding(pred, times, k, ds.m, np.inf)
    rows = labels - ds.index_map[0]
    preds = _combine(ds.joint[rows, 2 * ds.m], dists, weighted)
    return targets, preds, rows


def estimate_order(
    pair: SeriesPair,
    candidates=DEFAULT_CANDIDATES,
    k: int = 8,
    method: str = "joint",
    weighted: bool = False,
) -> OrderSelection:
    cands = sorted({int(m) for m in candidates})
    if not cands:
        raise UsageError("candidate set is empty")
    if cands[0] < 1:
        raise UsageError("candidate orders must be >= 1")
    if method not in _PREDICTORS:
        raise UsageError(f"unknown order-selection method {method!r}; use joint or ragwitz")
    top = cands[-1]
    if len(pair) <= top + k + 1:
        raise InsufficientDataError(f"need N > {top} + k + 1 for the largest candidate, got N={len(pair)}")

    losses = {}
    for m in cands:
        ds = embed(pair, m, k)
        targets, preds, _ = predict_rows(ds, k, method, weighted, first_time=top)
        losses[m] = float(np.mean((targets - preds) ** 2))
    best = min(losses.values())
    m_hat = min(m for m, v in losses.items() if v == best)
    return OrderSelection(m_hat, losses, method)
