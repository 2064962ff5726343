"""Compiled k-d tree for exact k-NN radii and fixed-radius counts.

The tree stores a permuted copy of the points so every node covers a
contiguous slice ``[start, end)``. Each node keeps its tight bounding box.
Pruning uses box-to-query lower bounds and, for counting, box upper bounds:
a node whose farthest corner is within the radius contributes its size
without visiting points.

Exactness: point distances are evaluated with the same operation order as
``knn._pairwise_to``. Box bounds are built from per-coordinate differences
that are never larger (lower bound) or smaller (upper bound) than the
corresponding point differences, and IEEE rounding is monotone, so a pruned
or bulk-counted node can never change a result.
"""

from __future__ import annotations

import numpy as np
from numba import njit

LEAF_SIZE = 16


@njit(cache=True, nogil=True)
def _dist(pts, i, q, use_inf):
    d = pts.shape[1]
    if use_inf:
        acc = 0.0
        for t in range(d):
            v = abs(pts[i, t] - q[t])
            if v > acc:
                acc = v
        return acc
    acc = abs(pts[i, 0] - q[0]) ** 2
    for t in range(1, d):
        acc += abs(pts[i, t] - q[t]) ** 2
    return np.sqrt(acc)


@njit(cache=True, nogil=True)
def _box_near(lo, hi, node, q, use_inf):
    d = q.shape[0]
    near = 0.0
    for t in range(d):
        a = lo[node, t] - q[t]
        b = q[t] - hi[node, t]
        g = a if a > b else b
        if g < 0.0:
            g = 0.0
        if use_inf:
            if g > near:
                near = g
        elif t == 0:
            near = g**2
        else:
            near += g**2
    return near if use_inf else np.sqrt(near)


@njit(cache=True, nogil=True)
def _box_bounds(lo, hi, node, q, use_inf):
    """(min, max) distance from q to any point of the node's box."""
    d = q.shape[0]
    if use_inf:
        near = 0.0
        far = 0.0
        for t in range(d):
            a = lo[node, t] - q[t]
            b = q[t] - hi[node, t]
            g = a if a > b else b
            if g > near:
                near = g
            fa = abs(q[t] - lo[node, t])
            fb = abs(hi[node, t] - q[t])
            f = fa if fa > fb else fb
            if f > far:
                far = f
        return near, far
    near = 0.0
    far = 0.0
    for t in range(d):
        a = lo[node, t] - q[t]
        b = q[t] - hi[node, t]
        g = a if a > b else b
        if g < 0.0:
            g = 0.0
        fa = abs(q[t] - lo[node, t])
        fb = abs(hi[node, t] - q[t])
        f = fa if fa > fb else fb
        if t == 0:
            near = g**2
            far = f**2
        else:
            near += g**2
            far += f**2
    return np.sqrt(near), np.sqrt(far)


@njit(cache=True, nogil=True)
def build(points, leaf_size):
    """Return ``(tpts, perm, start, end, left, right, lo, hi, split_dim, split_val)``.

    Node 0 is the root; a leaf has ``left == -1``.
    """
    n, d = points.shape
    perm = np.arange(n)
    cap = 2 * n + 1
    start = np.empty(cap, dtype=np.int64)
    end = np.empty(cap, dtype=np.int64)
    left = np.full(cap, -1, dtype=np.int64)
    right = np.full(cap, -1, dtype=np.int64)
    lo = np.empty((cap, d))
    hi = np.empty((cap, d))
    split_dim = np.zeros(cap, dtype=np.int64)
    split_val = np.zeros(cap)

    stack = np.empty(cap, dtype=np.int64)
    start[0] = 0
    end[0] = n
    count = 1
    top = 0
    stack[0] = 0
    top = 1
    while top > 0:
        top -= 1
        node = stack[top]
        s = start[node]
        e = end[node]
        for t in range(d):
            mn = points[perm[s], t]
            mx = mn
            for r in range(s + 1, e):
                v = points[perm[r], t]
                if v < mn:
                    mn = v
                if v > mx:
                    mx = v
            lo[node, t] = mn
            hi[node, t] = mx
        if e - s <= leaf_size:
            continue
        dim = 0
        spread = hi[node, 0] - lo[node, 0]
        for t in range(1, d):
            w = hi[node, t] - lo[node, t]
            if w > spread:
                spread = w
                dim = t
        if spread == 0.0:
            continue
        seg = perm[s:e].copy()
        keys = np.empty(e - s)
        for r in range(e - s):
            keys[r] = points[seg[r], dim]
        order = np.argsort(keys, kind="mergesort")
        for r in range(e - s):
            perm[s + r] = seg[order[r]]
        mid = s + (e - s) // 2
        split_dim[node] = dim
        split_val[node] = points[perm[mid], dim]
        lc = count
        rc = count + 1
        count += 2
        start[lc] = s
        end[lc] = mid
        start[rc] = mid
        end[rc] = e
        left[node] = lc
        right[node] = rc
        stack[top] = lc
        stack[top + 1] = rc
        top += 2

    tpts = np.empty((n, d))
    for r in range(n):
        for t in range(d):
            tpts[r, t] = points[perm[r], t]
    return (tpts, perm, start[:count].copy(), end[:count].copy(), left[:count].copy(),
            right[:count].copy(), lo[:count].copy(), hi[:count].copy(),
            split_dim[:count].copy(), split_val[:count].copy())


@njit(cache=True, nogil=True)
def kth_radius(points, k, use_inf, leaf_size):
    """Distance from every point to its k-th nearest other point."""
    tpts, perm, start, end, left, right, lo, hi, sdim, sval = build(points, leaf_size)
    n = points.shape[0]
    rho = np.empty(n)
    best = np.empty(k)
    stack = np.empty(start.shape[0] + 1, dtype=np.int64)
    for qi in range(n):
        q = tpts[qi]
        filled = 0
        top = 1
        stack[0] = 0
        while top > 0:
            top -= 1
            node = stack[top]
            if filled == k:
                if _box_near(lo, hi, node, q, use_inf) > best[k - 1]:
                    continue
            if left[node] < 0:
                for r in range(start[node], end[node]):
                    if r == qi:
                        continue
                    dist = _dist(tpts, r, q, use_inf)
                    if filled < k:
                        pos = filled
                        filled += 1
                    elif dist < best[k - 1]:
                        pos = k - 1
                    else:
                        continue
                    while pos > 0 and best[pos - 1] > dist:
                        best[pos] = best[pos - 1]
                        pos -= 1
                    best[pos] = dist
                continue
            # push the far side first so the query's side is searched first
            if q[sdim[node]] < sval[node]:
                stack[top] = right[node]
                stack[top + 1] = left[node]
            else:
                stack[top] = left[node]
                stack[top + 1] = right[node]
            top += 2
        rho[perm[qi]] = best[k - 1]
    return rho


@njit(cache=True, nogil=True)
def radius_counts(points, radii, use_inf, strict, leaf_size):
    """Number of points j != i with d(i, j) <= radii[i] (``<`` when strict)."""
    tpts, perm, start, end, left, right, lo, hi, sdim, sval = build(points, leaf_size)
    n = points.shape[0]
    out = np.empty(n, dtype=np.int64)
    stack = np.empty(start.shape[0] + 1, dtype=np.int64)
    for qi in range(n):
        q = tpts[qi]
        r = radii[perm[qi]]
        c = 0
        top = 1
        stack[0] = 0
        while top > 0:
            top -= 1
            node = stack[top]
            near, far = _box_bounds(lo, hi, node, q, use_inf)
            if near > r or (strict and near >= r):
                continue
            if far < r or (not strict and far == r):
                c += end[node] - start[node]
                continue
            if left[node] < 0:
                for j in range(start[node], end[node]):
                    dist = _dist(tpts, j, q, use_inf)
                    if dist < r or (not strict and dist == r):
                        c += 1
                continue
            stack[top] = left[node]
            stack[top + 1] = right[node]
            top += 2
        # the query point itself lies at distance 0
        if (not strict) or r > 0.0:
            c -= 1
        out[perm[qi]] = c
    return out


@njit(cache=True, nogil=True)
def knn_excluding(points, labels, k, exclude_within, use_inf, leaf_size):
    """k nearest points to every point, skipping points with
    ``|labels[j] - labels[i]| <= exclude_within``; ties go to the smaller label.

    Returns ``(labels, dists)`` of shape (n, k), padded with -1 / inf when
    fewer than k points are admissible.
    """
    tpts, perm, start, end, left, right, lo, hi, sdim, sval = build(points, leaf_size)
    n = points.shape[0]
    tlab = np.empty(n, dtype=np.int64)
    for r in range(n):
        tlab[r] = labels[perm[r]]
    out_lab = np.full((n, k), -1, dtype=np.int64)
    out_d = np.full((n, k), np.inf)
    bd = np.empty(k)
    bl = np.empty(k, dtype=np.int64)
    stack = np.empty(start.shape[0] + 1, dtype=np.int64)
    for qi in range(n):
        q = tpts[qi]
        ql = tlab[qi]
        filled = 0
        top = 1
        stack[0] = 0
        while top > 0:
            top -= 1
            node = stack[top]
            if filled == k:
                if _box_near(lo, hi, node, q, use_inf) > bd[k - 1]:
                    continue
            if left[node] < 0:
                for r in range(start[node], end[node]):
                    lab = tlab[r]
                    if abs(lab - ql) <= exclude_within:
                        continue
                    dist = _dist(tpts, r, q, use_inf)
                    if filled < k:
                        pos = filled
                        filled += 1
                    elif dist < bd[k - 1] or (dist == bd[k - 1] and lab < bl[k - 1]):
                        pos = k - 1
                    else:
                        continue
                    while pos > 0 and (bd[pos - 1] > dist or (bd[pos - 1] == dist and bl[pos - 1] > lab)):
                        bd[pos] = bd[pos - 1]
                        bl[pos] = bl[pos - 1]
                        pos -= 1
                    bd[pos] = dist
                    bl[pos] = lab
                continue
            if q[sdim[node]] < sval[node]:
                stack[top] = right[node]
                stack[top + 1] = left[node]
            else:
                stack[top] = left[node]
                stack[top + 1] = right[node]
            top += 2
        dst = perm[qi]
        for t in range(filled):
            out_lab[dst, t] = bl[t]
            out_d[dst, t] = bd[t]
    return out_lab, out_d
