import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays
from scipy.spatial import cKDTree

from diknn.errors import InsufficientDataError, UsageError
from diknn.knn import (
    BRUTE_FORCE_BELOW,
    embed,
    joint_neighbor_stats,
    knn_distance,
    lp_distance,
    nearest_excluding,
    neighbor_stats,
    range_count,
    range_counts,
    unit_ball_volume,
)
from diknn.series import SeriesPair
from oracles import ball_volume, counts_within, kth_distance


def _instance(seed):
    r = np.random.default_rng(seed)
    n = int(r.integers(20, 700))
    d = int(r.integers(1, 6))
    kind = seed % 3
    if kind == 0:
        pts = r.standard_normal((n, d))
    elif kind == 1:
        # coarse grid: many exact ties
        pts = r.integers(0, 6, (n, d)).astype(float)
        pts += r.standard_normal((n, d)) * 1e-3 * (r.random((n, 1)) < 0.5)
    else:
        pts = np.round(r.random((n, d)), 2) * 10
    k = int(r.integers(1, min(12, n - 1)))
    return pts, k


@pytest.mark.parametrize("p", [2, np.inf])
def test_distances_and_counts_match_brute_force_200(p):
    # exercises the brute path (n < 256) and the tree path (n >= 256)
    sizes = set()
    for seed in range(200):
        pts, k = _instance(seed)
        sizes.add(pts.shape[0] >= BRUTE_FORCE_BELOW)
        rho = knn_distance(pts, k, p)
        ref = kth_distance(pts, k, p)
        np.testing.assert_allclose(rho, ref, rtol=1e-12, atol=0)
        for strict in (False, True):
            got = range_counts(pts, ref, p, strict)
            np.testing.assert_array_equal(got, counts_within(pts, ref, p, strict))
    assert sizes == {True, False}


@pytest.mark.parametrize("p", [2, np.inf])
def test_knn_distance_against_scipy(p):
    r = np.random.default_rng(11)
    pts = r.standard_normal((2000, 4))
    ref = cKDTree(pts).query(pts, k=9, p=p)[0][:, 8]
    np.testing.assert_allclose(knn_distance(pts, 8, p), ref, rtol=1e-12)


def test_range_count_single_and_bulk_agree():
    r = np.random.default_rng(3)
    pts = r.standard_normal((400, 3))
    radii = r.random(400)
    bulk = range_counts(pts, radii, np.inf)
    assert all(bulk[i] == range_count(pts, i, radii[i], np.inf) for i in range(0, 400, 7))


def test_range_count_boundary():
    pts = np.array([[0.0], [1.0], [2.0]])
    assert range_count(pts, 0, 1.0, 2) == 1
    assert range_count(pts, 0, 1.0, 2, strict=True) == 0
    assert range_count(pts, 1, 1.0, np.inf) == 2


@given(
    arrays(np.float64, st.tuples(st.integers(12, 60), st.integers(1, 4)), elements=st.floats(-100, 100)),
    st.integers(1, 5),
    st.sampled_from([2, np.inf]),
)
def test_knn_distance_hypothesis(pts, k, p):
    np.testing.assert_allclose(knn_distance(pts, k, p), kth_distance(pts, k, p), rtol=1e-12)


@given(
    arrays(np.int64, st.tuples(st.integers(12, 40), st.integers(1, 3)), elements=st.integers(-80, 80)),
    arrays(np.int64, 3, elements=st.integers(-400, 400)),
)
def test_translation_invariance_of_counts(grid, shift):
    # dyadic coordinates keep every difference exact after the shift
    pts = grid / 8.0
    shift = shift[: pts.shape[1]] / 8.0
    rho = kth_distance(pts, 3, np.inf)
    a = range_counts(pts, rho, np.inf)
    b = range_counts(pts + shift, rho, np.inf)
    np.testing.assert_array_equal(a, b)


@given(arrays(np.float64, st.tuples(st.integers(12, 40), st.integers(1, 3)), elements=st.floats(-10, 10)))
def test_counts_monotone_in_radius(pts):
    rho = kth_distance(pts, 2, 2)
    np.testing.assert_array_less(range_counts(pts, rho, 2) - 1, range_counts(pts, 2 * rho, 2))


def test_lp_distance():
    assert lp_distance([0, 0], [3, 4], 2) == 5.0
    assert lp_distance([0, 0], [3, -4], np.inf) == 4.0
    with pytest.raises(UsageError):
        lp_distance([0, 0], [1, 2, 3])


@pytest.mark.parametrize("d", range(1, 9))
@pytest.mark.parametrize("p", [1, 2, 3, np.inf])
def test_unit_ball_volume_oracle(d, p):
    assert unit_ball_volume(d, p) == pytest.approx(ball_volume(d, p), rel=1e-12)


def test_unit_ball_volume_exact_values():
    assert abs(unit_ball_volume(2, 2) - math.pi) <= 1e-12
    assert abs(unit_ball_volume(3, 2) - 4 * math.pi / 3) <= 1e-12
    for p in (1, 2, 3, np.inf):
        assert abs(unit_ball_volume(1, p) - 2.0) <= 1e-12
    for d in range(1, 12):
        assert abs(unit_ball_volume(d, np.inf) - 2.0**d) <= 1e-12


def test_embed_layout():
    x = np.arange(10.0)
    y = 100 + np.arange(10.0)
    ds = embed(SeriesPair(x, y), 2)
    assert ds.n_effective == 8
    np.testing.assert_array_equal(ds.joint[0], [0, 1, 100, 101, 102])
    np.testing.assert_array_equal(ds.index_map, np.arange(2, 10))
    np.testing.assert_array_equal(ds.project("y_past_y")[-1], [107, 108, 109])
    assert ds.columns("joint") == [0, 1, 2, 3, 4]
    assert ds.columns("x_past") == [0, 1]
    with pytest.raises(UsageError):
        ds.columns("nope")


def test_embed_insufficient():
    with pytest.raises(InsufficientDataError):
        embed(SeriesPair(np.zeros(5), np.zeros(5)), 3, k=2)
    with pytest.raises(UsageError):
        embed(SeriesPair(np.zeros(5), np.zeros(5)), 0)


def test_neighbor_stats_matches_oracle():
    r = np.random.default_rng(5)
    pair = SeriesPair(r.standard_normal(300), r.standard_normal(300))
    ds = embed(pair, 2)
    st_ = neighbor_stats(ds, 4)
    rho = kth_distance(ds.joint, 4, np.inf)
    np.testing.assert_array_equal(st_.rho, rho)
    for name in ("y_past", "y_past_y", "y_past_x_past"):
        cols = ds.columns(name)
        np.testing.assert_array_equal(st_.counts[name], counts_within(ds.joint[:, cols], rho, np.inf))


def test_duplicates_trigger_jitter():
    pts = np.repeat(np.arange(30.0)[:, None], 3, axis=0)
    st_ = joint_neighbor_stats(pts, {}, 2)
    assert st_.jittered and np.all(st_.rho > 0)
    with pytest.raises(InsufficientDataError):
        joint_neighbor_stats(np.zeros((20, 1)), {}, 3)


def test_knn_needs_more_points_than_k():
    with pytest.raises(InsufficientDataError):
        knn_distance(np.zeros((4, 1)), 4)


def test_nearest_excluding_against_brute():
    r = np.random.default_rng(8)
    pts = np.round(r.standard_normal((500, 2)), 1)
    labels = np.arange(500)
    lab, dist = nearest_excluding(pts, labels, 5, 3)
    d = np.abs(pts[:, None] - pts[None]).max(axis=2)
    for i in range(0, 500, 13):
        cand = [j for j in range(500) if abs(j - i) > 3]
        ref = sorted(cand, key=lambda j: (d[i, j], j))[:5]
        np.testing.assert_array_equal(lab[i], ref)
        np.testing.assert_array_equal(dist[i], d[i, ref])
