"""End-to-end acceptance checks, one test per criterion.

Each test records a ``PASS``/``FAIL`` line (printed in the terminal summary by
``conftest.py``) before asserting. The sweeps run through the experiment
harness on the specs in ``experiments/``; on one CPU the whole module takes
roughly half an hour. Run alone with::

    pytest tests/test_acceptance.py -v
"""

from __future__ import annotations

import math
import os
import subprocess
import sys
from collections import defaultdict
from pathlib import Path

import numpy as np
import pytest

from diknn import rng
from diknn.di import LOG2E, di_gov, di_gov_combined, di_ksg, di_rate_linear_theory
from diknn.entropy import entropy_kl
from diknn.experiment import ExperimentSpec, run_experiment
from diknn.knn import knn_distance, range_counts, unit_ball_volume
from diknn.mi import mi_ksg
from diknn.series import SeriesPair
from oracles import counts_within, gaussian_entropy, kth_distance

pytestmark = [pytest.mark.acceptance, pytest.mark.slow]

ROOT = Path(__file__).resolve().parents[1]
EXPERIMENTS = ROOT / "experiments"
LINES: list[str] = []


def record(number: int, ok: bool, text: str) -> None:
    line = f"criterion {number}: {'PASS' if ok else 'FAIL'} - {text}"
    LINES.append(line)
    print(line)
    assert ok, line


@pytest.fixture(scope="module")
def run(tmp_path_factory):
    cache = {}

    def _run(name):
        if name not in cache:
            spec = ExperimentSpec.load(EXPERIMENTS / f"{name}.json")
            cache[name] = run_experiment(spec, tmp_path_factory.mktemp(name))
        return cache[name]

    return _run


def _group(rows, method, direction):
    out = defaultdict(list)
    for r in rows:
        if r.method == method and r.direction == direction:
            out[r.sweep_value].append(r)
    return dict(sorted(out.items()))


def test_criterion_1_linear_accuracy(run):
    rows = run("linear_sweep")
    worst_xy, worst_yx = [], []
    for method in ("KSG", "GOV"):
        for beta, rs in _group(rows, method, "X->Y").items():
            if beta >= 0.3 - 1e-12:
                err = np.mean([r.di_bits for r in rs]) - di_rate_linear_theory(beta, beta)
                worst_xy.append((abs(err), method, beta, err))
        for beta, rs in _group(rows, method, "Y->X").items():
            m = np.mean([r.di_bits for r in rs])
            worst_yx.append((abs(m), method, beta, m))
    a, b = max(worst_xy), max(worst_yx)
    ok = a[0] <= 0.1 and b[0] <= 0.03
    record(
        1, ok,
        f"max |mean X->Y - theory| = {a[0]:.4f} bits ({a[1]}, beta={a[2]}; tol 0.1); "
        f"max |mean Y->X| = {b[0]:.4f} bits ({b[1]}, beta={b[2]}; tol 0.03)",
    )


def test_criterion_2_std_scale(run):
    rows = run("linear_sweep")
    sd_xy = np.mean([np.std([r.di_bits for r in rs], ddof=1) for rs in _group(rows, "KSG", "X->Y").values()])
    sd_yx = np.mean([np.std([r.di_bits for r in rs], ddof=1) for rs in _group(rows, "KSG", "Y->X").values()])
    record(2, sd_xy <= 0.05 and sd_yx <= 0.02, f"avg KSG std X->Y = {sd_xy:.4f} bits (tol 0.05), Y->X = {sd_yx:.4f} bits (tol 0.02)")


def test_criterion_3_order_selection(run):
    joint = _group(run("linear_order_joint"), "KSG", "X->Y")
    ragwitz = _group(run("linear_order_ragwitz"), "KSG", "X->Y")
    parts, ok = [], True
    for beta, rs in joint.items():
        frac = np.mean([r.m_used == 2 for r in rs])
        ok &= frac >= 0.75
        parts.append(f"joint beta={beta}: m=2 in {frac:.0%}")
    for beta, rs in ragwitz.items():
        counts = np.bincount([r.m_used for r in rs], minlength=6)[1:]
        frac1 = counts[0] / len(rs)
        ok &= frac1 > 0.5
        parts.append(f"ragwitz beta={beta}: m=1 in {frac1:.0%} (m=1..5 counts {counts.tolist()})")
    record(3, bool(ok), "; ".join(parts) + " [need joint >= 75%, ragwitz m=1 > 50%]")


def test_criterion_4_significance(run):
    strong = _group(run("linear_significance"), "KSG", "X->Y")
    strong_gov = _group(run("linear_significance"), "GOV", "X->Y")
    null = run("null_significance")
    parts, ok = [], True
    for method, groups in (("KSG", strong), ("GOV", strong_gov)):
        for beta, rs in groups.items():
            rate = np.mean([r.significant for r in rs])
            if beta >= 0.5 - 1e-12:
                ok &= rate == 1.0
                parts.append(f"{method} beta={beta}: {rate:.0%}")
            elif method == "KSG":
                ok &= 0.05 <= rate <= 0.45
                parts.append(f"KSG beta=0.1: {rate:.0%} (need 5-45%)")
    for method in ("KSG", "GOV"):
        rs = [r for r in null if r.method == method]
        rate = np.mean([r.significant for r in rs])
        ok &= rate <= 0.12
        parts.append(f"null {method}: {rate:.1%} of {len(rs)} (need <= 12%)")
    record(4, bool(ok), "; ".join(parts))


def test_criterion_5_henon(run):
    rows = run("henon_sweep")
    xy = {b: np.mean([r.di_nats for r in rs]) for b, rs in _group(rows, "KSG", "X->Y").items()}
    yx = {b: np.mean([r.di_nats for r in rs]) for b, rs in _group(rows, "KSG", "Y->X").items()}
    rise = xy[0.6] - xy[0.1]
    worst_yx = max(yx.values())
    ok = rise >= 0.1 and xy[0.9] < 0.5 * xy[0.6] and worst_yx < 0.05
    record(
        5, ok,
        f"KSG X->Y mean beta=0.1: {xy[0.1]:.3f}, 0.6: {xy[0.6]:.3f}, 0.9: {xy[0.9]:.3f} nats "
        f"(rise {rise:.3f} >= 0.1; 0.9 < half of 0.6); max mean Y->X {worst_yx:.3f} nats (< 0.05)",
    )


def test_criterion_6_quadratic(run):
    rows = run("quadratic_sweep")
    groups = _group(rows, "KSG", "X->Y")
    betas = list(groups)
    means = [np.mean([r.di_nats for r in groups[b]]) for b in betas]
    ses = [np.std([r.di_nats for r in groups[b]], ddof=1) / math.sqrt(len(groups[b])) for b in betas]
    drops = []
    for i in range(len(betas) - 1):
        se = math.hypot(ses[i], ses[i + 1])
        if means[i + 1] < means[i] - se:
            drops.append(f"{betas[i]}->{betas[i + 1]}")
    yx = [abs(np.mean([r.di_nats for r in rs])) for m in ("KSG", "GOV") for rs in _group(rows, m, "Y->X").values()]
    ok = not drops and max(yx) <= 0.03
    record(
        6, ok,
        f"KSG X->Y means {np.round(means, 3).tolist()} nats; steps falling by more than one SE: {drops or 'none'}; "
        f"max |mean Y->X| {max(yx):.4f} nats (tol 0.03)",
    )


def _oracle_knn():
    bad = 0
    for seed in range(200):
        r = np.random.default_rng(seed)
        n, d, k = int(r.integers(20, 500)), int(r.integers(1, 6)), int(r.integers(1, 10))
        pts = r.standard_normal((n, d)) if seed % 2 else np.round(r.random((n, d)), 1)
        for p in (2, np.inf):
            ref = kth_distance(pts, k, p)
            if not np.allclose(knn_distance(pts, k, p), ref, rtol=1e-12, atol=0):
                bad += 1
            for strict in (False, True):
                if not np.array_equal(range_counts(pts, ref, p, strict), counts_within(pts, ref, p, strict)):
                    bad += 1
    return bad


def test_criterion_7_oracles():
    parts, ok = [], True

    bad = _oracle_knn()
    ok &= bad == 0
    parts.append(f"k-NN/range-count mismatches on 200 instances: {bad}")

    u = np.mean([entropy_kl(rng.uniform_open(rng.stream(s, 8), 5000)).value for s in range(20)])
    g = np.mean([entropy_kl(rng.standard_normal(rng.stream(s, 7), 5000)).value for s in range(20)])
    eu, eg = abs(u), abs(g - gaussian_entropy())
    ok &= eu <= 0.02 and eg <= 0.02
    parts.append(f"KL entropy error U[0,1] {eu:.4f}, N(0,1) {eg:.4f} nats")

    mi_err = []
    for rho in (0.3, 0.6, 0.9):
        vals = []
        for s in range(5):
            a = rng.standard_normal(rng.stream(s, 9), (5000, 2))
            vals.append(mi_ksg(a[:, 0], rho * a[:, 0] + math.sqrt(1 - rho * rho) * a[:, 1]).value)
        mi_err.append(abs(np.mean(vals) + 0.5 * math.log(1 - rho * rho)))
    ok &= max(mi_err) <= 0.02
    parts.append(f"KSG MI max error {max(mi_err):.4f} nats")

    ident = 0.0
    for s in range(20):
        a = rng.standard_normal(rng.stream(s, 10), (2, 400))
        pair = SeriesPair(a[0], 0.5 * np.roll(a[0], 1) + a[1])
        m = 1 + s % 4
        for est in (di_ksg(pair, m), di_gov(pair, m)):
            ident = max(ident, abs(est.value - est.term_sum()))
        ident = max(ident, abs(di_gov(pair, m).value - di_gov_combined(pair, m)))
    ok &= ident <= 1e-10
    parts.append(f"DI combined vs four-term max gap {ident:.1e}")

    vol = max(
        [abs(unit_ball_volume(2, 2) - math.pi)]
        + [abs(unit_ball_volume(1, p) - 2.0) for p in (1, 1.5, 2, 3, np.inf)]
        + [abs(unit_ball_volume(d, np.inf) - 2.0**d) for d in range(1, 16)]
    )
    ok &= vol <= 1e-12
    parts.append(f"unit-ball max error {vol:.1e}")
    record(7, bool(ok), "; ".join(parts))


def test_criterion_8_determinism(tmp_path):
    spec = EXPERIMENTS / "linear_significance.json"
    small = tmp_path / "spec.json"
    import json

    d = json.loads(spec.read_text())
    d.update(trials=3, n=800, sweep={"param": "beta1", "values": [0.0, 0.5], "linked": ["beta2"]},
             directions=["X->Y", "Y->X"], order_policy={"mode": "auto-joint", "candidates": [1, 2, 3]})
    small.write_text(json.dumps(d))
    outputs = []
    for threads in ("1", "3", "1"):
        out = tmp_path / f"t{threads}_{len(outputs)}"
        env = dict(os.environ, DIKNN_THREADS=threads)
        subprocess.run([sys.executable, "-m", "diknn.cli", "experiment", str(small), "--out", str(out)], check=True, env=env, capture_output=True)
        outputs.append((out / "results.csv").read_bytes())
    same = all(o == outputs[0] for o in outputs)
    record(8, same, f"results.csv byte-identical across DIKNN_THREADS=1,3,1 reruns: {same} ({len(outputs[0])} bytes)")


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-v"]))
