"""Sweep experiments: generate trials over a parameter grid, estimate DI, write CSV.

A spec is a JSON object::

    {
      "spec_version": 1,
      "generator": {"kind": "linear", "params": {"beta2": 0.0}},
      "sweep": {"param": "beta1", "values": [0.0, 0.5, 1.0], "linked": ["beta2"]},
      "trials": 48, "n": 3000, "k": 8,
      "methods": ["KSG", "GOV"],
      "directions": ["X->Y", "Y->X"],
      "order_policy": {"mode": "fixed", "m": 2},
      "significance": {"L": 19, "epsilon_p": 0.05},
      "base_seed": 0,
      "output_dir": "out/linear"
    }

Trial t at every grid point draws its data from ``rng.stream(base_seed, t, ...)``
so neighboring grid points share their random inputs (common random numbers).
Work is split into (grid point, trial) tasks; results are written in grid
then trial order whatever the worker count.
"""

from __future__ import annotations

import csv
import io
import json
import os
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from pathlib import Path

import numpy as np

from .di import DIRECTIONS, LOG2E, MAX_ORDER, METHODS, estimate_di
from .errors import UsageError
from .generators import KINDS, GeneratorSpec
from .order import DEFAULT_CANDIDATES, OrderSelection, estimate_order
from .significance import SURROGATES, min_surrogates, significance_test
from .svg import line_chart

SPEC_VERSION = 1
RESULT_COLUMNS = ("sweep_value", "trial", "method", "direction", "di_nats", "di_bits", "m_used", "p_value", "significant", "runtime_ms")
SUMMARY_COLUMNS = ("sweep_value", "method", "direction", "trials", "mean_nats", "std_nats", "mean_bits", "std_bits", "significant_rate")
ORDER_MODES = ("fixed", "auto-joint", "auto-ragwitz")


def _reject_unknown(d: dict, allowed, where: str) -> None:
    if not isinstance(d, dict):
        raise UsageError(f"{where}: expected an object")
    extra = sorted(set(d) - set(allowed))
    if extra:
        raise UsageError(f"{where}: unknown field(s) {extra}")


@dataclass(frozen=True)
class OrderPolicy:
    mode: str = "fixed"
    m: int | None = 2
    candidates: tuple = DEFAULT_CANDIDATES

    def __post_init__(self):
        if self.mode not in ORDER_MODES:
            raise UsageError(f"order_policy.mode must be one of {ORDER_MODES}, got {self.mode!r}")
        if self.mode == "fixed":
            if self.m is None or not 1 <= int(self.m) <= MAX_ORDER:
                raise UsageError(f"fixed order m must be in [1, {MAX_ORDER}], got {self.m}")
        elif not self.candidates or min(self.candidates) < 1 or max(self.candidates) > MAX_ORDER:
            raise UsageError(f"order candidates must be non-empty and within [1, {MAX_ORDER}]")

    def select(self, pair, k: int) -> OrderSelection:
        if self.mode == "fixed":
            return OrderSelection(int(self.m), {}, "fixed")
        return estimate_order(pair, self.candidates, k, self.mode.split("-")[1])


@dataclass(frozen=True)
class SignificancePolicy:
    L: int = 19
    epsilon_p: float = 0.05
    surrogate: str = "permutation"

    def __post_init__(self):
        if self.surrogate not in SURROGATES:
            raise UsageError(f"significance.surrogate must be one of {SURROGATES}")
        if self.L < min_surrogates(self.epsilon_p):
            raise UsageError(f"significance.L={self.L} too small for epsilon_p={self.epsilon_p}")


@dataclass(frozen=True)
class ExperimentSpec:
    generator: GeneratorSpec
    sweep_param: str
    sweep_values: tuple
    linked: tuple = ()
    trials: int = 48
    k: int = 8
    methods: tuple = METHODS
    directions: tuple = DIRECTIONS
    order: OrderPolicy = field(default_factory=OrderPolicy)
    significance: SignificancePolicy | None = None
    base_seed: int = 0
    output_dir: str = "results"
    plot: bool = True
    record_runtime: bool = False
    name: str = "experiment"

    def __post_init__(self):
        if self.trials < 1:
            raise UsageError(f"trials must be >= 1, got {self.trials}")
        if not self.sweep_values:
            raise UsageError("sweep.values must be non-empty")
        if self.k < 1:
            raise UsageError(f"k must be >= 1, got {self.k}")
        if self.base_seed < 0:
            raise UsageError("base_seed must be non-negative")
        for mth in self.methods:
            if mth not in METHODS:
                raise UsageError(f"unknown method {mth!r}; use {METHODS}")
        for d in self.directions:
            if d not in DIRECTIONS:
                raise UsageError(f"unknown direction {d!r}; use {DIRECTIONS}")
        if not self.methods or not self.directions:
            raise UsageError("methods and directions must be non-empty")
        # validates parameter names against the generator kind
        self.point(self.sweep_values[0])

    def point(self, value: float) -> GeneratorSpec:
        g = self.generator.with_param(self.sweep_param, float(value))
        for name in self.linked:
            g = g.with_param(name, float(value))
        return g

    @classmethod
    def from_dict(cls, d: dict) -> "ExperimentSpec":
        _reject_unknown(
            d,
            (
                "spec_version", "name", "generator", "sweep", "trials", "n", "k", "methods", "directions",
                "order_policy", "significance", "base_seed", "output_dir", "plot", "record_runtime",
            ),
            "spec",
        )
        if d.get("spec_version") != SPEC_VERSION:
            raise UsageError(f"spec_version must be {SPEC_VERSION}, got {d.get('spec_version')!r}")
        try:
            g = d["generator"]
            sw = d["sweep"]
        except KeyError as e:
            raise UsageError(f"spec: missing required field {e.args[0]!r}") from None
        _reject_unknown(g, ("kind", "params", "burn_in"), "generator")
        _reject_unknown(sw, ("param", "values", "linked"), "sweep")
        if g.get("kind") not in KINDS:
            raise UsageError(f"generator.kind must be one of {KINDS}")
        gen = GeneratorSpec(
            g["kind"],
            dict(g.get("params", {})),
            int(d.get("n", 3000)),
            int(d.get("base_seed", 0)),
            g.get("burn_in"),
        )
        op = d.get("order_policy", {"mode": "fixed", "m": 2})
        _reject_unknown(op, ("mode", "m", "candidates"), "order_policy")
        order = OrderPolicy(op.get("mode", "fixed"), op.get("m"), tuple(op.get("candidates", DEFAULT_CANDIDATES)))
        sig = d.get("significance")
        if sig in (None, "off", False):
            sig_policy = None
        else:
            _reject_unknown(sig, ("L", "epsilon_p", "surrogate"), "significance")
            sig_policy = SignificancePolicy(int(sig.get("L", 19)), float(sig.get("epsilon_p", 0.05)), sig.get("surrogate", "permutation"))
        if "param" not in sw or "values" not in sw:
            raise UsageError("sweep needs 'param' and 'values'")
        return cls(
            generator=gen,
            sweep_param=sw["param"],
            sweep_values=tuple(float(v) for v in sw["values"]),
            linked=tuple(sw.get("linked", ())),
            trials=int(d.get("trials", 48)),
            k=int(d.get("k", 8)),
            methods=tuple(m.upper() for m in d.get("methods", METHODS)),
            directions=tuple(d.get("directions", DIRECTIONS)),
            order=order,
            significance=sig_policy,
            base_seed=int(d.get("base_seed", 0)),
            output_dir=str(d.get("output_dir", "results")),
            plot=bool(d.get("plot", True)),
            record_runtime=bool(d.get("record_runtime", False)),
            name=str(d.get("name", "experiment")),
        )

    @classmethod
    def load(cls, path: str | Path) -> "ExperimentSpec":
        try:
            d = json.loads(Path(path).read_text(encoding="utf-8"))
        except json.JSONDecodeError as e:
            raise UsageError(f"{path}: invalid JSON ({e})") from None
        return cls.from_dict(d)


@dataclass(frozen=True)
class ResultRow:
    sweep_value: float
    trial: int
    method: str
    direction: str
    di_nats: float
    di_bits: float
    m_used: int
    p_value: float | None = None
    significant: bool | None = None
    runtime_ms: float | None = None

    def cells(self) -> list[str]:
        def num(v):
            return "" if v is None else repr(float(v))

        sig = "" if self.significant is None else ("true" if self.significant else "false")
        return [
            repr(float(self.sweep_value)), str(self.trial), self.method, self.direction,
            num(self.di_nats), num(self.di_bits), str(self.m_used), num(self.p_value), sig, num(self.runtime_ms),
        ]


def run_task(spec: ExperimentSpec, grid_index: int, trial: int) -> list[ResultRow]:
    """All rows for one (grid point, trial): methods x directions."""
    value = spec.sweep_values[grid_index]
    pair = spec.point(value).generate(key=(trial,))
    rows = []
    for d_index, direction in enumerate(DIRECTIONS):
        if direction not in spec.directions:
            continue
        m = spec.order.select(pair if direction == "X->Y" else pair.reversed(), spec.k).m_hat
        for method in spec.methods:
            t0 = time.perf_counter()
            est = estimate_di(pair, method, m, spec.k, direction)
            p = sig = None
            if spec.significance is not None:
                s = spec.significance
                rep = significance_test(
                    pair, method, m, spec.k, s.L, s.epsilon_p, spec.base_seed, direction, s.surrogate,
                    key=(trial, 1, d_index), observed=est.value,
                )
                p, sig = rep.p_value, rep.significant
            ms = (time.perf_counter() - t0) * 1e3 if spec.record_runtime else None
            rows.append(ResultRow(value, trial, method, direction, est.value, est.value * LOG2E, m, p, sig, ms))
    return rows


def _run_task_args(args):
    return run_task(*args)


def worker_count() -> int:
    env = os.environ.get("DIKNN_THREADS")
    if env:
        try:
            n = int(env)
        except ValueError:
            raise UsageError(f"DIKNN_THREADS must be a positive integer, got {env!r}") from None
        if n < 1:
            raise UsageError(f"DIKNN_THREADS must be a positive integer, got {env!r}")
        return n
    return os.cpu_count() or 1


def iter_results(spec: ExperimentSpec, workers: int | None = None):
    """Yield row lists task by task in (grid, trial) order."""
    tasks = [(spec, g, t) for g in range(len(spec.sweep_values)) for t in range(spec.trials)]
    workers = worker_count() if workers is None else workers
    if workers <= 1 or len(tasks) == 1:
        for task in tasks:
            yield run_task(*task)
        return
    with ProcessPoolExecutor(max_workers=min(workers, len(tasks))) as pool:
        # map preserves submission order, which fixes the write order
        yield from pool.map(_run_task_args, tasks)


def summarize(rows) -> list[dict]:
    groups: dict = {}
    for r in rows:
        groups.setdefault((r.sweep_value, r.method, r.direction), []).append(r)
    out = []
    for (value, method, direction), rs in groups.items():
        v = np.array([r.di_nats for r in rs])
        std = float(np.std(v, ddof=1)) if v.size > 1 else 0.0
        sig = [r.significant for r in rs if r.significant is not None]
        out.append({
            "sweep_value": value, "method": method, "direction": direction, "trials": v.size,
            "mean_nats": float(v.mean()), "std_nats": std,
            "mean_bits": float(v.mean()) * LOG2E, "std_bits": std * LOG2E,
            "significant_rate": (sum(sig) / len(sig)) if sig else None,
        })
    return out


def summary_csv(summary: list[dict]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(SUMMARY_COLUMNS)
    for s in summary:
        w.writerow(["" if s[c] is None else (repr(float(s[c])) if isinstance(s[c], float) else str(s[c])) for c in SUMMARY_COLUMNS])
    return buf.getvalue()


def summary_svg(spec: ExperimentSpec, summary: list[dict]) -> str:
    series: dict = {}
    for s in summary:
        label = f"{s['method']} {s['direction']}"
        xs, ms, ss = series.setdefault(label, ([], [], []))
        xs.append(s["sweep_value"])
        ms.append(s["mean_bits"])
        ss.append(s["std_bits"])
    return line_chart(series, title=spec.name, xlabel=spec.sweep_param, ylabel="DI estimate (bits)")


def run_experiment(spec: ExperimentSpec, output_dir: str | Path | None = None, workers: int | None = None) -> list[ResultRow]:
    """Run the sweep, writing ``results.csv``, ``summary.csv`` and ``summary.svg``.

    Results are flushed task by task, so an interrupted run leaves every
    completed row on disk.
    """
    out = Path(output_dir if output_dir is not None else spec.output_dir)
    out.mkdir(parents=True, exist_ok=True)
    rows: list[ResultRow] = []
    with open(out / "results.csv", "w", encoding="utf-8", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(RESULT_COLUMNS)
        for task_rows in iter_results(spec, workers):
            for r in task_rows:
                w.writerow(r.cells())
            fh.flush()
            rows.extend(task_rows)
    summary = summarize(rows)
    (out / "summary.csv").write_text(summary_csv(summary), encoding="utf-8", newline="")
    if spec.plot:
        (out / "summary.svg").write_text(summary_svg(spec, summary), encoding="utf-8", newline="")
    return rows


def read_results(path: str | Path) -> list[ResultRow]:
    """Parse a results CSV written by :func:`run_experiment`."""

    def opt(s, f):
        return None if s == "" else f(s)

    rows = []
    with open(path, encoding="utf-8", newline="") as fh:
        for rec in csv.DictReader(fh):
            rows.append(ResultRow(
                float(rec["sweep_value"]), int(rec["trial"]), rec["method"], rec["direction"],
                float(rec["di_nats"]), float(rec["di_bits"]), int(rec["m_used"]),
                opt(rec["p_value"], float), opt(rec["significant"], lambda s: s == "true"), opt(rec["runtime_ms"], float),
            ))
    return rows


def spec_to_dict(spec: ExperimentSpec) -> dict:
    """Inverse of :meth:`ExperimentSpec.from_dict`."""
    g = spec.generator
    return {
        "spec_version": SPEC_VERSION,
        "name": spec.name,
        "generator": {"kind": g.kind, "params": dict(g.params), "burn_in": g.burn_in},
        "sweep": {"param": spec.sweep_param, "values": list(spec.sweep_values), "linked": list(spec.linked)},
        "trials": spec.trials,
        "n": g.n,
        "k": spec.k,
        "methods": list(spec.methods),
        "directions": list(spec.directions),
        "order_policy": {"mode": spec.order.mode, "m": spec.order.m, "candidates": list(spec.order.candidates)},
        "significance": None if spec.significance is None else asdict(spec.significance),
        "base_seed": spec.base_seed,
        "output_dir": spec.output_dir,
        "plot": spec.plot,
        "record_runtime": spec.record_runtime,
    }
