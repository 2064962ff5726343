"""Run one or more experiment specs and print the summary table.

    python scripts/run_experiment.py experiments/linear_sweep.json [more.json ...]

Outputs go to each spec's ``output_dir`` (relative to the current directory)
unless ``--out`` is given. Linear-model sweeps also print the closed-form
rate next to the estimates.
"""

import argparse
import sys
import time
from pathlib import Path

from diknn.di import di_rate_linear_theory
from diknn.experiment import ExperimentSpec, run_experiment, summarize


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("specs", nargs="+")
    ap.add_argument("--out", help="output root; each spec writes to <out>/<spec name>")
    ap.add_argument("--workers", type=int)
    args = ap.parse_args(argv)

    for path in args.specs:
        spec = ExperimentSpec.load(path)
        out = Path(args.out) / Path(path).stem if args.out else Path(spec.output_dir)
        t0 = time.time()
        rows = run_experiment(spec, out, args.workers)
        print(f"# {spec.name}  ({len(rows)} rows, {time.time() - t0:.0f} s, {out})")
        linear = spec.generator.kind == "linear" and set(spec.linked) | {spec.sweep_param} >= {"beta1", "beta2"}
        head = f"{spec.sweep_param:>8} {'method':>6} {'dir':>5} {'mean bits':>10} {'std bits':>9}"
        print(head + (f" {'theory':>8}" if linear else "") + f" {'sig rate':>8}")
        for s in summarize(rows):
            line = f"{s['sweep_value']:>8.2f} {s['method']:>6} {s['direction']:>5} {s['mean_bits']:>10.4f} {s['std_bits']:>9.4f}"
            if linear:
                th = di_rate_linear_theory(s["sweep_value"], s["sweep_value"]) if s["direction"] == "X->Y" else 0.0
                line += f" {th:>8.4f}"
            rate = s["significant_rate"]
            line += f" {'' if rate is None else f'{rate:.2f}':>8}"
            print(line)
        print()
    return 0


if __name__ == "__main__":
    sys.exit(main())
