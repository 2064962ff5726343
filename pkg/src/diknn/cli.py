"""``diknn`` command line.

Exit codes: 0 success, 2 usage or input format, 3 insufficient data,
4 numerical failure, 130 interrupted.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .di import DIRECTIONS, LOG2E, MAX_ORDER, estimate_di
from .errors import InsufficientDataError, NumericalError, UsageError
from .experiment import ExperimentSpec, run_experiment
from .generators import KINDS, GeneratorSpec
from .order import DEFAULT_CANDIDATES, estimate_order
from .series import read_csv, to_csv

EXIT_USAGE = 2
EXIT_DATA = 3
EXIT_NUMERIC = 4


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _candidates(text: str) -> tuple:
    text = text.strip()
    if not text:
        raise UsageError("candidate list is empty")
    out = set()
    for part in text.split(","):
        part = part.strip()
        if "-" in part:
            a, b = part.split("-", 1)
            out.update(range(int(a), int(b) + 1))
        elif part:
            out.add(int(part))
    if not out:
        raise UsageError("candidate list is empty")
    return tuple(sorted(out))


def _read(path: str):
    try:
        return read_csv(path)
    except OSError as e:
        raise UsageError(f"cannot read {path}: {e.strerror}") from None


def cmd_estimate(args) -> int:
    pair = _read(args.input)
    directions = DIRECTIONS if args.direction == "both" else (args.direction,)
    methods = ("KSG", "GOV") if args.method == "both" else (args.method.upper(),)
    out = []
    for direction in directions:
        if args.m == "auto":
            sel = estimate_order(pair if direction == "X->Y" else pair.reversed(), _candidates(args.candidates), args.k, args.order_method)
            m = sel.m_hat
        else:
            try:
                m = int(args.m)
            except ValueError:
                raise UsageError(f"--m must be an integer or 'auto', got {args.m!r}") from None
        for method in methods:
            out.append(estimate_di(pair, method, m, args.k, direction).to_dict(args.units))
    json.dump(out if len(out) > 1 else out[0], sys.stdout, indent=2)
    sys.stdout.write("\n")
    return 0


def cmd_order(args) -> int:
    pair = _read(args.input)
    if args.direction == "Y->X":
        pair = pair.reversed()
    sel = estimate_order(pair, _candidates(args.candidates), args.k, args.method, args.weighted)
    json.dump(sel.to_dict(), sys.stdout, indent=2)
    sys.stdout.write("\n")
    return 0


def cmd_experiment(args) -> int:
    spec = ExperimentSpec.load(args.spec)
    out = args.out or spec.output_dir
    rows = run_experiment(spec, out, args.workers)
    print(f"wrote {len(rows)} rows to {Path(out) / 'results.csv'}", file=sys.stderr)
    return 0


def cmd_generate(args) -> int:
    kind = args.kind or args.kind_pos
    if kind is None:
        raise UsageError("generator kind required")
    if kind in ("linear", "quadratic"):
        params = {"beta1": args.beta1, "beta2": args.beta2}
    elif kind == "henon":
        params = {"beta": args.beta, "gamma": args.gamma}
    else:
        params = {"beta": args.beta}
    pair = GeneratorSpec(kind, params, args.n, args.seed, args.burn_in).generate()
    text = to_csv(pair)
    if args.output:
        Path(args.output).write_text(text, encoding="utf-8", newline="")
    else:
        sys.stdout.write(text)
    return 0


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="diknn", description="k-NN directed information estimation")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    e = sub.add_parser("estimate", help="estimate DI from a two-column CSV")
    e.add_argument("input")
    e.add_argument("--method", choices=("KSG", "GOV", "ksg", "gov", "both"), default="KSG")
    e.add_argument("--m", default="2", help=f"Markov order in [1, {MAX_ORDER}] or 'auto'")
    e.add_argument("--k", type=int, default=8)
    e.add_argument("--direction", choices=DIRECTIONS + ("both",), default="both")
    e.add_argument("--units", choices=("nats", "bits"), default="nats")
    e.add_argument("--candidates", default=",".join(map(str, DEFAULT_CANDIDATES)), help="orders tried with --m auto")
    e.add_argument("--order-method", choices=("joint", "ragwitz"), default="joint")
    e.set_defaults(func=cmd_estimate)

    o = sub.add_parser("order", help="select the Markov order by k-NN prediction")
    o.add_argument("input")
    o.add_argument("--candidates", default=",".join(map(str, DEFAULT_CANDIDATES)), help="e.g. 1,2,3 or 1-5")
    o.add_argument("--k", type=int, default=8)
    o.add_argument("--method", choices=("joint", "ragwitz"), default="joint")
    o.add_argument("--direction", choices=DIRECTIONS, default="X->Y")
    o.add_argument("--weighted", action="store_true", help="inverse-distance weighting of neighbor responses")
    o.set_defaults(func=cmd_order)

    x = sub.add_parser("experiment", help="run a sweep experiment from a JSON spec")
    x.add_argument("spec")
    x.add_argument("--out", help="output directory (overrides the spec)")
    x.add_argument("--workers", type=int, help="worker processes (default: DIKNN_THREADS or CPU count)")
    x.set_defaults(func=cmd_experiment)

    g = sub.add_parser("generate", help="write a synthetic series pair as CSV")
    g.add_argument("kind_pos", nargs="?", choices=KINDS, metavar="kind")
    g.add_argument("--kind", choices=KINDS)
    g.add_argument("--beta1", type=float, default=0.0)
    g.add_argument("--beta2", type=float, default=0.0)
    g.add_argument("--beta", type=float, default=0.0)
    g.add_argument("--gamma", type=float, default=0.0)
    g.add_argument("--n", type=int, default=3000)
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--burn-in", type=int, default=None)
    g.add_argument("--output", "-o")
    g.set_defaults(func=cmd_generate)
    return p


def main(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
        return args.func(args)
    except UsageError as e:
        print(f"diknn: error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except InsufficientDataError as e:
        print(f"diknn: insufficient data: {e}", file=sys.stderr)
        return EXIT_DATA
    except NumericalError as e:
        print(f"diknn: numerical failure: {e}", file=sys.stderr)
        return EXIT_NUMERIC
    except KeyboardInterrupt:
        print("diknn: interrupted", file=sys.stderr)
        return 130


if __name__ == "__main__":
    sys.exit(main())
