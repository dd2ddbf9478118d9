"""Command-line front end.

Exit codes: 0 for a stable / equivalent outcome, 2 for an indeterminate or
non-equivalent one, 1 for bad input.
"""

import argparse
import csv
import io
import json
import sys

import numpy as np

from .averaging import NonpositiveAlpha, average
from .funcmodel import FunctionModel, abs_model
from .measure import DiscreteMeasure, arithmetic_measure, make_measure
from .stability import analyze_global, stability_numbers, sweep_verify

EXIT_OK, EXIT_INPUT, EXIT_NEGATIVE = 0, 1, 2


class InputError(Exception):
    pass


def _load_json(path, what):
    try:
        with open(path) as fh:
            return json.load(fh)
    except FileNotFoundError:
        raise InputError(f"{what}: file not found: {path}")
    except json.JSONDecodeError as e:
        raise InputError(f"{what}: {path} is not valid JSON ({e})")


def load_model(path):
    try:
        return FunctionModel.from_dict(_load_json(path, "model"))
    except ValueError as e:
        raise InputError(f"model {path}: {e}")


def load_measure(path):
    try:
        return DiscreteMeasure.from_dict(_load_json(path, "measure"))
    except ValueError as e:
        raise InputError(f"measure {path}: {e}")


def parse_alphas(text):
    try:
        alphas = [float(a) for a in text.split(",") if a.strip()]
    except ValueError:
        raise InputError(f"--alpha: cannot parse {text!r}")
    if not alphas:
        raise InputError("--alpha: empty list")
    if any(not a > 0 for a in alphas):
        raise InputError("--alpha: values must be positive")
    return alphas


def _emit(text, out):
    if out:
        with open(out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _dump(obj):
    return json.dumps(obj, indent=2, sort_keys=True) + "\n"


def cmd_analyze(args):
    model = load_model(args.model)
    mu = load_measure(args.measure)
    report = analyze_global(model, mu)
    _emit(_dump(report.to_dict()), args.out)
    return EXIT_OK if report.verdict == "stable" else EXIT_NEGATIVE


def cmd_average(args):
    model = load_model(args.model)
    mu = load_measure(args.measure)
    alphas = parse_alphas(args.alpha)
    if len(alphas) != 1:
        raise InputError("--alpha: average takes a single value")
    lo, hi = args.window
    if not lo < hi:
        raise InputError("--window: need LO < HI")
    if args.n < 2:
        raise InputError("--n: need at least 2 points")
    try:
        mix = average(model, mu, alphas[0])
    except NonpositiveAlpha as e:
        raise InputError(str(e))
    xs = np.linspace(lo, hi, args.n)
    fs = np.asarray(model.evaluate(xs))
    gs = np.asarray(mix.evaluate(xs))
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["x", "f", "f_alpha"])
    for row in zip(xs, fs, gs):
        w.writerow([f"{v:.17g}" for v in row])
    _emit(buf.getvalue(), args.out)
    return EXIT_OK


def cmd_sweep(args):
    model = load_model(args.model)
    mu = load_measure(args.measure)
    alphas = parse_alphas(args.alpha)
    if any(a1 >= a0 for a0, a1 in zip(alphas, alphas[1:])):
        raise InputError("--alpha: sweep values must be strictly decreasing")
    if args.resolution < 64:
        raise InputError("--resolution: must be at least 64")
    report = sweep_verify(model, mu, alphas, resolution=args.resolution)
    _emit(_dump(report.to_dict()), args.out)
    return EXIT_OK if report.all_equivalent else EXIT_NEGATIVE


def cmd_demo(args):
    f = abs_model()
    lines = ["f(x) = |x|, minimum at 0 with L = -1, R = +1", ""]
    cases = [
        ("arithmetic mean, weights 0.5/0.5 at -1/+1", arithmetic_measure()),
        ("weighted mean, weights 0.3/0.7 at -1/+1", make_measure([(-1.0, 0.3), (1.0, 0.7)])),
    ]
    for label, mu in cases:
        X = stability_numbers(-1.0, 1.0, mu)
        report = analyze_global(f, mu)
        sweep = sweep_verify(f, mu, [0.5, 0.1, 0.01])
        lines.append(label)
        lines.append(f"  X_1 = {X[0]:.15g}")
        lines.append(f"  germ condition: {report.germ_reports[0].condition}")
        lines.append(f"  verdict: {report.verdict}")
        for r in sweep.records:
            lines.append(f"  alpha={r.alpha:g}: equivalent={r.snake_equivalent} ({r.reason})")
        lines.append("")
    _emit("\n".join(lines), args.out)
    return EXIT_OK


def build_parser():
    parser = argparse.ArgumentParser(prog="snakestab", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--model", required=True, metavar="PATH")
        p.add_argument("--measure", required=True, metavar="PATH")
        p.add_argument("--out", metavar="PATH")

    p = sub.add_parser("analyze", help="stability report for every extremum")
    common(p)
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("average", help="CSV samples of f and its averaging")
    common(p)
    p.add_argument("--alpha", required=True)
    p.add_argument("--window", nargs=2, type=float, required=True, metavar=("LO", "HI"))
    p.add_argument("--n", type=int, default=401, metavar="COUNT")
    p.set_defaults(func=cmd_average)

    p = sub.add_parser("sweep", help="compare f with its averagings over several alphas")
    common(p)
    p.add_argument("--alpha", required=True, help="comma-separated, decreasing")
    p.add_argument("--resolution", type=int, default=256, metavar="COUNT")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("demo", help="|x| under the arithmetic and a weighted mean")
    p.add_argument("--out", metavar="PATH")
    p.set_defaults(func=cmd_demo)
    return parser


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_INPUT if e.code else EXIT_OK
    try:
        return args.func(args)
    except InputError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
