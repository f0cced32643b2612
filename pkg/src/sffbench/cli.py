"""Command line entry point: ``sffbench {generate,reconstruct,evaluate,bench,plot}``.

Exit status is 0 on success, 1 on runtime or data errors and 2 on usage
errors.
"""

import argparse
import logging
import os
import sys

import numpy as np

from . import __version__
from .bench import generate, load_stack, operator_manifest, reconstruct_to_dir, run_bench, \
    write_manifest
from .camera import TEXTURES, SimConfig
from .fileio import atomic_write, load_float_grid, load_pgm
from .focus import OPERATORS, OperatorConfig
from .metrics import METRIC_NAMES, evaluate_all, read_csv, reports_to_csv
from .svgplot import bar_chart_svg

OPERATOR_TOKENS = [k.value for k in OPERATORS]


def _odd_window(text):
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"invalid window {text!r}") from None
    if value < 1 or value % 2 == 0:
        raise argparse.ArgumentTypeError(f"window must be a positive odd integer, got {value}")
    return value


def _at_least(minimum):
    def parse(text):
        try:
            value = int(text)
        except ValueError:
            raise argparse.ArgumentTypeError(f"invalid integer {text!r}") from None
        if value < minimum:
            raise argparse.ArgumentTypeError(f"must be >= {minimum}, got {value}")
        return value
    return parse


def _non_negative(text):
    try:
        value = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"invalid number {text!r}") from None
    if not value >= 0:
        raise argparse.ArgumentTypeError(f"must be non-negative, got {text}")
    return value


def _load_image(path):
    if path.endswith(".sffd"):
        return load_float_grid(path)
    return load_pgm(path)


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--out", help="output directory (plot: output SVG file)")
    common.add_argument("--seed", type=int, default=0, help="RNG seed (default 0)")
    common.add_argument("-v", "--verbose", action="store_true")

    gen_flags = argparse.ArgumentParser(add_help=False)
    gen_flags.add_argument("--frames", type=_at_least(2), default=60)
    gen_flags.add_argument("--size", type=_at_least(16), default=302)
    gen_flags.add_argument("--texture", choices=TEXTURES, default="stripes")
    gen_flags.add_argument("--noise-sigma", type=_non_negative, default=0.0)

    op_flags = argparse.ArgumentParser(add_help=False)
    op_flags.add_argument("--window", type=_odd_window, default=7)
    op_flags.add_argument("--refine", action="store_true",
                          help="sub-frame parabolic refinement of the depth argmax")

    parser = argparse.ArgumentParser(prog="sffbench", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"sffbench {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    sub.add_parser("generate", parents=[common, gen_flags],
                   help="render the synthetic cone focus stack")

    rec = sub.add_parser("reconstruct", parents=[common, op_flags],
                         help="depth map and all-in-focus image for one operator")
    rec.add_argument("--stack", required=True, help="stack directory")
    rec.add_argument("--operator", required=True, choices=OPERATOR_TOKENS, type=str.lower)

    ev = sub.add_parser("evaluate", parents=[common],
                        help="quality metrics of a processed image against a reference")
    ev.add_argument("--processed", required=True)
    ev.add_argument("--reference", required=True)
    ev.add_argument("--method", default="processed")
    ev.add_argument("--no-header", action="store_true")

    bench = sub.add_parser("bench", parents=[common, gen_flags, op_flags],
                           help="run all eight operators and write metric tables and charts")
    bench.add_argument("--stack", help="use an existing stack directory instead of generating")

    plot = sub.add_parser("plot", parents=[common], help="SVG bar chart of one metric column")
    plot.add_argument("csv", help="metrics CSV written by bench or evaluate")
    plot.add_argument("--metric", required=True, choices=METRIC_NAMES)
    return parser


def _sim_config(args):
    return SimConfig(frames=args.frames, size=args.size, texture=args.texture,
                     noise_sigma=args.noise_sigma, seed=args.seed)


def run(args):
    if args.command == "generate":
        out = args.out or "stack"
        generate(out, _sim_config(args))
        print(out)
    elif args.command == "reconstruct":
        out = args.out or os.path.join(args.stack, args.operator)
        cfg = OperatorConfig(window=args.window, refine=args.refine)
        reconstruct_to_dir(load_stack(args.stack), args.operator, cfg, out)
        write_manifest(os.path.join(out, "manifest.txt"),
                       operator_manifest(args.operator, cfg, os.path.abspath(args.stack)))
        print(out)
    elif args.command == "evaluate":
        report = evaluate_all(_load_image(args.reference), _load_image(args.processed),
                              args.method)
        sys.stdout.write(reports_to_csv([report], header=not args.no_header))
    elif args.command == "bench":
        out = args.out or "bench"
        run_bench(out, _sim_config(args), op_config=OperatorConfig(window=args.window,
                                                                   refine=args.refine),
                  stack_dir=args.stack)
        print(out)
    elif args.command == "plot":
        with open(args.csv, encoding="ascii") as fh:
            reports = read_csv(fh.read())
        out = args.out or f"{os.path.splitext(args.csv)[0]}_{args.metric}.svg"
        atomic_write(out, bar_chart_svg(reports, args.metric).encode("utf-8"))
        print(out)
    return 0


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    np.seterr(all="ignore")
    try:
        return run(args)
    except (OSError, ValueError, ArithmeticError, IndexError) as exc:
        print(f"sffbench: error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
