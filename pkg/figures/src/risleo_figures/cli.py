"""Command-line entry point: figures --kind --in --out.

Exit codes mirror the simulator CLI: 0 success, 2 I/O failure, 3 invalid
input.
"""

from __future__ import annotations

import argparse
import sys

from .render import KINDS, FigureSpec, FigureValidationError, render


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="figures",
        description="Render a simulator results.csv into a static SVG chart.",
    )
    parser.add_argument("--kind", required=True, choices=KINDS, help="figure type")
    parser.add_argument(
        "--in",
        required=True,
        nargs="+",
        dest="inputs",
        metavar="CSV",
        help="input results.csv file(s); several files are overlaid",
    )
    parser.add_argument("--out", required=True, help="output SVG path")
    parser.add_argument("--x-min", type=float, default=None)
    parser.add_argument("--x-max", type=float, default=None)
    parser.add_argument("--y-min", type=float, default=None)
    parser.add_argument("--y-max", type=float, default=None)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    spec = FigureSpec(
        inputs=tuple(args.inputs),
        kind=args.kind,
        output=args.out,
        x_min=args.x_min,
        x_max=args.x_max,
        y_min=args.y_min,
        y_max=args.y_max,
    )
    try:
        out = render(spec)
    except FigureValidationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    print(out)
    return 0


if __name__ == "__main__":
    sys.exit(main())
