"""Command line front end: one subcommand per figure kind.

Reads only the simulator CLI's documented file formats and writes one
image per invocation (SVG by default, PNG with --raster).
"""

import argparse
import sys
from pathlib import Path
from typing import Optional, Tuple

from . import __version__
from .figures import FigureSpec, render
from .io import SchemaError

EXIT_OK = 0
EXIT_INPUT = 2


def _parse_window(text: Optional[str]) -> Optional[Tuple[float, float]]:
    if text is None:
        return None
    try:
        lo, hi = text.split(":")
        return float(lo), float(hi)
    except ValueError:
        raise SchemaError(f"window must be LO:HI in seconds, got {text!r}") from None


def _add_common(sub) -> None:
    sub.add_argument("--input", required=True, help="input table path")
    sub.add_argument("--out", required=True, help="output image path")
    sub.add_argument("--raster", action="store_true", help="write PNG instead of SVG")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="platoonplots",
        description="Render figures from platoonsim output tables",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    subs = parser.add_subparsers(dest="command", required=True)

    hw = subs.add_parser("headways", help="headway vs. time for selected vehicles")
    _add_common(hw)
    hw.add_argument("--stride", type=int, default=6, help="select every stride-th vehicle")
    hw.add_argument("--window", default=None, help="time window LO:HI (s)")
    hw.add_argument("--summary", default=None, help="bundle summary YAML (default: sibling)")
    hw.set_defaults(kind="headways")

    env = subs.add_parser("envelope", help="min/max speed vs. time")
    _add_common(env)
    env.add_argument("--summary", default=None, help="bundle summary YAML (default: sibling)")
    env.set_defaults(kind="envelope")

    nl = subs.add_parser("neutral-lines", help="critical sensitivity curves a*(h)")
    _add_common(nl)
    nl.set_defaults(kind="neutral_lines")

    ovf = subs.add_parser("ov-function", help="OV curve and fundamental diagram")
    _add_common(ovf)
    ovf.set_defaults(kind="ov_function")

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        spec = FigureSpec(
            kind=args.kind,
            input_path=Path(args.input),
            output_path=Path(args.out),
            window=_parse_window(getattr(args, "window", None)),
            stride=getattr(args, "stride", 6),
            summary_path=Path(args.summary) if getattr(args, "summary", None) else None,
            raster=args.raster,
        )
        out = render(spec)
    except (SchemaError, ValueError, OSError) as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    print(f"wrote {out}")
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
