"""Command line: render figures from zrdelay output files.

    zrplots render --kind delay --in fig4_transmitted.csv --out fig4.png
    zrplots render --kind inset --in fig6_waves.csv --out fig6_inset.png
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from . import __version__
from .render import render_delay_figure, render_packet_inset
from .tables import SweepTable, TableError


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="zrplots", description="Render delay-sweep figures and packet insets.")
    parser.add_argument("--version", action="version", version=f"zrplots {__version__}")
    sub = parser.add_subparsers(dest="verb", required=True)
    render = sub.add_parser("render", help="render one figure")
    render.add_argument("--kind", choices=("delay", "inset"), required=True)
    render.add_argument("--in", dest="inputs", nargs="+", required=True,
                        help="input table(s); inset takes exactly one wave dump")
    render.add_argument("--out", required=True, help="output image path")
    return parser


def main(argv: list[str] | None = None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        if args.kind == "delay":
            tables = [SweepTable.load(p) for p in args.inputs]
            out = render_delay_figure(tables, args.out)
        else:
            if len(args.inputs) != 1:
                print("error: --kind inset takes exactly one wave-dump file",
                      file=sys.stderr)
                return 1
            out = render_packet_inset(Path(args.inputs[0]), args.out)
    except (TableError, FileNotFoundError, OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    print(f"wrote {out}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
