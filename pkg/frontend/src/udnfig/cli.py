"""``render`` command line: one figure per invocation, stateless.

Exit status: 0 on success, 1 on schema or missing-series errors
(message on stderr, no image written), 2 on usage errors.
"""

from __future__ import annotations

import argparse
import sys

from .figspec import FIGURE_KINDS, FigureSpec
from .render import RenderError, render
from .schema import SchemaError


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="render",
        description="Render a simulator result CSV into one of the standard figures.",
    )
    parser.add_argument("--kind", required=True, choices=FIGURE_KINDS)
    parser.add_argument("--in", dest="in_csv", required=True, metavar="CSV")
    parser.add_argument("--out", dest="out_path", required=True, metavar="PNG")
    parser.add_argument(
        "--series-by",
        metavar="COL[,COL...]",
        help="override the default series-grouping columns",
    )
    parser.add_argument(
        "--expect",
        action="append",
        default=[],
        metavar="LABEL",
        help="legend label that must be present (repeatable); "
        "missing labels abort with a nonzero exit",
    )
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    series_columns = ()
    if args.series_by:
        series_columns = tuple(
            c.strip() for c in args.series_by.split(",") if c.strip()
        )
    spec = FigureSpec(
        kind=args.kind,
        in_csv=args.in_csv,
        out_path=args.out_path,
        series_columns=series_columns,
        expect_series=tuple(args.expect),
    )
    try:
        out = render(spec)
    except (SchemaError, RenderError) as exc:
        print(f"render: error: {exc}", file=sys.stderr)
        return 1
    print(f"wrote {out}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
