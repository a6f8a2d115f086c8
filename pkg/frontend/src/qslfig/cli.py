"""Command-line entry point: render sweep CSVs into figure panels.

Usage:
    render --input PATH [--input PATH ...] --panel TYPE --out PATH [--format png|svg]

Output is byte-stable for fixed inputs: the Agg backend is forced, SVG
hash salts and document dates are pinned, and PNG metadata is stripped.
Exit codes: 0 success, 1 usage or input error, 2 schema error.
"""

from __future__ import annotations

import argparse
import os
import sys

import matplotlib

matplotlib.use("Agg")
matplotlib.rcParams["svg.hashsalt"] = "qslfig"

from .panels import PANELS, render_panel
from .reader import SchemaError, read_table

__all__ = ["main"]


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="render", description="Render qsdlab sweep CSVs into figure panels."
    )
    parser.add_argument(
        "--input",
        action="append",
        required=True,
        metavar="PATH",
        help="input CSV (repeat to overlay several tables on a line panel)",
    )
    parser.add_argument("--panel", required=True, choices=sorted(PANELS))
    parser.add_argument("--out", required=True, metavar="PATH")
    parser.add_argument("--format", choices=("png", "svg"), default=None)
    return parser


def _save(fig, out_path: str, fmt: str | None) -> None:
    if fmt is None:
        ext = os.path.splitext(out_path)[1].lstrip(".").lower()
        fmt = ext if ext in ("png", "svg") else "png"
    metadata = {"Date": None} if fmt == "svg" else {"Software": None}
    fig.savefig(out_path, format=fmt, dpi=150, metadata=metadata)


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 1 if exc.code else 0
    try:
        tables = [read_table(path) for path in args.input]
    except OSError as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return 1
    except SchemaError as exc:
        print(f"schema error: {exc}", file=sys.stderr)
        return 2
    try:
        fig = render_panel(tables, args.panel)
        _save(fig, args.out, args.format)
    except SchemaError as exc:
        print(f"schema error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"output error: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
