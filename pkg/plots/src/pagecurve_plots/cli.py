"""Command line: render publication-style figures from run directories.

    plots render-all <dir> --format png|pdf

``<dir>`` is either one run directory or the parent directory holding
several (the simulation CLI's ``--out``).  One image per run that carries
figure hints, named after the preset.
"""

from __future__ import annotations

import argparse
import sys

from .figures import render_all
from .reader import PlotsError


def main(argv: list[str] | None = None) -> int:
    parser = argparse.ArgumentParser(
        prog="plots", description="Render figures from pagecurve run outputs."
    )
    sub = parser.add_subparsers(dest="command", required=True)
    p = sub.add_parser("render-all", help="render every run found under a directory")
    p.add_argument("directory")
    p.add_argument("--format", choices=("png", "pdf"), default="png")
    args = parser.parse_args(argv)

    if args.command == "render-all":
        try:
            written = render_all(args.directory, fmt=args.format)
        except PlotsError as exc:
            print(f"error: {exc}", file=sys.stderr)
            return 1
        if not written:
            print("error: no figures rendered (no runs with figure hints)", file=sys.stderr)
            return 1
        return 0
    return 2  # pragma: no cover


if __name__ == "__main__":  # pragma: no cover
    raise SystemExit(main())
