"""Shared argparse main for the per-figure scripts."""

from __future__ import annotations

import argparse
import sys

from .io import ColumnError
from .render import FigureSpec, render


def run(figure_id: str, description: str, n_inputs: str, argv=None) -> int:
    parser = argparse.ArgumentParser(description=description)
    parser.add_argument(
        "--in", dest="inputs", action="append", required=True,
        help=f"input table(s): {n_inputs}",
    )
    parser.add_argument("--out", required=True, help="output image basename")
    parser.add_argument(
        "--log-axes", action="store_true", default=None,
        help="force logarithmic axes where the panel supports them",
    )
    args = parser.parse_args(argv)
    spec = FigureSpec(
        figure_id=figure_id,
        input_paths=args.inputs,
        output_image_path=args.out,
        log_axes=args.log_axes,
    )
    try:
        written = render(spec)
    except (ColumnError, FileNotFoundError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    for path in written:
        print(path)
    return 0
