#!/usr/bin/env python3
"""Draw the steering and entanglement measures along a one-parameter sweep.

Reads one CSV written by the simulator's ``sweep`` command and plots the
three measures against whichever operating parameter varies, one curve
each, legend labels exactly G^{c1->c2}, G^{c2->c1} and E2.  Flagged rows
(status other than ok) carry nan measures and appear as gaps in the
curves rather than being silently dropped.  An empty but well-formed file
yields empty axes and success.

Styling is a free choice and defaults to matplotlib's standard color
cycle over a light grid.  Both PNG and SVG are written next to each
other.  Exit codes: 0 success, 2 unusable input.
"""

from __future__ import annotations

import argparse
import math
import sys

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
from matplotlib.figure import Figure

from csvdata import (
    AXIS_LABELS,
    PARAM_COLUMNS,
    STATUS_OK,
    SchemaMismatch,
    column,
    read_records,
    varied_params,
)

#: (column, legend label) for the curves, in draw order.
CURVES = (
    ("G_12", "G^{c1->c2}"),
    ("G_21", "G^{c2->c1}"),
    ("E2", "E2"),
)


def build_figure(
    rows: list[dict[str, str]], x_column: str, title: str | None = None
) -> Figure:
    """One axes with a curve per measure against ``x_column``."""
    fig, ax = plt.subplots(figsize=(6.0, 4.0))
    xs = column(rows, x_column)
    for name, label in CURVES:
        ys = [
            value if row["status"] == STATUS_OK else math.nan
            for value, row in zip(column(rows, name), rows)
        ]
        ax.plot(xs, ys, linewidth=1.6, label=label)
    ax.set_xlabel(AXIS_LABELS[x_column])
    ax.set_ylabel("G, E2")
    if title:
        ax.set_title(title)
    ax.grid(alpha=0.3, linewidth=0.5)
    ax.legend(frameon=False)
    fig.tight_layout()
    return fig


def save_both(fig: Figure, output: str) -> list[str]:
    """Write ``fig`` as PNG and SVG, returning the paths."""
    base = output
    for suffix in (".png", ".svg"):
        if base.endswith(suffix):
            base = base[: -len(suffix)]
    paths = [base + ".png", base + ".svg"]
    for path in paths:
        fig.savefig(path, dpi=160)
    return paths


def run(argv: list[str] | None = None) -> int:
    parser = argparse.ArgumentParser(
        description="Plot steering and entanglement measures from a sweep CSV."
    )
    parser.add_argument("input", help="sweep CSV written by the simulator")
    parser.add_argument(
        "-o", "--output", required=True,
        help="output path; a .png/.svg suffix is optional, both are written",
    )
    parser.add_argument(
        "--x", choices=PARAM_COLUMNS,
        help="x-axis parameter (default: the one column that varies)",
    )
    parser.add_argument("--title", help="figure title")
    args = parser.parse_args(argv)

    try:
        rows = read_records(args.input)
    except OSError as exc:
        print(f"plot_lines: cannot read {args.input}: {exc}", file=sys.stderr)
        return 2
    except SchemaMismatch as exc:
        print(f"plot_lines: {args.input}: {exc}", file=sys.stderr)
        return 2

    x_column = args.x
    if x_column is None:
        varied = varied_params(rows)
        if len(varied) > 1:
            print(
                "plot_lines: several parameters vary; pick one with --x",
                file=sys.stderr,
            )
            return 2
        # An empty or single-point file fixes no axis; the label is cosmetic.
        x_column = varied[0] if varied else PARAM_COLUMNS[-1]

    fig = build_figure(rows, x_column, args.title)
    for path in save_both(fig, args.output):
        print(path)
    plt.close(fig)
    return 0


if __name__ == "__main__":
    sys.exit(run())
