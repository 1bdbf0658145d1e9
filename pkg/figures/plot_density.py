#!/usr/bin/env python3
"""Render the entanglement-over-steering margin across a parameter grid.

Reads one row-major grid CSV written by the simulator's ``grid`` command
and draws the E2_minus_Gmax column as a heatmap with a colorbar.  Cells
the simulator flagged (status other than ok) are left blank.  The grid
must be rectangular: every grid row repeats the same x values and keeps
its y value constant; anything else is rejected.  An empty but
well-formed file yields empty axes and success.

The color map is a free choice and defaults to viridis.  Both PNG and
SVG are written next to each other.  Exit codes: 0 success, 2 unusable
input.
"""

from __future__ import annotations

import argparse
import sys

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np
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


class NonRectangularGrid(ValueError):
    """The rows do not tile a rectangular row-major grid."""


def resolve_axes(rows: list[dict[str, str]]) -> tuple[str, str]:
    """(x column, y column) inferred from which parameters vary.

    The inner, fastest-varying parameter becomes x.  A file where only one
    parameter varies is drawn as a single strip, and a single cell fixes
    no axes at all; the remaining labels are then a cosmetic default.
    """
    varied = varied_params(rows)
    if len(varied) > 2:
        raise NonRectangularGrid("all three operating parameters vary")
    x_column = None
    if varied:
        changes_first = [
            name for name in varied if rows[0][name] != rows[1][name]
        ]
        x_column = changes_first[0] if changes_first else varied[0]
    y_candidates = [name for name in varied if name != x_column]
    if x_column is None:
        x_column = "kappa_kHz"
    if y_candidates:
        y_column = y_candidates[0]
    else:
        y_column = next(n for n in PARAM_COLUMNS if n != x_column)
    return x_column, y_column


def grid_shape(
    rows: list[dict[str, str]], x_column: str, y_column: str
) -> tuple[int, int]:
    """(width, height) of the row-major grid, validating rectangularity."""
    y_raw = [row[y_column] for row in rows]
    width = len(rows)
    for i, value in enumerate(y_raw):
        if value != y_raw[0]:
            width = i
            break
    if len(rows) % width != 0:
        raise NonRectangularGrid(
            f"{len(rows)} records do not tile grid rows of width {width}"
        )
    height = len(rows) // width
    x_first = [row[x_column] for row in rows[:width]]
    for j in range(height):
        block = rows[j * width:(j + 1) * width]
        if [row[x_column] for row in block] != x_first:
            raise NonRectangularGrid(f"grid row {j} repeats different x values")
        if any(row[y_column] != block[0][y_column] for row in block):
            raise NonRectangularGrid(f"y value changes inside grid row {j}")
    return width, height


def cell_edges(centers: list[float]) -> list[float]:
    """Cell boundaries around ``centers`` for pcolormesh."""
    if len(centers) == 1:
        half = max(0.5, 0.05 * abs(centers[0]))
        return [centers[0] - half, centers[0] + half]
    edges = [centers[0] - 0.5 * (centers[1] - centers[0])]
    for a, b in zip(centers, centers[1:]):
        edges.append(0.5 * (a + b))
    edges.append(centers[-1] + 0.5 * (centers[-1] - centers[-2]))
    return edges


def build_figure(
    rows: list[dict[str, str]],
    x_column: str,
    y_column: str,
    title: str | None = None,
) -> Figure:
    """Heatmap of E2_minus_Gmax over the (x, y) parameter grid."""
    fig, ax = plt.subplots(figsize=(6.4, 4.8))
    if rows:
        width, height = grid_shape(rows, x_column, y_column)
        xs = [float(row[x_column]) for row in rows[:width]]
        ys = [float(rows[j * width][y_column]) for j in range(height)]
        values = np.reshape(column(rows, "E2_minus_Gmax"), (height, width))
        flagged = np.reshape(
            [row["status"] != STATUS_OK for row in rows], (height, width)
        )
        data = np.ma.masked_invalid(np.ma.masked_where(flagged, values))
        mesh = ax.pcolormesh(
            cell_edges(xs), cell_edges(ys), data, cmap="viridis", shading="flat"
        )
        fig.colorbar(mesh, ax=ax, label="E2 - Gmax")
    ax.set_xlabel(AXIS_LABELS[x_column])
    ax.set_ylabel(AXIS_LABELS[y_column])
    if title:
        ax.set_title(title)
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
        description="Heatmap of the entanglement-over-steering margin "
        "from a grid CSV."
    )
    parser.add_argument("input", help="grid CSV written by the simulator")
    parser.add_argument(
        "-o", "--output", required=True,
        help="output path; a .png/.svg suffix is optional, both are written",
    )
    parser.add_argument("--title", help="figure title")
    args = parser.parse_args(argv)

    try:
        rows = read_records(args.input)
    except OSError as exc:
        print(f"plot_density: cannot read {args.input}: {exc}", file=sys.stderr)
        return 2
    except SchemaMismatch as exc:
        print(f"plot_density: {args.input}: {exc}", file=sys.stderr)
        return 2

    try:
        x_column, y_column = resolve_axes(rows) if rows else ("kappa_kHz", "A_kHz")
        fig = build_figure(rows, x_column, y_column, args.title)
    except NonRectangularGrid as exc:
        print(f"plot_density: {args.input}: {exc}", file=sys.stderr)
        return 2

    for path in save_both(fig, args.output):
        print(path)
    plt.close(fig)
    return 0


if __name__ == "__main__":
    sys.exit(run())
