"""Delimited and JSON serialization of sweep records and trajectories.

Floats are written with 17 significant digits so a parsed row reproduces
the in-memory value bit for bit, and rows are joined with a bare newline so
identical inputs give byte-identical files on any platform.  NaN appears as
"nan" in CSV and null in JSON; an absent regime is an empty CSV field and a
JSON null.
"""

from __future__ import annotations

import json
import math
from typing import IO, Iterable, Sequence

from .dynamics import MomentState
from .errors import InvalidSpec
from .gaussian import Regime
from .sweep import SweepRecord

#: CSV column -> SweepRecord attribute, in output order.
RECORD_COLUMNS: tuple[tuple[str, str], ...] = (
    ("A_kHz", "gain_A"),
    ("kappa_kHz", "kappa"),
    ("eta", "eta"),
    ("n1", "n1"),
    ("n2", "n2"),
    ("m", "m"),
    ("alpha1", "alpha1"),
    ("alpha2", "alpha2"),
    ("beta", "beta"),
    ("nu_minus", "nu_minus"),
    ("G_12", "g12"),
    ("G_21", "g21"),
    ("G_max", "gmax"),
    ("E2", "e2"),
    ("E2_minus_Gmax", "e2_minus_gmax"),
    ("regime", "regime"),
    ("status", "status"),
)

RECORD_HEADER = ",".join(name for name, _ in RECORD_COLUMNS)

TRAJECTORY_HEADER = (
    "t_ms,re_c1,im_c1,re_c2,im_c2,re_c1sq,im_c1sq,re_c2sq,im_c2sq,"
    "n1,n2,re_m12,im_m12,re_x12,im_x12"
)


def format_float(value: float) -> str:
    """17-significant-digit decimal form; round-trips any finite double."""
    return format(value, ".17g")


def _record_cells(record: SweepRecord) -> list[str]:
    cells = []
    for _, attr in RECORD_COLUMNS:
        value = getattr(record, attr)
        if attr == "regime":
            cells.append("" if value is None else value.value)
        elif attr == "status":
            cells.append(value)
        else:
            cells.append(format_float(value))
    return cells


def write_records_csv(records: Iterable[SweepRecord], fp: IO[str]) -> None:
    fp.write(RECORD_HEADER + "\n")
    for record in records:
        fp.write(",".join(_record_cells(record)) + "\n")


def _json_value(value: float) -> float | None:
    return None if math.isnan(value) else value


def write_records_json(records: Iterable[SweepRecord], fp: IO[str]) -> None:
    rows = []
    for record in records:
        row: dict[str, object] = {}
        for name, attr in RECORD_COLUMNS:
            value = getattr(record, attr)
            if attr == "regime":
                row[name] = None if value is None else value.value
            elif attr == "status":
                row[name] = value
            else:
                row[name] = _json_value(value)
        rows.append(row)
    fp.write(json.dumps(rows, indent=2, allow_nan=False))
    fp.write("\n")


def read_records_csv(fp: IO[str]) -> list[SweepRecord]:
    """Parse a records file written by write_records_csv."""
    header = fp.readline().rstrip("\n")
    if header != RECORD_HEADER:
        raise InvalidSpec(f"unexpected records header: {header!r}")
    records = []
    for line in fp:
        line = line.rstrip("\n")
        if not line:
            continue
        cells = line.split(",")
        if len(cells) != len(RECORD_COLUMNS):
            raise InvalidSpec(f"row has {len(cells)} fields, expected {len(RECORD_COLUMNS)}")
        kwargs: dict[str, object] = {}
        for (_, attr), cell in zip(RECORD_COLUMNS, cells):
            if attr == "regime":
                kwargs[attr] = Regime(cell) if cell else None
            elif attr == "status":
                kwargs[attr] = cell
            else:
                kwargs[attr] = float(cell)
        records.append(SweepRecord(**kwargs))
    return records


def _trajectory_values(t: float, state: MomentState) -> tuple[float, ...]:
    return (
        t,
        state.c1.real,
        state.c1.imag,
        state.c2.real,
        state.c2.imag,
        state.c1sq.real,
        state.c1sq.imag,
        state.c2sq.real,
        state.c2sq.imag,
        state.n1,
        state.n2,
        state.m12.real,
        state.m12.imag,
        state.x12.real,
        state.x12.imag,
    )


def write_trajectory_csv(
    times: Sequence[float], states: Sequence[MomentState], fp: IO[str]
) -> None:
    fp.write(TRAJECTORY_HEADER + "\n")
    for t, state in zip(times, states):
        cells = [format_float(v) for v in _trajectory_values(t, state)]
        fp.write(",".join(cells) + "\n")


def write_trajectory_json(
    times: Sequence[float], states: Sequence[MomentState], fp: IO[str]
) -> None:
    names = TRAJECTORY_HEADER.split(",")
    rows = [
        dict(zip(names, _trajectory_values(t, state)))
        for t, state in zip(times, states)
    ]
    fp.write(json.dumps(rows, indent=2, allow_nan=False))
    fp.write("\n")


def read_trajectory_csv(fp: IO[str]) -> tuple[list[float], list[MomentState]]:
    """Parse a trajectory file written by write_trajectory_csv."""
    header = fp.readline().rstrip("\n")
    if header != TRAJECTORY_HEADER:
        raise InvalidSpec(f"unexpected trajectory header: {header!r}")
    times: list[float] = []
    states: list[MomentState] = []
    for line in fp:
        line = line.rstrip("\n")
        if not line:
            continue
        v = [float(cell) for cell in line.split(",")]
        if len(v) != 15:
            raise InvalidSpec(f"row has {len(v)} fields, expected 15")
        times.append(v[0])
        states.append(
            MomentState(
                c1=complex(v[1], v[2]),
                c2=complex(v[3], v[4]),
                c1sq=complex(v[5], v[6]),
                c2sq=complex(v[7], v[8]),
                n1=v[9],
                n2=v[10],
                m12=complex(v[11], v[12]),
                x12=complex(v[13], v[14]),
            )
        )
    return times, states
