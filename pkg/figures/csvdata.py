"""Reading and validation of the simulator's delimited records.

The plotting scripts are pure CSV-to-image transforms: every number they
draw comes straight out of the file.  This module holds the record schema
they expect and the shared parsing helpers; anything that does not match
the schema is rejected before a single axis is created.
"""

from __future__ import annotations

import csv

#: Column order the simulator writes; any other header is rejected.
EXPECTED_HEADER = [
    "A_kHz", "kappa_kHz", "eta",
    "n1", "n2", "m",
    "alpha1", "alpha2", "beta", "nu_minus",
    "G_12", "G_21", "G_max", "E2", "E2_minus_Gmax",
    "regime", "status",
]

#: Operating-parameter columns, the candidates for plot axes.
PARAM_COLUMNS = ("A_kHz", "kappa_kHz", "eta")

AXIS_LABELS = {
    "A_kHz": "A (kHz)",
    "kappa_kHz": "kappa (kHz)",
    "eta": "eta",
}

#: Status value of an unflagged record; everything else is drawn as a gap.
STATUS_OK = "ok"


class SchemaMismatch(ValueError):
    """The file does not carry the simulator's record schema."""


def read_records(path: str) -> list[dict[str, str]]:
    """Rows of ``path`` as column -> raw string, after validating the header.

    Raises SchemaMismatch if the header differs from EXPECTED_HEADER or any
    row has the wrong field count; raises OSError if the file is unreadable.
    """
    with open(path, newline="", encoding="utf-8") as fp:
        reader = csv.reader(fp)
        try:
            header = next(reader)
        except StopIteration:
            raise SchemaMismatch("file is empty, expected a header row") from None
        if header != EXPECTED_HEADER:
            raise SchemaMismatch(
                "header does not match the simulator record schema: "
                + ",".join(header)
            )
        rows = []
        for row in reader:
            if len(row) != len(header):
                raise SchemaMismatch(
                    f"row {len(rows) + 2} has {len(row)} fields, "
                    f"expected {len(header)}"
                )
            rows.append(dict(zip(header, row)))
    return rows


def column(rows: list[dict[str, str]], name: str) -> list[float]:
    """One numeric column; the simulator writes nan in flagged rows."""
    return [float(row[name]) for row in rows]


def varied_params(rows: list[dict[str, str]]) -> list[str]:
    """The operating-parameter columns that take more than one value."""
    return [
        name for name in PARAM_COLUMNS
        if len({row[name] for row in rows}) > 1
    ]
