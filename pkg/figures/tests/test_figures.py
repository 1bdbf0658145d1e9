"""Tests for the plotting scripts, including the figure acceptance gate.

The golden CSVs are produced by invoking the simulator CLI as a
subprocess, exactly as a user would; the scripts themselves never touch
the simulator.  Run with -s to see the ACCEPTANCE line on success.
"""

import functools
import math
import subprocess
import sys
from pathlib import Path

import pytest

SCRIPTS = Path(__file__).resolve().parents[1]
sys.path.insert(0, str(SCRIPTS))

import csvdata
import plot_density
import plot_lines

LINES = SCRIPTS / "plot_lines.py"
DENSITY = SCRIPTS / "plot_density.py"

#: name -> simulator CLI arguments producing that golden file.
GOLDEN = {
    "inversion_sweep_a50": [
        "sweep", "--param", "eta", "--from", "0", "--to", "1",
        "--steps", "101", "-A", "50", "-k", "3.85",
    ],
    "inversion_sweep_a2000": [
        "sweep", "--param", "eta", "--from", "0", "--to", "1",
        "--steps", "101", "-A", "2000", "-k", "3.85",
    ],
    "loss_sweep_a100": [
        "sweep", "--param", "kappa", "--from", "0", "--to", "30",
        "--steps", "61", "-A", "100", "-e", "0.25",
    ],
    "loss_gain_grid": [
        "grid", "--x", "kappa:0.1:20:100", "--y", "gain:1:500:100",
        "--eta", "0.5",
    ],
}


def criterion(number: int, title: str):
    def decorate(fn):
        @functools.wraps(fn)
        def wrapper(*args, **kwargs):
            try:
                fn(*args, **kwargs)
            except BaseException:
                print(f"ACCEPTANCE {number}: FAIL - {title}")
                raise
            print(f"ACCEPTANCE {number}: PASS - {title}")
        return wrapper
    return decorate


def run_script(script: Path, *args: str) -> subprocess.CompletedProcess:
    return subprocess.run(
        [sys.executable, str(script), *args], capture_output=True, text=True
    )


def run_simulator(*args: str) -> subprocess.CompletedProcess:
    return subprocess.run(
        [sys.executable, "-m", "trilaser", *args], capture_output=True, text=True
    )


@pytest.fixture(scope="module")
def golden_dir(tmp_path_factory):
    out = tmp_path_factory.mktemp("golden")
    for name, args in GOLDEN.items():
        proc = run_simulator(*args, "-o", str(out / f"{name}.csv"))
        assert proc.returncode == 0, proc.stderr
    return out


def header_only_csv(tmp_path) -> Path:
    path = tmp_path / "empty.csv"
    path.write_text(",".join(csvdata.EXPECTED_HEADER) + "\n", encoding="utf-8")
    return path


class TestLineScript:
    def test_renders_png_and_svg(self, golden_dir, tmp_path):
        for name in ("inversion_sweep_a50", "inversion_sweep_a2000",
                     "loss_sweep_a100"):
            proc = run_script(
                LINES, str(golden_dir / f"{name}.csv"),
                "-o", str(tmp_path / name),
            )
            assert proc.returncode == 0, proc.stderr
            for suffix in (".png", ".svg"):
                image = tmp_path / (name + suffix)
                assert image.exists() and image.stat().st_size > 0

    def test_legend_labels_are_exact(self, golden_dir):
        rows = csvdata.read_records(str(golden_dir / "inversion_sweep_a50.csv"))
        fig = plot_lines.build_figure(rows, "eta")
        labels = [t.get_text() for t in fig.axes[0].get_legend().get_texts()]
        assert labels == ["G^{c1->c2}", "G^{c2->c1}", "E2"]
        plot_lines.plt.close(fig)

    def test_curves_carry_the_file_values(self, golden_dir):
        rows = csvdata.read_records(str(golden_dir / "inversion_sweep_a50.csv"))
        fig = plot_lines.build_figure(rows, "eta")
        drawn = {
            line.get_label(): list(line.get_ydata())
            for line in fig.axes[0].get_lines()
        }
        assert drawn["G^{c1->c2}"] == csvdata.column(rows, "G_12")
        assert drawn["G^{c2->c1}"] == csvdata.column(rows, "G_21")
        assert drawn["E2"] == csvdata.column(rows, "E2")
        plot_lines.plt.close(fig)

    def test_forward_only_band(self, golden_dir):
        rows = csvdata.read_records(str(golden_dir / "inversion_sweep_a50.csv"))
        band = [
            row for row in rows
            if float(row["G_12"]) > 0.0 and float(row["E2"]) > 0.0
        ]
        assert band
        assert all(float(row["G_21"]) == 0.0 for row in band)

    def test_all_measures_decay_with_loss(self, golden_dir):
        rows = csvdata.read_records(str(golden_dir / "loss_sweep_a100.csv"))
        for name in ("G_12", "G_21", "E2"):
            values = csvdata.column(rows, name)
            assert all(a >= b for a, b in zip(values, values[1:]))

    def test_flagged_rows_leave_gaps(self, tmp_path):
        path = tmp_path / "flagged.csv"
        proc = run_simulator(
            "sweep", "--param", "kappa", "--from", "0", "--to", "10",
            "--steps", "11", "-A", "50", "-e", "0", "-o", str(path),
        )
        assert proc.returncode == 0
        rows = csvdata.read_records(str(path))
        assert rows[0]["status"] != csvdata.STATUS_OK
        fig = plot_lines.build_figure(rows, "kappa_kHz")
        for line in fig.axes[0].get_lines():
            assert math.isnan(line.get_ydata()[0])
        plot_lines.plt.close(fig)

    def test_schema_mismatch_exits_nonzero(self, tmp_path):
        bad = tmp_path / "bad.csv"
        bad.write_text("a,b\n1,2\n", encoding="utf-8")
        proc = run_script(LINES, str(bad), "-o", str(tmp_path / "out"))
        assert proc.returncode == 2
        assert "schema" in proc.stderr

    def test_missing_file_exits_nonzero(self, tmp_path):
        proc = run_script(LINES, str(tmp_path / "nope.csv"),
                          "-o", str(tmp_path / "out"))
        assert proc.returncode == 2

    def test_empty_file_gives_empty_axes(self, tmp_path):
        proc = run_script(LINES, str(header_only_csv(tmp_path)),
                          "-o", str(tmp_path / "empty"))
        assert proc.returncode == 0, proc.stderr
        assert (tmp_path / "empty.png").exists()
        assert (tmp_path / "empty.svg").exists()


class TestDensityScript:
    def test_renders_png_and_svg(self, golden_dir, tmp_path):
        proc = run_script(
            DENSITY, str(golden_dir / "loss_gain_grid.csv"),
            "-o", str(tmp_path / "grid.png"),
        )
        assert proc.returncode == 0, proc.stderr
        for suffix in (".png", ".svg"):
            image = tmp_path / ("grid" + suffix)
            assert image.exists() and image.stat().st_size > 0

    def test_grid_axes_inferred_row_major(self, golden_dir):
        rows = csvdata.read_records(str(golden_dir / "loss_gain_grid.csv"))
        x_column, y_column = plot_density.resolve_axes(rows)
        assert (x_column, y_column) == ("kappa_kHz", "A_kHz")
        assert plot_density.grid_shape(rows, x_column, y_column) == (100, 100)

    def test_flagged_cells_are_masked(self, tmp_path):
        path = tmp_path / "flagged.csv"
        proc = run_simulator(
            "grid", "--x", "kappa:0:10:2", "--y", "gain:1:50:2",
            "--eta", "0", "-o", str(path),
        )
        assert proc.returncode == 0
        rows = csvdata.read_records(str(path))
        flagged = sum(row["status"] != csvdata.STATUS_OK for row in rows)
        assert flagged == 2
        fig = plot_density.build_figure(rows, "kappa_kHz", "A_kHz")
        mesh = fig.axes[0].collections[0]
        assert int(mesh.get_array().mask.sum()) == flagged
        plot_density.plt.close(fig)

    def test_non_rectangular_grid_exits_nonzero(self, golden_dir, tmp_path):
        lines = (golden_dir / "loss_gain_grid.csv").read_text(
            encoding="utf-8"
        ).splitlines()
        truncated = tmp_path / "torn.csv"
        truncated.write_text("\n".join(lines[:-1]) + "\n", encoding="utf-8")
        proc = run_script(DENSITY, str(truncated), "-o", str(tmp_path / "out"))
        assert proc.returncode == 2
        assert "grid" in proc.stderr

    def test_single_cell_grid(self, tmp_path):
        path = tmp_path / "cell.csv"
        proc = run_simulator(
            "grid", "--x", "kappa:3.85:3.85:1", "--y", "gain:200:200:1",
            "--eta", "0.25", "-o", str(path),
        )
        assert proc.returncode == 0
        result = run_script(DENSITY, str(path), "-o", str(tmp_path / "cell"))
        assert result.returncode == 0, result.stderr
        assert (tmp_path / "cell.png").exists()

    def test_empty_file_gives_empty_axes(self, tmp_path):
        proc = run_script(DENSITY, str(header_only_csv(tmp_path)),
                          "-o", str(tmp_path / "empty"))
        assert proc.returncode == 0, proc.stderr
        assert (tmp_path / "empty.png").exists()


def test_scripts_never_touch_the_simulator():
    for name in ("csvdata.py", "plot_lines.py", "plot_density.py"):
        source = (SCRIPTS / name).read_text(encoding="utf-8")
        assert "trilaser" not in source


@criterion(11, "figure scripts replicate the reference panels from golden CSVs")
def test_figure_replication(golden_dir, tmp_path_factory):
    out = tmp_path_factory.mktemp("panels")
    for name in ("inversion_sweep_a50", "inversion_sweep_a2000",
                 "loss_sweep_a100"):
        proc = run_script(LINES, str(golden_dir / f"{name}.csv"),
                          "-o", str(out / name))
        assert proc.returncode == 0, proc.stderr
        assert (out / f"{name}.png").stat().st_size > 0
        assert (out / f"{name}.svg").stat().st_size > 0

    grid_csv = golden_dir / "loss_gain_grid.csv"
    proc = run_script(DENSITY, str(grid_csv), "-o", str(out / "loss_gain_grid"))
    assert proc.returncode == 0, proc.stderr
    assert (out / "loss_gain_grid.png").stat().st_size > 0
    assert (out / "loss_gain_grid.svg").stat().st_size > 0

    rows = csvdata.read_records(str(grid_csv))
    assert all(row["status"] == csvdata.STATUS_OK for row in rows)
    cells = csvdata.column(rows, "E2_minus_Gmax")
    assert len(cells) == 100 * 100
    assert min(cells) >= 0.0
