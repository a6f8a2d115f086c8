"""Renderer tests over the shipped sample CSVs."""

import os
import subprocess
import sys

import pytest

from qslfig import SchemaError, read_table
from qslfig.cli import main

SAMPLES = os.path.join(os.path.dirname(__file__), os.pardir, "samples")


def sample(name: str) -> str:
    return os.path.join(SAMPLES, name)


def run(args):
    return main(args)


# --- panel rendering over shipped samples ------------------------------------

PANEL_CASES = [
    (["--input", sample("fig1.csv")], "lines"),
    (["--input", sample("fig2.csv")], "heatmap"),
    (["--input", sample("fig2_spectrum.csv")], "spectrum"),
    (["--input", sample("fig3.csv")], "dual-scan"),
    (["--input", sample("sm1.csv")], "lines"),
    (["--input", sample("sm2.csv")], "lines"),
    (["--input", sample("sm3.csv")], "dual-scan"),
]


@pytest.mark.parametrize("inputs,panel", PANEL_CASES, ids=lambda v: v if isinstance(v, str) else os.path.basename(v[1]))
def test_panel_renders(tmp_path, inputs, panel):
    out = tmp_path / "out.png"
    assert run(inputs + ["--panel", panel, "--out", str(out)]) == 0
    assert out.stat().st_size > 0


def test_multiple_inputs_overlay(tmp_path):
    out = tmp_path / "overlay.png"
    code = run(
        ["--input", sample("fig1.csv"), "--input", sample("sm1.csv"),
         "--panel", "lines", "--out", str(out)]
    )
    assert code == 0
    assert out.stat().st_size > 0


def test_svg_output(tmp_path):
    out = tmp_path / "fig1.svg"
    assert run(["--input", sample("fig1.csv"), "--panel", "lines",
                "--out", str(out), "--format", "svg"]) == 0
    assert out.read_text().lstrip().startswith("<?xml")


# --- byte stability ----------------------------------------------------------

@pytest.mark.parametrize("fmt", ["png", "svg"])
def test_byte_stable(tmp_path, fmt):
    args = lambda out: ["--input", sample("fig2.csv"), "--panel", "heatmap",
                        "--out", out, "--format", fmt]
    a, b = str(tmp_path / f"a.{fmt}"), str(tmp_path / f"b.{fmt}")
    env = dict(os.environ, SOURCE_DATE_EPOCH="0")
    for out in (a, b):
        proc = subprocess.run(
            [sys.executable, "-m", "qslfig.cli"] + args(out), env=env
        )
        assert proc.returncode == 0
    with open(a, "rb") as fa, open(b, "rb") as fb:
        assert fa.read() == fb.read()


# --- reader and schema errors ------------------------------------------------

def test_reader_parses_config():
    table = read_table(sample("fig1.csv"))
    assert table.experiment == "fig1"
    assert float(table.config["eta"]) == pytest.approx(0.05)
    assert len(table.column("tau")) == len(table.rows)


def test_missing_columns_is_schema_error(tmp_path):
    bad = tmp_path / "bad.csv"
    bad.write_text("# config: experiment=fig2\na,b\n1.0,2.0\n")
    code = run(["--input", str(bad), "--panel", "heatmap",
                "--out", str(tmp_path / "o.png")])
    assert code == 2


def test_schema_error_lists_expected_and_found(tmp_path):
    bad = tmp_path / "bad.csv"
    bad.write_text("# config: experiment=fig2\na,b\n1.0,2.0\n")
    with pytest.raises(SchemaError) as err:
        from qslfig.panels import render_panel

        render_panel([read_table(str(bad))], "heatmap")
    msg = str(err.value)
    assert "eta" in msg and "a" in msg


def test_empty_file_is_error(tmp_path):
    empty = tmp_path / "empty.csv"
    empty.write_text("")
    code = run(["--input", str(empty), "--panel", "lines",
                "--out", str(tmp_path / "o.png")])
    assert code == 2


def test_missing_file_is_input_error(tmp_path):
    code = run(["--input", str(tmp_path / "nope.csv"), "--panel", "lines",
                "--out", str(tmp_path / "o.png")])
    assert code == 1


def test_unknown_panel_is_usage_error(tmp_path):
    code = run(["--input", sample("fig1.csv"), "--panel", "volcano",
                "--out", str(tmp_path / "o.png")])
    assert code == 1


def test_error_rows_are_skipped(tmp_path):
    src = tmp_path / "sweep.csv"
    header = "eta,tau,vbar,ratio,L_B,ell,L_B_red,ell_red,ratio_red,ratio_hybrid,exists,E_b,Z,status"
    good = "1.00000000e-01,1.00000000e+01," + ",".join(["1.00000000e-01"] * 8) + ",1,nan,nan,ok"
    bad = "2.00000000e-01,1.00000000e+01," + ",".join(["nan"] * 8) + ",0,nan,nan,error:StepSizeError"
    src.write_text(f"# config: experiment=sweep\n{header}\n{good}\n{bad}\n")
    table = read_table(str(src))
    assert table.ok_mask().sum() == 1
    out = tmp_path / "o.png"
    assert run(["--input", str(src), "--panel", "dual-scan", "--out", str(out)]) == 0
