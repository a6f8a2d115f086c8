import math

import numpy as np
import pytest

from qsdlab.cli import main
from qsdlab.experiments import (
    ConfigError,
    ExperimentConfig,
    config_line,
    make_config,
    run_experiment,
)


def small_fig2(**kw):
    return make_config(
        "fig2", eta_grid=(0.05, 0.15), tau_grid=(5.0, 10.0), tau_max=10.0, **kw
    )


def test_config_validation():
    with pytest.raises(ConfigError):
        make_config("nope")
    with pytest.raises(ConfigError):
        make_config("fig1", dt=-0.1)
    with pytest.raises(ConfigError):
        make_config("fig2", eta_grid=(0.2, 0.1))


def test_fig1_asymptote_column_constant():
    res = run_experiment(make_config("fig1", tau_grid=tuple(np.linspace(1, 50, 20))))
    k = res.columns.index("ratio_asymptote")
    vals = {row[k] for row in res.rows}
    assert len(vals) == 1
    assert vals.pop() == pytest.approx(0.09228724, abs=1e-7)


def test_fig2_threshold_behavior():
    res = run_experiment(small_fig2())
    cols = {c: i for i, c in enumerate(res.columns)}
    by_eta = {row[cols["eta"]]: row for row in res.rows}
    assert by_eta[0.05][cols["exists"]] is False or by_eta[0.05][cols["exists"]] == 0
    assert by_eta[0.15][cols["exists"]] in (True, 1)


def test_sweep_with_zero_coupling_is_ideal():
    res = run_experiment(
        make_config("sweep", eta_grid=(0.0,), tau_grid=(2.0, 4.0), tau_max=4.0)
    )
    cols = {c: i for i, c in enumerate(res.columns)}
    for row in res.rows:
        assert row[cols["status"]] == "ok"
        assert row[cols["vbar"]] == pytest.approx(0.5, abs=1e-8)


def test_csv_roundtrip_and_format(tmp_path):
    out = tmp_path / "fig2.csv"
    cfg = small_fig2(out_path=str(out))
    res = run_experiment(cfg)
    text = out.read_text().splitlines()
    assert text[0].startswith("# config: experiment=fig2 ")
    assert text[1].split(",") == list(res.columns)
    assert len(text) == 2 + len(res.rows)
    # every numeric cell parses back to the printed precision
    for line, row in zip(text[2:], res.rows):
        for cell, value in zip(line.split(","), row):
            if isinstance(value, float) and not math.isnan(value):
                assert float(cell) == pytest.approx(value, rel=1e-8)
    # spectrum side table rides along with fig2
    assert (tmp_path / "fig2_spectrum.csv").exists()


def test_rerun_is_byte_identical(tmp_path):
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    run_experiment(small_fig2(out_path=str(a)))
    run_experiment(small_fig2(out_path=str(b)))
    assert a.read_bytes() == b.read_bytes()


def test_jobs_do_not_change_output(tmp_path):
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    run_experiment(small_fig2(out_path=str(a), jobs=1))
    run_experiment(small_fig2(out_path=str(b), jobs=3))
    assert a.read_bytes() == b.read_bytes()


def test_config_line_excludes_execution_fields():
    line = config_line(small_fig2(jobs=7, out_path="/tmp/x.csv"))
    assert "jobs=" not in line and "out_path=" not in line


def test_cli_usage_error_exit_code(capsys):
    assert main(["fig1", "--dt", "-3"]) == 1
    assert "dt" in capsys.readouterr().err


def test_cli_unknown_experiment_exit_code():
    with pytest.raises(SystemExit) as err:
        main(["figx"])
    assert err.value.code == 1


def test_cli_runs_sweep_and_writes(tmp_path, capsys):
    out = tmp_path / "s.csv"
    code = main(
        [
            "sweep",
            "--eta-grid",
            "0.02:0.06:2",
            "--tau-grid",
            "2:6:3",
            "--out",
            str(out),
        ]
    )
    assert code == 0
    assert out.exists()
    assert "3 rows" not in capsys.readouterr().out  # 2 etas x 3 taus = 6 rows


def test_cli_config_file_with_flag_override(tmp_path):
    cfg = tmp_path / "c.cfg"
    cfg.write_text("eta = 0.07  # coupling\ntau-grid = 1:5:3\n")
    out = tmp_path / "o.csv"
    assert main(["sm1", "--config", str(cfg), "--eta", "0.09", "--out", str(out)]) == 0
    header = out.read_text().splitlines()[0]
    assert "eta=9.00000000e-02" in header


def test_cli_bad_config_key(tmp_path):
    cfg = tmp_path / "c.cfg"
    cfg.write_text("bogus = 1\n")
    assert main(["fig1", "--config", str(cfg)]) == 1
