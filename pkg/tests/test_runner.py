import json
import os

import numpy as np
import pytest

from gravnoise.cli import main
from gravnoise.config import parse_config
from gravnoise.runner import format_float, run_experiment

SLIT_TEMPLATE = """
[experiment]
kind = double-slit
seed = 42
output_dir = {out}
realizations = 4

[background]
mode_count = 8
strain_rms = {strain}
f_min = 0.5
f_max = 1.5
light_speed = 1.0

[geometry]
L1 = 10.0
L2 = 10.0
d = 4.0
screen_extent = 2.5
screen_samples = 513

[slit]
wavelength = 0.5
speed = 0.8
quadrature_points = 8
coupling = amplitude_phase
"""

GAP_TEMPLATE = """
[experiment]
kind = derivation-gap
seed = 7
output_dir = {out}

[grid]
cells = 128
extent = 40.0
sigma0 = 1.0
s0 = 0.5

[evolution]
dt = 0.01
steps = 20
sample_every = 10
"""

DEVIATION_TEMPLATE = """
[experiment]
kind = deviation-trajectory
seed = 11
output_dir = {out}

[background]
mode_count = 4
strain_rms = 0.001
f_min = 0.5
f_max = 1.5
light_speed = 1.0

[deviation]
dt = 0.01
steps = 50
"""

STATS_TEMPLATE = """
[experiment]
kind = background-statistics
seed = 5
output_dir = {out}

[background]
mode_count = 32
strain_rms = 0.01
f_min = 0.5
f_max = 1.5
light_speed = 1.0

[sampling]
n_points = 256
"""


def read(path):
    with open(path, "rb") as fh:
        return fh.read()


def test_format_float_round_trips():
    for v in (0.1, 1.0 / 3.0, 1e-300, -7.25e17, 0.0):
        assert float(format_float(v)) == v


def test_zero_strain_slit_run_outputs_and_visibility(tmp_path):
    out = tmp_path / "run"
    cfg = parse_config(SLIT_TEMPLATE.format(out=out, strain="0.0"))
    manifest = run_experiment(cfg)
    assert (out / "pattern.csv").exists()
    assert (out / "result.json").exists()
    assert (out / "manifest.json").exists()
    payload = json.loads((out / "result.json").read_text())
    assert payload["visibility"] > 0.999
    assert payload["coupling"] == "amplitude_phase"
    assert set(manifest.outputs) == {"pattern.csv", "result.json"}
    assert len(manifest.substream_seeds) == 4


def test_reruns_are_byte_identical(tmp_path):
    outs = []
    for name in ("a", "b"):
        out = tmp_path / name
        cfg = parse_config(SLIT_TEMPLATE.format(out=out, strain="0.02"))
        run_experiment(cfg)
        outs.append(out)
    assert read(outs[0] / "pattern.csv") == read(outs[1] / "pattern.csv")
    assert read(outs[0] / "result.json").replace(str(outs[0]).encode(), b"") == read(
        outs[1] / "result.json"
    ).replace(str(outs[1]).encode(), b"")
    m0 = json.loads((outs[0] / "manifest.json").read_text())
    m1 = json.loads((outs[1] / "manifest.json").read_text())
    assert m0["outputs"]["pattern.csv"] == m1["outputs"]["pattern.csv"]


def test_unwritable_output_dir_fails_before_compute(tmp_path):
    blocker = tmp_path / "file"
    blocker.write_text("x")
    cfg = parse_config(SLIT_TEMPLATE.format(out=blocker / "sub", strain="0.0"))
    with pytest.raises(OSError):
        run_experiment(cfg)


def test_derivation_gap_run(tmp_path):
    out = tmp_path / "gap"
    cfg = parse_config(GAP_TEMPLATE.format(out=out))
    run_experiment(cfg)
    residuals = json.loads((out / "residuals.json").read_text())
    assert residuals["worst_gap_ratio"] < 0.05
    assert len(residuals["samples"]) == 2
    header = (out / "snapshot_final.csv").read_text().splitlines()[0]
    assert header == "x,re_psi,im_psi,a,S"


def test_deviation_trajectory_run(tmp_path):
    out = tmp_path / "dev"
    cfg = parse_config(DEVIATION_TEMPLATE.format(out=out))
    run_experiment(cfg)
    lines = (out / "trajectory.csv").read_text().splitlines()
    assert lines[0] == "tau,ell_x,ell_y,ell_z,ell_dot_x,ell_dot_y,ell_dot_z"
    assert len(lines) == 52  # header + initial + 50 steps


def test_background_statistics_run(tmp_path):
    out = tmp_path / "stats"
    cfg = parse_config(STATS_TEMPLATE.format(out=out))
    run_experiment(cfg)
    summary = json.loads((out / "summary.json").read_text())
    assert summary["max_gauge_residual_rel"] < 1e-12
    assert summary["max_null_residual_rel"] < 1e-12
    assert summary["sample_points"] == 256


def test_cli_validate_and_run(tmp_path, capsys):
    cfg_path = tmp_path / "slit.ini"
    out = tmp_path / "cli_out"
    cfg_path.write_text(SLIT_TEMPLATE.format(out=out, strain="0.0"))

    assert main(["validate", str(cfg_path)]) == 0
    echoed = capsys.readouterr().out
    assert "kind = double-slit" in echoed
    assert "OK" in echoed

    assert main(["run", str(cfg_path)]) == 0
    assert (out / "manifest.json").exists()


def test_cli_seed_override_changes_outputs(tmp_path):
    cfg_path = tmp_path / "slit.ini"
    out1 = tmp_path / "o1"
    out2 = tmp_path / "o2"
    cfg_path.write_text(SLIT_TEMPLATE.format(out="ignored", strain="0.02"))
    assert main(["run", str(cfg_path), "--output-dir", str(out1), "--seed", "1"]) == 0
    assert main(["run", str(cfg_path), "--output-dir", str(out2), "--seed", "2"]) == 0
    assert read(out1 / "pattern.csv") != read(out2 / "pattern.csv")


def test_cli_validation_exit_code(tmp_path, capsys):
    bad = tmp_path / "bad.ini"
    bad.write_text(SLIT_TEMPLATE.format(out="x", strain="0.0").replace("d = 4.0", "d = -1"))
    assert main(["validate", str(bad)]) == 1
    assert "geometry.d" in capsys.readouterr().err


def test_cli_io_exit_code(tmp_path):
    cfg_path = tmp_path / "slit.ini"
    blocker = tmp_path / "f"
    blocker.write_text("x")
    cfg_path.write_text(SLIT_TEMPLATE.format(out=blocker / "sub", strain="0.0"))
    assert main(["run", str(cfg_path)]) == 3


def test_cli_sweep(tmp_path):
    cfg_path = tmp_path / "slit.ini"
    root = tmp_path / "sweep"
    cfg_path.write_text(SLIT_TEMPLATE.format(out=root, strain="0.0"))
    code = main(
        [
            "sweep",
            str(cfg_path),
            "--param",
            "background.strain_rms",
            "--values",
            "0.0,0.02",
        ]
    )
    assert code == 0
    summary = json.loads((root / "sweep_summary.json").read_text())
    assert len(summary["runs"]) == 2
    v0 = json.loads((root / "sweep_000" / "result.json").read_text())["visibility"]
    v1 = json.loads((root / "sweep_001" / "result.json").read_text())["visibility"]
    assert v0 >= v1


def test_env_var_output_dir(tmp_path, monkeypatch):
    cfg_path = tmp_path / "slit.ini"
    env_out = tmp_path / "env_out"
    cfg_path.write_text(SLIT_TEMPLATE.format(out=tmp_path / "unused", strain="0.0"))
    monkeypatch.setenv("GRAVNOISE_OUTDIR", str(env_out))
    assert main(["run", str(cfg_path)]) == 0
    assert (env_out / "manifest.json").exists()
