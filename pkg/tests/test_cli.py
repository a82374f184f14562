import json

import pytest
from click.testing import CliRunner

from tpro.adiabatic import pulse_area_first_maximum
from tpro.cli import MANIFEST_NAME, cli, exit_code_for
from tpro.config import RunConfig
from tpro.errors import (
    BracketError,
    ConfigConflictError,
    ConfigFileMissingError,
    ConfigSyntaxError,
    MultipoleConvergenceError,
    PartialSweepError,
    PerturbativeLimitWarning,
    StiffnessError,
    UnknownKeyError,
    ValueRangeError,
)
from tpro.reporting import DYNAMICS_HEADER, MATERIALS_HEADER, SWEEP_HEADER
from tpro.sweeps import STATUS_OK, SweepPoint, SweepResult


@pytest.fixture()
def runner():
    return CliRunner()


def invoke(runner, *args):
    return runner.invoke(cli, list(args))


def read_lines(path):
    return path.read_text().splitlines()


def test_exit_code_mapping():
    assert exit_code_for(ConfigFileMissingError("x")) == 3
    assert exit_code_for(ConfigSyntaxError("x")) == 4
    assert exit_code_for(UnknownKeyError("x")) == 5
    assert exit_code_for(ValueRangeError("x")) == 6
    assert exit_code_for(ConfigConflictError("x")) == 7
    assert exit_code_for(PartialSweepError("x")) == 9
    # anything else from the library falls back to the numeric-failure code
    assert exit_code_for(StiffnessError("x")) == 8
    assert exit_code_for(BracketError("x")) == 8
    assert exit_code_for(MultipoleConvergenceError("x", 0j, 0j, 0j, 5)) == 8


def test_help_lists_commands(runner):
    result = invoke(runner, "--help")
    assert result.exit_code == 0
    for name in (
        "materials",
        "hybrid-info",
        "dynamics",
        "sweep-area-duration",
        "sweep-area-distance",
        "area-scan",
        "adiabatic",
    ):
        assert name in result.stdout


def test_version(runner):
    result = invoke(runner, "--version")
    assert result.exit_code == 0
    assert "0.1.0" in result.stdout


def test_unknown_option_is_usage_error(runner):
    result = invoke(runner, "materials", "--no-such-flag")
    assert result.exit_code == 2


def test_materials(runner, tmp_path):
    result = invoke(
        runner, "materials", "--output-dir", str(tmp_path), "--points", "11"
    )
    assert result.exit_code == 0
    assert "surface-plasmon resonance: 2.3555 eV" in result.stdout
    lines = read_lines(tmp_path / "materials.csv")
    assert lines[0] == ",".join(MATERIALS_HEADER)
    assert len(lines) == 12
    assert (tmp_path / MANIFEST_NAME).exists()


def test_materials_bad_window_is_range_error(runner, tmp_path):
    result = invoke(
        runner,
        "materials",
        "--output-dir",
        str(tmp_path),
        "--lo-ev",
        "3.0",
        "--hi-ev",
        "2.0",
    )
    assert result.exit_code == 6
    assert "error:" in result.stderr


def test_hybrid_info_reports_frozen_quantities(runner):
    result = invoke(runner, "hybrid-info")
    assert result.exit_code == 0
    assert "carrier energy: 2.3500 eV" in result.stdout
    assert "(|.| = 2.1970)" in result.stdout
    assert "|hbar*g1| = 0.3018 meV" in result.stdout
    assert "|hbar*g2| = 0.5366 meV" in result.stdout
    assert "|hbar*g3| = 0.4024 meV" in result.stdout
    assert "surface-plasmon resonance: 2.3555 eV" in result.stdout


def test_wall_time_stays_off_stdout(runner):
    result = invoke(runner, "hybrid-info")
    assert "wall time" not in result.stdout
    assert "wall time" in result.stderr


def test_dynamics_default_run(runner, tmp_path):
    result = invoke(runner, "dynamics", "--output-dir", str(tmp_path))
    assert result.exit_code == 0
    assert "readout: rho33 = 0.163644, rho22 = 0.007353" in result.stdout
    assert "peaks: rho33 = 0.758117" in result.stdout
    lines = read_lines(tmp_path / "dynamics.csv")
    assert lines[0] == ",".join(DYNAMICS_HEADER)
    assert len(lines) == 1 + RunConfig.defaults().integrator.n_samples
    manifest = json.loads((tmp_path / MANIFEST_NAME).read_text())
    assert manifest["command"] == "dynamics"
    assert manifest["outputs"] == ["dynamics.csv"]
    assert manifest["config_hash"] == RunConfig.defaults().config_hash()


def test_dynamics_method_choice_is_validated(runner, tmp_path):
    result = invoke(
        runner, "dynamics", "--output-dir", str(tmp_path), "--method", "euler"
    )
    assert result.exit_code == 2


def test_missing_config_file(runner, tmp_path):
    result = invoke(runner, "dynamics", "--config", str(tmp_path / "absent.ini"))
    assert result.exit_code == 3


def test_config_syntax_error(runner, tmp_path):
    path = tmp_path / "bad.ini"
    path.write_text("[pulse\narea_pi = 2\n")
    result = invoke(runner, "hybrid-info", "--config", str(path))
    assert result.exit_code == 4


def test_config_unknown_key(runner, tmp_path):
    path = tmp_path / "bad.ini"
    path.write_text("[pulse]\narea_pie = 2\n")
    result = invoke(runner, "hybrid-info", "--config", str(path))
    assert result.exit_code == 5
    assert "area_pie" in result.stderr


def test_config_value_out_of_range(runner, tmp_path):
    path = tmp_path / "bad.ini"
    path.write_text("[pulse]\nt0_ps = 0\n")
    result = invoke(runner, "hybrid-info", "--config", str(path))
    assert result.exit_code == 6


def test_isolated_flag_conflicts_with_explicit_hybrid(runner, tmp_path):
    path = tmp_path / "hybrid.ini"
    path.write_text("[geometry]\nmode = hybrid\n")
    result = invoke(
        runner,
        "dynamics",
        "--config",
        str(path),
        "--output-dir",
        str(tmp_path),
        "--isolated",
    )
    assert result.exit_code == 7


def test_distance_sweep_rejects_isolated_config(runner, tmp_path):
    path = tmp_path / "iso.ini"
    path.write_text("[geometry]\nmode = isolated\n")
    result = invoke(
        runner,
        "sweep-area-distance",
        "--config",
        str(path),
        "--output-dir",
        str(tmp_path),
    )
    assert result.exit_code == 7


def test_near_contact_geometry_is_numeric_failure(runner, tmp_path):
    path = tmp_path / "near.ini"
    path.write_text("[geometry]\ndistance_nm = 12.6\n")
    result = invoke(runner, "hybrid-info", "--config", str(path))
    assert result.exit_code == 8
    assert "not converged" in result.stderr


def test_small_sweep_runs_clean(runner, tmp_path):
    result = invoke(
        runner,
        "sweep-area-duration",
        "--output-dir",
        str(tmp_path),
        "--area-min-pi",
        "0.5",
        "--area-max-pi",
        "1.0",
        "--area-points",
        "2",
        "--t0-list-ps",
        "0.1",
    )
    assert result.exit_code == 0
    assert "2 grid points, all ok" in result.stdout
    lines = read_lines(tmp_path / "sweep_area_duration.csv")
    data = [l for l in lines if not l.startswith("#")]
    assert data[0] == ",".join(SWEEP_HEADER)
    assert len(data) == 3
    assert all(l.endswith(STATUS_OK) for l in data[1:])


def test_sweep_reruns_are_byte_identical(runner, tmp_path):
    args = [
        "sweep-area-duration",
        "--area-min-pi",
        "0.5",
        "--area-max-pi",
        "1.0",
        "--area-points",
        "2",
        "--t0-list-ps",
        "0.1",
        "--isolated",
    ]
    dir_a = tmp_path / "a"
    dir_b = tmp_path / "b"
    assert invoke(runner, *args, "--output-dir", str(dir_a)).exit_code == 0
    assert invoke(runner, *args, "--output-dir", str(dir_b)).exit_code == 0
    for name in ("sweep_area_duration.csv", MANIFEST_NAME):
        assert (dir_a / name).read_bytes() == (dir_b / name).read_bytes()


def test_partial_sweep_still_writes_files(runner, tmp_path, monkeypatch):
    nan = float("nan")
    points = [
        SweepPoint(0.5, 0.1, 0.2, 0.01, 0.3, 0.02, STATUS_OK),
        SweepPoint(1.0, 0.1, nan, nan, nan, nan, "failed: ValueError: synthetic"),
    ]

    def fake_sweep(*args, **kwargs):
        return SweepResult("area_pi", "t0_ps", points, {})

    monkeypatch.setattr("tpro.cli.sweep_area_duration", fake_sweep)
    result = invoke(
        runner,
        "sweep-area-duration",
        "--output-dir",
        str(tmp_path),
        "--area-points",
        "2",
        "--t0-list-ps",
        "0.1",
    )
    assert result.exit_code == 9
    assert "1 of 2 grid points failed" in result.stderr
    text = (tmp_path / "sweep_area_duration.csv").read_text()
    assert "failed: ValueError: synthetic" in text
    assert (tmp_path / MANIFEST_NAME).exists()


def test_area_scan_metadata_prediction(runner, tmp_path):
    # a 1.5 pi pulse at this short width is beyond the perturbative bound,
    # so the scan must also emit the validity warning
    with pytest.warns(PerturbativeLimitWarning):
        result = invoke(
            runner,
            "area-scan",
            "--output-dir",
            str(tmp_path),
            "--area-min-pi",
            "0",
            "--area-max-pi",
            "1.5",
            "--area-points",
            "4",
            "--t0-ps",
            "0.2",
            "--isolated",
        )
    assert result.exit_code == 0
    lines = read_lines(tmp_path / "area_scan.csv")
    meta = dict(
        l[1:].strip().split(" = ", 1) for l in lines if l.startswith("#")
    )
    cfg = RunConfig.defaults().with_overrides(t0_ps=0.2, isolated=True)
    expected = pulse_area_first_maximum(cfg.sqd, 0.2, cfg.feedback())
    assert float(meta["predicted_first_max_area_pi"]) == pytest.approx(
        expected / 3.141592653589793, rel=1e-15
    )
    assert meta["isolated"] == "true"
    data = [l for l in lines if not l.startswith("#")]
    assert len(data) == 5


def test_adiabatic_duration_matches_closed_form(runner, tmp_path):
    result = invoke(
        runner,
        "adiabatic",
        "--output-dir",
        str(tmp_path),
        "--scan",
        "duration",
        "--t0-list-ps",
        "0.4,0.8",
        "--isolated",
    )
    assert result.exit_code == 0
    lines = read_lines(tmp_path / "adiabatic_duration.csv")
    assert lines[0] == "t0_ps,area_first_max_rad,area_first_max_pi_units"
    cfg = RunConfig.defaults().with_overrides(isolated=True)
    feedback = cfg.feedback()
    for line, t0 in zip(lines[1:], (0.4, 0.8)):
        cols = [float(tok) for tok in line.split(",")]
        assert cols[0] == t0
        assert cols[1] == pytest.approx(
            pulse_area_first_maximum(cfg.sqd, t0, feedback), rel=1e-15
        )
        assert cols[2] == pytest.approx(cols[1] / 3.141592653589793, rel=1e-15)


def test_adiabatic_distance_rejects_isolated(runner, tmp_path):
    result = invoke(
        runner,
        "adiabatic",
        "--output-dir",
        str(tmp_path),
        "--scan",
        "distance",
        "--isolated",
    )
    assert result.exit_code == 7


def test_adiabatic_distance_closed_form_decreases_with_distance(runner, tmp_path):
    result = invoke(
        runner,
        "adiabatic",
        "--output-dir",
        str(tmp_path),
        "--scan",
        "distance",
        "--d-min-nm",
        "18",
        "--d-max-nm",
        "30",
        "--d-points",
        "3",
    )
    assert result.exit_code == 0
    lines = read_lines(tmp_path / "adiabatic_distance.csv")
    areas = [float(l.split(",")[1]) for l in lines[1:]]
    # weaker enhancement far away means more pulse area is needed
    assert areas[0] < areas[1] < areas[2]
