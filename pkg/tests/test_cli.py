import json
import math

import pytest
from click.testing import CliRunner

from rrcqkd import cli, emit


@pytest.fixture
def runner():
    return CliRunner()


def run(runner, *args):
    return runner.invoke(cli, ["--env", "testing", *args])


def test_ideal_link(runner):
    result = run(runner, "keyrate", "--tau", "1", "--nbar", "1", "--matched")
    assert result.exit_code == 0, result.output
    config, frame = emit.parse(result.output)
    assert frame.loc[0, "skr"] == pytest.approx(1.0, abs=1e-12)
    assert frame.loc[0, "holevo"] == pytest.approx(0.0, abs=1e-12)
    assert config["tau"] == 1.0
    assert config["matched"] is True


def test_keyrate_echoes_every_setting(runner):
    result = run(runner, "keyrate")
    assert result.exit_code == 0, result.output
    config, frame = emit.parse(result.output)
    for key in ("rolloff", "nbar", "distance_km", "taps", "sps", "sampling", "beta", "detection", "format"):
        assert key in config
    assert config["rolloff"] == 0.25
    assert list(frame.columns)[:4] == ["rolloff", "nbar", "tau", "excess_noise"]


def test_published_operating_point(runner):
    args = ["--distance-km", "50", "--nbar", "9.9", "--rolloff", "0.25", "--excess-noise", "0"]
    mismatched = run(runner, "keyrate", *args, "--sps", "3", "--taps", "21")
    matched = run(runner, "keyrate", *args, "--matched")
    assert mismatched.exit_code == 0 and matched.exit_code == 0
    _, lossy = emit.parse(mismatched.output)
    _, ideal = emit.parse(matched.output)
    assert lossy.loc[0, "kse"] == pytest.approx(0.05175, rel=0.03)
    assert ideal.loc[0, "skr"] > lossy.loc[0, "skr"]
    assert ideal.loc[0, "matched_energy"] == 1.0


def test_json_output(runner):
    result = run(runner, "keyrate", "--format", "json")
    assert result.exit_code == 0, result.output
    payload = json.loads(result.output)
    assert set(payload) == {"config", "records"}
    assert payload["config"]["format"] == "json"
    assert len(payload["records"]) == 1


def test_output_file(runner, tmp_path):
    target = tmp_path / "keyrate.csv"
    result = run(runner, "keyrate", "--out", str(target))
    assert result.exit_code == 0, result.output
    assert result.output == ""
    config, frame = emit.parse(target.read_text(encoding="utf-8"))
    assert config["out"] == str(target)
    assert len(frame) == 1


def test_config_file_sits_between_defaults_and_flags(runner, tmp_path):
    settings = tmp_path / "run.toml"
    settings.write_text("nbar = 5.0\nrolloff = 0.3\n", encoding="utf-8")

    result = run(runner, "keyrate", "--config", str(settings))
    _, frame = emit.parse(result.output)
    assert (frame.loc[0, "nbar"], frame.loc[0, "rolloff"]) == (5.0, 0.3)

    result = run(runner, "keyrate", "--config", str(settings), "--nbar", "7")
    _, frame = emit.parse(result.output)
    assert (frame.loc[0, "nbar"], frame.loc[0, "rolloff"]) == (7.0, 0.3)


def test_unknown_config_key_is_a_usage_error(runner, tmp_path):
    settings = tmp_path / "run.toml"
    settings.write_text("photons = 5\n", encoding="utf-8")
    result = run(runner, "keyrate", "--config", str(settings))
    assert result.exit_code == 2


@pytest.mark.parametrize(
    "args",
    [
        ["keyrate", "--rolloff", "1.5"],
        ["keyrate", "--nbar", "0"],
        ["keyrate", "--tau", "0"],
        ["keyrate", "--format", "xml"],
        ["overlap", "--sampling", "random"],
    ],
)
def test_invalid_flags(runner, args):
    assert run(runner, *args).exit_code == 2


def test_overlap(runner):
    result = run(runner, "overlap")
    assert result.exit_code == 0, result.output
    config, frame = emit.parse(result.output)
    assert list(frame.columns) == ["j", "c_j", "c_j_sq", "cumulative", "matched_energy", "isi_factor"]
    assert list(frame["j"]) == list(range(-64, 65))
    assert 0.0 < frame.loc[64, "c_j_sq"] < 1.0
    assert frame["cumulative"].iloc[-1] <= 1.0 + 1e-9
    assert config["tail_bound"] < 1e-8
    assert config["out_of_band"] >= 0.0


def test_overlap_truncation_is_a_numerical_failure(runner):
    result = run(runner, "overlap", "--j-max", "5")
    assert result.exit_code == 3
    assert "truncation covers pulse support incompletely" in result.output


def test_overlap_tail_failure(runner):
    result = run(runner, "overlap", "--j-max", "8", "--tail-tol", "1e-15")
    assert result.exit_code == 3
    assert "ISI tail not converged" in result.output


def test_profile(runner):
    result = run(runner, "profile", "--points-per-symbol", "10")
    assert result.exit_code == 0, result.output
    _, frame = emit.parse(result.output)
    assert list(frame.columns) == ["t", "v", "u"]
    assert len(frame) == 2 * 45 + 1
    center = frame.loc[frame["t"].abs().idxmin()]
    assert center["v"] == pytest.approx(1.0 + 0.25 * (4.0 / math.pi - 1.0))
    assert frame.loc[0, "u"] == 0.0


def test_sps_table(runner):
    result = run(runner, "sps-table", "--distance-km", "50", "--sps", "3", "--sps", "2")
    assert result.exit_code == 0, result.output
    _, frame = emit.parse(result.output)
    assert list(frame["sps"]) == [2, 3]
    assert list(frame.columns) == ["distance_km", "sps", "rho_opt", "nbar_opt", "kse_opt", "skr_opt", "flags"]
    assert (frame["kse_opt"] > 0.0).all()


def test_distance_sweep_keeps_zero_rows(runner):
    result = run(
        runner, "distance-sweep", "--distance-km", "10", "--distance-km", "200", "--excess-noise", "0.01"
    )
    assert result.exit_code == 0, result.output
    _, frame = emit.parse(result.output)
    assert list(frame["distance_km"]) == [10.0, 200.0]
    assert frame.loc[0, "skr_opt"] > 0.0
    assert frame.loc[1, "skr_opt"] == 0.0
    assert frame.loc[1, "flags"] == "no positive key"


def test_sweep_without_key_exits_with_four(runner):
    result = run(runner, "distance-sweep", "--distance-km", "100", "--excess-noise", "0.5")
    assert result.exit_code == 4


def test_kse_surface(runner):
    result = run(runner, "kse-surface", "--distance-km", "20")
    assert result.exit_code == 0, result.output
    config, frame = emit.parse(result.output)
    assert len(frame) == config["surface_nbar_points"] * config["surface_rho_points"]
    assert (frame["kse"] >= 0.0).all()


def test_empty_surface_range(runner):
    result = run(runner, "kse-surface", "--surface-nbar-min", "10", "--surface-nbar-max", "1")
    assert result.exit_code == 2


def test_tau_override_clears_the_distance(runner):
    result = run(runner, "keyrate", "--tau", "0.5")
    assert result.exit_code == 0, result.output
    config, frame = emit.parse(result.output)
    assert config["distance_km"] is None
    assert config["tau"] == 0.5
    assert frame.loc[0, "tau"] == 0.5


def test_config_file_strings_are_parsed_like_flags(runner, tmp_path):
    settings = tmp_path / "run.toml"
    settings.write_text('rolloff = "0.3"\n', encoding="utf-8")
    result = run(runner, "keyrate", "--config", str(settings))
    assert result.exit_code == 0, result.output
    _, frame = emit.parse(result.output)
    assert frame.loc[0, "rolloff"] == 0.3


@pytest.mark.parametrize(
    "command,body",
    [
        ("keyrate", 'rolloff = "steep"\n'),
        ("keyrate", "nbar = [1, 2]\n"),
        ("keyrate", "rolloff = 1.5\n"),
        ("sps-table", 'sps = "three"\n'),
    ],
)
def test_badly_typed_config_values(runner, tmp_path, command, body):
    settings = tmp_path / "run.toml"
    settings.write_text(body, encoding="utf-8")
    result = run(runner, command, "--config", str(settings))
    assert result.exit_code == 2, result.output


def test_sps_table_survives_unconverged_roll_offs(runner):
    result = run(runner, "sps-table", "--distance-km", "20", "--sps", "1", "--sps", "3")
    assert result.exit_code == 0, result.output
    _, frame = emit.parse(result.output)
    assert list(frame["sps"]) == [1, 3]
    assert (frame["kse_opt"] > 0.0).all()
    assert "not converged" in frame.loc[0, "flags"]


def test_sps_table_matched(runner):
    result = run(runner, "sps-table", "--distance-km", "50", "--sps", "3", "--matched")
    assert result.exit_code == 0, result.output
    config, frame = emit.parse(result.output)
    assert config["matched"] is True
    assert frame.loc[0, "rho_opt"] == pytest.approx(0.01)
    assert "boundary optimum" in frame.loc[0, "flags"]


def test_sps_table_to_file(runner, tmp_path):
    target = tmp_path / "table.json"
    result = run(
        runner, "sps-table", "--distance-km", "50", "--sps", "3", "--format", "json", "--out", str(target)
    )
    assert result.exit_code == 0, result.output
    assert result.output == ""
    payload = json.loads(target.read_text(encoding="utf-8"))
    assert payload["records"][0]["sps"] == 3


def test_kse_surface_matched(runner):
    result = run(runner, "kse-surface", "--distance-km", "20", "--matched")
    assert result.exit_code == 0, result.output
    _, frame = emit.parse(result.output)
    assert (frame.groupby("nbar")["skr"].nunique() == 1).all()


def test_kse_surface_keeps_unconverged_rows(runner):
    result = run(runner, "kse-surface", "--distance-km", "20", "--surface-rho-min", "0.001")
    assert result.exit_code == 0, result.output
    config, frame = emit.parse(result.output)
    skipped = frame[frame["rho"] == 0.001]
    assert len(skipped) == config["surface_nbar_points"]
    assert (skipped["flags"] == "not converged").all()
    assert skipped["kse"].isna().all()
    assert (frame.loc[frame["flags"] == "none", "kse"] >= 0.0).all()
