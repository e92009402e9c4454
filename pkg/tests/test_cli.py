import json
import math

import pytest

from taubnut.cli import ENV_WORKERS, main

FAST_VERIFY = ["--checks", "metric-inverse,flux-quantization"]


def test_describe_preset(capsys):
    assert main(["describe", "--preset", "two-center"]) == 0
    out = capsys.readouterr().out
    assert "k (centers):       2" in out
    assert "center 0:" in out and "center 1:" in out
    assert "8 pi m" in out


def test_describe_flat(capsys):
    assert main(["describe", "--preset", "flat"]) == 0
    out = capsys.readouterr().out
    assert "flat R^3 x S^1" in out


def test_verify_passes_and_writes_report(tmp_path, capsys):
    out_file = tmp_path / "report.json"
    code = main(["verify", "--preset", "taub-nut", "--out", str(out_file)]
                + FAST_VERIFY)
    assert code == 0
    table = capsys.readouterr().out
    assert "2/2 checks passed" in table
    assert "PASS" in table
    doc = json.loads(out_file.read_text())
    assert doc["verdict"] == "pass"
    assert [c["name"] for c in doc["checks"]] == ["metric-inverse", "flux-quantization"]
    assert all(c["wall_time_s"] is None for c in doc["checks"])


def test_verify_negative_control_exits_one(capsys):
    code = main(["verify", "--preset", "taub-nut",
                 "--negative-control", "perturbed-connection",
                 "--checks", "connection-curvature,metric-inverse"])
    assert code == 1
    out = capsys.readouterr().out
    assert "FAIL connection-curvature:" in out


def test_verify_unknown_check_exits_two(capsys):
    code = main(["verify", "--preset", "flat", "--checks", "nonsense"])
    assert code == 2
    assert "unknown checks" in capsys.readouterr().err


def test_verify_bad_workers_env_exits_two(monkeypatch, capsys):
    monkeypatch.setenv(ENV_WORKERS, "many")
    code = main(["verify", "--preset", "flat", "--checks", "metric-inverse"])
    assert code == 2
    assert ENV_WORKERS in capsys.readouterr().err


def test_verify_workers_env_is_used(monkeypatch, capsys):
    monkeypatch.setenv(ENV_WORKERS, "3")
    code = main(["verify", "--preset", "taub-nut"] + FAST_VERIFY)
    assert code == 0
    capsys.readouterr()


def test_mass_command(capsys):
    assert main(["mass", "--preset", "taub-nut"]) == 0
    out = capsys.readouterr().out
    assert "extrapolated limit: 0.500002" in out
    assert "(k m = 0.500000000000)" in out


def test_mass_bad_schedule_exits_two(capsys):
    code = main(["mass", "--preset", "taub-nut", "--radii", "8,16"])
    assert code == 2
    assert "at least 3 radii" in capsys.readouterr().err


def test_flux_command(capsys):
    assert main(["flux", "--preset", "two-center"]) == 0
    out = capsys.readouterr().out
    assert "-1.000000" in out          # per-center Chern number
    assert "-2.000000" in out          # total
    assert "additivity gap" in out


def test_decay_command(capsys):
    assert main(["decay", "--preset", "taub-nut", "--quantity", "fiber_defect"]) == 0
    out = capsys.readouterr().out
    assert "fitted exponent: -0.9" in out


def test_volume_command(capsys):
    assert main(["volume", "--preset", "taub-nut", "--radii", "16,32"]) == 0
    out = capsys.readouterr().out
    assert "cubic coefficient target:" in out


def test_fiber_length_command(capsys):
    assert main(["fiber-length", "--preset", "taub-nut", "--radii", "1,2,4"]) == 0
    out = capsys.readouterr().out
    assert "limit L = 8 pi m = %.9f" % (4.0 * math.pi) in out


def test_plot_data_csv(tmp_path, capsys):
    code = main(["plot-data", "--preset", "taub-nut",
                 "--quantity", "mass_convergence", "--radii", "8,16,32"])
    assert code == 0
    lines = capsys.readouterr().out.strip().splitlines()
    assert lines[0] == "radius,value"
    assert len(lines) == 5  # three estimates plus the extrapolated limit row
    last_r, last_v = lines[-1].split(",")
    assert float(last_r) == math.inf
    assert abs(float(last_v) - 0.5) < 1e-3
    # file output matches stdout output
    out_file = tmp_path / "series.csv"
    code = main(["plot-data", "--preset", "taub-nut",
                 "--quantity", "mass_convergence", "--radii", "8,16,32",
                 "--out", str(out_file)])
    assert code == 0
    capsys.readouterr()
    assert out_file.read_text().strip().splitlines() == lines


def test_plot_data_decay(capsys):
    code = main(["plot-data", "--preset", "taub-nut", "--quantity", "riem_decay",
                 "--radii", "32,64"])
    assert code == 0
    lines = capsys.readouterr().out.strip().splitlines()
    assert lines[0] == "radius,value"
    assert len(lines) == 3


def test_preset_list(capsys):
    assert main(["preset-list"]) == 0
    out = capsys.readouterr().out
    for name in ("flat", "taub-nut", "two-center", "ak<k>"):
        assert name in out


def test_config_file_round_trip(tmp_path, capsys):
    from taubnut.config import preset

    path = tmp_path / "cfg.json"
    path.write_text(json.dumps(preset("two-center").to_dict()))
    assert main(["describe", "--config", str(path)]) == 0
    out = capsys.readouterr().out
    assert "k (centers):       2" in out


def test_missing_config_file_exits_two(tmp_path, capsys):
    code = main(["describe", "--config", str(tmp_path / "absent.json")])
    assert code == 2
    assert "error:" in capsys.readouterr().err
