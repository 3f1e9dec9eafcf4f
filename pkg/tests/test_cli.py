import csv
import json
import math
import subprocess
import sys
from pathlib import Path

import pytest

from squeezelab import cli

GOLDEN = Path(__file__).parent / "golden"


def run_cli(*args: str) -> subprocess.CompletedProcess:
    cmd = [sys.executable, "-m", "squeezelab", *args]
    return subprocess.run(cmd, capture_output=True, text=True)


def read_csv(path):
    with open(path, newline="") as fh:
        return list(csv.DictReader(fh))


def test_help():
    cp = run_cli("--help")
    assert cp.returncode == 0
    assert "verify" in cp.stdout and "husimi" in cp.stdout


def test_missing_command_is_usage_error():
    assert run_cli().returncode == 2


@pytest.fixture(scope="module")
def verify_dir(tmp_path_factory):
    out = tmp_path_factory.mktemp("verify")
    cp = run_cli("verify", "--out", str(out))
    assert cp.returncode == 0, cp.stderr
    return out


def test_verify_default_passes(verify_dir):
    bundle = json.loads((verify_dir / "verify.json").read_text())
    assert bundle["passed"] and bundle["failures"] == []
    assert bundle["config"]["n_levels"] == 256
    names = {rep["identity_name"] for rep in bundle["reports"]}
    assert {"bogoliubov", "squeeze_factorization", "shift", "similarity_scaling", "disentangle"} <= names


def test_verify_is_deterministic(verify_dir, tmp_path):
    assert run_cli("verify", "--out", str(tmp_path)).returncode == 0
    assert (tmp_path / "verify.json").read_bytes() == (verify_dir / "verify.json").read_bytes()
    assert (tmp_path / "squeezed_overlap.csv").read_bytes() == (verify_dir / "squeezed_overlap.csv").read_bytes()


def test_verify_unreachable_tolerance(tmp_path):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"compare_tol": 1e-20}))
    cp = run_cli("verify", "--config", str(cfg), "--out", str(tmp_path))
    assert cp.returncode == 1
    assert "FAIL bogoliubov" in cp.stderr


def test_verify_invalid_levels(tmp_path):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"n_levels": 1}))
    assert run_cli("verify", "--config", str(cfg), "--out", str(tmp_path)).returncode == 2
    assert run_cli("verify", "--levels", "1", "--out", str(tmp_path)).returncode == 2


def test_flags_override_config(tmp_path):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"n_levels": 1}))
    cp = run_cli("state", "coherent", "--config", str(cfg), "--levels", "8", "--out", str(tmp_path))
    assert cp.returncode == 0, cp.stderr


def test_bad_config_key(tmp_path):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"levels": 64}))
    assert run_cli("verify", "--config", str(cfg)).returncode == 2


def test_buffer_must_stay_below_half(tmp_path):
    assert run_cli("state", "coherent", "--levels", "8", "--buffer", "4", "--out", str(tmp_path)).returncode == 2


def test_unwritable_output(tmp_path):
    blocker = tmp_path / "file"
    blocker.write_text("")
    cp = run_cli("husimi", "--x", "0", "--out", str(blocker / "sub"), "--no-figure")
    assert cp.returncode == 2


def test_husimi_golden(tmp_path):
    cp = run_cli("husimi", "--x", "1", "--re-min", "-2", "--re-max", "2", "--im-min", "-1", "--im-max", "1",
                 "--n-re", "5", "--n-im", "3", "--no-figure", "--out", str(tmp_path))
    assert cp.returncode == 0, cp.stderr
    assert (tmp_path / "husimi_x1.csv").read_bytes() == (GOLDEN / "husimi_x1.csv").read_bytes()


def test_husimi_underscore_flags_and_outputs(tmp_path):
    cp = run_cli("husimi", "--x", "6", "--re_min", "0", "--re_max", "8", "--out", str(tmp_path))
    assert cp.returncode == 0, cp.stderr
    rows = read_csv(tmp_path / "husimi_x6.csv")
    assert len(rows) == 81 * 81
    assert list(rows[0]) == ["re_beta", "im_beta", "q"]
    # Im outer, Re inner
    assert rows[0]["im_beta"] == rows[80]["im_beta"] != rows[81]["im_beta"]
    meta = json.loads((tmp_path / "husimi_x6.json").read_text())
    assert meta["refined_max"]["q"] == pytest.approx(math.pi ** -1.5, abs=1e-9)
    assert abs(meta["grid_argmax"]["re_beta"] - 6 / math.sqrt(2)) <= 0.1
    png = (tmp_path / "husimi_x6.png").read_bytes()
    assert png.startswith(b"\x89PNG")


def test_husimi_csv_line_endings_and_roundtrip(tmp_path):
    run_cli("husimi", "--x", "0.3", "--n-re", "4", "--n-im", "2", "--no-figure", "--out", str(tmp_path))
    raw = (tmp_path / "husimi_x0p3.csv").read_bytes()
    assert b"\r" not in raw and raw.endswith(b"\n")
    from squeezelab.analytics import husimi_q

    for row in read_csv(tmp_path / "husimi_x0p3.csv"):
        q = husimi_q(complex(float(row["re_beta"]), float(row["im_beta"])), 0.3)
        assert float(row["q"]) == pytest.approx(q, rel=1e-14)


def test_husimi_png_deterministic(tmp_path):
    a, b = tmp_path / "a", tmp_path / "b"
    for d in (a, b):
        assert run_cli("husimi", "--x", "0", "--n-re", "21", "--n-im", "21", "--out", str(d)).returncode == 0
    assert (a / "husimi_x0.png").read_bytes() == (b / "husimi_x0.png").read_bytes()


def test_limits_outputs(tmp_path):
    cp = run_cli("limits", "--x", "1", "--r-list", "0.5", "1", "1.5", "2", "--out", str(tmp_path))
    assert cp.returncode == 0, cp.stderr
    caves = read_csv(tmp_path / "caves.csv")
    yuen = read_csv(tmp_path / "yuen.csv")
    assert list(caves[0]) == ["r", "center_x", "fidelity", "norm"]
    fid = [float(row["fidelity"]) for row in caves]
    assert all(b > a for a, b in zip(fid, fid[1:]))
    for row in yuen[:3]:
        assert float(row["center_x"]) == pytest.approx(math.exp(-float(row["r"])), abs=1e-8)
    assert (tmp_path / "limits.png").exists()


def test_limits_zero_position(tmp_path):
    cp = run_cli("limits", "--x", "0", "--r_list", "0.5", "1", "--no-figure", "--out", str(tmp_path))
    assert cp.returncode == 0, cp.stderr
    for name in ("yuen.csv", "caves.csv"):
        assert all(float(row["center_x"]) == 0 for row in read_csv(tmp_path / name))


def test_limits_guard_names_r(tmp_path):
    cp = run_cli("limits", "--x", "1", "--r-list", "0.5", "3", "--levels", "64", "--out", str(tmp_path))
    assert cp.returncode == 1
    assert "r=3" in cp.stderr


def test_state_coherent_vacuum(tmp_path):
    cp = run_cli("state", "coherent", "--alpha", "0", "--levels", "6", "--out", str(tmp_path))
    assert cp.returncode == 0
    payload = json.loads((tmp_path / "state_coherent.json").read_text())
    assert list(payload) == ["kind", "params", "n_levels", "amps_re", "amps_im"]
    assert payload["amps_re"] == [1.0, 0.0, 0.0, 0.0, 0.0, 0.0]


def test_state_position_zero(tmp_path):
    run_cli("state", "position", "--x", "0", "--levels", "16", "--out", str(tmp_path))
    amps = json.loads((tmp_path / "state_position.json").read_text())["amps_re"]
    assert amps[0] == pytest.approx(0.7511255444649425, abs=1e-15)
    assert all(a == 0 for a in amps[1::2])


def test_state_yuen_norm(tmp_path):
    run_cli("state", "yuen", "--alpha", "1", "--r", "0.5", "--levels", "64", "--out", str(tmp_path))
    payload = json.loads((tmp_path / "state_yuen.json").read_text())
    n2 = sum(a * a for a in payload["amps_re"]) + sum(a * a for a in payload["amps_im"])
    assert math.sqrt(n2) == pytest.approx(1.0, abs=1e-8)


def test_state_unknown_kind():
    assert run_cli("state", "squeezed-cat").returncode == 2


def test_state_truncation_guard(tmp_path):
    assert run_cli("state", "coherent", "--alpha", "8", "--levels", "16", "--out", str(tmp_path)).returncode == 1


def test_main_in_process(tmp_path, capsys):
    assert cli.main(["state", "momentum", "--p", "0.5", "--levels", "8", "--out", str(tmp_path)]) == 0
    assert "state_momentum.json" in capsys.readouterr().out
