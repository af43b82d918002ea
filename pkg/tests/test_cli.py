import json

import numpy as np
import pytest

from enzpair.cli import main
from enzpair.io import read_spectrum_csv
from enzpair.oracle import sech2_spectrum_array

SMALL_ENZ = """\
scenario: {kind: enz_real_only}
material: {preset: ito-luk2015}
pulse: {tau_fs: [5, 20], delta_r: 1.0}
grid: {lambda_min_nm: 1300, lambda_max_nm: 1500, n_points: 5}
"""


@pytest.fixture
def small_config(tmp_path):
    p = tmp_path / "run.yaml"
    p.write_text(SMALL_ENZ)
    return p


def read_csv_rows(text):
    lines = [ln for ln in text.splitlines() if not ln.startswith("#")]
    header = lines[0].split(",")
    return header, [dict(zip(header, ln.split(","))) for ln in lines[1:]]


def test_dispersion_crosses_zero_near_1377(tmp_path):
    out = tmp_path / "d.csv"
    assert main(["dispersion", "--preset", "ito-luk2015", "--out", str(out), "--n-points", "801"]) == 0
    _, rows = read_csv_rows(out.read_text())
    lam = np.array([float(r["lambda_nm"]) for r in rows])
    eps = np.array([float(r["eps_real"]) for r in rows])
    i = np.flatnonzero(np.diff(np.sign(eps)))[0]
    assert abs(lam[i] - 1377) / 1377 < 0.01
    info = json.loads(out.with_suffix(".json").read_text())
    assert abs(info["lambda_enz_nm"] - 1377) / 1377 < 0.01


def test_oracle_passthrough(capsys):
    assert main(["oracle", "--n0", "1", "--delta", "1e-3", "--tau-fs", "5", "--n-points", "20"]) == 0
    header, rows = read_csv_rows(capsys.readouterr().out)
    assert header == ["k_per_m", "omega_rad_per_s", "lambda_nm", "beta_sq", "n_photons", "converged"]
    k = np.array([float(r["k_per_m"]) for r in rows])
    b = np.array([float(r["beta_sq"]) for r in rows])
    np.testing.assert_allclose(b, sech2_spectrum_array(1.0, 1e-3, 5e-15, k), rtol=1e-12)


def test_spectrum_writes_csv_and_sidecar(tmp_path, small_config):
    out = tmp_path / "s.csv"
    assert main(["spectrum", "--config", str(small_config), "--out", str(out)]) == 0
    text = out.read_text()
    assert text.startswith("# config_sha256: ")
    result, h = read_spectrum_csv(out)
    assert len(result.rows) == 5 and all(r.converged for r in result.rows)
    meta = json.loads(out.with_suffix(".json").read_text())
    assert meta["config_sha256"] == h
    assert meta["run"]["tau_fs"] == pytest.approx(5.0)
    assert "solver.rtol" in meta["defaults_applied"]


def test_spectrum_tau_override_and_json(tmp_path, small_config, capsys):
    assert main(["spectrum", "--config", str(small_config), "--tau-fs", "20", "--format", "json"]) == 0
    doc = json.loads(capsys.readouterr().out)
    assert doc["metadata"]["tau_fs"] == pytest.approx(20.0)
    assert len(doc["rows"]) == 5


def test_sweep_writes_one_file_per_tau(tmp_path, small_config):
    out = tmp_path / "sw.csv"
    assert main(["sweep", "--config", str(small_config), "--out", str(out)]) == 0
    assert (tmp_path / "sw_tau5fs.csv").exists() and (tmp_path / "sw_tau20fs.csv").exists()


def test_validate_and_check_round_trip(tmp_path, small_config, capsys):
    out = tmp_path / "s.csv"
    main(["spectrum", "--config", str(small_config), "--out", str(out)])
    capsys.readouterr()
    assert main(["validate", "--check", str(out)]) == 0
    report = json.loads(capsys.readouterr().out)
    assert report["passed"]
    names = {c["name"] for c in report["checks"]}
    assert {"rows_reproduce", "config_hash_matches", "enz_sign_change"} <= names


def test_validate_detects_tampering(tmp_path, small_config, capsys):
    out = tmp_path / "s.csv"
    main(["spectrum", "--config", str(small_config), "--out", str(out)])
    lines = out.read_text().splitlines()
    cells = lines[3].split(",")
    cells[3] = repr(float(cells[3]) * 1.001)
    lines[3] = ",".join(cells)
    out.write_text("\n".join(lines) + "\n")
    capsys.readouterr()
    # the tampered row is the peak, which validate re-solves
    assert main(["validate", "--check", str(out)]) == 1


def test_photons_rescales(tmp_path, small_config):
    out = tmp_path / "s.csv"
    main(["spectrum", "--config", str(small_config), "--out", str(out)])
    p2 = tmp_path / "p.csv"
    assert main(["photons", "--in", str(out), "--damping-factor", "0.1", "--L-um", "2", "--out", str(p2)]) == 0
    a, ha = read_spectrum_csv(out)
    b, hb = read_spectrum_csv(p2)
    assert ha == hb
    for ra, rb in zip(a.rows, b.rows):
        assert rb.beta_sq == ra.beta_sq
        assert rb.n_photons == pytest.approx(ra.n_photons * 4 * 0.1 / np.exp(-2), rel=1e-14)


def test_errors_are_json(tmp_path, capsys):
    bad = tmp_path / "bad.yaml"
    bad.write_text("scenario: {kind: enz_full}\npulse: {tau_fs: -5}\n")
    assert main(["spectrum", "--config", str(bad)]) == 2
    err = json.loads(capsys.readouterr().err)
    assert err["error"] == "validation_error" and err["key"] == "pulse.tau_fs"

    bad.write_text("scenario: [\n")
    assert main(["spectrum", "--config", str(bad)]) == 2
    err = json.loads(capsys.readouterr().err)
    assert err["error"] == "parse_error" and err["line"] is not None

    assert main(["photons", "--in", str(tmp_path / "missing.csv")]) == 2
    assert json.loads(capsys.readouterr().err)["error"] == "io_error"


def test_determinism_across_threads(tmp_path, small_config):
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    main(["spectrum", "--config", str(small_config), "--out", str(a)])
    main(["spectrum", "--config", str(small_config), "--out", str(b), "--threads", "2"])
    assert a.read_bytes() == b.read_bytes()
