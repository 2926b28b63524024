"""End-to-end CLI runs: exit codes, file outputs, determinism."""

import json
import subprocess
import sys

import pytest

from twinfringes import fringe_radius
from twinfringes.cli import main

from conftest import make_config

PARTIAL = """\
lambda_a_nm = 1550
lambda_b_nm = 810
lambda_p_nm = 532
d_a_mm = 11.7
f0_mm = 150
sigma_b = 2.36e-2
sigma_theta = 9.37e-4
model = gaussian_partial
"""

MAXIMAL = PARTIAL.replace("sigma_theta = 9.37e-4\n", "").replace(
    "gaussian_partial", "maximal"
)
UNCORRELATED = PARTIAL.replace("sigma_theta = 9.37e-4\n", "").replace(
    "gaussian_partial", "uncorrelated"
)


@pytest.fixture
def cfg_file(tmp_path):
    path = tmp_path / "partial.cfg"
    path.write_text(PARTIAL)
    return str(path)


def _cfg(tmp_path, text, name):
    path = tmp_path / name
    path.write_text(text)
    return str(path)


def test_simulate_writes_image_profile_manifest(tmp_path, cfg_file):
    out = tmp_path / "run"
    code = main(
        ["simulate", "--config", cfg_file, "--out", str(out),
         "--screen-mm", "1.5", "--resolution", "96"]
    )
    assert code == 0
    assert (tmp_path / "run.pgm").exists()
    assert (tmp_path / "run.csv").exists()
    manifest = json.loads((tmp_path / "run.manifest.json").read_text())
    assert manifest["command"] == "simulate"
    assert manifest["config"]["correlation_model"] == "gaussian_partial"
    assert len(manifest["outputs"]) == 2
    assert manifest["duration_s"] >= 0.0


def test_simulate_is_deterministic(tmp_path, cfg_file):
    args = ["simulate", "--config", cfg_file, "--screen-mm", "1.0", "--resolution", "64"]
    assert main(args + ["--out", str(tmp_path / "a")]) == 0
    assert main(args + ["--out", str(tmp_path / "b")]) == 0
    assert (tmp_path / "a.pgm").read_bytes() == (tmp_path / "b.pgm").read_bytes()
    assert (tmp_path / "a.csv").read_bytes() == (tmp_path / "b.csv").read_bytes()


def test_simulate_requires_out(cfg_file):
    assert main(["simulate", "--config", cfg_file]) == 1


def test_unknown_flag_is_usage_error(cfg_file):
    assert main(["simulate", "--config", cfg_file, "--nope"]) == 1


def test_missing_config_is_io_error(tmp_path):
    absent = str(tmp_path / "absent.cfg")
    assert main(["simulate", "--config", absent, "--out", str(tmp_path / "x")]) == 3


def test_bad_resolution_is_usage_error(tmp_path, cfg_file):
    code = main(
        ["simulate", "--config", cfg_file, "--out", str(tmp_path / "x"), "--resolution", "8"]
    )
    assert code == 1


def test_visibility_sigma_scan(tmp_path, cfg_file):
    out = tmp_path / "scan"
    code = main(
        ["visibility", "--config", cfg_file, "--out", str(out),
         "--sigma-list", "0,9.37e-4,1.99e-3"]
    )
    assert code == 0
    lines = (tmp_path / "scan.csv").read_text().splitlines()
    assert lines[0] == "sigma_theta,v0,hwhm_m"
    rows = [line.split(",") for line in lines[1:]]
    # perfect correlation: v0 = 1 and no half point, so a blank hwhm field
    assert float(rows[0][1]) == 1.0
    assert rows[0][2] == ""
    assert float(rows[1][1]) == pytest.approx(0.996118297317, rel=1e-10)
    assert float(rows[1][2]) == pytest.approx(9.5023261e-4, rel=1e-7)
    assert float(rows[2][1]) == pytest.approx(0.928929436300, rel=1e-10)
    assert float(rows[2][2]) == pytest.approx(4.87081099408e-4, rel=1e-10)
    # both columns shrink as the correlation weakens
    assert float(rows[2][1]) < float(rows[1][1])
    assert float(rows[2][2]) < float(rows[1][2])


def test_visibility_rho_scan(tmp_path, cfg_file):
    out = tmp_path / "rho"
    code = main(
        ["visibility", "--config", cfg_file, "--out", str(out), "--rho-mm-list", "0,0.6,1.5"]
    )
    assert code == 0
    lines = (tmp_path / "rho.csv").read_text().splitlines()
    assert lines[0] == "rho_m,visibility"
    values = [float(line.split(",")[1]) for line in lines[1:]]
    assert values[0] == pytest.approx(0.996118297317, rel=1e-10)
    assert values[1] == pytest.approx(0.772281240225, rel=1e-10)
    assert values[2] == pytest.approx(0.0718633085399, rel=1e-10)


def test_visibility_requires_exactly_one_list(tmp_path, cfg_file):
    out = str(tmp_path / "scan")
    assert main(["visibility", "--config", cfg_file, "--out", out]) == 1
    assert (
        main(
            ["visibility", "--config", cfg_file, "--out", out,
             "--sigma-list", "1e-3", "--rho-mm-list", "0.5"]
        )
        == 1
    )
    assert not (tmp_path / "scan.csv").exists()


def test_invert_reports_width_and_cross_check(capsys, cfg_file):
    assert main(["invert", "--config", cfg_file, "--v0", "0.996118297317"]) == 0
    report = dict(
        line.split(" = ") for line in capsys.readouterr().out.strip().splitlines()
    )
    assert float(report["sigma_theta_rad"]) == pytest.approx(9.37e-4, rel=1e-9)
    assert float(report["conditional_gaussian_std_rad"]) == pytest.approx(
        0.5 * 9.37e-4, rel=1e-9
    )
    assert float(report["cross_check_rel"]) < 1e-9


def test_invert_with_ring_radius(capsys, cfg_file):
    code = main(
        ["invert", "--config", cfg_file, "--v0", "0.996118297317",
         "--rho1-mm", "1.27594659067"]
    )
    assert code == 0
    report = dict(
        line.split(" = ") for line in capsys.readouterr().out.strip().splitlines()
    )
    assert float(report["lambda_eq_nm"]) == pytest.approx(423.290323, abs=1e-4)
    assert float(report["lambda_a_nm"]) == pytest.approx(1550.0, abs=1e-3)


def test_invert_perfect_visibility_note(capsys, cfg_file):
    assert main(["invert", "--config", cfg_file, "--v0", "1.0"]) == 0
    out = capsys.readouterr().out
    assert "sigma_theta_rad = 0.000000000000e+00" in out
    assert "maximal correlation" in out


def test_invert_rejects_out_of_range_visibility(cfg_file):
    assert main(["invert", "--config", cfg_file, "--v0", "1.5"]) == 1
    assert main(["invert", "--config", cfg_file, "--v0", "0"]) == 1


def test_invert_writes_file_when_out_given(tmp_path, cfg_file):
    out = tmp_path / "width"
    assert main(["invert", "--config", cfg_file, "--v0", "0.9", "--out", str(out)]) == 0
    text = (tmp_path / "width.txt").read_text()
    assert "sigma_theta_rad" in text
    manifest = json.loads((tmp_path / "width.manifest.json").read_text())
    assert manifest["command"] == "invert"


def test_eqwavelength_end_to_end(tmp_path, cfg_file):
    rows = ["d_a_mm,rho1_mm"]
    for d_mm in (5.0, 8.0, 11.7, 15.0, 20.0):
        geo = make_config(d_a=d_mm * 1e-3)
        rows.append(f"{d_mm},{fringe_radius(1, geo) * 1e3:.12e}")
    data = tmp_path / "rings.csv"
    data.write_text("\n".join(rows) + "\n")

    out = tmp_path / "fit"
    code = main(["eqwavelength", "--config", cfg_file, "--data", str(data), "--out", str(out)])
    assert code == 0
    report = dict(
        line.split(" = ") for line in (tmp_path / "fit.txt").read_text().strip().splitlines()
    )
    assert report["n_separations"] == "5"
    assert float(report["lambda_eq_nm"]) == pytest.approx(423.290323, abs=1e-4)
    assert float(report["lambda_eq_stderr_nm"]) == pytest.approx(0.0, abs=1e-4)
    assert float(report["lambda_a_nm"]) == pytest.approx(1550.0, abs=1e-3)


def test_eqwavelength_rejects_bad_header(tmp_path, cfg_file):
    data = tmp_path / "rings.csv"
    data.write_text("separation,radius\n5,1.0\n")
    assert main(["eqwavelength", "--config", cfg_file, "--data", str(data)]) == 1


@pytest.mark.parametrize("text,name", [
    (PARTIAL, "partial.cfg"),
    (MAXIMAL, "maximal.cfg"),
    (UNCORRELATED, "uncorrelated.cfg"),
])
def test_oracle_check_passes_per_model(tmp_path, text, name):
    cfg = _cfg(tmp_path, text, name)
    out = tmp_path / "oracle"
    assert main(["oracle", "--config", cfg, "--out", str(out)]) == 0
    report = json.loads((tmp_path / "oracle.json").read_text())
    assert report["passed"] is True
    assert report["max_abs_visibility_discrepancy"] <= report["visibility_tolerance"]
    assert report["max_peak_relative_rate_discrepancy"] <= report["rate_tolerance"]


def test_oracle_rejects_coarse_grid(tmp_path, cfg_file):
    out = str(tmp_path / "oracle")
    assert main(["oracle", "--config", cfg_file, "--out", out, "--grid-points", "64"]) == 1


def test_unresolvable_quadrature_exits_tolerance(tmp_path):
    # a 117 m source separation leaves ~1e3 fringe oscillations inside the
    # shell integral support; the quadrature correctly refuses
    text = PARTIAL.replace("d_a_mm = 11.7", "d_a_mm = 117000")
    cfg = _cfg(tmp_path, text, "extreme.cfg")
    code = main(
        ["simulate", "--config", cfg, "--out", str(tmp_path / "x"), "--resolution", "64"]
    )
    assert code == 2


def test_module_entry_point_runs_in_subprocess(cfg_file):
    proc = subprocess.run(
        [sys.executable, "-m", "twinfringes.cli", "invert", "--config", cfg_file,
         "--v0", "0.5"],
        capture_output=True,
        text=True,
        timeout=120,
    )
    assert proc.returncode == 0
    assert "sigma_theta_rad" in proc.stdout
