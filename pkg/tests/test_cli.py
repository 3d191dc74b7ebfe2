import csv
import io
import json
import subprocess
import sys

import pytest

from cpwedge.cli import main
from cpwedge.config import RunConfig, load_config
from cpwedge.geometry import ConfigurationError
from cpwedge.runs import run_plate, run_wedge, wedge_columns

FAST = "[integration]\nrel_tol = 0.02\nmax_order = 2\n"


def _rows(text):
    body = [line for line in text.splitlines() if not line.startswith("#")]
    return list(csv.DictReader(io.StringIO("\n".join(body))))


def _write(tmp_path, text, name="run.ini"):
    p = tmp_path / name
    p.write_text(text)
    return str(p)


def test_config_sections():
    cfg = load_config(text="""
[media]
epsilon1 = 3, 10
[geometry]
theta = -0.75
r_over_d = -0.1
d = 2
[sweep]
phi_min = 0
phi_max = 0.4
phi_count = 3
[integration]
rel_tol = 0.05
seed = 4
strict = yes
[output]
path = out.csv
""")
    assert cfg.epsilon1 == [3.0, 10.0]
    assert (cfg.theta, cfg.r_over_d, cfg.d) == (-0.75, -0.1, 2.0)
    assert cfg.phi == pytest.approx([0.0, 0.2, 0.4])
    assert (cfg.rel_tol, cfg.seed, cfg.strict, cfg.output) == (0.05, 4, True, "out.csv")
    assert cfg.wedge(0.2).R == pytest.approx(-0.2)


def test_config_defaults_and_overrides():
    cfg = load_config()
    assert cfg == RunConfig()
    assert cfg.r_over_d == 0.1 and cfg.epsilon1 == [10.0]
    assert load_config(seed=9, rel_tol=None).seed == 9


@pytest.mark.parametrize("text", [
    "[geometry]\ntheta = 2\n",
    "[media]\nepsilon1 = -3\n",
    "[media]\nepsilon1 = abc\n",
    "[sweep]\nphi = 2.5\n",
    "[integration]\nmax_order = -1\n",
    "not an ini file",
])
def test_config_errors(text):
    with pytest.raises(ConfigurationError):
        load_config(text=text)


def test_plate_rows_and_errors():
    cfg = load_config(text="[media]\nepsilon1 = 1, 10\n" + FAST)
    rows = run_plate(cfg.__class__(**{**cfg.__dict__, "theta": 0.0, "r_over_d": 0.0}))
    zero, ten = rows
    assert zero["upsilon_mse"] == 0.0 and zero["upsilon_exact"] == 0.0
    assert ten["upsilon_exact"] == pytest.approx(0.0783, abs=5e-5)
    assert ten["upsilon_mse"] == pytest.approx(0.0786, rel=0.02)
    for key in [k for k in ten if k.startswith("upsilon_") and k not in ("upsilon_spectral_U",)]:
        if not key.startswith("upsilon_U"):
            assert "err_" + key in ten


def test_wedge_columns_have_errors():
    cols = wedge_columns(2)
    for c in cols:
        if c.startswith(("upsilon_", "ratio_")) and not c.startswith("upsilon_U"):
            assert "err_" + c in cols


def test_cli_csv_byte_identical(tmp_path):
    ini = _write(tmp_path, "[media]\nepsilon1 = 10\n[sweep]\nphi = 0, 0.3\n" + FAST)
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    assert main(["wedge", "--config", ini, "--output", str(a), "--threads", "2"]) == 0
    assert main(["wedge", "--config", ini, "--output", str(b)]) == 0
    ta, tb = a.read_text(), b.read_text()
    # headers differ only in the echoed output path and thread count
    strip = lambda t: [l for l in t.splitlines() if not l.startswith(("# output", "# threads"))]  # noqa: E731
    assert strip(ta) == strip(tb)
    rows = _rows(ta)
    assert [float(r["phi"]) for r in rows] == [0.0, 0.3]
    assert list(rows[0]) == wedge_columns(2)
    assert ta.startswith("# cpwedge ")


def test_theta_zero_wedge_matches_plate(tmp_path):
    ini = _write(tmp_path, "[geometry]\ntheta = 0\n[media]\nepsilon1 = 10\n" + FAST)
    cfg = load_config(ini)
    plate = run_plate(cfg)[0]
    wedge = run_wedge(cfg)[0]
    assert wedge["upsilon_mse"] == pytest.approx(plate["upsilon_mse"], abs=plate["err_upsilon_mse"])
    assert wedge["upsilon_pfa"] == pytest.approx(plate["upsilon_exact"], rel=1e-12)
    for L in range(3):
        assert wedge[f"dU{L}"] == pytest.approx(plate[f"dU{L}"], abs=3 * plate[f"err_dU{L}"])


def test_pec_wedge_command(tmp_path, capsys):
    ini = _write(tmp_path, "[media]\nepsilon1 = 10, 100\n[sweep]\nphi = 0, 0.5\n")
    assert main(["pec-wedge", "--config", ini]) == 0
    rows = _rows(capsys.readouterr().out)
    assert float(rows[0]["upsilon_pec_sharp"]) == pytest.approx(0.050295, abs=1e-6)
    assert "upsilon_red_eps100" in rows[0] and "err_upsilon_red_eps100" in rows[0]


def test_exit_codes(tmp_path, capsys):
    assert main(["validate"]) == 0
    report = json.loads(capsys.readouterr().out)
    assert report["passed"] and {c["name"] for c in report["checks"]} >= {"shanks", "frame_orthonormality"}

    assert main(["validate", "--inject-fault", "frame_orthonormality"]) == 1
    report = json.loads(capsys.readouterr().out)
    failed = [c["name"] for c in report["checks"] if not c["passed"]]
    assert failed == ["frame_orthonormality"]

    bad = _write(tmp_path, "[geometry]\ntheta = 3\n", "bad.ini")
    assert main(["wedge", "--config", bad]) == 2
    assert main(["plate", "--config", str(tmp_path / "missing.ini")]) == 2

    strict = _write(tmp_path, "[integration]\nrel_tol = 1e-6\nmax_evals = 4096\nmax_order = 0\n", "s.ini")
    assert main(["plate", "--config", strict, "--output", str(tmp_path / "s.csv")]) == 0
    assert main(["plate", "--config", strict, "--strict", "--output", str(tmp_path / "s.csv")]) == 3


def test_module_entry_point():
    out = subprocess.run([sys.executable, "-m", "cpwedge", "--version"], capture_output=True, text=True)
    assert out.returncode == 0 and "cpwedge" in out.stdout
