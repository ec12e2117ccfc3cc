import csv
import io
import json
import subprocess
import sys
import time

import pytest

from fracrefl.cli import COLUMNS, main


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def rows(text):
    return list(csv.DictReader(io.StringIO(text)))


def test_reflect_airy_row(capsys):
    code, out, _ = run(capsys, "reflect", "--alpha", "1", "--theta", "0.01", "--method", "airy")
    assert code == 0
    assert out.splitlines()[0] == ",".join(COLUMNS)
    r = rows(out)[0]
    assert abs(float(r["im_R"]) - 0.00125) < 1e-6
    # exact value from a 50-digit evaluation of the Airy ratio
    assert abs(float(r["re_R"]) + 9.371912615511459e-06) < 1e-15


def test_reflect_airy_row_real_part_quoted_as_zero(capsys):
    # the quoted example has re_R within 1e-6 of 0; the exact coefficient
    # carries a second-order real part -(3/32) theta^2 ~ -9.4e-6
    _, out, _ = run(capsys, "reflect", "--alpha", "1", "--theta", "0.01", "--method", "airy")
    assert abs(float(rows(out)[0]["re_R"])) < 1e-6


@pytest.mark.parametrize("argv", [
    ["reflect", "--alpha", "0", "--theta", "0.1", "--method", "volterra"],
    ["reflect", "--alpha", "2", "--theta", "0.1", "--method", "airy"],
    ["reflect", "--alpha", "1", "--c0", "1500", "--ell", "10", "--omega", "100", "--eta", "1"],
    ["reflect", "--alpha", "1"],
    ["reflect", "--alpha", "1", "--theta", "0.1", "--c0", "1500"],
    ["reflect", "--theta", "0.1"],
    ["frobnicate"],
])
def test_argument_errors_exit_2(capsys, argv):
    code, _, err = run(capsys, *argv)
    assert code == 2
    assert err.startswith("error:")


def test_solver_failure_exit_3(capsys):
    code, _, err = run(capsys, "reflect", "--alpha", "3", "--theta", "1e8")
    assert code == 3
    assert "solver failure" in err


def test_volterra_and_shooting_agree(capsys):
    got = []
    for method in ("volterra", "shooting"):
        code, out, _ = run(capsys, "reflect", "--alpha", "2", "--theta", "0.05", "--method", method)
        assert code == 0
        r = rows(out)[0]
        got.append(complex(float(r["re_R"]), float(r["im_R"])))
    assert abs(got[0] - got[1]) < 1e-6


def test_physical_parameters_print_theta(capsys):
    code, out, _ = run(capsys, "reflect", "--alpha", "1", "--c0", "2000", "--ell", "100",
                       "--omega", "62.83185307179586", "--method", "asymptotic")
    assert code == 0
    r = rows(out)[0]
    assert float(r["theta"]) == pytest.approx(0.31831, abs=5e-6)
    assert float(r["omega"]) == pytest.approx(62.83185307179586)


def test_fresnel(capsys):
    code, out, _ = run(capsys, "reflect", "--alpha", "0", "--c-ratio", "2", "--method", "fresnel")
    assert code == 0
    assert float(rows(out)[0]["re_R"]) == pytest.approx(1 / 3, abs=1e-15)


def test_numbers_round_trip(capsys):
    _, out, _ = run(capsys, "reflect", "--alpha", "1.5", "--theta", "0.1", "--method", "asymptotic")
    for field in rows(out)[0].values():
        try:
            v = float(field)
        except ValueError:
            continue
        if v != v:
            continue
        assert float("%.17g" % v) == v
        assert field == "%.17g" % v


def test_out_file(capsys, tmp_path):
    dest = tmp_path / "r.csv"
    code, out, _ = run(capsys, "reflect", "--alpha", "1", "--theta", "0.1", "--method", "airy",
                       "--out", str(dest))
    assert code == 0 and out == ""
    assert len(rows(dest.read_text())) == 1


def test_sweep_airy(capsys):
    code, out, _ = run(capsys, "sweep", "--alpha-list", "1", "--theta-grid", "1e-3:1e-1:9",
                       "--method", "airy")
    assert code == 0
    data = rows(out)
    assert len(data) == 9
    mags = [float(r["abs_R"]) for r in data]
    assert all(a < b for a, b in zip(mags, mags[1:]))


def test_sweep_order_and_determinism(capsys):
    argv = ["sweep", "--alpha-list", "0.5,2", "--theta-grid", "1e-3:1e-1:3", "--method", "volterra"]
    _, serial, _ = run(capsys, *argv)
    _, parallel, _ = run(capsys, *argv, "--jobs", "4")
    assert serial == parallel
    order = [(float(r["alpha"]), float(r["theta"])) for r in rows(serial)]
    assert order == sorted(order)


@pytest.mark.parametrize("grid", ["", "1e-3:1e-1:0", "1e-1:1e-3:3", "abc"])
def test_sweep_bad_grid(capsys, grid):
    code, _, _ = run(capsys, "sweep", "--alpha-list", "1", "--theta-grid", grid, "--method", "airy")
    assert code == 2


def test_synth_outputs(capsys, tmp_path):
    code, _, _ = run(capsys, "synth", "--alpha", "1.5", "--ell", "100", "--c0", "1500",
                     "--fpeak", "50", "--dt", "0.001", "--n", "1000", "--outdir", str(tmp_path))
    assert code == 0
    side = json.loads((tmp_path / "synth.json").read_text())
    assert -1.58 <= side["spectral_slope"] <= -1.42
    lines = (tmp_path / "reflected.csv").read_text().splitlines()
    assert lines[0].split(",")[2] == "1000" and len(lines) == 1001


def test_synth_deterministic(capsys, tmp_path):
    argv = ["synth", "--alpha", "1", "--ell", "80", "--c0", "1500", "--fpeak", "40",
            "--dt", "0.001", "--n", "900"]
    run(capsys, *argv, "--outdir", str(tmp_path / "a"))
    run(capsys, *argv, "--outdir", str(tmp_path / "b"))
    for name in ("incident.csv", "reflected.csv", "synth.json"):
        assert (tmp_path / "a" / name).read_bytes() == (tmp_path / "b" / name).read_bytes()


def test_synth_grazing(capsys, tmp_path):
    code, _, _ = run(capsys, "synth", "--alpha", "1", "--ell", "100", "--c0", "1500",
                     "--fpeak", "50", "--dt", "0.001", "--n", "1000", "--eta", "1",
                     "--outdir", str(tmp_path))
    assert code == 2


def test_validate_quick(tmp_path):
    dest = tmp_path / "v.json"
    t = time.perf_counter()
    proc = subprocess.run([sys.executable, "-m", "fracrefl.cli", "validate", "--quick",
                           "--out", str(dest)], capture_output=True, text=True)
    assert time.perf_counter() - t < 30
    assert proc.returncode == 0, proc.stderr
    report = json.loads(dest.read_text())
    for check in report.values():
        assert set(check) == {"pass", "measured", "expected", "tolerance"}
    assert 1.85 <= report["alpha1_remainder_order"]["measured"] <= 2.15


def test_validate_injected_contraction_failure():
    proc = subprocess.run([sys.executable, "-m", "fracrefl.cli", "validate", "--quick",
                           "--inject-contraction-failure"], capture_output=True, text=True)
    assert proc.returncode == 1
    report = json.loads(proc.stdout)
    assert report["contraction_injection"]["pass"] is False
    assert report["contraction_injection"]["measured"] >= 2
