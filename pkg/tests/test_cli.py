import json
import math
import os
import subprocess
import sys

import numpy as np
import pytest

from aggsteady.cli import main, read_profile
from aggsteady.steadyhd import b_bar


def run(args, capsys):
    code = main(args)
    out = capsys.readouterr()
    return code, out.out, out.err


def a4_radius(b, d):
    pre = d * (d + 2) * math.gamma(d / 2) / (2 * math.gamma((b + d) / 2) * math.gamma(2 - b / 2))
    return (pre * (1 / (4 - b) + 1 / math.sqrt((2 - b) * (6 - b)))) ** (-1 / (4 - b))


def test_construct_a4_profile(tmp_path, capsys):
    out = tmp_path / "p.csv"
    code, _, _ = run(["construct", "--a", "4", "--b", "0.5", "--d", "2", "--out", str(out)], capsys)
    assert code == 0
    header, r, rho = read_profile(out)
    assert list(header)[:8] == ["a", "b", "d", "R", "A", "M", "E", "valid"]
    assert header["R"] == pytest.approx(a4_radius(0.5, 2), rel=1e-12)
    assert len(r) == 512 and r[0] == 0 and r[-1] == pytest.approx(header["R"])
    assert header["valid"] is True
    assert np.all(rho[:-1] > 0)


def test_construct_b2_header_energy(capsys):
    code, out, _ = run(["construct", "--a", "2.5", "--b", "2", "--d", "1"], capsys)
    header = json.loads(out.splitlines()[0][1:])
    a, R = 2.5, header["R"]
    assert header["E"] == pytest.approx((2 - a) / (a * (4 - a)) * R * R, rel=1e-12)
    assert out.splitlines()[1] == "r,rho"


def test_construct_invalid_state_header(capsys):
    code, out, _ = run(["construct", "--a", "4", "--b", "0.9", "--d", "2", "--format", "json"], capsys)
    assert code == 0
    data = json.loads(out)
    assert data["valid"] is False and 0.9 > b_bar(2)
    assert len(data["r"]) == 512


def test_construct_out_of_region(capsys):
    code, _, err = run(["construct", "--a", "4", "--b", "1.5", "--d", "2"], capsys)
    assert code == 2
    assert "b_max" in err
    code, _, _ = run(["construct", "--a", "3", "--b", "1", "--d", "2"], capsys)
    assert code == 2
    code, _, _ = run(["construct", "--a", "4", "--b", "0.5", "--d", "2", "--samples", "1"], capsys)
    assert code == 2


def test_round_trip_verify(tmp_path, capsys):
    out = tmp_path / "p.csv"
    run(["construct", "--a", "4", "--b", "-0.5", "--d", "3", "--out", str(out)], capsys)
    code, text, _ = run(["verify", "--profile", str(out)], capsys)
    assert code == 0
    assert json.loads(text)["valid"] is True


def test_verify_failure_exit_code(capsys):
    code, text, _ = run(["verify", "--a", "4", "--b", "0.9", "--d", "2"], capsys)
    assert code == 1
    assert json.loads(text)["density_nonnegative"] is False


def test_energy_command(capsys):
    code, text, _ = run(["energy", "--a", "2.5", "--b", "2", "--d", "1"], capsys)
    data = json.loads(text)
    assert code == 0 and data["below_delta"] is True
    assert data["E_delta"] == pytest.approx((2 - 2.5) / (4 * 2.5))
    assert data["energy"] == pytest.approx(data["E"], rel=1e-10)


def test_sweep_over_a_reproduces_delta_comparison(capsys):
    code, text, _ = run(["sweep", "--a-min", "2.1", "--a-max", "2.9", "--steps", "9", "--b", "2",
                         "--d", "1", "--format", "json"], capsys)
    rows = json.loads(text)
    assert code == 0 and len(rows) == 9
    assert all(r["E"] < r["E_delta"] for r in rows)


def test_sweep_over_b_sign_change(capsys):
    code, text, _ = run(["sweep", "--a", "4", "--d", "2", "--b-min", "0", "--b-max", "1.3",
                         "--steps", "14"], capsys)
    lines = text.strip().splitlines()
    assert lines[0] == "a,b,R,E,E_delta,rho_at_0,valid,status"
    rows = [ln.split(",") for ln in lines[1:]]
    signs = [(float(r[1]), float(r[5]) > 0) for r in rows]
    first_neg = next(b for b, pos in signs if not pos)
    last_pos = max(b for b, pos in signs if pos)
    assert last_pos < 2 / 3 < first_neg


def test_sweep_records_out_of_region_rows(capsys):
    code, text, _ = run(["sweep", "--a", "4", "--d", "2", "--b-min", "1.0", "--b-max", "1.5",
                         "--steps", "3"], capsys)
    assert code == 0
    assert "out_of_region" in text.strip().splitlines()[-1]


def test_sweep_empty_grid(capsys):
    code, text, _ = run(["sweep", "--b-min", "0", "--b-max", "1", "--steps", "0"], capsys)
    assert code == 0
    assert text.strip() == "a,b,R,E,E_delta,rho_at_0,valid,status"


def test_particles_two_body(capsys):
    code, text, _ = run(["particles", "--n", "2", "--d", "1", "--a", "2.5", "--b", "2"], capsys)
    data = json.loads(text)
    assert code == 0
    assert data["max_separation"] == pytest.approx(1.0, abs=1e-6)
    assert list(data)[:6] == ["N", "empirical_radius", "continuum_R", "relative_error",
                              "iterations", "final_max_force"]


def test_particles_non_convergence_exit_code(capsys):
    code, text, _ = run(["particles", "--n", "30", "--steps", "3"], capsys)
    assert code == 1
    assert json.loads(text)["converged"] is False


def test_identities_default_and_subset(capsys):
    code, text, _ = run(["identities"], capsys)
    assert code == 0
    assert "FAIL" not in text
    code, text, _ = run(["identities", "--nu", "0.5", "--R", "1"], capsys)
    assert code == 0
    line = next(ln for ln in text.splitlines() if ln.startswith("1d_zeroth nu=0.5"))
    assert float(line.split("exact=")[1]) == pytest.approx(math.pi * math.sqrt(2), rel=1e-14)


def test_identities_fault_injection(capsys):
    code, text, _ = run(["identities", "--inject-fault", "pv_signed_1"], capsys)
    assert code == 1
    assert "FAIL pv_signed_1" in text


def test_deterministic_output(tmp_path, capsys):
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    for p in (a, b):
        run(["construct", "--a", "6", "--b", "0.2", "--d", "2", "--out", str(p)], capsys)
    assert a.read_text() == b.read_text()


def test_module_entry_point_and_tolerance_env(tmp_path):
    env = dict(os.environ, AGGSTEADY_RTOL="1e-7")
    res = subprocess.run([sys.executable, "-m", "aggsteady", "construct", "--a", "2", "--b", "0.5",
                          "--d", "1", "--samples", "3"], capture_output=True, text=True, env=env)
    assert res.returncode == 0
    assert json.loads(res.stdout.splitlines()[0][1:])["rel_tol"] == 1e-7
    res = subprocess.run([sys.executable, "-m", "aggsteady", "--help"], capture_output=True, text=True)
    assert "AGGSTEADY_RTOL" in res.stdout
