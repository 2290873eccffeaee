import csv
import io
import json
import math

import pytest

from squeezepacket.cli import main

BASE = ["--dx0", "1", "--dp0", "1"]


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def rows(text):
    body = [line for line in text.splitlines() if not line.startswith("#")]
    return list(csv.DictReader(io.StringIO("\n".join(body))))


def meta(text):
    pairs = (line[2:].split("=", 1) for line in text.splitlines() if line.startswith("# "))
    return {k: v for k, v in pairs}


def test_params_free_plus(capsys):
    code, out, _ = run(capsys, "params", *BASE)
    assert code == 0
    (rec,) = rows(out)
    assert float(rec["delta"]) == pytest.approx(math.sqrt(3), rel=1e-15)
    assert float(rec["r"]) == pytest.approx(0.65847894846240829, rel=1e-15)
    assert float(rec["theta"]) == pytest.approx(math.pi / 2, rel=1e-15)
    assert float(rec["cov_xp"]) == pytest.approx(math.sqrt(3) / 2, rel=1e-15)
    assert float(rec["var_x"]) == 1.0


def test_params_rejects_uncertainty_violation(capsys):
    code, out, err = run(capsys, "params", "--dx0", "0.1", "--dp0", "0.1")
    assert code == 1
    assert out == ""
    assert "uncertainty principle violated" in err


def test_params_rejects_bad_system(capsys):
    code, _, err = run(capsys, "params", "--system", "osc", "--omega", "-1")
    assert code == 1 and err.startswith("error:")


def test_moments_contractive_row(capsys):
    code, out, _ = run(capsys, "moments", *BASE, "--sign", "-", "--t0", "0", "--t1", str(math.sqrt(3)), "--steps", "3")
    assert code == 0
    table = rows(out)
    assert [float(r["t"]) for r in table] == pytest.approx([0, math.sqrt(3) / 2, math.sqrt(3)])
    assert float(table[1]["var_x"]) == pytest.approx(0.25, abs=1e-12)
    assert float(table[1]["cov_xp"]) == pytest.approx(0.0, abs=1e-12)
    assert float(table[2]["var_x"]) == pytest.approx(1.0, abs=1e-12)


def test_moments_single_row(capsys):
    code, out, _ = run(capsys, "moments", *BASE, "--t0", "0.5")
    assert code == 0 and len(rows(out)) == 1


def test_moments_oscillator_periodic(capsys):
    code, out, _ = run(
        capsys, "moments", "--system", "osc", "--omega", "1", "--x0", "1", "--dx0", "0.8", "--dp0", "1.2",
        "--t0", "0", "--t1", str(2 * math.pi), "--steps", "2",
    )
    assert code == 0
    first, last = rows(out)
    for key in ("x_c", "p_c", "var_x", "var_p", "cov_xp"):
        assert float(last[key]) == pytest.approx(float(first[key]), abs=1e-12)


def test_moments_rejects_reversed_interval(capsys):
    code, _, err = run(capsys, "moments", *BASE, "--t0", "1", "--t1", "0", "--steps", "2")
    assert code == 1 and "t1" in err


def test_wavefield_metadata(capsys):
    code, out, _ = run(capsys, "wavefield", *BASE, "--sign", "-", "--t", "0.5")
    assert code == 0
    info = meta(out)
    assert abs(float(info["norm"]) - 1.0) < 1e-8
    assert int(info["n"]) == len(rows(out))
    assert float(info["var_x"]) == pytest.approx(1 - 0.5 * math.sqrt(3) + 0.25, abs=1e-8)


def test_wavefield_strict_narrow_grid(capsys):
    code, out, err = run(capsys, "wavefield", *BASE, "--xmin", "-3", "--xmax", "3", "--n", "256", "--strict")
    assert code == 2
    assert "boundary" in err


def test_contractive_defaults_to_minus(capsys):
    code, out, _ = run(capsys, "contractive", *BASE)
    assert code == 0
    (rec,) = rows(out)
    assert float(rec["tau"]) == pytest.approx(math.sqrt(3) / 2, rel=1e-15)
    assert float(rec["var_min"]) == pytest.approx(0.25, rel=1e-15)
    assert float(rec["t_return"]) == pytest.approx(math.sqrt(3), rel=1e-15)


def test_contractive_oracle_json(capsys):
    code, out, _ = run(capsys, "contractive", *BASE, "--oracle", "--format", "json")
    assert code == 0
    (rec,) = json.loads(out)["rows"]
    assert abs(rec["var_star"] - 0.25) < 1e-4
    assert abs(rec["t_star"] - rec["tau"]) <= rec["t_return"] / 800


def test_contractive_rejects_plus(capsys):
    code, _, err = run(capsys, "contractive", *BASE, "--sign", "+")
    assert code == 1 and "sign" in err


def test_verify_quick(capsys):
    code, out, err = run(capsys, "verify")
    assert code == 0 and err == ""
    table = rows(out)
    assert {r["status"] for r in table} == {"pass"}
    assert "oracle_agreement" in {r["check"] for r in table}


def test_verify_full_oscillator(capsys):
    code, out, _ = run(capsys, "verify", "--level", "full", "--system", "osc", "--omega", "1.3", "--dx0", "0.9",
                       "--dp0", "0.8", "--sign", "-")
    assert code == 0
    checks = {r["check"] for r in rows(out)}
    assert "strang_order" in checks


def test_verify_reports_failure(tmp_path, capsys):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"tolerances": {"oracle_l2_eps": 1e-15}}))
    code, out, err = run(capsys, "verify", "--config", str(cfg))
    assert code == 2
    assert err.strip() == "FAILED: oracle_agreement"


def test_output_is_deterministic(capsys):
    argv = ["wavefield", *BASE, "--system", "osc", "--t", "3.1", "--n", "512"]
    _, first, _ = run(capsys, *argv)
    _, second, _ = run(capsys, *argv)
    assert first == second


def test_precision_flag(capsys):
    _, out, _ = run(capsys, "contractive", *BASE, "--precision", "4")
    assert rows(out)[0]["tau"] == "0.866"


def test_config_precedence(tmp_path, capsys):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({
        "system": {"kind": "free", "mass": 2.0, "hbar": 1.0},
        "initial": {"dx0": 1.0, "dp0": 1.0, "sign": "-"},
        "format": "json",
    }))
    _, out, _ = run(capsys, "contractive", "--config", str(cfg))
    (rec,) = json.loads(out)["rows"]
    assert rec["tau"] == pytest.approx(math.sqrt(3), rel=1e-15)
    # a flag overrides the file
    _, out, _ = run(capsys, "contractive", "--config", str(cfg), "--mass", "1")
    (rec,) = json.loads(out)["rows"]
    assert rec["tau"] == pytest.approx(math.sqrt(3) / 2, rel=1e-15)


def test_missing_config_file(tmp_path, capsys):
    code, _, err = run(capsys, "params", "--config", str(tmp_path / "nope.json"))
    assert code == 1 and err.startswith("error:")
