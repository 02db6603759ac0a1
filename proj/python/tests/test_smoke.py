import json
import os
import subprocess

import numpy as np
import pytest

import hollowfield as hf


def test_bessel_values():
    # J0(1), Y0(1) reference values (Abramowitz & Stegun table 9.1)
    assert abs(hf.bessel_j(0, 1.0) - 0.7651976865579666) < 1e-14
    assert abs(hf.bessel_y(0, 1.0) - 0.08825696421567696) < 1e-14
    h = hf.hankel2(np.array([0, 1]), 2.0)
    assert h.shape == (2,)
    assert abs(h[0] - (hf.bessel_j(0, 2.0) - 1j * hf.bessel_y(0, 2.0))) < 1e-15


def test_order_table():
    assert hf.order_for_frequency(2000.0) == 15
    assert hf.order_for_frequency(2000.0, "lean") == 10
    assert hf.order_for_frequency(3000.0) == 18


def test_resolve_config_preset():
    cfg = hf.resolve_config({"preset": "paper-centered-2k"})
    assert cfg["field"]["frequency_hz"] == 2000.0
    assert len(cfg["field"]["sources"]) == 5


def test_unknown_field_is_rejected():
    with pytest.raises(ValueError):
        hf.resolve_config({"methd": {}})


def test_simulate_and_reconstruct_small():
    cfg = {
        "preset": "paper-centered-1k",
        "scheme": {"circles": 6, "radius_step_m": 0.05},
        "grid": {"nx": 61, "ny": 61},
    }
    sim = hf.simulate(cfg)
    assert sim["projections"].shape == (6 * 72,)
    assert sim["reference"].shape == (61, 61)
    rec = hf.reconstruct(cfg, sim["projections"], "che")
    assert rec["coefficients"].shape == (21,)
    nmse = hf.nmse_db(cfg, rec["grid"], sim["reference"])
    assert nmse < -12.0


def _cli():
    path = os.environ.get("HOLLOWFIELD_CLI")
    if not path:
        pytest.skip("command-line tool not built")
    return path


def test_cli_exit_codes(tmp_path):
    cli = _cli()
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps({"grid": {"nx": 1}}))
    r = subprocess.run([cli, "simulate", "--config", str(bad), "--out", str(tmp_path)])
    assert r.returncode == 2
    r = subprocess.run([cli, "simulate", "--config", str(tmp_path / "missing.json")])
    assert r.returncode == 4


def test_cli_single_circle(tmp_path):
    cli = _cli()
    cfg = tmp_path / "c.json"
    cfg.write_text(json.dumps({"preset": "paper-single-circle", "grid": {"nx": 31, "ny": 31}}))
    subprocess.run([cli, "simulate", "--config", str(cfg), "--out", str(tmp_path)], check=True)
    rows = (tmp_path / "projections.csv").read_text().strip().splitlines()
    assert len(rows) == 1 + 72
