import csv
import json

import numpy as np
import pytest

from qssa import ConfigError, NotApplicableError
from qssa.cli import cmd_approx, cmd_compare, cmd_scale, cmd_simulate, cmd_stability, dumps_json, main
from qssa.config import build_config, load_config, parse_config_text


def read_csv(path):
    with open(path, newline="") as fh:
        rows = list(csv.reader(fh))
    return rows[0], np.array(rows[1:], dtype=float)


def write_cfg(tmp_path, text, name="scenario.cfg"):
    p = tmp_path / name
    p.write_text(text)
    return str(p)


# -- config ------------------------------------------------------------------


def test_parse_comments_and_types():
    raw = parse_config_text("rates.k1 = 4e6  # binding\n\n# note\ngrid.count=10\ntime.t_end = 5*t2\n")
    assert raw == {"rates.k1": 4e6, "grid.count": 10, "time.t_end": "5*t2"}


@pytest.mark.parametrize("text", ["bogus.key = 1", "rates.k1 = fast", "just words", "grid.count = 1.5"])
def test_parse_errors(text):
    with pytest.raises(ConfigError):
        parse_config_text(text)


def test_t_end_expressions():
    base = load_config(preset="segel1988")
    assert base.t_end() == pytest.approx(125.0, rel=1e-12)
    raw = dict(base.raw)
    for spec, expected in [("t1_s", 1.25e-2), ("2*t2_r", 2.5e-2), ("3.5", 3.5), ("0.5*t1", 6.25e-3)]:
        raw["time.t_end"] = spec
        assert build_config(raw).t_end() == pytest.approx(expected, rel=1e-12)
    for bad in ("5*t3", "-1", "t2+1"):
        raw["time.t_end"] = bad
        with pytest.raises(ConfigError):
            build_config(raw)


def test_missing_and_invalid_values():
    with pytest.raises(ConfigError):
        build_config({"rates.k1": 1.0})
    with pytest.raises(ConfigError):
        build_config({"rates.k1": 1.0, "rates.k_minus1": 1.0, "rates.k2": -1.0, "init.s0": 1.0, "init.e0": 1.0})
    with pytest.raises(ConfigError):
        load_config()
    with pytest.raises(ConfigError):
        load_config(preset="no-such-preset")


def test_config_overrides_preset(tmp_path):
    path = write_cfg(tmp_path, "init.e0 = 1e-9\n")
    cfg = load_config(path, preset="segel1988")
    assert cfg.init.e0 == 1e-9 and cfg.rates.k1 == 4e6


def test_presets_dir_env(tmp_path, monkeypatch):
    (tmp_path / "mine.cfg").write_text("model = sir\nsir.beta = 1\nsir.gamma = 2\nsir.n0 = 3\n")
    monkeypatch.setenv("QSSA_PRESETS_DIR", str(tmp_path))
    assert load_config(preset="mine").sir == (1.0, 2.0, 3.0)
    with pytest.raises(ConfigError):
        load_config(preset="segel1988")


@pytest.mark.parametrize("kind", ["log", "linear"])
def test_grid_rows(kind):
    raw = dict(load_config(preset="segel1988").raw, **{"grid.kind": kind, "grid.count": 17})
    t = build_config(raw).sample_times()
    assert len(t) == 18 and t[0] == 0.0 and t[-1] == pytest.approx(125.0, rel=1e-15)
    assert np.all(np.diff(t) > 0)


# -- commands ----------------------------------------------------------------


def test_simulate_segel(tmp_path):
    cmd_simulate(load_config(preset="segel1988"), tmp_path)
    header, rows = read_csv(tmp_path / "trajectory.csv")
    assert header == ["t", "S", "E", "C", "P"]
    assert rows.shape == (2001, 5) and np.all(np.diff(rows[:, 0]) > 0)
    meta = json.loads((tmp_path / "meta.json").read_text())
    assert meta["epsilon"] == pytest.approx(5e-4, rel=1e-12)
    assert meta["t1"] == pytest.approx(1.25e-2, rel=1e-12)
    assert meta["t2"] == pytest.approx(25.0, rel=1e-12)
    assert meta["regime"] == "StandardQSSA"


def test_simulate_reverse_meta(tmp_path):
    cmd_simulate(load_config(preset="reverse"), tmp_path)
    meta = json.loads((tmp_path / "meta.json").read_text())
    assert meta["eta"] == pytest.approx(1e-3, rel=1e-12)


def test_zero_enzyme_constant_columns(tmp_path):
    path = write_cfg(tmp_path, "time.t_end = 10\ninit.e0 = 0\ngrid.count = 50\n")
    cmd_simulate(load_config(path, preset="segel1988"), tmp_path)
    _, rows = read_csv(tmp_path / "trajectory.csv")
    assert np.all(rows[:, 1:] == rows[0, 1:])
    meta = json.loads((tmp_path / "meta.json").read_text())
    assert meta["eta"] is None and meta["t2"] is None and meta["regime"] is None


def test_outputs_are_byte_identical(tmp_path):
    cfg = load_config(preset="segel1988")
    for sub in ("a", "b"):
        cmd_simulate(cfg, tmp_path / sub)
        cmd_approx(cfg, tmp_path / sub)
        cmd_stability(cfg, tmp_path / sub)
    for name in ("trajectory.csv", "meta.json", "approx.csv", "stability.json"):
        a = (tmp_path / "a" / name).read_bytes()
        assert a == (tmp_path / "b" / name).read_bytes()
        assert b"\r" not in a


def test_float_format():
    text = dumps_json({"x": 1e-5, "y": float("inf"), "z": [1, 2.5]})
    assert text == '{\n  "x": 1.0000000000000001e-05,\n  "y": null,\n  "z": [1, 2.5]\n}\n'


def test_approx_segel_free(tmp_path):
    cfg = load_config(preset="segel1988")
    cmd_approx(cfg, tmp_path)
    header, rows = read_csv(tmp_path / "approx.csv")
    assert header == ["t", "S_in", "C_in", "S_out", "C_out", "S_un", "C_un"]
    _, s_in, _, s_out, _, s_un, _ = rows.T
    assert np.max(np.abs(s_un - (s_in + s_out - cfg.init.s0))) <= 1e-12 * cfg.dc.a1


def test_approx_reverse_free_substrate_columns_equal(tmp_path):
    cmd_approx(load_config(preset="reverse"), tmp_path)
    header, rows = read_csv(tmp_path / "approx.csv")
    assert np.array_equal(rows[:, header.index("S_in")], rows[:, header.index("S_un")])


def test_approx_total_vs_free(tmp_path):
    cfg = load_config(preset="segel1988")
    cmd_approx(cfg, tmp_path / "free")
    cmd_approx(cfg, tmp_path / "total", approach="total")
    hf, free = read_csv(tmp_path / "free" / "approx.csv")
    ht, total = read_csv(tmp_path / "total" / "approx.csv")
    assert ht[1:] == ["T_in", "C_in", "T_out", "C_out", "T_un", "C_un"]
    diff = np.abs(total[:, ht.index("T_un")] - free[:, hf.index("S_un")])
    assert diff.max() <= 2 * cfg.dc.epsilon * cfg.dc.a1


def test_approx_regime_guards(tmp_path):
    with pytest.raises(NotApplicableError):
        cmd_approx(load_config(preset="epsilon1"), tmp_path)
    with pytest.raises(NotApplicableError):
        cmd_approx(load_config(preset="reverse"), tmp_path, regime="sqssa")
    assert cmd_approx(load_config(preset="epsilon1"), tmp_path, force=True)
    assert cmd_approx(load_config(preset="reverse"), tmp_path, regime="sqssa", force=True)


@pytest.mark.parametrize("preset", ["segel1988", "reverse"])
def test_compare_uniform_within_one_percent(preset, tmp_path):
    cmd_compare(load_config(preset=preset), tmp_path)
    report = json.loads((tmp_path / "errors.json").read_text())
    key = "sqssa.free" if preset == "segel1988" else "rqssa.free"
    layers = report["approximations"][key]
    assert layers["uniform"]["S"]["sup"] <= 0.01
    for layer in layers.values():
        for var in ("S", "C"):
            if layer[var] is not None:
                assert 0 <= layer[var]["l2"] <= layer[var]["sup"]


def test_compare_blend_fails_near_one(tmp_path):
    cmd_compare(load_config(preset="epsilon1"), tmp_path)
    report = json.loads((tmp_path / "errors.json").read_text())
    assert report["approximations"]["blend.free"]["uniform"]["S"]["sup"] > 0.05


def test_scale_outputs(tmp_path):
    cmd_scale(load_config(preset="segel1988"), tmp_path / "s")
    rep = json.loads((tmp_path / "s" / "scaling.json").read_text())
    assert rep["time_scales"] == pytest.approx([1.25e-2, 25.0], rel=1e-12)
    cfg = load_config(preset="sir")
    cmd_scale(cfg, tmp_path / "sir")
    rep = json.loads((tmp_path / "sir" / "scaling.json").read_text())
    beta, gamma, n0 = cfg.sir
    assert rep["groups"] == [[beta * n0 / gamma]]
    assert rep["time_scales"] == [1 / gamma]


def test_stability_output(tmp_path):
    cmd_stability(load_config(preset="segel1988"), tmp_path)
    rep = json.loads((tmp_path / "stability.json").read_text())
    assert rep["eigenvalues"]["lambda_plus"] < 0 and rep["eigenvalues"]["lambda_minus"] < 0
    assert rep["dulac"]["max_divergence"] < 0


def test_main_exit_codes(tmp_path, capsys):
    assert main(["simulate", "--preset", "segel1988", "--out", str(tmp_path)]) == 0
    assert (tmp_path / "trajectory.csv").exists()
    assert main(["approx", "--preset", "epsilon1", "--out", str(tmp_path / "e")]) == 1
    assert not (tmp_path / "e" / "approx.csv").exists()
    assert main(["simulate", "--preset", "sir", "--out", str(tmp_path / "x")]) == 1
    bad = write_cfg(tmp_path, "unknown = 1\n")
    assert main(["scale", "--config", bad, "--out", str(tmp_path)]) == 1
    assert "unknown key" in capsys.readouterr().err


def test_main_output_dir_from_config(tmp_path, monkeypatch):
    monkeypatch.chdir(tmp_path)
    path = write_cfg(tmp_path, "output.dir = results\n")
    assert main(["stability", "--preset", "segel1988", "--config", path]) == 0
    assert (tmp_path / "results" / "stability.json").exists()
