import json
from pathlib import Path

import pytest

from qzoom import cli


def run(argv):
    return cli.main(argv)


def test_print_config_is_valid_json(capsys):
    assert run(["spectrum", "--print-config"]) == 0
    cfg = json.loads(capsys.readouterr().out)
    assert cfg["system"] == "ho" and cfg["K"] == 3


def test_unknown_config_key_rejected(tmp_path, capsys):
    p = tmp_path / "cfg.json"
    p.write_text('{"bogus": 1}')
    assert run(["spectrum", "--config", str(p)]) == cli.EXIT_CONFIG


def test_malformed_json_rejected(tmp_path):
    p = tmp_path / "cfg.json"
    p.write_text("{nope")
    assert run(["spectrum", "--config", str(p)]) == cli.EXIT_CONFIG


def test_bad_model_parameter_rejected(tmp_path):
    p = tmp_path / "cfg.json"
    p.write_text('{"n_s": 1}')
    assert run(["spectrum", "--config", str(p), "--out", str(tmp_path / "o")]) == cli.EXIT_CONFIG


def test_seed_flag_overrides_config(capsys):
    assert run(["spectrum", "--print-config", "--seed", "99"]) == 0
    assert json.loads(capsys.readouterr().out)["seed"] == 99


def test_spectrum_oracle_mode(tmp_path):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"mode": "oracle", "n_states": 3, "n_s": 32}))
    out = tmp_path / "out"
    assert run(["spectrum", "--config", str(cfg), "--out", str(out)]) == 0
    header, rows = cli.read_table(out / "summary.csv")
    assert header[:3] == ["state", "E_exact", "E_dig"]
    assert len(rows) == 3
    assert abs(rows[0][2] - 0.5) < 1e-8


def test_spectrum_outputs_byte_identical(tmp_path):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"n_s": 16, "num_reads": 100, "num_runs": 2, "z_max": 6}))
    outs = []
    for name in ("a", "b"):
        out = tmp_path / name
        assert run(["spectrum", "--config", str(cfg), "--out", str(out), "--seed", "5"]) == 0
        outs.append(out)
    for fname in ("summary.csv", "trace_state0.csv"):
        assert (outs[0] / fname).read_bytes() == (outs[1] / fname).read_bytes()


def test_csv_round_trip_no_drift(tmp_path):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"n_s": 16, "num_reads": 100, "num_runs": 1, "z_max": 6}))
    out = tmp_path / "out"
    assert run(["spectrum", "--config", str(cfg), "--out", str(out)]) == 0
    path = out / "trace_state0.csv"
    header, rows = cli.read_table(path)
    rewritten = tmp_path / "out" / "rt"
    cli.write_table(rewritten, header, rows, "csv")
    assert path.read_bytes() == (rewritten.with_name("rt.csv")).read_bytes()


def test_doublewell_parity_pairs(tmp_path):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({
        "system": "doublewell", "m0_sq": -4.0, "lam": 1.0, "phi_max": 9.0,
        "n_s": 32, "mode": "oracle",
    }))
    out = tmp_path / "out"
    assert run(["spectrum", "--config", str(cfg), "--out", str(out)]) == 0
    _, rows = cli.read_table(out / "summary.csv")
    assert [r[0] for r in rows] == ["even", "odd"]
    # deep wells: the parity pair is tunneling-split and nearly degenerate
    assert abs(rows[0][2] - rows[1][2]) < 1e-3


def test_evolve_oracle_and_formats(tmp_path):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({
        "system": "su3", "mode": "oracle", "dt_list": [0.2], "n_slices": 3,
        "oracle_points": 4,
    }))
    out = tmp_path / "out"
    assert run(["evolve", "--config", str(cfg), "--out", str(out), "--format", "json"]) == 0
    doc = json.loads((out / "su3_dt0.2_persistence_oracle.json").read_text())
    assert doc["columns"] == ["t", "value", "lo68", "hi68"]
    assert abs(doc["rows"][1][1] - 0.9805) < 1e-3


def test_evolve_rejects_unknown_system(tmp_path):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"system": "ho"}))
    assert run(["evolve", "--config", str(cfg), "--out", str(tmp_path / "o")]) == cli.EXIT_CONFIG


def test_sweep_rejects_bad_parameter(tmp_path):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"param": "gamma"}))
    assert run(["sweep", "--config", str(cfg), "--out", str(tmp_path / "o")]) == cli.EXIT_CONFIG


def test_sweep_reads_grid(tmp_path):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({
        "n_s": 16, "param": "reads", "values": [20, 100], "num_runs": 2, "z_max": 4,
    }))
    out = tmp_path / "out"
    assert run(["sweep", "--config", str(cfg), "--out", str(out)]) == 0
    header, rows = cli.read_table(out / "sweep.csv")
    assert header == ["param", "zoom", "min", "median", "lo68", "hi68"]
    assert sorted({r[0] for r in rows}) == [20, 100]
    assert len(rows) == 2 * 5  # two values, zooms 0..4
