import json

import pytest

from hbacsim.cli import main


def run_cli(*argv):
    return main(list(argv))


def test_presets_listing(capsys):
    assert run_cli("presets") == 0
    out = capsys.readouterr().out
    assert "glycine" in out and "formamide" in out


def test_presets_dump_is_valid_json(capsys):
    assert run_cli("presets", "--dump", "glycine") == 0
    doc = json.loads(capsys.readouterr().out)
    assert [s["label"] for s in doc["spins"]] == ["C1", "C2", "H"]


def test_limits_glycine(capsys):
    assert run_cli("limits", "--preset", "glycine") == 0
    out = capsys.readouterr().out
    assert "17.8097" in out
    assert "4.2202" in out


def test_limits_formamide(capsys):
    assert run_cli("limits", "--preset", "formamide") == 0
    out = capsys.readouterr().out
    assert "104.4095" in out
    assert "10.2181" in out


def test_limits_single_spin_config(tmp_path, capsys):
    cfg = tmp_path / "one.json"
    cfg.write_text(json.dumps({
        "name": "one",
        "spins": [{"label": "X", "gamma_rel": 1.0, "eps_eq": 0.4,
                   "t1_s": 2.0, "t2_s": 1.0, "role": "target"}],
    }))
    assert run_cli("limits", "--system", str(cfg)) == 0
    assert "x1.0000" in capsys.readouterr().out


def test_run_writes_outputs(tmp_path, capsys):
    out = tmp_path / "run"
    assert run_cli("run", "--preset", "glycine", "--cycles", "4",
                   "--reset-delay", "3.14", "--gate-trace", "--out", str(out)) == 0
    for name in ("trace.csv", "gate_trace.csv", "manifest.json",
                 "cooling_curve.png", "gate_trace.png"):
        assert (out / name).exists(), name
        assert (out / name).stat().st_size > 0, name
    trace = (out / "trace.csv").read_text().strip().splitlines()
    assert trace[0] == "cycle,eps_C1,eps_C2,eps_H,temp_K_C1,temp_K_C2,temp_K_H,entropy_bits"
    assert len(trace) == 6  # header + initial row + 4 cycles
    gates = (out / "gate_trace.csv").read_text().strip().splitlines()
    assert len(gates) == 1 + 4 * 8
    manifest = json.loads((out / "manifest.json").read_text())
    assert manifest["command"] == "run"
    assert manifest["protocol"]["reset_delay_s"] == 3.14
    assert manifest["system"]["spins"][0]["label"] == "C1"


def test_run_zero_cycles(tmp_path):
    out = tmp_path / "r0"
    assert run_cli("run", "--preset", "formamide", "--cycles", "0",
                   "--reset", "ideal", "--no-plot", "--out", str(out)) == 0
    trace = (out / "trace.csv").read_text().strip().splitlines()
    assert len(trace) == 2


def test_run_is_byte_deterministic(tmp_path):
    a, b = tmp_path / "a", tmp_path / "b"
    for out in (a, b):
        assert run_cli("run", "--preset", "glycine", "--cycles", "6",
                       "--reset-delay", "3.14", "--no-plot", "--out", str(out)) == 0
    assert (a / "trace.csv").read_bytes() == (b / "trace.csv").read_bytes()
    assert (a / "manifest.json").read_bytes() == (b / "manifest.json").read_bytes()


def test_run_to_steady_state(tmp_path, capsys):
    out = tmp_path / "ss"
    assert run_cli("run", "--preset", "glycine", "--to-steady-state",
                   "--reset", "ideal", "--no-plot", "--out", str(out)) == 0
    assert "steady at cycle" in capsys.readouterr().out


def test_sweep_two_points(tmp_path, capsys):
    out = tmp_path / "sw"
    assert run_cli("sweep", "--preset", "glycine", "--delay-min", "1.0",
                   "--delay-max", "4.0", "--steps", "2", "--no-plot",
                   "--out", str(out)) == 0
    rows = (out / "sweep.csv").read_text().strip().splitlines()
    assert rows[0] == "delay_s,eps_target"
    assert len(rows) == 3
    assert "optimum delay" in capsys.readouterr().out


def test_sweep_default_range_uses_reset_t1(tmp_path):
    out = tmp_path / "swd"
    assert run_cli("sweep", "--preset", "glycine", "--steps", "5",
                   "--no-plot", "--out", str(out)) == 0
    rows = (out / "sweep.csv").read_text().strip().splitlines()[1:]
    delays = [float(r.split(",")[0]) for r in rows]
    assert delays[0] == pytest.approx(0.2 * 1.57)
    assert delays[-1] == pytest.approx(5 * 1.57)


def test_sweep_rejects_bad_range(tmp_path, capsys):
    assert run_cli("sweep", "--preset", "glycine", "--delay-min", "5.0",
                   "--delay-max", "1.0", "--out", str(tmp_path / "x")) == 1
    assert "error" in capsys.readouterr().err


def test_sweep_rejects_single_step(tmp_path, capsys):
    assert run_cli("sweep", "--preset", "glycine", "--steps", "1",
                   "--out", str(tmp_path / "x")) == 1


def test_trace_command_default_circuit(tmp_path, capsys):
    out = tmp_path / "tr"
    assert run_cli("trace", "--preset", "formamide", "--out", str(out)) == 0
    rows = (out / "gate_trace.csv").read_text().strip().splitlines()
    assert len(rows) == 10  # header + initial + 8 gates
    assert (out / "circuit.txt").read_text().startswith("NOT t=2")


def test_trace_command_custom_circuit(tmp_path):
    circ = tmp_path / "c.txt"
    circ.write_text("NOT t=0\nCNOT c=0 t=1\n")
    out = tmp_path / "tr2"
    assert run_cli("trace", "--preset", "glycine", "--circuit", str(circ),
                   "--out", str(out)) == 0
    rows = (out / "gate_trace.csv").read_text().strip().splitlines()
    assert len(rows) == 4


def test_invalid_system_file_fails(tmp_path, capsys):
    cfg = tmp_path / "bad.json"
    cfg.write_text(json.dumps({"spins": [
        {"label": "a", "gamma_rel": 1.0, "t1_s": -1.0, "t2_s": 1.0, "role": "target"},
    ]}))
    assert run_cli("limits", "--system", str(cfg)) == 1
    assert "t1_s" in capsys.readouterr().err


def test_missing_system_file_fails(tmp_path, capsys):
    assert run_cli("limits", "--system", str(tmp_path / "absent.json")) == 1


def test_run_requires_delay_for_timed_reset(tmp_path, capsys):
    assert run_cli("run", "--preset", "glycine", "--cycles", "2",
                   "--reset", "t1", "--out", str(tmp_path / "x")) == 1
    assert "reset-delay" in capsys.readouterr().err
