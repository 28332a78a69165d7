import numpy as np
import pytest

from cvpulse import gates as g
from cvpulse.circuit import build_named, save_circuit
from cvpulse.cli import main
from cvpulse.linalg import format_matrix


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out = capsys.readouterr()
    return code, out.out, out.err


def test_sweep_single_point(capsys):
    code, out, _ = run(capsys, "sweep", "cv", "--nominal", 98, "--min", 0, "--max", 0, "--step", 1)
    assert code == 0
    assert out == "tau_d_ns,fidelity\n0,0.853553\n"


def test_sweep_cv_peaks_at_t_cv(capsys, config_path, tmp_path):
    out_file = tmp_path / "cv.csv"
    code, _, _ = run(capsys, "sweep", "cv", "--config", config_path, "--min", 45.5, "--max", 161,
                     "--step", 0.5, "--out", out_file)
    assert code == 0
    rows = [line.split(",") for line in out_file.read_text().splitlines()[1:]]
    assert len(rows) == 232
    best = max(rows, key=lambda r: float(r[1]))
    assert best == ["98", "1.000000"]


def test_sweep_cx_peaks_at_196(capsys, config_path):
    code, out, _ = run(capsys, "sweep", "cx", "--config", config_path, "--min", 144, "--max", 259,
                       "--step", 1)
    rows = [line.split(",") for line in out.splitlines()[1:]]
    assert max(rows, key=lambda r: float(r[1]))[0] == "196"


def test_sweep_bad_input(capsys, tmp_path):
    code, _, err = run(capsys, "sweep", "cv", "--min", 0, "--max", 1)
    assert code == 1 and "nominal" in err
    code, _, _ = run(capsys, "sweep", "cv", "--nominal", 98, "--min", 5, "--max", 1)
    assert code == 1
    bad = tmp_path / "bad.json"
    bad.write_text("{}")
    code, _, err = run(capsys, "sweep", "cv", "--config", bad, "--min", 0, "--max", 1)
    assert code == 1 and err.startswith("error:")


def test_weyl_reports(capsys):
    code, out, _ = run(capsys, "weyl", "--gate", "SQiSWAP")
    assert code == 0
    assert "[0.7854, 0.7854, 0.0000]" in out and "2×CV: reachable" in out
    _, out, _ = run(capsys, "weyl", "--gate", "iSWAP")
    assert "2×CV: unreachable" in out and "2×CX: reachable" in out
    _, out, _ = run(capsys, "weyl", "--gate", "CX")
    assert "named point: L" in out and "[1.5708, 0.0000, 0.0000]" in out


def test_weyl_matrix_file(capsys, tmp_path):
    p = tmp_path / "m.txt"
    p.write_text(format_matrix(g.SQSWAP))
    code, out, _ = run(capsys, "weyl", "--matrix", p)
    assert code == 0 and "named point: B3" in out and "3×CV: reachable" in out
    p.write_text(format_matrix(np.ones((4, 4))))
    code, _, err = run(capsys, "weyl", "--matrix", p)
    assert code == 1 and "unitary" in err


def test_verify_named(capsys, config_path):
    code, out, _ = run(capsys, "verify", "--named", "SQSWAP_CV", "--target", "SQSWAP")
    assert code == 0 and "#CV: 3" in out and "PASS" in out
    code, out, _ = run(capsys, "verify", "--named", "TOF_CV", "--target", "TOFFOLI_SWAPPED")
    assert code == 0 and "#CX: 3" in out and "#CV: 3" in out
    code, out, _ = run(capsys, "verify", "--named", "QASM_CV", "--target", "CV", "--config", config_path)
    t = float(out.split("gate time:")[1].split()[0])
    assert code == 0 and abs(t - 994) <= 3


def test_verify_failure_exit_code(capsys):
    code, out, _ = run(capsys, "verify", "--named", "SQSWAP_CV", "--as-printed")
    assert code == 2 and "FAIL" in out
    code, _, _ = run(capsys, "verify", "--named", "TOF_CX", "--target", "TOFFOLI_SWAPPED")
    assert code == 2


def test_verify_circuit_file_and_missing_duration(capsys, tmp_path, config_path):
    c = build_named("SQISWAP_CX").append("SWAP", (0, 1)).append("SWAP", (0, 1))
    p = tmp_path / "c.json"
    save_circuit(c, p)
    code, out, _ = run(capsys, "verify", "--circuit", p, "--target", "SQiSWAP")
    assert code == 0 and "#CX: 2" in out
    code, _, err = run(capsys, "verify", "--circuit", p, "--target", "SQiSWAP", "--config", config_path)
    assert code == 1 and "no duration" in err


def test_schedule_commands(capsys, config_path, tmp_path):
    code, out, _ = run(capsys, "schedule", "cx", "--config", config_path, "--quiet")
    cx = float(out.split("total:")[1].split()[0])
    assert code == 0 and abs(cx - 462) <= 3
    _, out, _ = run(capsys, "schedule", "cv", "--config", config_path, "--quiet")
    cv = float(out.split("total:")[1].split()[0])
    _, out, _ = run(capsys, "verify", "--named", "QASM_CV", "--config", config_path)
    qasm = float(out.split("gate time:")[1].split()[0])
    assert cv < 0.5 * qasm
    totals = {}
    for name in ("TOF_CV", "TOF_CX"):
        _, out, _ = run(capsys, "schedule", "--named", name, "--config", config_path, "--quiet")
        totals[name] = float(out.split("total:")[1].split()[0])
    assert totals["TOF_CV"] < totals["TOF_CX"]
    dest = tmp_path / "s.json"
    code, _, _ = run(capsys, "schedule", "cv", "--config", config_path, "--json", "--out", dest)
    assert code == 0 and '"instructions"' in dest.read_text()


def test_schedule_unknown_pair(capsys, config_path):
    code, _, err = run(capsys, "schedule", "cx", "--config", config_path, "--pair", "0,4")
    assert code == 1 and "no coupled edge" in err


def test_synth_commands(capsys):
    code, out, _ = run(capsys, "synth", "--target", "SQiSWAP", "--basis", "CV", "--k", 2, "--seed", 7)
    assert code == 0 and "converged: yes" in out
    assert float(out.split("fidelity:")[1].split()[0]) >= 1 - 1e-6
    _, out, _ = run(capsys, "synth", "--target", "iSWAP", "--basis", "CV", "--k", 2)
    assert "converged: no" in out and "chamber predicate: unreachable" in out
    _, out, _ = run(capsys, "synth", "--target", "CV", "--basis", "CV", "--k", 1)
    assert "converged: yes" in out


def test_unknown_gate_name(capsys):
    code, _, err = run(capsys, "weyl", "--gate", "FOO")
    assert code == 1 and "unknown target" in err


@pytest.mark.parametrize("argv", [
    ("sweep", "cv", "--nominal", 98, "--min", 40, "--max", 60, "--step", 2.5),
    ("synth", "--target", "SQSWAP", "--k", 3, "--seed", 4),
    ("weyl", "--gate", "DCX"),
])
def test_outputs_are_byte_identical(capsys, argv):
    assert run(capsys, *argv) == run(capsys, *argv)
