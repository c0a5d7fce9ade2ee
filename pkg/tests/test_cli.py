import json

import pytest

from h10sim.adiabatic import RunReport, read_trace_csv
from h10sim.cli import main, parse_complex


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_parse_complex():
    assert parse_complex("2") == 2
    assert parse_complex("1.5+0.5i") == 1.5 + 0.5j
    assert parse_complex("-0.3i") == -0.3j


def test_solve_writes_report_and_trace(capsys, tmp_path):
    code, out, _ = run(capsys, "solve", "(x-2)^2", "--algebra", "su11", "--d", "16", "--z", "2",
                       "--output-dir", str(tmp_path))
    assert code == 0
    report = json.loads(out)
    assert report["verdict"] == "SolutionExists" and report["witness"] == [2]
    again = RunReport.from_json((tmp_path / "run_report.json").read_text())
    assert again.witness == (2,)
    trace = read_trace_csv((tmp_path / "trace.csv").read_text())
    assert trace == again.p_max_trace and len(trace) == 16


def test_solve_no_solution(capsys):
    code, out, _ = run(capsys, "solve", "x+1", "--algebra", "su11", "--d", "16", "--z", "2")
    assert code == 1 and json.loads(out)["verdict"] == "NoSolution"


def test_solve_inconclusive_exit_code(capsys):
    code, _, _ = run(capsys, "solve", "x^2+y^2-5", "--algebra", "wh", "--d", "6", "--alpha", "2", "--T-cap", "10")
    assert code == 2


@pytest.mark.parametrize(
    "argv, code",
    [
        (["solve", "(x-2)^2", "--z", "1.0"], 65),
        (["solve", "(x-2)^2", "--algebra", "wh", "--alpha", "0.5"], 65),
        (["solve", "x+y", "--z", "2", "--z", "2", "--z", "2"], 65),
        (["solve", "x^1.5"], 64),
        (["oracle", "x^", "--bound", "3"], 64),
        (["gap", "x-y", "--d", "65"], 66),
        (["gate-demo", "--d", "4"], 65),
        (["solve", "x-1", "--d", "1"], 65),
    ],
)
def test_error_exit_codes(capsys, argv, code):
    assert run(capsys, *argv)[0] == code


def test_oracle(capsys, tmp_path):
    code, out, _ = run(capsys, "oracle", "x^2+y^2-5", "--bound", "5")
    assert code == 0 and json.loads(out) == [1, 2]
    assert run(capsys, "oracle", "x+1", "--bound", "100")[0] == 1
    code, out, _ = run(capsys, "--json", "oracle", "x - x", "--bound", "0", "--output-dir", str(tmp_path))
    assert code == 0 and json.loads(out)["witness"] == [0]
    assert json.loads((tmp_path / "oracle.json").read_text())["bound"] == 0


def test_gap_csv_and_json(capsys):
    code, out, _ = run(capsys, "gap", "x-2", "--d", "16", "--z", "2")
    lines = out.splitlines()
    assert code == 0 and lines[0] == "s,e0,e1,gap" and len(lines) == 23
    assert lines[-1].startswith("# min_gap=") and float(lines[-1].split("=")[1]) > 0
    code, out, _ = run(capsys, "gap", "x-2", "--d", "5", "--points", "3", "--json")
    obj = json.loads(out)
    assert obj["e0"][-1] == 0.0 and obj["e1"][-1] == 1.0


def test_coherent(capsys):
    _, out, _ = run(capsys, "coherent", "--z", "1.61", "--json")
    assert json.loads(out)["max_overlap"] < 0.5
    _, out, _ = run(capsys, "coherent", "--z", "0.5", "--json")
    assert json.loads(out)["max_overlap"] > 0.5
    code, out, _ = run(capsys, "coherent", "--z", "2", "--d", "64", "--json")
    assert code == 0 and json.loads(out)["eigen_residual"] < 1e-8


def test_gate_demo(capsys):
    code, out, _ = run(capsys, "gate-demo")
    obj = json.loads(out)
    assert code == 0 and len(obj["mappings"]) == 4 and obj["truth_table"]["is_cnot"] is False
    _, out, _ = run(capsys, "gate-demo", "--coding", "eigen", "--d", "6")
    assert json.loads(out)["truth_table"]["is_cnot"] is True


def test_module_entry_point():
    import subprocess
    import sys

    proc = subprocess.run([sys.executable, "-m", "h10sim", "oracle", "(x-2)^2", "--bound", "10"],
                          capture_output=True, text=True)
    assert proc.returncode == 0 and json.loads(proc.stdout) == [2]
