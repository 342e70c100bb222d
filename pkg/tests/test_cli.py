import json
import subprocess
import sys

import pytest

from gsteffensen.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_solve_summary(capsys):
    code, out, _ = run(capsys, "solve", "--problem", "P1", "--method", "gsteffensen", "--g", "g1")
    assert code == 0
    assert "1.4044916482153411" in out


def test_solve_trace(capsys):
    code, out, _ = run(capsys, "solve", "--problem", "P2", "--method", "newton", "--trace")
    assert code == 0
    lines = out.splitlines()
    assert lines[0].split()[:2] == ["n", "x_n"]
    assert lines[1].split()[:2] == ["0", "1.0"]


def test_solve_overrides(capsys):
    code, out, _ = run(
        capsys, "solve", "--problem", "x^3-x-1", "--method", "steffensen", "--x0", "1.5", "--max-iter", "3"
    )
    assert code == 0
    assert "n = 3" in out or "termination = ResidualMet" in out


@pytest.mark.parametrize(
    "argv",
    [
        ["solve", "--problem", "P10", "--method", "newton"],
        ["solve", "--problem", "P1", "--method", "gsteffensen"],
        ["solve", "--problem", "P1", "--method", "newton", "--g", "g1"],
        ["solve", "--problem", "P1", "--method", "secant"],
        ["bench", "--problems", "P1,P11"],
        ["bench", "--format", "xml"],
        ["probe", "--kind", "phi", "--problem", "P2", "--g", "g1", "--h", "0"],
        [],
    ],
)
def test_usage_errors(capsys, argv):
    with pytest.raises(SystemExit) as exc:
        code = main(argv)
        raise SystemExit(code)
    assert exc.value.code == 2


def test_bench_formats(capsys):
    code, out, _ = run(capsys, "bench", "--problems", "P1", "--gs", "g1,g2", "--methods", "gsteffensen", "--format", "json")
    assert code == 0
    assert len(json.loads(out)["cells"]) == 2
    code, out, _ = run(capsys, "bench", "--problems", "all", "--gs", "all", "--format", "csv")
    assert out.count("\n") == 1 + 81


def test_bench_out_file(capsys, tmp_path):
    path = tmp_path / "r.md"
    code, out, _ = run(capsys, "bench", "--out", str(path))
    assert code == 0 and out == ""
    assert "### P9" in path.read_text()


def test_verify_exit_zero(capsys):
    code, out, _ = run(capsys, "verify")
    assert code == 0
    assert "mismatches: 0" in out
    code, out, _ = run(capsys, "verify", "--format", "json")
    assert json.loads(out)["exit_code"] == 0


def test_verify_exit_one(capsys, monkeypatch):
    from dataclasses import replace

    import gsteffensen.bench as bench
    from gsteffensen.solver import OutcomeClass

    real = bench.run_matrix

    def tampered(*a, **k):
        rep = real(*a, **k)
        rep.cells = [replace(c, outcome=OutcomeClass.DIVERGED) for c in rep.cells]
        return rep

    monkeypatch.setattr(bench, "run_matrix", tampered)
    code, _, _ = run(capsys, "verify")
    assert code == 1


@pytest.mark.parametrize("kind", ["rho", "phi", "order"])
def test_probe(capsys, kind):
    code, out, _ = run(capsys, "probe", "--kind", kind, "--problem", "P2", "--g", "identity")
    assert code == 0 and out


def test_probe_order_output(capsys):
    _, out, _ = run(capsys, "probe", "--kind", "order", "--problem", "P2", "--g", "g1")
    pooled = float(out.strip().splitlines()[-1].split("pooled order = ")[1].split()[0])
    assert 1.6 <= pooled <= 2.4


def test_module_entry_point_is_deterministic():
    cmd = [sys.executable, "-m", "gsteffensen", "bench", "--format", "json"]
    a = subprocess.run(cmd, capture_output=True, check=True).stdout
    b = subprocess.run(cmd, capture_output=True, check=True).stdout
    assert a == b and a


def test_module_usage_exit_code():
    r = subprocess.run([sys.executable, "-m", "gsteffensen", "bench", "--gs", "g9"], capture_output=True)
    assert r.returncode == 2
