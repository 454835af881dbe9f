import io
import json
import subprocess
import sys

import pytest

from scaledquat.cli import main


def run(*argv):
    out = io.StringIO()
    code = main(list(argv), out)
    return code, out.getvalue()


def elem(t, a, b):
    return json.dumps({"t": t, "a": list(a), "b": list(b)})


def test_table_at_scale_two(tmp_path):
    path = tmp_path / "table.json"
    code, text = run("table", "--t", "2", "--json", str(path))
    assert code == 0
    assert "16/16 products match" in text
    # j*j = 2 and i*j = k at t = 2
    row_j = next(line for line in text.splitlines() if line.split()[:1] == ["j"])
    assert row_j.split()[3] == "2"
    data = json.loads(path.read_text())
    assert data["pass"] is True and len(data["entries"]) == 16


def test_table_at_negative_scale():
    code, text = run("table", "--t", "-1")
    assert code == 0
    row_k = next(line for line in text.splitlines() if line.split()[:1] == ["k"])
    assert row_k.split()[1:] == ["k", "j", "-i", "-1"]


def test_fueter_rows(tmp_path):
    path = tmp_path / "fueter.json"
    code, text = run("fueter", "--alpha", "2,1,1", "--t", "1.5", "--samples", "20", "--json", str(path))
    assert code == 0
    rows = json.loads(path.read_text())["rows"]
    assert [r["test"] for r in rows] == ["V_t mu^alpha", "nabla_t zeta^n", "right nabla_t zeta^n",
                                         "laplacian_t zeta^n"]
    for r in rows:
        assert set(r) == {"test", "t", "alpha_or_n", "max_residual", "pass"}
        assert r["alpha_or_n"] == [2, 1, 1] and r["t"] == 1.5 and r["pass"]
        assert r["max_residual"] <= 1e-8


def _strip_times(text):
    return "\n".join(line for line in text.splitlines() if "wall_time" not in line)


def test_verify_json_is_reproducible(tmp_path):
    p1, p2 = tmp_path / "a.json", tmp_path / "b.json"
    code1, text = run("verify", "--t", "-1", "--seed", "7", "--json", str(p1))
    code2, _ = run("verify", "--t", "-1", "--seed", "7", "--json", str(p2))
    assert code1 == code2 == 0
    assert "all suites pass" in text
    assert _strip_times(p1.read_text()) == _strip_times(p2.read_text())
    data = json.loads(p1.read_text())
    assert data["seed"] == 7 and data["scales"] == [-1.0]
    for rep in data["reports"]:
        for e in rep["entries"]:
            assert set(e) == {"name", "tolerance", "observed", "pass"}


def test_verify_single_suite_verbose():
    code, text = run("verify", "--t", "2", "--suite", "ring", "-v")
    assert code == 0
    assert text.count("ring") == 1 and "PASS" in text


def test_tolerance_scale_can_force_failure(tmp_path):
    path = tmp_path / "norm.json"
    code, _ = run("norm", "--elem", elem(-1, (0.3, 0.1), (0.2, -0.4)), "--tol-scale", "-1", "--json", str(path))
    assert code == 1
    assert json.loads(path.read_text())["pass"] is False


def test_norm_values():
    code, text = run("norm", "--elem", elem(-1, (3, 0), (0, 4)))
    assert code == 0
    values = dict(line.split()[:2] for line in text.splitlines() if line.split()[:1] in (["EUCLID"], ["HS"], ["det"]))
    assert float(values["HS"]) == pytest.approx(50 ** 0.5, rel=1e-15)
    assert float(values["EUCLID"]) == pytest.approx(5.0, rel=1e-15)
    assert float(values["det"]) == pytest.approx(25.0, rel=1e-15)


@pytest.mark.parametrize("adjoint", ["circled", "bracket"])
def test_blaschke(adjoint):
    code, text = run("blaschke", "--adjoint", adjoint, "--alpha", elem(-1, (0.3, 0.2), (0.1, -0.2)),
                     "--trunc", "128")
    assert code == 0
    assert "vanishes_at_alpha" in text and "FAIL" not in text


def test_interp(tmp_path):
    pts = json.dumps([json.loads(elem(1, (0.5, 0.1), (0.2, 0.0))), json.loads(elem(1, (-0.3, 0.4), (0.0, 0.3)))])
    path = tmp_path / "interp.json"
    code, _ = run("interp", "--points", pts, "--json", str(path))
    assert code == 0
    data = json.loads(path.read_text())
    assert len(data["points"]) == 2 and data["gram_condition"] >= 1.0


def test_realize():
    code, text = run("realize", "--t", "0.5", "--samples", "2")
    assert code == 0 and "rational round trips t=+0.5" in text


@pytest.mark.parametrize("argv", [
    ["fueter", "--alpha", "2,1", "--t", "1"],
    ["fueter", "--alpha", "a,b,c", "--t", "1"],
    ["norm", "--elem", "{not json"],
    ["norm", "--elem", '{"t": 1}'],
    ["table", "--t", "0"],
    ["verify", "--suite", "nope"],
    ["blaschke", "--alpha", elem(1, (0.9, 0.0), (0.9, 0.0))],
    ["interp", "--points", "[]"],
    [],
])
def test_bad_input_exits_with_two(argv):
    assert run(*argv)[0] == 2


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "scaledquat", "table", "--t", "-2"],
                          capture_output=True, text=True, check=False)
    assert proc.returncode == 0
    assert "16/16 products match" in proc.stdout
