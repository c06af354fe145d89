import json
import subprocess
import sys

import numpy as np
import pytest

from strip_poisson.cli import main
from strip_poisson.stripfield import StripGrid, read_table, sample, write_table

GRID = {"n1": 32, "L": 8.0, "n2": 1025}


def write_cfg(tmp_path, **kw):
    cfg = {"grid": GRID, "source": {"preset": "manufactured_mode1"}, "output": str(tmp_path / "out")}
    cfg.update(kw)
    path = tmp_path / "cfg.json"
    path.write_text(json.dumps(cfg))
    return path


def error_payload(capsys):
    return json.loads(capsys.readouterr().err.strip().splitlines()[-1])


def test_manufactured_run(tmp_path):
    cfg = write_cfg(tmp_path, diagnostics=["exact_error", "residual", "moments", "decay_fit"],
                    weight_specs=[{"m": 1, "alpha": 0.0}, {"m": 0, "alpha": 0.5, "p": 1}])
    assert main(["run", str(cfg)]) == 0
    out = tmp_path / "out"
    rep = json.loads((out / "report.json").read_text())
    assert rep["diagnostics"]["exact_error"]["relative_error"] <= 1e-6
    assert rep["solve"]["method"] == "per_mode"
    assert len(rep["norms"]) == 2 and all(n["value"] > 0 for n in rep["norms"])
    assert {"artifact", "numpy", "scipy"} <= set(rep["versions"])
    assert (out / "slices.csv").read_text().startswith("y2,mode_0")


def test_zero_source(tmp_path):
    cfg = write_cfg(tmp_path, source={"preset": "zero"}, weight_specs=[{"m": 2, "alpha": 0.0}])
    assert main(["run", str(cfg)]) == 0
    rep = json.loads((tmp_path / "out" / "report.json").read_text())
    assert rep["norms"][0]["value"] == 0.0


def test_moment_violation_exit(tmp_path, capsys):
    cfg = write_cfg(tmp_path, source={"preset": "mass_gaussian"})
    assert main(["run", str(cfg)]) == 3
    err = error_payload(capsys)
    assert err["error"] == "MOMENT_VIOLATION"
    assert err["moments"]["f_1"] == pytest.approx(1.0, abs=1e-8)
    assert not (tmp_path / "out").exists()


@pytest.mark.parametrize("patch", [
    {"grid": {"n1": 15, "L": 8.0, "n2": 1025}},
    {"unknown_key": 1},
    {"method": "constructive"},
    {"method": "green_quadrature", "moment_policy": "project"},
    {"source": {"preset": "nope"}},
    {"source": {"preset": "dipole_pair", "params": {"width": 1.0}}},
    {"weight_specs": [{"m": 1, "alpha": 0.0, "p": 2}]},
])
def test_invalid_config_exit(tmp_path, capsys, patch):
    assert main(["run", str(write_cfg(tmp_path, **patch))]) == 2
    assert error_payload(capsys)["error"] == "CONFIG_INVALID"


def test_malformed_json(tmp_path, capsys):
    p = tmp_path / "bad.json"
    p.write_text("{not json")
    assert main(["run", str(p)]) == 2


def test_io_errors(tmp_path, capsys):
    assert main(["run", str(tmp_path / "missing.json")]) == 4
    assert error_payload(capsys)["error"] == "IO_ERROR"
    blocker = tmp_path / "file"
    blocker.write_text("x")
    cfg = write_cfg(tmp_path, source={"preset": "zero"})
    assert main(["run", str(cfg), "--output", str(blocker / "sub")]) == 4


def test_cost_guard_exit(tmp_path, capsys):
    cfg = write_cfg(tmp_path, method="green_quadrature", max_nodes=100)
    assert main(["run", str(cfg)]) == 3
    assert error_payload(capsys)["error"] == "COST_GUARD"


def test_solution_table_round_trip(tmp_path):
    cfg = write_cfg(tmp_path, source={"preset": "manufactured_mixed"})
    assert main(["run", str(cfg)]) == 0
    grid = StripGrid(**GRID)
    u = read_table(tmp_path / "out" / "solution.csv", grid)
    from strip_poisson.solver import solve_per_mode
    assert np.array_equal(u.values, solve_per_mode(sample("manufactured_mixed", grid)).u.values)


def test_table_source_and_sign(tmp_path):
    grid = StripGrid(**GRID)
    src = tmp_path / "f.csv"
    write_table(sample("manufactured_mode1", grid), src)
    a = write_cfg(tmp_path, source={"table": str(src)}, output=str(tmp_path / "a"))
    assert main(["run", str(a)]) == 0
    b = write_cfg(tmp_path, sign_convention="delta", output=str(tmp_path / "b"))
    assert main(["run", str(b)]) == 0
    ua = read_table(tmp_path / "a" / "solution.csv", grid).values
    ub = read_table(tmp_path / "b" / "solution.csv", grid).values
    assert np.array_equal(ua, -ub)


def test_reports_are_deterministic(tmp_path):
    cfg = write_cfg(tmp_path, diagnostics=["moments", "parseval"])
    outs = []
    for name, threads in (("x", "1"), ("y", "4")):
        assert main(["run", str(cfg), "--output", str(tmp_path / name), "--threads", threads]) == 0
        rep = json.loads((tmp_path / name / "report.json").read_text())
        rep.pop("timestamp")
        outs.append(rep)
    assert outs[0] == outs[1]
    for f in ("slices.csv", "solution.csv"):
        assert (tmp_path / "x" / f).read_bytes() == (tmp_path / "y" / f).read_bytes()


def test_output_precedence(tmp_path, monkeypatch):
    cfg = write_cfg(tmp_path, source={"preset": "zero"})
    monkeypatch.setenv("STRIP_POISSON_OUTPUT", str(tmp_path / "env"))
    assert main(["run", str(cfg)]) == 0
    assert (tmp_path / "env" / "report.json").exists()
    assert main(["--output", str(tmp_path / "flag"), "run", str(cfg)]) == 0
    assert (tmp_path / "flag" / "report.json").exists()
    assert not (tmp_path / "out").exists()


def test_bad_threads(tmp_path):
    assert main(["run", str(write_cfg(tmp_path)), "--threads", "0"]) == 2


def test_verify_suite(capsys):
    assert main(["verify", "table1"]) == 0
    out = capsys.readouterr().out
    assert "[PASS] C1 polynomial-space table cells matched" in out
    assert main(["verify", "nonsense"]) == 2


def test_console_script_entry(tmp_path):
    proc = subprocess.run([sys.executable, "-m", "strip_poisson.cli", "verify", "kernel"],
                          capture_output=True, text=True)
    assert proc.returncode == 0
    assert "kernel: 3/3 checks passed" in proc.stdout
