import json

import pytest

from cosymconf import cli, suites
from cosymconf.errors import NumericError, UsageError
from cosymconf.suites import RunConfig, run_suite, tensor_dump


def run(argv, capsys):
    code = cli.main(argv)
    out = capsys.readouterr()
    return code, out.out, out.err


def test_list(capsys):
    code, out, _ = run(["list"], capsys)
    assert code == 0
    assert "flat-cosym-m3" in out and "theorem-oracle" in out


def test_structure_run_passes(capsys):
    code, out, _ = run(["run", "--suite", "structure", "--manifold", "flat-cosym-m3",
                        "--points", "5"], capsys)
    rep = json.loads(out)
    assert code == 0 and rep["overall_pass"]
    assert all(r["residual"] == 0.0 for r in rep["records"])
    assert rep["generator"] == "numpy.random.PCG64"


def test_inadmissible_p_exits_one(capsys, tmp_path):
    out_path = tmp_path / "r.json"
    code, out, _ = run(["run", "--suite", "cosym-compat", "--manifold", "flat-cosym-m3",
                        "--p", "reeb-linear", "--points", "3", "--out", str(out_path)], capsys)
    assert code == 1
    assert "FAIL  admissible_p" in out
    rep = json.loads(out_path.read_text())
    assert not rep["overall_pass"]


@pytest.mark.parametrize("argv", [
    ["run", "--suite", "structure", "--manifold", "no-such"],
    ["run", "--suite", "structure", "--manifold", "conf-flat-7-gauss"],
    ["run", "--suite", "cosym", "--manifold", "flat-cosym-m1", "--tol", "oops"],
    ["run", "--suite", "cosym", "--manifold", "flat-cosym-m1", "--points", "0"],
    ["oracle", "--m", "2"],
    ["dump", "--tensor", "ricci", "--manifold", "flat-cosym-m3", "--point", "1,2"],
])
def test_usage_errors_exit_two(argv, capsys):
    code, _, err = run(argv, capsys)
    assert code == 2
    assert "error" in err


def test_argparse_rejects_unknown_suite(capsys):
    with pytest.raises(SystemExit) as exc:
        cli.main(["run", "--suite", "everything"])
    assert exc.value.code == 2


def test_tolerance_override(capsys):
    code, out, _ = run(["run", "--suite", "normality", "--manifold", "twisted-r3", "--points", "4",
                        "--tol", "normality=10"], capsys)
    assert code == 0
    assert json.loads(out)["records"][0]["tolerance"] == 10.0


def test_config_file_and_flag_precedence(capsys, tmp_path):
    cfg = tmp_path / "c.json"
    cfg.write_text(json.dumps({"suite": "structure", "manifold": "flat-cosym-m1", "points": 3,
                               "seed": 5}))
    code, out, _ = run(["run", "--config", str(cfg), "--seed", "9"], capsys)
    rep = json.loads(out)
    assert code == 0 and rep["seed"] == 9 and rep["points"] == 3
    cfg.write_text(json.dumps({"suite": "structure", "colour": "red"}))
    code, _, _ = run(["run", "--config", str(cfg)], capsys)
    assert code == 2


def test_reports_are_byte_identical(capsys):
    argv = ["run", "--suite", "cosym-identities", "--manifold", "s2xr-1", "--points", "6",
            "--seed", "3", "--omit-wall-time"]
    first = run(argv, capsys)[1]
    second = run(argv, capsys)[1]
    assert first == second
    assert "wall_time" not in first


def test_oracle_verb(capsys):
    code, out, _ = run(["oracle", "--m", "3", "--trials", "5", "--seed", "7"], capsys)
    rep = json.loads(out)
    assert code == 0 and rep["suite"] == "theorem-oracle" and rep["points"] == 5


def test_dump_scalar_and_zero_tensors(capsys):
    code, out, _ = run(["dump", "--tensor", "scalar", "--manifold", "s2xs2xs2xr-111",
                        "--point", "0.1,0.2,0.3,0.4,0.5,0.6,0.7"], capsys)
    assert code == 0
    value = float(out.splitlines()[-1].split()[-1])
    assert value == pytest.approx(6.0, rel=1e-12)
    for name in ("gamma-lc", "bochner"):
        text = tensor_dump("flat-cosym-m3", None, name, [0.0] * 7)
        comps = [float(ln.split()[-1]) for ln in text.splitlines() if ln.startswith("[")]
        assert comps and all(c == 0.0 for c in comps)


def test_dump_labels_and_errors():
    text = tensor_dump("round-s2-r1", None, "ricci", "1.0,0.5")
    assert "[j=0,i=1]" in text and "point: 1.0, 0.5" in text
    with pytest.raises(UsageError):
        tensor_dump("round-s2-r1", None, "torsion", "1,1")
    with pytest.raises(UsageError):
        tensor_dump("conf-flat-7-gauss", None, "alpha", [0.0] * 7)


def test_run_suite_determinism_modulo_wall_time():
    cfg = RunConfig(suite="bochner-identities", manifold="s2xs2xs2xr-123", points=4, seed=2)
    a, b = run_suite(cfg), run_suite(cfg)
    assert a.to_json(include_wall_time=False) == b.to_json(include_wall_time=False)
    assert a.wall_time > 0


def test_numeric_failure_becomes_record(monkeypatch, capsys):
    def boom(entry, cfg, pts):
        raise NumericError("non-finite value in field evaluation")

    monkeypatch.setitem(suites._RUNNERS, "cosym", boom)
    rep = run_suite(RunConfig(suite="cosym", manifold="flat-cosym-m1", points=2))
    assert not rep.passed
    assert rep["evaluation"].note.startswith("NumericError")
    code, _, _ = run(["run", "--suite", "cosym", "--manifold", "flat-cosym-m1"], capsys)
    assert code == 1
