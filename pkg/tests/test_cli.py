import json

import pytest

from holonome import cli


def run(argv, capsys):
    code = cli.main(argv)
    out = capsys.readouterr()
    return code, out.out, out.err


def test_flatness_casimir_job(tmp_path, capsys):
    job = tmp_path / "job.json"
    job.write_text(json.dumps({"task": "flatness", "algebra": "A2", "rep": "adjoint", "connection": "casimir"}))
    out = tmp_path / "report.json"
    code, _, _ = run(["--job", str(job), "--out", str(out)], capsys)
    assert code == 0
    report = json.loads(out.read_text())
    assert report["schema"] == "1"
    assert report["passed"] is True
    assert report["flatness"]["mode"] == "exact" and report["flatness"]["max_norm"] == 0


def test_hecke_flags(capsys):
    code, out, _ = run(["--task", "hecke", "--algebra", "A1", "--rep", "vector", "--n", "3", "--h", "0.1", "0"], capsys)
    assert code == 0
    report = json.loads(out)
    assert report["hecke"]["max_residual"] <= 1e-6


def test_perturbed_flatness_exit_1(capsys):
    code, out, _ = run(["--task", "flatness", "--algebra", "A2", "--rep", "adjoint", "--connection", "casimir",
                        "--perturb"], capsys)
    assert code == 1
    assert json.loads(out)["passed"] is False


def test_unknown_suite(capsys):
    code, _, err = run(["--suite", "nope"], capsys)
    assert code == 2 and "unknown suite" in err


def test_describe(capsys):
    code, out, _ = run(["--describe", "bmw"], capsys)
    assert code == 0
    assert "(T - q)(T + q^-1)(T - r^-1) = 0" in out and "r = eps exp(i pi h (dim V - eps))" in out
    code, out, _ = run(["--describe", "kd-compare"], capsys)
    assert code == 0 and "hbar = 2 pi i h" in out
    code, _, _ = run(["--describe", "nope"], capsys)
    assert code == 2


def test_malformed_json(tmp_path, capsys):
    job = tmp_path / "bad.json"
    job.write_text('{"task": "hecke",\n  "n": }')
    code, _, err = run(["--job", str(job)], capsys)
    assert code == 2
    assert "line 2" in err and "column" in err


@pytest.mark.parametrize("payload", [
    {"task": "warp"},
    {"task": "hecke", "tol": -1},
    {"task": "flatness"},
    {"task": "flatness", "algebra": "Z9"},
    {"task": "bmw", "algebra": "A2"},
    {"task": "hecke", "colour": "red"},
    {"task": "duality-check", "lam": [1, 1]},
    [1, 2],
])
def test_invalid_jobs(tmp_path, capsys, payload):
    job = tmp_path / "job.json"
    job.write_text(json.dumps(payload))
    code, _, err = run(["--job", str(job)], capsys)
    assert code == 2
    assert "invalid input" in err


def test_missing_task(capsys):
    code, _, _ = run(["--algebra", "A1"], capsys)
    assert code == 2


def test_flag_overrides_job(tmp_path, capsys):
    job = tmp_path / "job.json"
    job.write_text(json.dumps({"task": "schur-weyl", "n": 9}))
    code, out, _ = run(["--job", str(job), "--n", "3"], capsys)
    assert code == 0
    assert json.loads(out)["job"]["n"] == 3


def test_fixed_step_reports_bit_identical(tmp_path, capsys):
    paths = []
    for k in range(2):
        out = tmp_path / f"r{k}.json"
        code, _, _ = run(["--task", "monodromy", "--algebra", "A1", "--n", "3", "--h", "0.1", "--fixed-step", "300",
                          "--out", str(out)], capsys)
        assert code == 0
        paths.append(out)
    a, b = (json.loads(p.read_text()) for p in paths)
    assert a["monodromy"]["generators"] == b["monodromy"]["generators"]


def test_cache_env(tmp_path, monkeypatch, capsys):
    monkeypatch.setenv("HOLONOME_CACHE", str(tmp_path))
    for _ in range(2):
        code, _, _ = run(["--task", "v0-check", "--algebra", "A2", "--rep", "adjoint"], capsys)
        assert code == 0
    assert any(p.suffix == ".pkl" for p in tmp_path.iterdir())


def test_matrix_cap_and_full_dump(capsys):
    args = ["--task", "qweyl", "--algebra", "A2", "--n", "4", "--q", "1.2"]
    code, out, _ = run(args, capsys)
    assert code == 0 and json.loads(out)["matrices"] == [None, None]
    code, out, _ = run(args + ["--full-dump"], capsys)
    mats = json.loads(out)["matrices"]
    assert code == 0 and len(mats[0]) == 81


@pytest.mark.parametrize("task,extra", [
    ("spectra", ["--algebra", "A2", "--connection", "casimir"]),
    ("braid-relations", ["--algebra", "B2", "--connection", "casimir", "--h", "0.1"]),
    ("kd-compare", ["--algebra", "A1", "--rep", "sym(2)", "--connection", "casimir", "--h", "0.05"]),
    ("kd-compare", ["--algebra", "A1", "--n", "3", "--h", "0.05"]),
    ("qweyl", ["--algebra", "A2", "--n", "2", "--q", "1.2"]),
    ("duality-check", ["--lam", "2", "1", "0", "--mu", "1", "1", "1"]),
    ("omega", ["--algebra", "C2"]),
    ("bmw", ["--algebra", "C1", "--h", "0.1"]),
    ("classical-limit", []),
])
def test_tasks_pass(task, extra, capsys):
    code, out, _ = run(["--task", task, *extra], capsys)
    assert code == 0, out


def test_kd_compare_wrong_exponent_fails(capsys):
    code, _, _ = run(["--task", "kd-compare", "--algebra", "A1", "--n", "3", "--h", "0.05", "--kappa", "1"], capsys)
    assert code == 1


def test_exact_suite(tmp_path, capsys):
    out = tmp_path / "suite.json"
    code, _, err = run(["--suite", "paper-exact", "--workers", "2", "--out", str(out)], capsys)
    report = json.loads(out.read_text())
    assert code == 0, [j for j in report["jobs"] if not j["passed"]]
    assert report["schema"] == "1" and report["n_failed"] == 0
    assert "passed" in err
