import json
import subprocess
import sys

import pytest

from nilzeta import checks
from nilzeta.cli import main
from nilzeta.integrals.zeta import FactoredZeta, local_zeta


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_zeta_latex(capsys):
    code, out, _ = run(capsys, "zeta", "--case", "m1n1", "--format", "latex")
    assert code == 0
    assert out.strip() == r"\frac{(1-t)(1-q^{2}t)}{(1-q^{3}t)(1-q^{4}t)}"


def test_zeta_json(capsys):
    code, out, _ = run(capsys, "zeta", "--case", "m2n1", "--format", "json")
    assert code == 0
    back = FactoredZeta.from_json_obj(json.loads(out))
    assert back == local_zeta("m2n1")


def test_verify_lemma21(capsys):
    code, out, _ = run(capsys, "verify", "--target", "lemma21", "--m", "2", "--n", "1")
    assert code == 0
    assert out.startswith("PASS")


def test_verify_json_schema(capsys):
    code, out, _ = run(capsys, "verify", "--target", "theorem", "--target", "analytics", "--format", "json")
    assert code == 0
    report = json.loads(out)
    assert report and all(set(r) == {"check", "target", "status", "expected", "actual", "budget"} for r in report)
    assert {r["target"] for r in report} == {"theorem", "analytics"}


def test_count(capsys):
    code, out, _ = run(capsys, "count", "--variety", "v3", "--q", "2")
    assert (code, out.strip()) == (0, "136, closed-form 136, MATCH")


def test_coxeter(capsys):
    assert run(capsys, "coxeter", "--n", "2", "--poincare")[1].strip() == "X^4 + 2*X^3 + 2*X^2 + 2*X + 1"
    assert run(capsys, "coxeter", "--fpoly", "2", "1")[1].strip() == "X^3 + X^2 + X + 1"
    code, out, _ = run(capsys, "coxeter", "--identity", "cox2")
    assert code == 0 and "PASS" in out


def test_analytic_commands(capsys):
    assert run(capsys, "topo", "--case", "m1n1")[1].strip() == "s*(s - 2)/((s - 3)*(s - 4))"
    assert run(capsys, "abscissa", "--case", "m2n1")[1].strip() == "6"
    assert run(capsys, "beta")[1].strip() == "7/2"
    assert run(capsys, "beta", "--poly", "1+q^8t^3")[1].strip() == "8/3"
    boundary = json.loads(run(capsys, "boundary", "--case", "m2n1", "--format", "json")[1])
    assert boundary["boundary"] == "7/2" and "6" in boundary["poles"]


def test_oracle(capsys):
    code, out, _ = run(capsys, "oracle", "--target", "lemma23", "--q", "2", "--level", "6", "--tau", "1", "--rho", "1")
    assert code == 0 and "CONTAINED" in out


def test_usage_errors(capsys):
    assert run(capsys, "bogus")[0] == 2
    assert run(capsys, "zeta", "--case", "m9")[0] == 2
    assert run(capsys, "count", "--variety", "v3", "--q", "6")[0] == 2
    assert run(capsys, "count", "--variety", "v3", "--q", "13")[0] == 2


def test_config_file(tmp_path, capsys):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"lemma21_max_sum": 3}))
    code, out, _ = run(capsys, "verify", "--target", "lemma21", "--config", str(cfg), "--format", "json")
    assert code == 0
    assert len(json.loads(out)) == 2  # (1,1) and (2,1)


def test_config_unknown_key(tmp_path, capsys):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"no_such_key": 1}))
    assert run(capsys, "verify", "--target", "theorem", "--config", str(cfg))[0] == 2


def test_budget_exhaustion_is_usage_error(tmp_path, capsys):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"oracle_budget": 10}))
    code, _, err = run(capsys, "verify", "--target", "igusa", "--config", str(cfg))
    assert code == 2 and "budget" in err


def test_failing_check_exits_one(monkeypatch, capsys):
    def broken(cfg):
        return [checks.CheckResult("broken", "theorem", "FAIL", "1", "2", {})]

    monkeypatch.setitem(checks.CHECKS, "theorem", broken)
    code, out, _ = run(capsys, "verify", "--target", "theorem")
    assert code == 1 and out.startswith("FAIL theorem/broken")


@pytest.mark.slow
def test_verify_all_byte_identical():
    cmd = [sys.executable, "-m", "nilzeta.cli", "verify", "--all", "--format", "json", "--seed", "3"]
    first = subprocess.run(cmd, capture_output=True, check=True).stdout
    second = subprocess.run(cmd, capture_output=True, check=True).stdout
    assert first == second
    assert all(r["status"] == "PASS" for r in json.loads(first))
