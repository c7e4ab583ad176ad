import io
import json

import pytest

from padic_entropy import jobs
from padic_entropy.cli import main
from padic_entropy.entropy import EntropyValue

LOG5 = {"task": "entropy-matrix", "prime": 5, "matrix": [["1/5", "0"], ["0", "5"]]}
ZP = {"task": "classify", "descriptor": {"kind": "PadicLCA", "p": 3, "alpha": 1, "beta": 0, "gamma": 0, "delta": 0}}
# small horizon leaves the increments 4, 3, 2 still decreasing
SLOW = {"prime": 2, "matrix": [["1/2", "-28", "7/2"], ["-5/8", "0", "1/4"], ["-10", "20", "-7"]]}
ENDO = {"n": 1, "p": 3, "delta": "1", "L": [["1/3", "0"], ["0", "3"]]}


def run(capsys, *argv):
    code = main(list(argv))
    return code, capsys.readouterr().out


def run_json(capsys, *argv):
    code, out = run(capsys, *argv, "--no-timestamp")
    return code, json.loads(out)


def test_entropy_log5(capsys):
    code, rep = run_json(capsys, "run", json.dumps(LOG5))
    assert code == 0 and rep["status"] == "ok"
    ent = rep["result"]["entropy"]
    assert ent["terms"] == [{"p": 5, "coeff": "1"}]
    assert ent["decimal"] == "1.6094379124341003746"
    assert jobs.entropy_from_report(rep) == EntropyValue.log(5)


def test_entropy_identity_is_zero(capsys):
    code, rep = run_json(capsys, "entropy", '{"prime": 5, "matrix": [["1", "0"], ["0", "1"]]}')
    assert code == 0
    assert rep["result"]["entropy"]["terms"] == [] and rep["result"]["entropy"]["decimal"] == "0"


def test_classify_zp_cites_invariant_basis(capsys):
    code, rep = run_json(capsys, "classify", json.dumps({"descriptor": ZP["descriptor"]}))
    assert code == 0 and rep["result"]["entropy_class"] == "E0"
    assert any("hence Z_p^n in E_0" in c for c in rep["citations"])
    assert [t["rule"] for t in rep["result"]["trace"]] == ["thm-3.6", "cor-3.2"]


def test_rank_and_dual(capsys):
    d = {"kind": "PadicLCA", "p": 2, "alpha": 2, "beta": 1, "gamma": 0, "delta": 3}
    code, rep = run_json(capsys, "rank", json.dumps({"descriptor": d}))
    assert code == 0 and rep["result"]["p_rank"] == 6
    code, rep = run_json(capsys, "dual", json.dumps({"descriptor": d}))
    assert code == 0
    assert rep["result"]["dual"]["alpha"] == 0 and rep["result"]["dual"]["gamma"] == 2


def test_heisenberg_formula_oracle_and_verify(capsys):
    for argv in (("heisenberg",), ("heisenberg", "--oracle")):
        code, rep = run_json(capsys, *argv, json.dumps({"endo": ENDO}))
        assert code == 0 and jobs.entropy_from_report(rep) == EntropyValue.log(3)
    code, rep = run_json(capsys, "verify-at", json.dumps({"endo": ENDO}))
    assert code == 0 and rep["result"]["equal"] is True


def test_frattini(capsys):
    code, rep = run_json(capsys, "frattini", '{"group": "heisenberg", "p": 3, "k": 1, "n": 1}')
    assert code == 0 and rep["result"]["rank"] == 2


@pytest.mark.parametrize(
    "job",
    [
        '{"task": "entropy-matrix", "prime": 5}',
        '{"task": "entropy-matrix", "prime": 5, "matrix": [["1"]], "extra": 1}',
        '{"task": "entropy-matrix", "prime": 5, "matrix": [["1/x"]]}',
        '{"task": "nope"}',
        '{"task": "classify", "descriptor": {"kind": "PadicLCA", "p": 3, "zeta": 1}}',
        '{"task": "entropy-oracle", "prime": 3, "matrix": [["1"]], "horizon": 4, "window": 8}',
        "not json",
    ],
)
def test_schema_errors_exit_2(capsys, job):
    code, out = run(capsys, "run", job, "--no-timestamp")
    assert code == 2
    if out:
        assert json.loads(out)["status"] == "rejected"


def test_compute_error_exit_3(capsys):
    code, rep = run_json(capsys, "rank", '{"descriptor": {"kind": "CompactlyGeneratedLCA", "d": 0, "m": 1}}')
    assert code == 3 and rep["status"] == "rejected" and rep["diagnostic"]
    code, rep = run_json(capsys, "entropy", '{"prime": 4, "matrix": [["1"]]}')
    assert code == 3


def test_not_stabilized_exit_4_with_evidence(capsys):
    code, rep = run_json(capsys, "oracle", json.dumps(SLOW), "--sweep", "2", "--horizon", "4", "--window", "2")
    assert code == 4 and rep["status"] == "not-stabilized"
    assert [r["log_indices"] for r in rep["result"]["evidence"]] == [[0, 4, 7, 9]] * 3
    # the same matrix settles with the default sweep parameters
    code, rep = run_json(capsys, "oracle", json.dumps(SLOW))
    assert code == 0


def test_job_fields_override_flags(capsys):
    job = dict(SLOW, sweep=2, horizon=40, window=8)
    code, rep = run_json(capsys, "oracle", json.dumps(job), "--horizon", "4", "--window", "2")
    assert code == 0 and rep["job"]["horizon"] == 40


def test_batch_order_and_exit_code(capsys):
    batch = [LOG5, {"task": "rank", "descriptor": {"kind": "Heisenberg", "p": 2, "n": 3}}, {"task": "nope"}, ZP]
    code, reps = run_json(capsys, "run", json.dumps(batch))
    assert code == 2
    assert [r["status"] for r in reps] == ["ok", "ok", "rejected", "ok"]
    assert reps[1]["result"]["p_rank"] == 6 and reps[3]["result"]["entropy_class"] == "E0"


def test_determinism_without_timestamp(capsys):
    outs = {run(capsys, "run", json.dumps([LOG5, ZP]), "--no-timestamp")[1] for _ in range(3)}
    assert len(outs) == 1
    code, out = run(capsys, "run", json.dumps(LOG5))
    assert "timestamp" in json.loads(out)


def test_reports_reparse_under_schema(capsys):
    jobs_in = [
        LOG5,
        ZP,
        dict(SLOW, task="entropy-oracle", sweep=2, horizon=4, window=2),
        {"task": "verify-addition", "endo": ENDO},
        {"task": "frattini", "group": "cyclic", "p": 2, "k": 3, "n": 1},
        {"task": "bogus"},
    ]
    _, reps = run_json(capsys, "run", json.dumps(jobs_in))
    for rep in reps:
        jobs.validate_report(json.loads(json.dumps(rep)))


def test_file_and_stdin_input(capsys, tmp_path, monkeypatch):
    path = tmp_path / "job.json"
    path.write_text(json.dumps(LOG5))
    code, rep = run_json(capsys, "run", str(path))
    assert code == 0 and rep["result"]["entropy"]["terms"] == [{"p": 5, "coeff": "1"}]
    monkeypatch.setattr("sys.stdin", io.StringIO(json.dumps([ZP])))
    code, reps = run_json(capsys, "run", "-")
    assert code == 0 and isinstance(reps, list) and reps[0]["result"]["entropy_class"] == "E0"
    code, _ = run(capsys, "run", str(tmp_path / "missing.json"))
    assert code == 2


def test_table_format(capsys):
    code, out = run(capsys, "entropy", json.dumps({"prime": 5, "matrix": LOG5["matrix"]}), "--format", "table")
    assert code == 0 and "log 5" in out and "1.6094379124341003746" in out
    code, out = run(capsys, "oracle", json.dumps(SLOW), "--format", "table", "--sweep", "1", "--horizon", "4", "--window", "2")
    assert code == 4 and "log-indices" in out and "0 4 7 9" in out
    code, out = run(capsys, "classify", json.dumps({"descriptor": ZP["descriptor"]}), "--format", "table")
    assert "[cor-3.2]" in out


def test_suite_commands(capsys):
    code, out = run(capsys, "suite", "classifier", "--format", "table")
    assert code == 0 and "classifier: PASS" in out
    code, out = run(capsys, "suite", "oracle-vs-formula", "--count", "3")
    assert code == 0 and json.loads(out)["passed"] is True
    # one instance per cell cannot witness positive entropy everywhere
    code, out = run(capsys, "suite", "heisenberg", "--count", "1")
    assert code == 1 and json.loads(out)["passed"] is False
