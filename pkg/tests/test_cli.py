import json
import subprocess
import sys

import pytest

from ncsphere import REPORT_SCHEMA
from ncsphere.cli import ConfigError, SuiteConfig, main, parse_q, parse_rational, run


def run_json(capsys, argv):
    code = main(argv + ["--json"])
    return code, json.loads(capsys.readouterr().out)


def strip_timing(doc):
    if isinstance(doc, dict):
        return {k: strip_timing(v) for k, v in doc.items() if k != "seconds"}
    if isinstance(doc, list):
        return [strip_timing(v) for v in doc]
    return doc


def test_parse_helpers():
    assert parse_rational("1/3") == parse_rational("2/6")
    assert float(parse_q("0.25")) == 0.25
    for bad in ("0", "1", "3/2", "-1/2", "x"):
        with pytest.raises(ConfigError):
            parse_q(bad)
    with pytest.raises(ConfigError):
        parse_rational("1/0")


def test_pair_json(capsys):
    code, doc = run_json(capsys, ["pair", "--q", "1/2", "--cutoff", "40"])
    assert code == 0
    assert doc["schema"] == REPORT_SCHEMA and doc["command"] == "pair" and doc["ok"]
    assert abs(doc["pairing"] + 1) <= doc["tail_bound"] + 1e-10
    assert doc["rank"] == 2
    assert {c["id"] for c in doc["suites"][0]["checks"]} == {"pairing.charge", "pairing.truncated_closed_form", "pairing.rank"}


def test_pair_text(capsys):
    assert main(["pair", "--q", "0.9", "--cutoff", "400"]) == 0
    assert "rank pairing = 2" in capsys.readouterr().out


def test_verify_json_is_deterministic(capsys):
    argv = ["verify", "--suite", "qsympl", "--seed", "3"]
    code1, doc1 = run_json(capsys, argv)
    code2, doc2 = run_json(capsys, argv)
    assert code1 == code2 == 0
    assert strip_timing(doc1) == strip_timing(doc2)
    suite = doc1["suites"][0]
    assert suite["name"] == "qsympl" and suite["passed"] == suite["total"] > 0
    assert [c["id"] for c in suite["checks"]] == sorted(c["id"] for c in suite["checks"])


def test_workers_do_not_change_results(monkeypatch):
    monkeypatch.setenv("NCG_WORKERS", "3")
    cfg_small = SuiteConfig(suite="pair")
    code, results = run(cfg_small)
    monkeypatch.setenv("NCG_WORKERS", "1")
    code1, results1 = run(cfg_small)
    assert code == code1 == 0
    assert [c.id for c in results[0][1].checks] == [c.id for c in results1[0][1].checks]
    assert SuiteConfig().suites[0] == "theta"


@pytest.mark.parametrize("argv", [
    ["verify", "--suite", "pair", "--q", "1"],
    ["verify", "--suite", "pair", "--cutoff", "3"],
    ["pair", "--q", "0"],
    ["pair", "--cutoff", "2"],
    ["verify", "--suite", "theta", "--theta", "abc"],
    ["verify", "--suite", "nope"],
])
def test_configuration_errors_exit_2(argv, capsys):
    assert main(argv) == 2


def test_bad_worker_count(monkeypatch):
    monkeypatch.setenv("NCG_WORKERS", "zero")
    assert main(["verify", "--suite", "pair"]) == 2


def test_step_budget_failure_exits_1():
    # separate process: the budget is set on cached rewrite systems
    out = subprocess.run([sys.executable, "-m", "ncsphere", "verify", "--suite", "theta", "--theta", "0",
                          "--step-budget", "5", "--json"], capture_output=True, text=True, timeout=300)
    assert out.returncode == 1
    doc = json.loads(out.stdout)
    assert not doc["ok"]
    assert any("rule applications" in c.get("detail", "") for s in doc["suites"] for c in s["checks"])


def test_console_entry_point():
    out = subprocess.run([sys.executable, "-m", "ncsphere", "verify", "--suite", "pair"], capture_output=True, text=True, timeout=300)
    assert out.returncode == 0
    assert out.stdout.strip().endswith("OK")
