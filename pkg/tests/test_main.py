import json
import sys

import pytest

import steinberg_kernel.main as entry
from steinberg_kernel.main import (
    EXIT_BUDGET,
    EXIT_FAIL,
    EXIT_PASS,
    EXIT_SELECTOR,
    cli,
    main,
    run_scenario,
)
from steinberg_kernel.models import ScenarioConfig, SuiteReport


def scenario(**kwargs):
    return ScenarioConfig.from_dict(kwargs)


@pytest.mark.parametrize(
    "request_",
    [
        {"command": "verify", "suite": "ring", "ring": "F9"},
        {"command": "verify", "suite": "jp", "pair": "full", "ring": "F3"},
        {"command": "verify", "suite": "roots", "pair": "hermitian", "ring": "F2"},
        {"command": "verify", "suite": "grading", "pair": "rect", "ring": "F2", "J": 2},
        {"command": "verify", "suite": "tkk", "pair": "full", "ring": "F3"},
        {"command": "verify", "suite": "psi", "ring": "F2", "J": 2},
        {"command": "verify", "suite": "weyl", "ring": "F5"},
        {"command": "verify", "suite": "phi", "ring": "F2", "I": 2},
        {"command": "verify", "suite": "relative", "ring": "D2"},
        {"command": "verify", "suite": "hom", "presentation": "stJ", "ring": "F3"},
    ],
)
def test_verify_scenarios_pass(request_, config):
    code, result = run_scenario(scenario(**request_), config)
    assert code == EXIT_PASS, result
    assert result["status"] == "PASS"
    assert result["failures"] == 0
    assert result["reports"]


@pytest.mark.slow
def test_st2_scenario_with_small_coset_budget(config):
    config.budget.max_cosets = 2_000
    code, result = run_scenario(scenario(command="verify", suite="st2", pair="hermitian", ring="F2"), config)
    assert code == EXIT_PASS, result
    assert result["reports"][0]["checks"][0]["name"] == "orthogonal-st3-trivial"


def test_report_envelope(config):
    code, result = run_scenario(scenario(command="verify", suite="ring", ring="F2"), config)
    assert code == EXIT_PASS
    assert set(result) >= {"schemaVersion", "version", "scenario", "config", "reports", "status", "timings"}
    assert result["scenario"]["suite"] == "ring"
    json.dumps(result)


def test_enumerate_pe_fingerprint(config):
    code, result = run_scenario(scenario(command="enumerate", group="pe", pair="full", ring="F3"), config)
    assert code == EXIT_PASS
    data = result["reports"][0]["data"]
    assert data["group"]["order"] == 12
    assert data["fingerprintMatches"] == ["A4"]


def test_enumerate_el_uses_n(config):
    code, result = run_scenario(scenario(command="enumerate", group="el", ring="F2", n=3), config)
    assert code == EXIT_PASS
    assert result["reports"][0]["data"]["group"]["order"] == 168
    code, result = run_scenario(scenario(command="enumerate", group="el", ring="F2", n=2, J=5), config)
    assert code == EXIT_PASS
    data = result["reports"][0]["data"]
    assert data["group"]["order"] == 6
    assert data["fingerprintMatches"] == ["S3"]


def test_coset_closes(config):
    code, result = run_scenario(scenario(command="coset", presentation="stJ", ring="F2"), config)
    assert code == EXIT_PASS
    assert result["reports"][0]["data"]["order"] == 6
    assert result["reports"][2]["data"]["verdict"] == "central"


def test_coset_budget_exit(config):
    code, result = run_scenario(
        scenario(command="coset", presentation="rect-EJ", ring="F2", maxCosets=500), config
    )
    assert code == EXIT_BUDGET
    assert result["status"] == "BUDGET"
    assert result["reports"][0]["data"]["table"]["status"] == "exhausted"


def test_group_budget_exit(config):
    code, result = run_scenario(
        scenario(command="enumerate", group="pe", pair="rect", ring="F2", J=2, maxGroup=10), config
    )
    assert code == EXIT_BUDGET
    assert result["budget"]["limit"] == 10


@pytest.mark.parametrize(
    "request_",
    [
        {"command": "verify", "suite": "nonsense", "ring": "F2"},
        {"command": "verify", "suite": "jp", "pair": "full", "ring": "Q"},
        {"command": "verify", "suite": "jp", "ring": "F2"},
        {"command": "enumerate", "group": "sym", "ring": "F2"},
        {"command": "coset", "presentation": "unknown", "ring": "F2"},
        {"command": "dance"},
        {"command": "verify", "suite": "weyl", "ring": "D2"},
    ],
)
def test_selector_errors(request_, config):
    code, result = run_scenario(scenario(**request_), config)
    assert code == EXIT_SELECTOR
    assert result["status"] == "ERROR"
    assert result["error"]


def test_failing_suite_exit(config, monkeypatch):
    def failing(_scenario, _config):
        report = SuiteReport(suite="fake", subject="x")
        report.record("always", False, {"why": "forced"})
        return [report]

    monkeypatch.setattr(entry, "_verify", failing)
    code, result = run_scenario(scenario(command="verify", suite="ring"), config)
    assert code == EXIT_FAIL
    assert result["failures"] == 1


def test_export_writes_text(tmp_path, config):
    out = tmp_path / "st.txt"
    code, result = run_scenario(
        scenario(command="export", presentation="stJ", ring="F2", out=str(out)), config
    )
    assert code == EXIT_PASS
    text = out.read_text(encoding="utf-8")
    assert text.splitlines()[1] == "generators: xp_1, xm_1"
    assert result["reports"][0]["data"]["path"] == str(out)


def test_main_writes_report_file(tmp_path, monkeypatch):
    monkeypatch.chdir(tmp_path)
    out = tmp_path / "report.json"
    code = main(scenario(command="verify", suite="ring", ring="F4", out=str(out)))
    assert code == EXIT_PASS
    assert json.loads(out.read_text(encoding="utf-8"))["status"] == "PASS"


def test_main_rejects_bad_config(tmp_path, monkeypatch):
    monkeypatch.chdir(tmp_path)
    path = tmp_path / "bad.yaml"
    path.write_text("budget:\n  max_cosets: 0\n", encoding="utf-8")
    assert main(scenario(command="verify", suite="ring"), str(path)) == EXIT_SELECTOR


def test_cli_prints_json(tmp_path, monkeypatch, capsys):
    monkeypatch.chdir(tmp_path)
    monkeypatch.setattr(sys, "argv", ["steinberg-kernel", "verify", "--suite", "jp", "--pair", "full", "--ring", "F2"])
    with pytest.raises(SystemExit) as info:
        cli()
    assert info.value.code == EXIT_PASS
    payload = json.loads(capsys.readouterr().out)
    assert payload["reports"][0]["suite"] == "jp"


def test_cli_rejects_unknown_command(monkeypatch):
    monkeypatch.setattr(sys, "argv", ["steinberg-kernel", "fly"])
    with pytest.raises(SystemExit) as info:
        cli()
    assert info.value.code == 2
