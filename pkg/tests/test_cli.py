"""
Tests for the trace-fields command line.
"""

import json

import numpy as np
import pytest

from trace_fields.cli import EXIT_DOMAIN_ERROR, EXIT_OK, EXIT_USAGE, build_parser, cli_main


@pytest.fixture
def corpus_file(tmp_path):
    def write(name: str, max_length: int = 3) -> str:
        path = tmp_path / f"{name}.json"
        code = cli_main(
            ["corpus", "--name", name, "--max-length", str(max_length), "--out", str(path)]
        )
        assert code == EXIT_OK
        return str(path)

    return write


def _report(path) -> dict:
    with open(path, encoding="utf-8") as f:
        return json.load(f)


def test_parser_lists_every_command():
    parser = build_parser()
    args = parser.parse_args(["classify", "--in", "x.json", "--eps-field", "1e-6"])
    assert args.cmd == "classify"
    assert args.eps_field == 1e-6
    assert args.max_length is None


def test_detect_hidden_real_group(corpus_file, tmp_path):
    out = tmp_path / "report.json"
    code = cli_main(["detect", "--in", corpus_file("so21-hidden", 4), "--out", str(out)])
    assert code == EXIT_OK
    report = _report(out)
    assert report["command"] == "detect"
    assert report["error"] is None
    assert report["result"]["verdict"] == "RFuchsian"
    assert report["result"]["assumed_discrete"] is True
    assert report["certificates"][0]["kind"] == "RealForm"


def test_domain_error_exit_code(corpus_file, tmp_path, capsys):
    out = tmp_path / "report.json"
    code = cli_main(["so21", "--in", corpus_file("sl2z"), "--out", str(out)])
    assert code == EXIT_DOMAIN_ERROR
    assert _report(out)["error"]["tag"] == "Reducible"
    assert "Reducible" in capsys.readouterr().err


def test_classify_to_stdout(corpus_file, capsys):
    path = corpus_file("single-lox")
    capsys.readouterr()
    assert cli_main(["classify", "--in", path]) == EXIT_OK
    element = json.loads(capsys.readouterr().out)["result"]["elements"][0]
    assert element["tag"] == "Loxodromic"
    assert np.isclose(element["lam"], 2)
    assert np.isclose(element["phi"], np.pi / 5)
    assert element["screw_motion"] is True


def test_usage_errors(tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text("{not json", encoding="utf-8")
    assert cli_main(["classify", "--in", str(bad)]) == EXIT_USAGE
    assert cli_main(["classify", "--in", str(tmp_path / "missing.json")]) == EXIT_USAGE
    assert cli_main(["frobnicate", "--in", str(bad)]) == EXIT_USAGE
    assert cli_main(["corpus", "--name", "nope"]) == EXIT_USAGE
    assert cli_main(["classify", "--in", str(bad), "--max-length", "13"]) == EXIT_USAGE


def test_reports_are_deterministic(corpus_file, tmp_path):
    path = corpus_file("random-irreducible")
    reports = []
    for k in range(2):
        out = tmp_path / f"run{k}.json"
        assert cli_main(["trace-field", "--in", path, "--seed", "5", "--out", str(out)]) == EXIT_OK
        report = _report(out)
        report.pop("timing_seconds")
        reports.append(report)
    assert reports[0] == reports[1]
    assert reports[0]["seed"] == 5
    assert reports[0]["trace_samples"]
