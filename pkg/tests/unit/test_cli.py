"""End-to-end CLI: outputs and exit codes."""

import json
import logging
from fractions import Fraction

import pytest

from rotinv.cli import (
    EXIT_BAD_FLAGS,
    EXIT_CACHE_CORRUPT,
    EXIT_DEGENERATE,
    EXIT_DOMAIN,
    EXIT_OK,
    main,
    parse_vector,
)
from rotinv.coeffs import clear_memo


@pytest.fixture(autouse=True)
def workspace(tmp_path, monkeypatch):
    root = logging.getLogger()
    handlers, level = list(root.handlers), root.level
    monkeypatch.chdir(tmp_path)
    monkeypatch.delenv("ROTINV_CONFIG", raising=False)
    monkeypatch.delenv("ROTINV_CACHE_PATH", raising=False)
    clear_memo()
    yield tmp_path
    clear_memo()
    root.handlers[:] = handlers
    root.setLevel(level)


def _complex(text):
    return complex(text.strip().replace("i", "j"))


def test_parse_vector():
    assert parse_vector("1,0,-1/2") == (1, 0, Fraction(-1, 2))
    assert parse_vector("(0.5, 2, 3)")[0] == 0.5
    with pytest.raises(ValueError):
        parse_vector("1,2")
    with pytest.raises(ValueError):
        parse_vector("1,2,x")


def test_table_text(capsys):
    assert main(["table", "0", "2", "2"]) == EXIT_OK
    assert capsys.readouterr().out == "1/sqrt(5) * { 1/2 [ 3 h1^2 - x2 x3 ] }\n"


def test_table_json(capsys):
    assert main(["table", "3", "3", "6", "--format", "json"]) == EXIT_OK
    doc = json.loads(capsys.readouterr().out)
    assert (doc["j"], doc["k"], doc["l"]) == (3, 3, 6)
    assert doc["parity"] == "even"


def test_table_recursive_matches_closed(capsys):
    main(["table", "2", "3", "4"])
    closed = capsys.readouterr().out
    clear_memo()
    main(["table", "2", "3", "4", "--method", "recursive"])
    assert capsys.readouterr().out == closed


def test_table_domain_error(capsys):
    assert main(["table", "1", "1", "3"]) == EXIT_DOMAIN
    assert "triangle" in capsys.readouterr().err.lower()


@pytest.mark.parametrize(
    "argv",
    [
        ["table", "0", "2"],
        ["table", "0", "2", "2", "--format", "pdf"],
        ["frobnicate"],
        ["--log-level", "chatty", "table", "0", "0", "0"],
        ["coeffs", "1", "1", "0", "both"],
        [],
    ],
)
def test_bad_flags(argv):
    assert main(argv) == EXIT_BAD_FLAGS


def test_coeffs_text(capsys):
    assert main(["coeffs", "2", "2", "1"]) == EXIT_OK
    lines = capsys.readouterr().out.splitlines()
    assert lines[0] == "even table j=2 k=2 n=1 lambda=1 P=-12"
    assert lines[1:] == ["(0,0,1) 18", "(0,1,0) -54", "(0,2,0) 18", "(1,0,0) 18", "(1,0,1) -12"]


def test_coeffs_json(capsys):
    assert main(["coeffs", "1", "1", "0", "odd", "--format", "json"]) == EXIT_OK
    doc = json.loads(capsys.readouterr().out)
    assert doc["kind"] == "odd"
    assert doc["normalizer"] == "8/1"
    assert doc["entries"] == [
        {"a": 0, "b": 0, "c": 0, "value": "10/1"},
        {"a": 0, "b": 1, "c": 0, "value": "-2/1"},
    ]


def test_coeffs_domain_error():
    assert main(["coeffs", "3", "2", "0"]) == EXIT_DOMAIN


def test_eval_exact(capsys):
    assert main(["eval", "1", "1", "1", "1,0,0", "0,1,0", "0,0,1"]) == EXIT_OK
    assert capsys.readouterr().out == "i/sqrt(6)\n"
    assert main(["eval", "1", "1", "1", "(-1,0,0)", "0,1,0", "0,0,1"]) == EXIT_OK
    assert capsys.readouterr().out == "-i/sqrt(6)\n"
    assert main(["eval", "0", "0", "0", "1,2,3", "0,0,0", "1,1,1"]) == EXIT_OK
    assert capsys.readouterr().out == "1\n"


def test_eval_float_and_appendix_agree(capsys):
    vectors = ["1,2,3", "(-1,1/2,2)", "0,1,-1"]
    assert main(["eval", "2", "3", "5", *vectors, "--mode", "float"]) == EXIT_OK
    flt = _complex(capsys.readouterr().out)
    assert main(["eval", "2", "3", "5", *vectors, "--mode", "appendix"]) == EXIT_OK
    app = _complex(capsys.readouterr().out)
    assert abs(flt - app) <= 1e-9 * max(1.0, abs(flt))
    assert abs(flt.imag) < 1e-12


def test_eval_degenerate_geometry(capsys):
    argv = ["eval", "1", "1", "2", "0,0,1", "0,0,2", "1,0,0", "--mode", "appendix"]
    assert main(argv) == EXIT_DEGENERATE
    assert "degenerate" in capsys.readouterr().err


def test_eval_bad_vector():
    assert main(["eval", "1", "1", "2", "0,0", "0,1,0", "1,0,0"]) == EXIT_DOMAIN


def test_verify_reports_waiver(capsys):
    argv = ["verify", "--max-l", "0", "--suite", "laplace", "--suite", "golden", "--workers", "2"]
    assert main(argv) == EXIT_OK
    out = capsys.readouterr()
    doc = json.loads(out.out)
    assert {r["suite"] for r in doc} == {"laplace", "golden"}
    assert "1 waived" in out.err


def test_verify_unknown_suite():
    assert main(["verify", "--max-l", "0", "--suite", "bogus"]) == EXIT_DOMAIN


def test_cache_build_inspect_and_use(workspace, capsys):
    assert main(["cache", "build", "--max-l", "1"]) == EXIT_OK
    assert capsys.readouterr().out.splitlines()[0] == "6 tables"
    assert (workspace / "data" / "cache" / "coefficients.yaml").is_file()
    assert main(["cache", "inspect", "--format", "json"]) == EXIT_OK
    assert len(json.loads(capsys.readouterr().out)) == 6
    assert main(["table", "1", "1", "1"]) == EXIT_OK
    assert capsys.readouterr().out == "i zeta/sqrt(6)\n"


def test_corrupt_cache_exit_code(workspace, monkeypatch, capsys):
    bad = workspace / "bad.yaml"
    bad.write_text("kind: [unclosed\n", encoding="utf-8")
    assert main(["cache", "inspect", "--path", str(bad)]) == EXIT_CACHE_CORRUPT
    monkeypatch.setenv("ROTINV_CACHE_PATH", "bad.yaml")
    assert main(["table", "0", "0", "0"]) == EXIT_CACHE_CORRUPT
    assert "corrupt cache" in capsys.readouterr().err


def test_cache_inspect_missing(workspace):
    assert main(["cache", "inspect", "--path", str(workspace / "none.yaml")]) == EXIT_DOMAIN


def test_config_errors(workspace):
    assert main(["--config", "missing.yaml", "table", "0", "0", "0"]) == EXIT_DOMAIN
    cfg = workspace / "rotinv.yaml"
    cfg.write_text("colour: blue\n", encoding="utf-8")
    assert main(["--config", str(cfg), "table", "0", "0", "0"]) == EXIT_DOMAIN
