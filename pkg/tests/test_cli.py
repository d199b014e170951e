import json
from pathlib import Path

import pytest
from typer.testing import CliRunner

from prismpy import __version__, managers
from prismpy.algebra.base import PrecisionLoss
from prismpy.cli import app
from prismpy.managers import Case

runner = CliRunner()


def test_version() -> None:
    result = runner.invoke(app, ["--version"])
    assert result.exit_code == 0
    assert __version__ in result.stdout


def test_help_without_command() -> None:
    result = runner.invoke(app, [])
    assert result.exit_code == 0
    assert "verify" in result.stdout


def test_verify_suite() -> None:
    result = runner.invoke(app, ["verify", "--suite", "qanalog", "--p", "2", "--quiet", "--no-timings"])
    assert result.exit_code == 0

    report = json.loads(result.stdout)
    assert report["command"] == "verify"
    assert report["params"]["p"] == 2
    assert report["summary"]["failed"] == 0
    assert report["summary"]["total"] == len(report["cases"])
    assert all(case["name"].startswith("qanalog/") for case in report["cases"])
    assert all(case["millis"] is None for case in report["cases"])


def test_verify_is_deterministic() -> None:
    arguments = ["verify", "--suite", "qanalog", "--seed", "7", "--quiet", "--no-timings"]
    assert runner.invoke(app, arguments).stdout == runner.invoke(app, arguments).stdout


def test_verify_writes_report(tmp_path: Path) -> None:
    path = tmp_path / "report.json"
    result = runner.invoke(app, ["verify", "--suite", "qanalog", "--quiet", "--out", path.as_posix()])

    assert result.exit_code == 0
    assert json.loads(path.read_text())["summary"]["failed"] == 0


def test_verify_reads_config_file(tmp_path: Path) -> None:
    path = tmp_path / "prismpy.json"
    path.write_text(json.dumps({"suite": "qanalog", "p": 5}))
    result = runner.invoke(app, ["verify", "--config", path.as_posix(), "--quiet", "--no-timings"])

    assert result.exit_code == 0
    assert json.loads(result.stdout)["params"]["p"] == 5


def test_usage_errors() -> None:
    assert runner.invoke(app, ["verify", "--bogus"]).exit_code == 2
    assert runner.invoke(app, ["verify", "--suite", "nope"]).exit_code == 2
    assert runner.invoke(app, ["verify", "--p", "4"]).exit_code == 2
    assert runner.invoke(app, ["verify", "--config", "missing.json"]).exit_code == 2


def test_cohomology() -> None:
    result = runner.invoke(
        app,
        ["cohomology", "--ring", "x", "--p", "3", "--prec", "1", "--window", "4", "--quiet", "--no-timings"],
    )
    assert result.exit_code == 0

    report = json.loads(result.stdout)
    assert report["command"] == "cohomology x qderham at q1"
    h0, h1 = report["cases"]
    assert h0["name"] == "H^0"
    assert h0["witness"]["total"]["free_rank"] == 2
    assert h1["witness"]["total"]["free_rank"] == 1
    assert set(h0["witness"]["tables"]) == {"0", "3"}


def test_cohomology_usage_errors() -> None:
    assert runner.invoke(app, ["cohomology", "--ring", "x y"]).exit_code == 2
    assert runner.invoke(app, ["cohomology", "--ring", "x", "--theory", "crystalline"]).exit_code == 2
    assert runner.invoke(app, ["cohomology", "--ring", "x", "--at", "zero"]).exit_code == 2
    assert runner.invoke(app, ["cohomology", "--ring", "x", "--theory", "derham", "--at", "zeta"]).exit_code == 2
    assert runner.invoke(app, ["cohomology", "--ring", "x", "--framing", "y -> y"]).exit_code == 2
    assert runner.invoke(app, ["cohomology", "--ring", "x^±1", "--framing", "x -> x + p"]).exit_code == 2


def test_nygaard() -> None:
    arguments = ["nygaard", "--p", "2", "--root-depth", "2", "--degree", "6", "--level", "1", "--quiet"]
    result = runner.invoke(app, arguments)
    assert result.exit_code == 0
    assert json.loads(result.stdout)["cases"][0]["name"] == "nygaard/level n=1"

    assert runner.invoke(app, ["nygaard", "--root-depth", "0"]).exit_code == 2


def test_witt_add() -> None:
    result = runner.invoke(app, ["witt", "add", "--p", "2", "--len", "2", "--a", "1,0", "--b", "1,0", "--quiet"])
    assert result.exit_code == 0
    assert json.loads(result.stdout)["cases"][0]["witness"]["components"] == [0, 1]


def test_witt_operations() -> None:
    teich = runner.invoke(app, ["witt", "teich", "--p", "3", "--order", "9", "--len", "2", "--a", "4", "--quiet"])
    assert teich.exit_code == 0

    twist = runner.invoke(app, ["witt", "tate-twist", "--p", "2", "--order", "4", "--len", "1", "--quiet"])
    assert twist.exit_code == 0
    assert json.loads(twist.stdout)["cases"][0]["witness"]["h0"]["free_rank"] == 1


def test_witt_usage_errors() -> None:
    assert runner.invoke(app, ["witt", "add", "--p", "2", "--len", "2", "--a", "1", "--b", "1,0"]).exit_code == 2
    assert runner.invoke(app, ["witt", "add", "--p", "2", "--len", "1", "--a", "5", "--b", "1"]).exit_code == 2
    assert runner.invoke(app, ["witt", "mul", "--p", "3", "--order", "4"]).exit_code == 2
    assert runner.invoke(app, ["witt", "divide", "--p", "2"]).exit_code == 2
    assert runner.invoke(app, ["witt", "tate-twist", "--p", "2", "--len", "1", "--twist", "1"]).exit_code == 2


def test_verify_fails_when_a_check_raises(monkeypatch: pytest.MonkeyPatch) -> None:
    def raises() -> None:
        raise ValueError("Windows must increase")

    monkeypatch.setattr(managers, "read_all_cases", lambda _: iter([Case(name="qderham/windows", check=raises)]))
    result = runner.invoke(app, ["verify", "--quiet", "--no-timings"])

    assert result.exit_code == 1
    assert json.loads(result.stdout)["cases"][0]["status"] == "fail"


def test_verify_exits_with_usage_error_on_skip(monkeypatch: pytest.MonkeyPatch) -> None:
    def out_of_range() -> None:
        raise PrecisionLoss("needs N >= 2")

    monkeypatch.setattr(managers, "read_all_cases", lambda _: iter([Case(name="qpd/precision", check=out_of_range)]))
    result = runner.invoke(app, ["verify", "--quiet", "--no-timings"])

    assert result.exit_code == 2
    assert json.loads(result.stdout)["summary"]["skipped"] == 1
