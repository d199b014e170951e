import json
from pathlib import Path

import pytest

from prismpy import __version__, utils
from prismpy.algebra.base import Mismatch, MixedRings, NotDivisible, PrecisionLoss
from prismpy.managers import Case, confirm
from prismpy.report import CaseResult, Report, Summary


def test_summary() -> None:
    cases = [
        CaseResult(name="b", status="pass"),
        CaseResult(name="a", status="fail"),
        CaseResult(name="c", status="skip"),
    ]
    assert Summary.from_cases(cases) == Summary(total=3, passed=1, failed=1, skipped=1)


def test_report_orders_cases() -> None:
    report = Report.from_cases(
        command="verify",
        params={"p": 3},
        cases=[CaseResult(name="qpd/b", status="pass"), CaseResult(name="qpd/a", status="pass")],
    )
    assert [case.name for case in report.cases] == ["qpd/a", "qpd/b"]
    assert report.version == __version__
    assert report.exit_code == 0


def test_failed_report_exit_code() -> None:
    report = Report.from_cases(command="verify", params={}, cases=[CaseResult(name="x", status="fail")])
    assert report.exit_code == 1


def test_skipped_report_exit_code() -> None:
    skipped = [CaseResult(name="x", status="pass"), CaseResult(name="y", status="skip")]
    assert Report.from_cases(command="verify", params={}, cases=skipped).exit_code == 2

    failed = [*skipped, CaseResult(name="z", status="fail")]
    assert Report.from_cases(command="verify", params={}, cases=failed).exit_code == 1


def test_report_file(tmp_path: Path) -> None:
    path = tmp_path / "out" / "report.json"
    report = Report.from_cases(command="verify", params={}, cases=[CaseResult(name="x", status="pass", millis=3)])
    text = report.model_dump_report(path)

    assert path.read_text() == text
    data = json.loads(text)
    assert set(data) == {"version", "command", "params", "cases", "summary"}
    assert data["cases"] == [{"name": "x", "status": "pass", "witness": None, "millis": 3}]


def test_run_case_statuses() -> None:
    def mismatch() -> None:
        confirm(False, "tables differ", {"weight": 3})

    def not_divisible() -> None:
        raise NotDivisible("3 does not divide 2", remainder=2)

    def out_of_range() -> None:
        raise PrecisionLoss("needs N >= 2")

    assert utils.run_case(Case(name="a", check=lambda: {"value": 1})) == ("pass", {"value": 1})

    status, witness = utils.run_case(Case(name="b", check=mismatch))
    assert status == "fail"
    assert witness == {"error": "Mismatch", "message": "tables differ", "witness": {"weight": 3}}

    assert utils.run_case(Case(name="c", check=not_divisible))[0] == "fail"
    assert utils.run_case(Case(name="d", check=out_of_range))[0] == "skip"


def test_run_case_fails_on_other_errors() -> None:
    def bad_argument() -> None:
        raise ValueError("Windows must increase")

    def broken() -> None:
        raise AttributeError("missing method")

    def mixed() -> None:
        raise MixedRings("Z/9 and Z/27")

    assert utils.run_case(Case(name="a", check=bad_argument)) == (
        "fail",
        {"error": "ValueError", "message": "Windows must increase"},
    )
    assert utils.run_case(Case(name="b", check=broken))[0] == "fail"
    assert utils.run_case(Case(name="c", check=mixed))[0] == "fail"


def test_confirm() -> None:
    assert confirm(True, "unused", [1]) == [1]

    with pytest.raises(Mismatch, match="broken"):
        confirm(False, "broken")


def test_run_all_without_timings() -> None:
    results = utils.run_all([Case(name="a", check=lambda: None)], timings=False, quiet=True)
    assert results == [CaseResult(name="a", status="pass")]
