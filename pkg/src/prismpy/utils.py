import logging
import time
from collections.abc import Iterable

import typer
from pydantic import JsonValue
from pydantic_core import to_jsonable_python

from .algebra.base import AlgebraError, OutOfRange
from .managers import Case
from .report import CaseResult, Status

logger = logging.getLogger(__name__)

STATUS_COLORS = {"pass": "green", "fail": "red", "skip": "yellow"}


def jsonable(value: object) -> JsonValue:
    return to_jsonable_python(value, fallback=str)


def run_case(case: Case) -> tuple[Status, JsonValue]:
    """Only a computation beyond the configured bounds is skipped, any other error is a failed case"""
    try:
        return "pass", jsonable(case.check())
    except OutOfRange as e:
        return "skip", {"error": type(e).__name__, "message": str(e)}
    except AlgebraError as e:
        return "fail", {"error": type(e).__name__, "message": str(e), "witness": jsonable(e.witness)}
    except Exception as e:  # noqa: BLE001
        logger.debug("Case %s raised", case.name, exc_info=True)
        return "fail", {"error": type(e).__name__, "message": str(e)}


def run_all(cases: Iterable[Case], timings: bool = True, quiet: bool = False) -> list[CaseResult]:
    results = []

    for number, case in enumerate(cases, start=1):
        start = time.perf_counter()
        status, witness = run_case(case)
        millis = round((time.perf_counter() - start) * 1000)

        logger.debug("Case %s finished with %s in %s ms", case.name, status, millis)
        results.append(CaseResult(name=case.name, status=status, witness=witness, millis=millis if timings else None))

        if not quiet:
            typer.echo(
                f"Case [{number:>05}]: {typer.style(case.name, fg='green')} ... "
                f"{typer.style(status, fg=STATUS_COLORS[status])} ({millis} ms)",
                err=True,
            )

    return results
