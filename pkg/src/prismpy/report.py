from pathlib import Path
from typing import Literal, Self

from pydantic import BaseModel, Field, JsonValue, NonNegativeInt

from . import __version__

Status = Literal["pass", "fail", "skip"]


class CaseResult(BaseModel):
    name: str
    status: Status
    witness: JsonValue = None
    millis: NonNegativeInt | None = None


class Summary(BaseModel):
    total: NonNegativeInt = 0
    passed: NonNegativeInt = 0
    failed: NonNegativeInt = 0
    skipped: NonNegativeInt = 0

    @classmethod
    def from_cases(cls, cases: list[CaseResult]) -> Self:
        statuses = [case.status for case in cases]
        return cls(
            total=len(statuses),
            passed=statuses.count("pass"),
            failed=statuses.count("fail"),
            skipped=statuses.count("skip"),
        )


class Report(BaseModel):
    version: str = __version__
    command: str
    params: dict[str, JsonValue] = Field(default_factory=dict)
    cases: list[CaseResult] = Field(default_factory=list)
    summary: Summary = Field(default_factory=Summary)

    @classmethod
    def from_cases(cls, command: str, params: dict[str, JsonValue], cases: list[CaseResult]) -> Self:
        ordered = sorted(cases, key=lambda case: case.name)
        return cls(command=command, params=params, cases=ordered, summary=Summary.from_cases(ordered))

    @property
    def exit_code(self) -> int:
        """A failed case wins over a skipped one, a skipped case counts as out of range input"""
        if self.summary.failed:
            return 1
        return 2 if self.summary.skipped else 0

    def model_dump_report(self, path: Path | None = None) -> str:
        text = self.model_dump_json(indent=2) + "\n"
        if path is not None:
            path.parent.mkdir(parents=True, exist_ok=True)
            path.write_text(text)
        return text
