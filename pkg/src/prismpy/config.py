import json
from pathlib import Path
from typing import Annotated, Any, Literal, Self

from pydantic import BaseModel, NonNegativeInt, PlainSerializer, PositiveInt, field_validator, model_validator
from sympy import isprime

PosixPath = Annotated[Path, PlainSerializer(lambda value: value.as_posix(), return_type=str, when_used="json")]

Suite = Literal["delta", "witt", "qanalog", "qpd", "nygaard", "qderham", "all"]


class SuiteConfig(BaseModel):
    suite: Suite = "all"
    p: PositiveInt = 3
    prec: PositiveInt = 3
    series_prec: PositiveInt = 4
    root_depth: NonNegativeInt = 2
    degree: PositiveInt | None = None
    window: PositiveInt | None = None
    level: NonNegativeInt = 3
    length: PositiveInt = 3
    seed: int = 0
    out: PosixPath | None = None

    # noinspection PyNestedDecorators
    @field_validator("p", mode="after")
    @classmethod
    def is_prime(cls, value: int) -> int:
        if not isprime(value):
            raise ValueError(f"{value} is not a prime")
        return value

    @model_validator(mode="after")
    def has_bounds(self) -> Self:
        if self.degree is None:
            self.degree = self.p**2 + self.p
        if self.window is None:
            self.window = 2 * self.p**2
        return self

    @classmethod
    def model_validate_file(cls, path: Path | None = None, **overrides: Any) -> Self:
        """Defaults, then the JSON file, then the explicit overrides that are not None"""
        data: dict[str, Any] = {}

        if path is not None:
            if not path.is_file(follow_symlinks=False):
                raise FileNotFoundError(f"{path.as_posix()} isn't a file")
            text = path.read_text()
            cls.model_validate_json(text)
            data = json.loads(text)

        data.update({key: value for key, value in overrides.items() if value is not None})
        return cls.model_validate(data)

    @property
    def params(self) -> dict[str, Any]:
        return self.model_dump(mode="json", exclude={"out"})
