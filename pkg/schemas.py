# schemas.py
import re
from enum import Enum
from typing import Optional

from pydantic import BaseModel, Field, field_validator, model_validator

from helpers.errors import ParameterError
from models import SchemeFamily

MAX_RANGE_LENGTH = 64
_RANGE_PATTERN = re.compile(r"^(\d+)\.\.(\d+)$")


class OutputFormat(str, Enum):
    JSON = "json"
    CSV = "csv"
    TEXT = "text"


def parse_int_range(text) -> list[int]:
    """'3', '2,3,5' or '1..4' (inclusive) into a sorted list of distinct integers."""
    if text is None:
        return []
    if isinstance(text, int):
        return [text]
    if isinstance(text, (list, tuple)):
        return sorted({int(x) for x in text})
    values = set()
    for part in str(text).split(","):
        part = part.strip()
        match = _RANGE_PATTERN.match(part)
        if match:
            low, high = int(match.group(1)), int(match.group(2))
            if high < low:
                raise ParameterError(f"empty range {part!r}")
            if high - low + 1 > MAX_RANGE_LENGTH:
                raise ParameterError(f"range {part!r} is longer than {MAX_RANGE_LENGTH} values")
            values.update(range(low, high + 1))
        elif part.isdigit():
            values.add(int(part))
        else:
            raise ParameterError(f"cannot read {part!r} as an integer or a range a..b")
    return sorted(values)


class RunConfig(BaseModel):
    command: str
    schemes: list[SchemeFamily] = Field(default_factory=list)
    q_values: list[int] = Field(default_factory=list)
    n_values: list[int] = Field(default_factory=list)
    m_values: list[int] = Field(default_factory=list)
    d_values: list[int] = Field(default_factory=list)
    t_values: list[int] = Field(default_factory=list)
    output_format: OutputFormat = OutputFormat.TEXT
    out: Optional[str] = Field(default=None, description="Output path; standard output when absent")
    cap: int = Field(default=4096, description="Oracle vertex cap")
    time_budget: Optional[int] = Field(default=None, description="Clique search budget in seconds")
    decimal: bool = False
    timings: bool = False
    workers: int = 1

    @field_validator("q_values", "n_values", "m_values", "d_values", "t_values", mode="before")
    @classmethod
    def _parse_ranges(cls, value):
        return parse_int_range(value)

    @field_validator("q_values")
    @classmethod
    def _check_q(cls, value):
        bad = [q for q in value if q < 2]
        if bad:
            raise ValueError(f"q must be >= 2, got {bad}")
        return value

    @field_validator("n_values", "m_values", "d_values", "t_values")
    @classmethod
    def _check_positive(cls, value):
        bad = [x for x in value if x < 1]
        if bad:
            raise ValueError(f"values must be >= 1, got {bad}")
        return value

    @field_validator("cap", "workers")
    @classmethod
    def _check_cap(cls, value):
        if value < 1:
            raise ValueError(f"must be >= 1, got {value}")
        return value

    @model_validator(mode="after")
    def _check_selection(self):
        if self.command in ("bound", "certify", "oracle", "table") and not self.schemes:
            raise ValueError(f"{self.command} needs --scheme")
        if self.command in ("bound", "certify", "oracle", "table") and not self.q_values:
            raise ValueError(f"{self.command} needs --q")
        if self.d_values and self.t_values:
            raise ValueError("pass either --d or --t, not both")
        return self
