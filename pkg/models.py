from enum import Enum
from fractions import Fraction
from typing import Annotated, Optional

from pydantic import BaseModel, BeforeValidator, ConfigDict, Field, PlainSerializer

from helpers.exactq import format_rational, to_rational

Rational = Annotated[
    Fraction,
    BeforeValidator(to_rational),
    PlainSerializer(format_rational, return_type=str, when_used="json"),
]


class SchemeFamily(str, Enum):
    HAMMING = "hamming"
    JOHNSON = "johnson"
    QJOHNSON = "qjohnson"
    BILINEAR = "bilinear"
    ALTERNATING = "alternating"
    HERMITIAN = "hermitian"
    POLAR_2A_ODD = "polar-2a-odd"
    POLAR_2A_EVEN = "polar-2a-even"
    POLAR_B = "polar-b"
    POLAR_C = "polar-c"
    POLAR_D = "polar-d"
    POLAR_2D = "polar-2d"
    HALF_D = "half-d"


AFFINE_FAMILIES = frozenset({SchemeFamily.BILINEAR, SchemeFamily.ALTERNATING, SchemeFamily.HERMITIAN})
ORDINARY_FAMILIES = frozenset({SchemeFamily.QJOHNSON, SchemeFamily.POLAR_2A_ODD, SchemeFamily.HALF_D})
POLAR_FAMILIES = frozenset({
    SchemeFamily.POLAR_2A_ODD,
    SchemeFamily.POLAR_2A_EVEN,
    SchemeFamily.POLAR_B,
    SchemeFamily.POLAR_C,
    SchemeFamily.POLAR_D,
    SchemeFamily.POLAR_2D,
})


class SchemeSpec(BaseModel):
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    family: SchemeFamily
    q: int
    n: int = Field(description="Number of classes")
    m: Optional[int] = None
    b: Optional[Rational] = Field(default=None, description="Base of the q-analog; z_i = b^-i")
    c: Optional[Rational] = None
    num_vertices: int
    polar_p: Optional[int] = None
    polar_sqrt_p: Optional[int] = Field(default=None, description="q when p = q^2, otherwise absent")
    polar_two_e: Optional[int] = Field(default=None, description="Twice the polar parameter e")
    second_ordering: bool = False

    @property
    def label(self) -> str:
        parts = [self.family.value, f"q={self.q}", f"n={self.n}"]
        if self.m is not None:
            parts.append(f"m={self.m}")
        if self.family == SchemeFamily.POLAR_2A_ODD and not self.second_ordering:
            parts.append("standard-ordering")
        return " ".join(parts)


class DistKind(str, Enum):
    INNER = "inner"
    DUAL = "dual"
    PRIMAL_SOLUTION = "primal_solution"
    DUAL_SOLUTION = "dual_solution"


class DistVector(BaseModel):
    model_config = ConfigDict(arbitrary_types_allowed=True)

    entries: list[Rational]
    kind: DistKind

    def total(self) -> Fraction:
        return sum(self.entries, Fraction(0))

    def weighted_total(self, weights) -> Fraction:
        return sum((w * x for w, x in zip(weights, self.entries)), Fraction(0))

    def __len__(self):
        return len(self.entries)

    def __getitem__(self, index):
        return self.entries[index]


class Sense(str, Enum):
    MAXIMIZE = "maximize"
    MINIMIZE = "minimize"


class Relation(str, Enum):
    LE = "<="
    GE = ">="
    EQ = "="


class LPRow(BaseModel):
    model_config = ConfigDict(arbitrary_types_allowed=True)

    coefficients: list[Rational]
    relation: Relation
    rhs: Rational
    label: str = ""


class LinearProgram(BaseModel):
    model_config = ConfigDict(arbitrary_types_allowed=True)

    num_vars: int
    objective: list[Rational]
    sense: Sense
    rows: list[LPRow]
    nonneg_vars: list[int]
    fixed_vars: dict[int, Rational] = Field(default_factory=dict)
    variable_kind: DistKind = DistKind.PRIMAL_SOLUTION
    scheme_label: str = ""


class LPStatus(str, Enum):
    OPTIMAL = "optimal"
    INFEASIBLE = "infeasible"
    UNBOUNDED = "unbounded"


class LPSolution(BaseModel):
    model_config = ConfigDict(arbitrary_types_allowed=True)

    status: LPStatus
    objective_value: Optional[Rational] = None
    variable_values: Optional[DistVector] = None
    active_constraints: list[int] = Field(default_factory=list)


class CertificatePair(BaseModel):
    model_config = ConfigDict(arbitrary_types_allowed=True)

    scheme: SchemeSpec
    d: int
    primal: DistVector
    dual: DistVector
    primal_objective: Rational
    dual_objective: Rational
    duality_gap_zero: bool
    primal_violations: list[str] = Field(default_factory=list)
    dual_violations: list[str] = Field(default_factory=list)
    source: str = ""

    @property
    def verified(self) -> bool:
        return self.duality_gap_zero and not self.primal_violations and not self.dual_violations


class Verdict(str, Enum):
    MATCH = "match"
    MISMATCH = "mismatch"
    UNVERIFIED = "unverified"


class BoundReport(BaseModel):
    model_config = ConfigDict(arbitrary_types_allowed=True)

    family: str
    q: int
    n: int
    m: Optional[int] = None
    d: Optional[int] = None
    t: Optional[int] = None
    formula_value: Optional[Rational] = None
    solver_value: Optional[Rational] = None
    certificate_value: Optional[Rational] = None
    verdict: Verdict
    elapsed_ms: float = 0.0
    note: Optional[str] = None
