# Pydantic models for experiment configurations and machine-readable reports.
# Keep models minimal and serializable; the computations live in the kernel modules.
from __future__ import annotations

from fractions import Fraction
from typing import Annotated, Literal, Optional, Union

from pydantic import BaseModel, ConfigDict, Field, PlainSerializer, field_validator, model_validator

SCHEMA_VERSION = 1

# Float in Python, decimal string in JSON documents
DecimalFloat = Annotated[float, PlainSerializer(lambda x: repr(float(x)), return_type=str, when_used="json")]


# Lossless number: decimal string plus exact numerator/denominator when rational
class ExactValue(BaseModel):
    value: str
    num: Optional[int] = None
    den: Optional[int] = None

    @classmethod
    def of(cls, x: Union[Fraction, int, float, complex]) -> "ExactValue":
        if isinstance(x, (Fraction, int)):
            q = Fraction(x)
            return cls(value=repr(float(q)), num=q.numerator, den=q.denominator)
        if isinstance(x, complex):
            return cls(value=repr(x))
        return cls(value=repr(float(x)))

    def as_fraction(self) -> Optional[Fraction]:
        if self.num is None or self.den is None:
            return None
        return Fraction(self.num, self.den)

    def __str__(self) -> str:
        q = self.as_fraction()
        return str(q) if q is not None else self.value


# Fields every JSON document carries
class Report(BaseModel):
    schema_: int = Field(SCHEMA_VERSION, alias="schema")
    config: dict = Field(default_factory=dict)

    model_config = ConfigDict(populate_by_name=True)


class HaarResult(Report):
    group: str
    word: str
    method: str
    value: ExactValue


class ConvergenceReport(Report):
    degree: int = Field(..., ge=1)
    pattern: list[bool]
    iterations: int = Field(..., ge=1)
    residuals: list[DecimalFloat]
    converged: bool
    tolerance: DecimalFloat = Field(..., gt=0)
    subleading_modulus: Optional[DecimalFloat] = None
    float_mode: bool = False
    # 10 k eps dim, reported when powering ran in binary64
    error_bound: Optional[DecimalFloat] = None
    exact_final_residual: Optional[ExactValue] = None
    monotone_after_transient: bool = True
    labels: list[str] = Field(default_factory=list)

    @field_validator("exact_final_residual", mode="before")
    @classmethod
    def _wrap_exact(cls, v: object) -> object:
        if isinstance(v, (Fraction, int)):
            return ExactValue.of(v)
        return v

    @model_validator(mode="after")
    def _check_residuals(self) -> "ConvergenceReport":
        if len(self.residuals) != self.iterations:
            raise ValueError("one residual per iteration")
        if self.converged != (self.residuals[-1] <= self.tolerance):
            raise ValueError("converged must match the last residual")
        return self


class DefectReport(Report):
    words: list[str]
    defects: list[DecimalFloat]
    gram_min_eigenvalue: DecimalFloat
    cauchy_schwarz_ok: bool
    trace_values: dict[str, ExactValue] = Field(default_factory=dict)
    k: int = Field(1, ge=1)

    @property
    def psd_ok(self) -> bool:
        return self.gram_min_eigenvalue >= -1e-9 and all(d >= -1e-9 for d in self.defects)


class NetElementReport(BaseModel):
    label: str
    k: int
    trace_error: DecimalFloat
    max_defect: DecimalFloat


class FactorizationReport(Report):
    elements: list[NetElementReport]
    trace_errors: list[DecimalFloat]
    max_defects: list[DecimalFloat]
    trace_error_decreasing: bool
    defect_decreasing: bool
    witnesses: bool
    trace_error_threshold: DecimalFloat
    defect_threshold: DecimalFloat
    details: list[DefectReport] = Field(default_factory=list)


class UsplitReport(Report):
    n: int = Field(..., ge=1)
    max_degree: int = Field(..., ge=0)
    words_checked: int
    max_discrepancy: ExactValue
    worst_word: Optional[str] = None
    passed: bool


class MomentRow(BaseModel):
    k: int = Field(..., ge=0)
    value: ExactValue


# Experiment configurations: validated before execution


class ExperimentConfig(BaseModel):
    model_config = ConfigDict(frozen=True, extra="forbid")

    seed: int = 0
    out: Optional[str] = None
    cap_entries: Optional[int] = Field(None, ge=1)


class ConvergeConfig(ExperimentConfig):
    group: str = "o+:4"
    pair: Literal["classical+fixlast", "fixlast2", "perm+blocksplit", "haar"] = "classical+fixlast"
    degree: int = Field(4, ge=1)
    pattern: Optional[str] = None
    tol: DecimalFloat = Field(1e-6, gt=0)
    max_iter: int = Field(500, ge=1)


class UsplitConfig(ExperimentConfig):
    n: int = Field(2, ge=1)
    max_degree: int = Field(4, ge=0)
    sample: int = Field(500, ge=1)


class MomentsConfig(ExperimentConfig):
    group: str
    k_max: int = Field(8, ge=0)


NetPreset = Literal["s-full", "o-sampling", "o-convolved"]


class NetSpec(ExperimentConfig):
    """
    Factorization-net recipe for the `defect` command, usually loaded from YAML:

        preset: o-convolved
        n: 4
        sizes: [100, 400, 1600]
        seed: 7
    """

    preset: NetPreset = "o-sampling"
    n: int = Field(4, ge=2)
    sizes: list[int] = Field(default_factory=lambda: [100, 400, 1600])
    trace_error_threshold: DecimalFloat = Field(0.1, gt=0)
    defect_threshold: DecimalFloat = Field(1e-10, gt=0)

    @field_validator("sizes")
    @classmethod
    def _positive_sizes(cls, v: list[int]) -> list[int]:
        if not v or any(s < 1 for s in v):
            raise ValueError("sizes must be a non-empty list of positive integers")
        return v
