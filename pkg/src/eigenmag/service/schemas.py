"""Request/response models shared by the HTTP service and the CLI client."""

from __future__ import annotations

from typing import Literal

from pydantic import BaseModel, Field, model_validator


class GeneratorModel(BaseModel):
    kind: Literal["goe", "gue", "jacobi", "diagonal", "clustered"]
    n: int = Field(ge=1)
    seed: int = Field(ge=0, lt=2**64)
    multiplicities: list[int] | None = None


class MagnitudesRequest(BaseModel):
    matrix_text: str
    col: int | None = None  # 1-based coordinate; None = full table
    tol: float | None = None
    format: Literal["csv", "json"] = "csv"


class MagnitudesResponse(BaseModel):
    content: str
    media_type: str
    n: int


class ResolventRequest(BaseModel):
    model_config = {"populate_by_name": True}

    matrix_text: str
    col: int = 1
    start: float = Field(alias="from")
    stop: float = Field(alias="to")
    samples: int = Field(ge=1)
    form: Literal["det", "pf", "both"] = "both"


class ResolventResponse(BaseModel):
    content: str
    emitted: int
    skipped: int


class ReportModel(BaseModel):
    n: int
    provenance: str
    max_abs_error: float
    mean_abs_error: float
    worst_cell: tuple[int, int]  # 1-based
    row_sum_error: float
    col_sum_error: float
    interlacing_pass: bool
    min_gap_normalized: float
    tol: float
    passed: bool


class VerifyRequest(BaseModel):
    matrix_text: str | None = None
    generator: GeneratorModel | None = None
    tol: float = 1e-8
    source: str = ""

    @model_validator(mode="after")
    def _one_input(self):
        if (self.matrix_text is None) == (self.generator is None):
            raise ValueError("provide exactly one of matrix_text or generator")
        return self


class VerifyResponse(BaseModel):
    content: str
    passed: bool
    report: ReportModel


class GenerateRequest(BaseModel):
    generator: GeneratorModel
    layout: Literal["dense", "coordinate"] = "dense"


class GenerateResponse(BaseModel):
    content: str
    media_type: str = "text/plain"


class InterlaceRequest(BaseModel):
    matrix_text: str
    col: int = 1


class InterlaceResponse(BaseModel):
    content: str
    passed: bool
    worst_slack: float


class ErrorInfo(BaseModel):
    kind: str
    message: str


class ErrorEnvelope(BaseModel):
    error: ErrorInfo
