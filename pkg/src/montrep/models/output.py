from __future__ import annotations

from pydantic import BaseModel, ConfigDict, Field

from montrep.models.representation import (
    ComplexPair,
    LinkInfo,
    Matrix,
    ScanResult,
    VerificationReport,
)


class _Versioned(BaseModel):
    model_config = ConfigDict(populate_by_name=True, arbitrary_types_allowed=True)

    schema_version: int = Field(1, alias="schema")

    def to_json(self) -> str:
        return self.model_dump_json(by_alias=True, indent=2)


# ---------------------------------------------------------------------------
# verify
# ---------------------------------------------------------------------------

class ClassCheck(BaseModel):
    index: int
    case: str
    discrete: list[int]
    sample: int
    report: VerificationReport


class VerifyOutput(_Versioned):
    link: LinkInfo
    tol: float
    checks: list[ClassCheck]
    failures: int
    passed: bool = Field(alias="pass")


# ---------------------------------------------------------------------------
# scan
# ---------------------------------------------------------------------------

class ScanOutput(_Versioned):
    link: LinkInfo
    mu: str
    grid: int
    threshold: float
    scans: list[ScanResult]


# ---------------------------------------------------------------------------
# tangle-ends / components
# ---------------------------------------------------------------------------

class TangleEndsOutput(_Versioned):
    expression: str
    fraction: str | None
    crossings: int
    s: ComplexPair
    ends: dict[str, Matrix]
    # tr(ne se), tr(sw se)
    boundary_traces: list[ComplexPair]
    closed_form_residual: float | None = None


class ComponentsOutput(_Versioned):
    link: LinkInfo
    mu: str
    knot: bool
