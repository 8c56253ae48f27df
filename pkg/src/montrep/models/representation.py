from __future__ import annotations

import math
from typing import Annotated, Any, Literal

import numpy as np
from pydantic import BaseModel, BeforeValidator, ConfigDict, Field, PlainSerializer


# ---------------------------------------------------------------------------
# JSON encodings: complex numbers as [re, im], matrices as nested pairs
# ---------------------------------------------------------------------------

def _to_complex(value: Any) -> complex:
    if isinstance(value, (list, tuple)):
        return complex(float(value[0]), float(value[1]))
    return complex(value)


def _complex_pair(z: complex) -> list[float]:
    z = complex(z)
    return [float(z.real), float(z.imag)]


def _to_matrix(value: Any) -> np.ndarray:
    if isinstance(value, np.ndarray):
        return value.astype(np.complex128)
    return np.array([[_to_complex(entry) for entry in row] for row in value], dtype=np.complex128)


def _matrix_pairs(m: np.ndarray) -> list[list[list[float]]]:
    return [[_complex_pair(entry) for entry in row] for row in np.asarray(m)]


def _finite_or_none(x: float | None) -> float | None:
    return None if x is None or not math.isfinite(x) else float(x)


ComplexPair = Annotated[complex, BeforeValidator(_to_complex), PlainSerializer(_complex_pair)]
Matrix = Annotated[np.ndarray, BeforeValidator(_to_matrix), PlainSerializer(_matrix_pairs)]
Residual = Annotated[float | None, PlainSerializer(_finite_or_none)]


# ---------------------------------------------------------------------------
# Classes
# ---------------------------------------------------------------------------

CaseName = Literal[
    "abelian",
    "reducible_nonabelian",
    "irreducible_binary",
    "irreducible_mu0",
    "irreducible_muN",
]

CASE_CODES: dict[str, CaseName] = {
    "i": "abelian",
    "ii": "reducible_nonabelian",
    "iii": "irreducible_binary",
    "iv": "irreducible_mu0",
    "v": "irreducible_muN",
}
CASE_ORDER: dict[str, int] = {name: i for i, name in enumerate(CASE_CODES.values())}


class ClassParams(BaseModel):
    """Discrete tuple and free-parameter samples identifying a class."""

    # (a, s_1, ..., s_r) for the sign cases
    signs: list[int] | None = None
    variant: Literal["primary", "transposed"] | None = None
    n: int | None = None
    n_list: list[int] | None = None
    # exact theta / pi and arg(s_l) / pi (mod 2) as "a/b" strings
    theta_over_pi: str | None = None
    s_phases: list[str] | None = None
    # free-parameter samples
    a_sample: ComplexPair | None = None
    lambdas: list[ComplexPair] | None = None
    roots: list[ComplexPair] | None = None
    sample: int = 0

    @property
    def discrete(self) -> tuple[int, ...]:
        if self.signs is not None:
            return tuple(self.signs) + (0 if self.variant in (None, "primary") else 1,)
        return (self.n if self.n is not None else 0, *(self.n_list or ()))


class RepMatrices(BaseModel):
    model_config = ConfigDict(arbitrary_types_allowed=True)

    X: list[Matrix]
    Y: list[Matrix]
    ends: list[dict[str, Matrix]] = []


class RepClass(BaseModel):
    model_config = ConfigDict(arbitrary_types_allowed=True)

    case: CaseName
    params: ClassParams
    a: ComplexPair
    s: list[ComplexPair]
    matrices: RepMatrices
    character: list[ComplexPair] = []
    residual: Residual = None
    verified: bool = False

    @property
    def sort_key(self) -> tuple:
        return (CASE_ORDER[self.case], self.params.discrete, self.params.sample)

    @property
    def r(self) -> int:
        return len(self.s)


# ---------------------------------------------------------------------------
# Verification and scans
# ---------------------------------------------------------------------------

class VerificationReport(BaseModel):
    model_config = ConfigDict(populate_by_name=True)

    max_crossing_residual: Residual
    max_tracefree_residual: Residual
    max_det_residual: Residual
    closure_residual: Residual
    per_crossing: list[Residual]
    per_join: list[Residual] = []
    tol: float
    passed: bool = Field(alias="pass")

    @property
    def max_residual(self) -> float:
        return max(
            self.max_crossing_residual or 0.0,
            self.max_tracefree_residual or 0.0,
            self.max_det_residual or 0.0,
            self.closure_residual or 0.0,
        )

    @property
    def worst_crossing(self) -> int | None:
        if not self.per_crossing:
            return None
        return int(np.argmax([r if r is not None else np.inf for r in self.per_crossing]))


class ScanMinimum(BaseModel):
    theta: float
    residual: Residual
    degenerate: bool = False


class ScanResult(BaseModel):
    n_list: list[int]
    minima: list[ScanMinimum]
    # (theta, residual) rows; only filled for single-tuple scans
    table: list[tuple[float, Residual]] = []


# ---------------------------------------------------------------------------
# Run output
# ---------------------------------------------------------------------------

class LinkInfo(BaseModel):
    spec: str
    fractions: list[tuple[int, int]]
    components: int
    crossings: int


class RunReport(BaseModel):
    tol: float
    counts: dict[str, int] = {}
    verified: int = 0
    failures: int = 0
    skipped: int = 0
    merged: int = 0
    # index pairs (into classes) with matching character vectors
    collisions: list[tuple[int, int]] = []
    notes: list[str] = []


class EnumerationResult(BaseModel):
    model_config = ConfigDict(populate_by_name=True)

    schema_version: int = Field(1, alias="schema")
    link: LinkInfo
    mu: str
    expansions: list[list[int]]
    seed: int
    classes: list[RepClass]
    report: RunReport

    def to_json(self) -> str:
        return self.model_dump_json(by_alias=True, indent=2)
