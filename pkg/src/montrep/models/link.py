from __future__ import annotations

from fractions import Fraction
from typing import Iterable

from pydantic import BaseModel, ConfigDict, model_validator

from montrep.errors import InvalidFraction
from montrep.rational import (
    TangleData,
    TangleFraction,
    cf_expand,
    mu_numerator,
    mu_of,
    tangle_data,
)


class MontesinosSpec(BaseModel):
    """``M(p1/q1, ..., pr/qr)`` with one chosen expansion per tangle."""

    model_config = ConfigDict(frozen=True)

    fractions: list[TangleFraction]
    expansions: list[list[int]]

    @model_validator(mode="after")
    def _check(self) -> "MontesinosSpec":
        if not self.fractions:
            raise InvalidFraction("a Montesinos link needs at least one tangle")
        if len(self.expansions) != len(self.fractions):
            raise InvalidFraction("one expansion per tangle is required")
        for fraction, ks in zip(self.fractions, self.expansions):
            td = tangle_data(ks)
            if (td.p, td.q) != (fraction.p, fraction.q):
                raise InvalidFraction(
                    f"expansion {ks} has continuant pair {td.p}/{td.q}, expected {fraction}"
                )
        return self

    @classmethod
    def from_fractions(cls, fractions: Iterable[TangleFraction | tuple[int, int]]) -> "MontesinosSpec":
        fractions = [
            f if isinstance(f, TangleFraction) else TangleFraction.model_validate(f)
            for f in fractions
        ]
        return cls(fractions=fractions, expansions=[cf_expand(f) for f in fractions])

    @property
    def tangles(self) -> list[TangleData]:
        return [tangle_data(ks) for ks in self.expansions]

    @property
    def r(self) -> int:
        return len(self.fractions)

    @property
    def mu(self) -> Fraction:
        return mu_of(self.fractions)

    @property
    def mu_numerator(self) -> int:
        return mu_numerator(self.mu)

    @property
    def crossings(self) -> int:
        return sum(td.crossings for td in self.tangles)

    @property
    def label(self) -> str:
        return "M(" + ",".join(str(f) for f in self.fractions) + ")"

    def __str__(self) -> str:
        return self.label
