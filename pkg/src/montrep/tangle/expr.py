from __future__ import annotations

from fractions import Fraction
from typing import Annotated, Literal, Union

from pydantic import BaseModel, ConfigDict, Field

from montrep.rational import check_expansion, tangle_fraction


# ---------------------------------------------------------------------------
# Tangle expression AST
# ---------------------------------------------------------------------------

class Basic(BaseModel):
    """One of the four basic tangles ``[0]``, ``[inf]``, ``[1]``, ``[-1]``."""

    model_config = ConfigDict(frozen=True)

    kind: Literal["basic"] = "basic"
    value: Literal["0", "inf", "1", "-1"]

    @property
    def fraction(self) -> Fraction | None:
        return None if self.value == "inf" else Fraction(int(self.value))


class Twist(BaseModel):
    """``[k]`` (horizontal twists) or ``[1/k]`` (vertical twists)."""

    model_config = ConfigDict(frozen=True)

    kind: Literal["twist"] = "twist"
    k: int
    vertical: bool = False

    @property
    def fraction(self) -> Fraction:
        return Fraction(1, self.k) if self.vertical else Fraction(self.k)


class Rational(BaseModel):
    """``[[k1, ..., km]] = [k1] | [1/k2] * [k3] | ...``, evaluated left to right."""

    model_config = ConfigDict(frozen=True)

    kind: Literal["rational"] = "rational"
    ks: list[int]

    @property
    def fraction(self) -> Fraction:
        return tangle_fraction(check_expansion(self.ks))


class Compose(BaseModel):
    model_config = ConfigDict(frozen=True)

    kind: Literal["compose"] = "compose"
    op: Literal["horizontal", "vertical"]
    left: "TangleExpr"
    right: "TangleExpr"

    @property
    def fraction(self) -> Fraction | None:
        return None


TangleExpr = Annotated[Union[Basic, Twist, Rational, Compose], Field(discriminator="kind")]

Compose.model_rebuild()
