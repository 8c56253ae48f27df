"""Exact integer arithmetic for rational tangles.

A rational tangle is given by a continued-fraction expansion ``ks`` and is
classified by its fraction ``p/q``.  Everything downstream only needs the
signed continuant pair ``(p, q)`` and its companion ``(p~, q~)`` with
``p~ q - p q~ = 1``; this module produces both exactly.
"""
from __future__ import annotations

import logging
from fractions import Fraction
from functools import lru_cache
from math import gcd
from typing import Iterable, Sequence

from pydantic import BaseModel, ConfigDict, model_validator

from montrep.errors import ArithmeticOverflow, DivisionByZero, InvalidFraction

logger = logging.getLogger(__name__)

INT64_MAX = 2**63 - 1

# search depth for the small-denominator tail of cf_expand
_TAIL_DEPTH = 8


def _checked(value: int) -> int:
    if abs(value) > INT64_MAX:
        raise ArithmeticOverflow(f"continuant {value} exceeds the 64-bit range")
    return value


def check_expansion(ks: Sequence[int]) -> list[int]:
    ks = [int(k) for k in ks]
    if not ks:
        raise InvalidFraction("a continued fraction needs at least one coefficient")
    if any(k == 0 for k in ks):
        raise InvalidFraction(f"continued-fraction coefficients must be nonzero: {ks}")
    return ks


# ---------------------------------------------------------------------------
# Fractions
# ---------------------------------------------------------------------------

class TangleFraction(BaseModel):
    """A reduced fraction ``p/q`` with ``p > 0``; the sign lives in ``q``."""

    model_config = ConfigDict(frozen=True)

    p: int
    q: int

    @model_validator(mode="before")
    @classmethod
    def _normalize(cls, data):
        if isinstance(data, TangleFraction):
            data = {"p": data.p, "q": data.q}
        elif isinstance(data, (Fraction, int)):
            data = Fraction(data)
            data = {"p": data.numerator, "q": data.denominator}
        elif isinstance(data, (tuple, list)):
            data = {"p": data[0], "q": data[1]}
        p, q = int(data["p"]), int(data["q"])
        if p == 0 or q == 0:
            raise InvalidFraction(f"tangle fractions need p != 0 and q != 0, got {p}/{q}")
        _checked(p)
        _checked(q)
        sign = -1 if p < 0 else 1
        p, q = sign * p, sign * q
        g = gcd(p, q)
        return {"p": p // g, "q": q // g}

    @property
    def value(self) -> Fraction:
        return Fraction(self.p, self.q)

    def __str__(self) -> str:
        return f"{self.p}/{self.q}"


# ---------------------------------------------------------------------------
# Continued fractions and continuants
# ---------------------------------------------------------------------------

def cf_eval(ks: Sequence[int]) -> Fraction:
    """Evaluate ``[[k1, ..., km]] = km + 1/[[k1, ..., k(m-1)]]`` exactly."""
    ks = check_expansion(ks)
    value = Fraction(ks[0])
    for j, k in enumerate(ks[1:], start=1):
        if value == 0:
            raise DivisionByZero(f"[[{', '.join(map(str, ks[:j]))}]] = 0 cannot be inverted")
        value = k + 1 / value
        _checked(value.numerator)
        _checked(value.denominator)
    return value


def tangle_fraction(ks: Sequence[int]) -> Fraction:
    """Fraction of the rational tangle ``[k1] * [1/k2] . [k3] * ...``.

    This is ``[[k1, ..., km]]`` for odd ``m`` and its reciprocal for even ``m``.
    """
    value = cf_eval(ks)
    if len(ks) % 2 == 1:
        return value
    if value == 0:
        raise DivisionByZero(f"[[{', '.join(map(str, ks))}]] = 0 has no reciprocal")
    return 1 / value


def uv_sequences(ks: Sequence[int]) -> tuple[list[int], list[int]]:
    """Continuants ``u`` (from k2 on) and ``v`` (from k1 on), each of length m+1."""
    ks = check_expansion(ks)
    u, v = [0, 1], [1, ks[0]]
    for k in ks[1:]:
        u.append(_checked(k * u[-1] + u[-2]))
        v.append(_checked(k * v[-1] + v[-2]))
    return u, v


def _signed_pairs(u: list[int], v: list[int]) -> tuple[int, int, int, int]:
    m = len(u) - 1
    if m % 2 == 1:
        return v[m], v[m - 1], u[m], u[m - 1]
    return v[m - 1], v[m], u[m - 1], u[m]


def tilde_of(ks: Sequence[int]) -> tuple[int, int]:
    """The companion pair ``(p~, q~)`` of an expansion."""
    u, v = uv_sequences(ks)
    _, _, p_tilde, q_tilde = _signed_pairs(u, v)
    return p_tilde, q_tilde


class TangleData(BaseModel):
    """One expansion together with its signed continuant data.

    ``p``, ``q``, ``p_tilde`` and ``q_tilde`` are the raw signed values read
    off the continuants; the closed-form end formulas depend on their signs,
    not only on the value of ``p/q``.
    """

    model_config = ConfigDict(frozen=True)

    expansion: list[int]
    p: int
    q: int
    p_tilde: int
    q_tilde: int
    u: list[int]
    v: list[int]

    @classmethod
    def from_expansion(cls, ks: Iterable[int]) -> "TangleData":
        ks = check_expansion(list(ks))
        u, v = uv_sequences(ks)
        p, q, p_tilde, q_tilde = _signed_pairs(u, v)
        assert p_tilde * q - p * q_tilde == 1
        return cls(expansion=ks, p=p, q=q, p_tilde=p_tilde, q_tilde=q_tilde, u=u, v=v)

    @property
    def m(self) -> int:
        return len(self.expansion)

    @property
    def crossings(self) -> int:
        return sum(abs(k) for k in self.expansion)

    @property
    def fraction(self) -> Fraction:
        if self.q == 0:
            raise DivisionByZero(f"expansion {self.expansion} has q = 0")
        return Fraction(self.p, self.q)


def tangle_data(ks: Iterable[int]) -> TangleData:
    return TangleData.from_expansion(ks)


# ---------------------------------------------------------------------------
# Expansion search
# ---------------------------------------------------------------------------

def _greedy_step(a: int, b: int) -> int:
    k = a // b
    return k if k != 0 else 1


def _unit_steps(a: int, b: int) -> list[int]:
    steps = []
    for c in (1, -1, 2, -2):
        k = (a - c) * b
        if k != 0 and k not in steps:
            steps.append(k)
    return steps


@lru_cache(maxsize=4096)
def _tails(a: int, b: int, depth: int) -> dict[int, tuple[int, ...]]:
    """Shortest reversed tails from the continuant state ``(v_j, v_(j-1)) = (a, b)``.

    Keys are the tail length parity.  A tail ``(k_j, ..., k_1)`` steps down
    through ``(b, a - k_j b)`` until it reaches ``(k_1, 1)``.
    """
    found: dict[int, tuple[int, ...]] = {}
    if b == 1:
        found[1] = (a,)
    if depth == 0:
        return found
    steps = _unit_steps(a, b) if abs(b) == 1 else [_greedy_step(a, b)]
    for k in steps:
        c = a - k * b
        if c == 0:
            continue
        for tail in _tails(b, c, depth - 1).values():
            candidate = (k, *tail)
            parity = len(candidate) % 2
            if parity not in found or len(candidate) < len(found[parity]):
                found[parity] = candidate
    return found


def _reverse_expansion(a: int, b: int, parity: int) -> tuple[int, ...] | None:
    """Reversed expansion whose continuant pair is ``(a, b)`` and length has ``parity``."""
    prefix: list[int] = []
    while abs(b) > 1:
        k = _greedy_step(a, b)
        prefix.append(k)
        a, b = b, a - k * b
    wanted = (parity - len(prefix)) % 2
    tail = _tails(a, b, _TAIL_DEPTH).get(wanted)
    if tail is None:
        return None
    return (*prefix, *tail)


def cf_expand(f: Fraction | TangleFraction | tuple[int, int]) -> list[int]:
    """An expansion whose signed continuant pair is exactly the canonical ``(p, q)``.

    ``tangle_fraction(cf_expand(f)) == f`` always holds, and in addition the
    raw ``p`` read off the continuants is positive, which the closed forms
    rely on.
    """
    fraction = f if isinstance(f, TangleFraction) else TangleFraction.model_validate(f)
    p, q = fraction.p, fraction.q
    candidates = [
        r for r in (_reverse_expansion(p, q, 1), _reverse_expansion(q, p, 0)) if r is not None
    ]
    if not candidates:
        raise InvalidFraction(f"no continued-fraction expansion found for {p}/{q}")
    best = min(candidates, key=len)
    ks = list(reversed(best))
    logger.debug("expanded %s/%s as %s", p, q, ks)
    return ks


# ---------------------------------------------------------------------------
# mu
# ---------------------------------------------------------------------------

def mu_of(fractions: Iterable[TangleFraction]) -> Fraction:
    """``mu = sum q_l / p_l`` over the tangles of a Montesinos link."""
    total = Fraction(0)
    for f in fractions:
        if f.p == 0:
            raise InvalidFraction("p_l must be nonzero")
        total += Fraction(f.q, f.p)
    return total


def mu_numerator(mu: Fraction) -> int:
    """N(mu), the absolute value of the numerator of mu."""
    return abs(mu.numerator)
