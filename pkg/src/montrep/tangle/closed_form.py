"""Closed-form end matrices of a rational tangle in terms of its generating pair.

With ``-tr(XY) = s + 1/s`` and the signed continuant data ``(p, q, p~, q~)``::

    ne = (-1)^p~        ({1+p}   X + {-p}  Y)
    sw = (-1)^q~        ({1-q}   X + {q}   Y)
    se = (-1)^(p~+q~)   ({1+p-q} X + {q-p} Y)

These hold for arbitrary ``X, Y`` (not only the normal form) and are
vectorized: ``s`` may be an array with matching stacks of ``X`` and ``Y``.
"""
from __future__ import annotations

import numpy as np

from montrep.config import settings
from montrep.errors import InconsistentTrace, SingularBracket
from montrep.mat2 import Mat2, bracket, mat_A, trace
from montrep.rational import TangleData


def parity_sign(n: int) -> int:
    return -1 if n % 2 else 1


def _combine(c1, x: Mat2, c2, y: Mat2) -> Mat2:
    c1 = np.asarray(c1)[..., None, None]
    c2 = np.asarray(c2)[..., None, None]
    return c1 * x + c2 * y


def _nonzero(value, what: str, tol: float | None = None):
    tol = settings.singular_tol if tol is None else tol
    if np.any(np.abs(value) < tol):
        raise SingularBracket(f"{what} vanishes")
    return value


def ends_closed_form(
    td: TangleData, x: Mat2, y: Mat2, s, *, check: bool = True, tol: float | None = None
) -> dict[str, Mat2]:
    if check:
        tol = settings.tol if tol is None else tol
        tau = -trace(x @ y)
        expected = np.asarray(s) + 1 / np.asarray(s)
        if np.any(np.abs(tau - expected) > tol * np.maximum(1.0, np.abs(tau))):
            raise InconsistentTrace("s + 1/s does not match -tr(XY)")
    p, q = td.p, td.q
    sp, sq = parity_sign(td.p_tilde), parity_sign(td.q_tilde)
    return {
        "nw": np.asarray(x, dtype=np.complex128),
        "ne": sp * _combine(bracket(1 + p, s), x, bracket(-p, s), y),
        "sw": sq * _combine(bracket(1 - q, s), x, bracket(q, s), y),
        "se": sp * sq * _combine(bracket(1 + p - q, s), x, bracket(q - p, s), y),
    }


def linear_transfer(td: TangleData, s):
    """Scalar ``T`` with ``(sw, se) = -(nw, ne) . T``; needs ``{p}_s != 0``."""
    p, q = td.p, td.q
    sp = parity_sign(td.p_tilde)
    bp = _nonzero(bracket(p, s), f"{{{p}}}_s")
    prefactor = -parity_sign(td.q_tilde) / bp
    bq = bracket(q, s)
    t = np.empty(np.shape(bp) + (2, 2), dtype=np.complex128)
    t[..., 0, 0] = prefactor * bracket(p + q, s)
    t[..., 0, 1] = prefactor * sp * bq
    t[..., 1, 0] = -prefactor * sp * bq
    t[..., 1, 1] = prefactor * bracket(p - q, s)
    return t


def transfer_B(w, a: int) -> np.ndarray:
    """``B(w) = [[1 + w, a w], [-a w, 1 - w]]``; additive in ``w`` for ``a = +-1``."""
    w = np.asarray(w, dtype=np.complex128)
    t = np.empty(w.shape + (2, 2), dtype=np.complex128)
    t[..., 0, 0] = 1 + w
    t[..., 0, 1] = a * w
    t[..., 1, 0] = -a * w
    t[..., 1, 1] = 1 - w
    return t


def transfer_C(w, a) -> np.ndarray:
    """Multiplicative transfer ``C(w)`` for ``a`` off ``{1, -1}``."""
    w = np.asarray(w, dtype=np.complex128)
    a = np.asarray(a, dtype=np.complex128)
    with np.errstate(divide="ignore", invalid="ignore"):
        scale = 1 / (a - 1 / a)
        t = np.empty(np.broadcast_shapes(w.shape, a.shape) + (2, 2), dtype=np.complex128)
        t[..., 0, 0] = scale * (a * w - 1 / (a * w))
        t[..., 0, 1] = scale * (w - 1 / w)
        t[..., 1, 0] = -scale * (w - 1 / w)
        t[..., 1, 1] = scale * (a / w - w / a)
    return t


def transfer_weight(td: TangleData, s):
    """``w = (-1)^(q~-1) s^q``, the argument of ``B`` or ``C`` for this tangle."""
    return -parity_sign(td.q_tilde) * np.asarray(s, dtype=np.complex128) ** td.q


def recover_generator(td: TangleData, x: Mat2, ne: Mat2, s) -> Mat2:
    """Solve the ``ne`` formula for ``Y``."""
    bp = _nonzero(bracket(td.p, s), f"{{{td.p}}}_s")
    sp = parity_sign(td.p_tilde)
    return _combine(bracket(1 + td.p, s) / bp, x, -sp / bp, ne)


def recover_from_sw(td: TangleData, x: Mat2, sw: Mat2, s) -> Mat2:
    """Solve the ``sw`` formula for ``Y``."""
    bq = _nonzero(bracket(td.q, s), f"{{{td.q}}}_s")
    sq = parity_sign(td.q_tilde)
    return _combine(-bracket(1 - td.q, s) / bq, x, sq / bq, sw)


def boundary_traces(ends: dict[str, Mat2]) -> tuple[complex, complex]:
    """``(tr_v, tr_h) = (tr(ne se), tr(sw se))``."""
    return complex(trace(ends["ne"] @ ends["se"])), complex(trace(ends["sw"] @ ends["se"]))


def region_generators(td: TangleData, s) -> list[tuple[Mat2, Mat2]]:
    """Normal-form matrices at the ends of each twist region when ``(X, Y) = (A(1), A(s))``.

    For region ``j`` returns ``(X_j, Y_j)``: ``Y_j`` sits on the ``ne`` end of
    a horizontal region (odd ``j``) or the ``sw`` end of a vertical one, and
    ``X_j`` on its ``se`` end.
    """
    s = complex(s)
    out = []
    for j in range(1, td.m + 1):
        e = (-1) ** j
        y = mat_A(parity_sign(td.u[j]) * s ** (e * td.v[j]))
        x = mat_A(parity_sign(td.u[j] + td.u[j - 1]) * s ** (e * (td.v[j] - td.v[j - 1])))
        out.append((x, y))
    return out
