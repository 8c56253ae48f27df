"""2x2 complex matrix kernel.

Every function broadcasts over leading axes: a parameter array of shape
``(n,)`` yields a stack of matrices of shape ``(n, 2, 2)``.  Scalars in give
a single ``(2, 2)`` matrix out.
"""
from __future__ import annotations

import logging
from typing import Literal, NamedTuple

import numpy as np
import numpy.typing as npt

from montrep.config import settings
from montrep.errors import InvalidParameter, NotTraceFree, SingularMatrix, ZeroParameter

logger = logging.getLogger(__name__)

Mat2 = npt.NDArray[np.complex128]
Variant = Literal["primary", "transposed"]

I2 = np.eye(2, dtype=np.complex128)


def _param(x) -> np.ndarray:
    x = np.asarray(x, dtype=np.complex128)
    if np.any(x == 0):
        raise ZeroParameter("parameter must be nonzero")
    return x


def _assemble(m11, m12, m21, m22) -> Mat2:
    m11, m12, m21, m22 = np.broadcast_arrays(m11, m12, m21, m22)
    out = np.empty(m11.shape + (2, 2), dtype=np.complex128)
    out[..., 0, 0] = m11
    out[..., 0, 1] = m12
    out[..., 1, 0] = m21
    out[..., 1, 1] = m22
    return out


def max_norm(m) -> float | np.ndarray:
    """Largest absolute entry, taken over the two matrix axes."""
    return np.max(np.abs(m), axis=(-2, -1))


# ---------------------------------------------------------------------------
# Special matrices
# ---------------------------------------------------------------------------

def mat_A(a) -> Mat2:
    """``A(a) = 1/2 [[(a + 1/a) i, a - 1/a], [a - 1/a, -(a + 1/a) i]]``."""
    a = _param(a)
    plus, minus = (a + 1 / a) / 2, (a - 1 / a) / 2
    return _assemble(1j * plus, minus, minus, -1j * plus)


def mat_D(b) -> Mat2:
    b = _param(b)
    zero = np.zeros_like(b)
    return _assemble(b, zero, zero, 1 / b)


def mat_E(b) -> Mat2:
    b = _param(b)
    plus, minus = (b + 1 / b) / 2, (b - 1 / b) / 2
    return _assemble(plus, 1j * minus, -1j * minus, plus)


def mat_S(a: int, variant: Variant = "primary") -> Mat2:
    """The non-regular normal forms ``S_a`` (upper) and ``S'_a`` (lower)."""
    if a not in (1, -1):
        raise InvalidParameter(f"S_a needs a in {{1, -1}}, got {a}")
    if variant == "primary":
        return np.array([[a * 1j, 1], [0, -a * 1j]], dtype=np.complex128)
    if variant == "transposed":
        return np.array([[a * 1j, 0], [1, -a * 1j]], dtype=np.complex128)
    raise InvalidParameter(f"unknown S variant {variant!r}")


# ---------------------------------------------------------------------------
# Group operations
# ---------------------------------------------------------------------------

def trace(m):
    return np.trace(m, axis1=-2, axis2=-1)


def det(m):
    return np.linalg.det(m)


def conjugate(p: Mat2, x: Mat2) -> Mat2:
    """``P.X = P X P^-1``."""
    p = np.asarray(p, dtype=np.complex128)
    if np.any(np.abs(det(p)) < 1e-14):
        raise SingularMatrix("cannot conjugate by a singular matrix")
    return p @ x @ np.linalg.inv(p)


def check_trace_free(m: Mat2, tol: float | None = None) -> None:
    tol = settings.identity_tol if tol is None else tol
    if np.max(np.abs(trace(m))) > tol or np.max(np.abs(det(m) - 1)) > tol:
        raise NotTraceFree("matrix is not in SL_0(2, C)")


# ---------------------------------------------------------------------------
# Regular pairs
# ---------------------------------------------------------------------------

class RegularPair(NamedTuple):
    regular: bool
    normalizer: Mat2
    s: complex | None = None
    a: int | None = None
    variant: Variant | None = None


def _diagonalizer(z: Mat2) -> Mat2:
    """P with det 1 and P Z P^-1 = A(1) = diag(i, -i)."""
    values, vectors = np.linalg.eig(z)
    order = np.argsort(-values.imag)
    vectors = vectors[:, order]
    d = np.linalg.det(vectors)
    vectors = vectors / np.sqrt(d)
    return np.linalg.inv(vectors)


def is_regular_pair(z: Mat2, w: Mat2, tol: float | None = None) -> RegularPair:
    """Normalize ``(Z, W)`` to ``(A(1), A(s))`` or, failing that, ``(A(1), S_a)``.

    Among the two regular normal forms the one with ``Im(s) >= 0`` is
    returned (ties broken by ``Re(s) >= 0``).
    """
    tol = settings.identity_tol if tol is None else tol
    check_trace_free(z, tol=max(tol, 1e-9))
    check_trace_free(w, tol=max(tol, 1e-9))

    p = _diagonalizer(z)
    w1 = p @ w @ np.linalg.inv(p)
    w11, w12, w21 = w1[0, 0], w1[0, 1], w1[1, 0]
    scale = max(1.0, float(max_norm(w1)))
    small12, small21 = abs(w12) <= tol * scale, abs(w21) <= tol * scale

    if small12 and small21:
        # W = +-Z
        a = 1 if (-1j * w11).real > 0 else -1
        return RegularPair(True, p, complex(a), a, None)

    if small12 or small21:
        a = 1 if (-1j * w11).real > 0 else -1
        if small21:
            b, variant = np.sqrt(1 / w12), "primary"
        else:
            b, variant = np.sqrt(w21), "transposed"
        return RegularPair(False, mat_D(b) @ p, None, a, variant)

    b = (w21 / w12) ** 0.25
    q = mat_D(b) @ p
    w2 = q @ w @ np.linalg.inv(q)
    # W2 = A(s) means w11 = i (s + 1/s)/2 and w12 = (s - 1/s)/2
    s = -1j * w2[0, 0] + w2[0, 1]
    if s.imag < -tol or (abs(s.imag) <= tol and s.real < 0):
        # swap s for 1/s by conjugating with D(i)
        q = mat_D(1j) @ q
        s = 1 / s
    return RegularPair(True, q, complex(s), None, None)


# ---------------------------------------------------------------------------
# Brackets and transfers
# ---------------------------------------------------------------------------

def bracket(k: int, s):
    """``{k}_s = (s^k - s^-k) / (s - 1/s)``, evaluated as the finite sum near ``s = +-1``."""
    k = int(k)
    s_arr = np.asarray(s, dtype=np.complex128)
    if k == 0:
        out = np.zeros_like(s_arr)
    else:
        n = abs(k)
        poly = np.sign(k) * sum(s_arr ** (2 * j - 1 - n) for j in range(1, n + 1))
        branch = settings.bracket_branch_tol
        near = (np.abs(s_arr - 1) < branch) | (np.abs(s_arr + 1) < branch)
        with np.errstate(divide="ignore", invalid="ignore"):
            closed = (s_arr**k - s_arr ** (-k)) / (s_arr - 1 / s_arr)
        out = np.where(near, poly, closed)
    return complex(out) if out.ndim == 0 else out


def pair_transfer(nw: Mat2, ne: Mat2, t) -> tuple[Mat2, Mat2]:
    """``(sw, se) = -(nw, ne) . T`` for a scalar 2x2 (or stacked) ``T``."""
    t = np.asarray(t, dtype=np.complex128)
    t11, t12 = t[..., 0, 0, None, None], t[..., 0, 1, None, None]
    t21, t22 = t[..., 1, 0, None, None], t[..., 1, 1, None, None]
    sw = -(nw * t11 + ne * t21)
    se = -(nw * t12 + ne * t22)
    return sw, se
