"""Chain construction around a Montesinos link.

Tangle ``l`` receives ``(nw, ne)`` from the tangle above it, pushes them to
``(sw, se)`` and hands ``(-sw, -se)`` down.  Two seedings are supported:

* a Y-chain starts from ``(X_1, Y_1)`` and uses the transfer matrices
  ``B`` / ``C`` (or the general linear transfer) tangle by tangle;
* an X-chain is handed all ``X_l`` up front and recovers each ``Y_l`` from
  the ``sw`` formula.

Both report the largest gluing defect, closure included.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass

import numpy as np

from montrep.config import settings
from montrep.errors import ClosureViolation
from montrep.mat2 import Mat2, mat_A, max_norm, pair_transfer, trace
from montrep.models.link import MontesinosSpec
from montrep.rational import TangleData
from montrep.tangle.closed_form import (
    ends_closed_form,
    linear_transfer,
    recover_from_sw,
    recover_generator,
    transfer_B,
    transfer_C,
    transfer_weight,
)

logger = logging.getLogger(__name__)

UNIT_TOL = 1e-12


@dataclass
class Chain:
    x: list[Mat2]
    y: list[Mat2]
    ends: list[dict[str, Mat2]]
    residual: float


def is_unit_sign(z: complex, tol: float = UNIT_TOL) -> bool:
    return abs(z - 1) < tol or abs(z + 1) < tol


def transfer_matrix(td: TangleData, a: complex, s: complex) -> np.ndarray:
    """``T`` with ``(sw, se) = -(nw, ne) T`` for one tangle of the chain."""
    w = transfer_weight(td, s)
    if is_unit_sign(a) and is_unit_sign(s):
        return w * transfer_B(td.q / td.p, int(round(a.real)))
    if not is_unit_sign(a):
        return transfer_C(w, a)
    return linear_transfer(td, s)


def glue_residual(ends: list[dict[str, Mat2]]) -> float:
    """Largest ``|nw_(l+1) + sw_l|``, ``|ne_(l+1) + se_l|`` around the closed chain."""
    worst = 0.0
    for upper, lower in zip(ends, ends[1:] + ends[:1]):
        worst = max(
            worst,
            float(max_norm(lower["nw"] + upper["sw"])),
            float(max_norm(lower["ne"] + upper["se"])),
        )
    return worst


def y_chain(spec: MontesinosSpec, a: complex, s_list: list[complex], y1: Mat2) -> Chain:
    tangles = spec.tangles
    nw = mat_A(1)
    ne = ends_closed_form(tangles[0], nw, y1, s_list[0])["ne"]
    xs, ys, ends = [], [], []
    for ell, (td, s) in enumerate(zip(tangles, s_list)):
        y = y1 if ell == 0 else recover_generator(td, nw, ne, s)
        sw, se = pair_transfer(nw, ne, transfer_matrix(td, a, s))
        xs.append(nw)
        ys.append(y)
        ends.append({"nw": nw, "ne": ne, "sw": sw, "se": se})
        nw, ne = -sw, -se
    return Chain(xs, ys, ends, glue_residual(ends))


def x_chain(spec: MontesinosSpec, s_list: list[complex], xs: list[Mat2]) -> Chain:
    ys, ends = [], []
    r = spec.r
    for ell, (td, s) in enumerate(zip(spec.tangles, s_list)):
        x, x_next = xs[ell], xs[(ell + 1) % r]
        y = recover_from_sw(td, x, -x_next, s)
        ys.append(y)
        ends.append(ends_closed_form(td, x, y, s, check=False))
    return Chain(list(xs), ys, ends, glue_residual(ends))


def character_vector(x: list[Mat2], y: list[Mat2]) -> list[complex]:
    """Traces of ``X_l X_(l+1)``, ``X_l Y_l`` and ``X_1 Y_1 X_2``."""
    r = len(x)
    words = [x[i] @ x[(i + 1) % r] for i in range(r)]
    words += [x[i] @ y[i] for i in range(r)]
    words.append(x[0] @ y[0] @ x[1 % r])
    return [complex(trace(w)) for w in words]


def build_chain(
    spec: MontesinosSpec,
    a: complex,
    s_list: list[complex],
    seed: Mat2 | list[Mat2],
    tol: float | None = None,
) -> Chain:
    """Build the chain from ``Y_1`` (a matrix) or from all ``X_l`` (a list).

    Raises ``ClosureViolation`` when the gluing defect exceeds ``tol``.
    """
    tol = settings.tol if tol is None else tol
    if isinstance(seed, list):
        chain = x_chain(spec, s_list, seed)
    else:
        chain = y_chain(spec, a, s_list, seed)
    scale = max(1.0, max(float(max_norm(e["ne"])) for e in chain.ends))
    if not np.isfinite(chain.residual) or chain.residual > tol * scale:
        raise ClosureViolation(chain.residual, tol)
    return chain
