"""Brute-force checks of representations against the crossing-level diagram.

``verify_representation`` only knows the crossing rule
``rho(out) = -O rho(in) O^-1`` and the join rule ``rho(e') = -rho(e)``
(two outward ends glued together are mutually inverse, and ``X^-1 = -X``
on tracefree matrices).  It never touches the closed-form end formulas,
so it can be used to check them.

The residual scans rebuild the chain of a ``mu != 0`` link over a grid of
``theta`` and report where the closure defect vanishes.
"""
from __future__ import annotations

import logging
import math
from fractions import Fraction
from itertools import product
from typing import Iterable, Sequence

import networkx as nx
import numpy as np
from scipy.optimize import minimize_scalar

from montrep.config import settings
from montrep.errors import InvalidParameter, NotClosed, UnlabeledArc, UsedWrongCase
from montrep.mat2 import det, mat_A, max_norm, pair_transfer, trace
from montrep.models.link import MontesinosSpec
from montrep.models.output import ClassCheck, VerifyOutput
from montrep.models.representation import (
    LinkInfo,
    RepClass,
    ScanMinimum,
    ScanResult,
    VerificationReport,
)
from montrep.tangle.closed_form import ends_closed_form, transfer_C, transfer_weight
from montrep.tangle.diagram import Diagram, build_montesinos_diagram
from montrep.tangle.propagate import RepAssignment, propagate_pairs

logger = logging.getLogger(__name__)


def _norm(m) -> float:
    value = float(max_norm(m))
    return value if math.isfinite(value) else math.inf


def _finite(x) -> float:
    x = float(x)
    return x if math.isfinite(x) else math.inf


# ---------------------------------------------------------------------------
# Diagram checks
# ---------------------------------------------------------------------------

def verify_representation(d: Diagram, asg: RepAssignment, tol: float | None = None) -> VerificationReport:
    """Residuals of every crossing, arc and join of ``d`` under ``asg``."""
    tol = settings.tol if tol is None else tol
    per_crossing = []
    for crossing in d.crossings:
        o = asg[crossing.over]
        first, second = (asg[port] for port in crossing.under)
        try:
            o_inv = np.linalg.inv(o)
        except np.linalg.LinAlgError:
            per_crossing.append(math.inf)
            continue
        per_crossing.append(max(_norm(second + o @ first @ o_inv), _norm(first + o @ second @ o_inv)))

    arcs = sorted(d.referenced_arcs | {j.first.arc for j in d.joins} | {j.second.arc for j in d.joins})
    tracefree, det_residual = 0.0, 0.0
    for arc in arcs:
        if arc not in asg.values:
            raise UnlabeledArc(f"arc {arc} has no matrix")
        m = asg.values[arc]
        tracefree = max(tracefree, _finite(abs(trace(m))))
        det_residual = max(det_residual, _finite(abs(det(m) - 1)))

    per_join = [_norm(asg[join.first] + asg[join.second]) for join in d.joins]

    worst_crossing = max(per_crossing, default=0.0)
    closure = max(per_join, default=0.0)
    passed = all(value <= tol for value in (worst_crossing, tracefree, det_residual, closure))
    return VerificationReport(
        max_crossing_residual=worst_crossing,
        max_tracefree_residual=tracefree,
        max_det_residual=det_residual,
        closure_residual=closure,
        per_crossing=per_crossing,
        per_join=per_join,
        tol=tol,
        passed=passed,
    )


def verify_class(d: Diagram, rep: RepClass, tol: float | None = None) -> VerificationReport:
    """Propagate the class's ``(X_l, Y_l)`` through ``d`` and verify the result."""
    asg = propagate_pairs(d, zip(rep.matrices.X, rep.matrices.Y))
    report = verify_representation(d, asg, tol)
    if not report.passed:
        logger.debug(
            "%s class %s: worst crossing %s at %.3e",
            rep.case, rep.params.discrete, report.worst_crossing, report.max_residual,
        )
    return report


def count_components(d: Diagram) -> int:
    """Link components of a closed diagram, following arcs under crossings and across joins."""
    if not d.closed:
        raise NotClosed("component count needs a closed diagram")
    graph = nx.Graph()
    graph.add_nodes_from(range(d.arc_count))
    for crossing in d.crossings:
        first, second = crossing.under
        graph.add_edge(first.arc, second.arc)
    for join in d.joins:
        graph.add_edge(join.first.arc, join.second.arc)
    return nx.number_connected_components(graph)


# ---------------------------------------------------------------------------
# Residual scans
# ---------------------------------------------------------------------------

def wrap_tuple(spec: MontesinosSpec, theta_over_pi: Fraction, n_list: Sequence[int]) -> tuple[Fraction, tuple[int, ...]]:
    """Move ``theta`` into ``[0, 2 pi)``; each full turn shifts every ``n_l`` by one."""
    k = math.floor(theta_over_pi / 2)
    wrapped = theta_over_pi - 2 * k
    return wrapped, tuple((n + k) % td.p for td, n in zip(spec.tangles, n_list))


def _check_scan(spec: MontesinosSpec, n_list: Sequence[int]) -> None:
    if spec.mu == 0:
        raise UsedWrongCase(f"{spec} has mu = 0; the theta scan needs mu != 0")
    if len(n_list) != spec.r:
        raise InvalidParameter(f"expected {spec.r} twist indices, got {len(n_list)}")


def closure_residuals(spec: MontesinosSpec, n_list: Sequence[int], thetas) -> np.ndarray:
    """Closure defect of the chain with ``a = exp(i theta)`` for every ``theta`` in ``thetas``.

    Non-finite values (``theta`` on a multiple of ``pi``) come back as ``inf``.
    """
    thetas = np.atleast_1d(np.asarray(thetas, dtype=float))
    a = np.exp(1j * thetas)
    tangles = spec.tangles
    s_list = [
        np.exp(1j * (thetas + td.p_tilde * math.pi + 2 * n * math.pi) / td.p)
        for td, n in zip(tangles, n_list)
    ]
    with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
        nw0 = np.broadcast_to(mat_A(1), thetas.shape + (2, 2))
        ne0 = ends_closed_form(tangles[0], nw0, mat_A(s_list[0]), s_list[0], check=False)["ne"]
        nw, ne = nw0, ne0
        for td, s in zip(tangles, s_list):
            sw, se = pair_transfer(nw, ne, transfer_C(transfer_weight(td, s), a))
            nw, ne = -sw, -se
        residual = np.maximum(max_norm(nw - nw0), max_norm(ne - ne0))
    return np.where(np.isfinite(residual), residual, np.inf)


def scan_closure_residual(
    spec: MontesinosSpec, n_list: Sequence[int], grid: int | None = None
) -> list[tuple[float, float]]:
    """``(theta, residual)`` on a uniform grid over ``[0, 2 pi)``."""
    grid = settings.scan_grid if grid is None else grid
    if grid < 3:
        raise InvalidParameter("scan grid needs at least 3 points")
    _check_scan(spec, n_list)
    thetas = 2 * math.pi * np.arange(grid) / grid
    residuals = closure_residuals(spec, n_list, thetas)
    return [(float(t), float(r)) for t, r in zip(thetas, residuals)]


def _near_multiple_of_pi(theta: float, width: float) -> bool:
    return abs(theta - math.pi * round(theta / math.pi)) < width


def closure_minima(
    spec: MontesinosSpec,
    n_list: Sequence[int],
    grid: int | None = None,
    threshold: float = 1e-6,
    *,
    table: bool = False,
) -> ScanResult:
    """Local minima of the closure residual that refine below ``threshold``.

    Each grid minimum is polished with a bounded scalar search over one grid
    step on either side.  Minima within two steps of a multiple of ``pi`` are
    kept but flagged ``degenerate``: the chain is singular there.
    """
    rows = scan_closure_residual(spec, n_list, grid)
    n = len(rows)
    h = 2 * math.pi / n
    values = np.array([r for _, r in rows])
    minima: list[ScanMinimum] = []
    for i, (theta, value) in enumerate(rows):
        if not math.isfinite(value):
            continue
        if value > values[i - 1] or value > values[(i + 1) % n]:
            continue
        found = minimize_scalar(
            lambda delta: float(closure_residuals(spec, n_list, theta + delta)[0]),
            bounds=(-h, h),
            method="bounded",
            options={"xatol": 1e-13},
        )
        best = float(found.fun)
        if best >= threshold:
            continue
        refined = (theta + float(found.x)) % (2 * math.pi)
        if any(_circular_gap(refined, m.theta) < 2 * h for m in minima):
            continue
        minima.append(ScanMinimum(theta=refined, residual=best, degenerate=_near_multiple_of_pi(refined, 2 * h)))
    minima.sort(key=lambda m: m.theta)
    logger.info("%s n=%s: %d closure minima below %.1e", spec, list(n_list), len(minima), threshold)
    return ScanResult(n_list=list(n_list), minima=minima, table=rows if table else [])


def _circular_gap(x: float, y: float) -> float:
    gap = abs(x - y) % (2 * math.pi)
    return min(gap, 2 * math.pi - gap)


def scan_all_tuples(
    spec: MontesinosSpec,
    grid: int | None = None,
    threshold: float = 1e-6,
    n_lists: Iterable[Sequence[int]] | None = None,
) -> list[ScanResult]:
    """Scan every ``(n_1..n_r)`` (or the given ones); the table is kept only for a single tuple."""
    if n_lists is None:
        n_lists = product(*(range(td.p) for td in spec.tangles))
    n_lists = [tuple(n) for n in n_lists]
    single = len(n_lists) == 1
    return [closure_minima(spec, n, grid, threshold, table=single) for n in n_lists]


def describe_link(spec: MontesinosSpec, diagram: Diagram | None = None) -> LinkInfo:
    diagram = diagram or build_montesinos_diagram(spec)
    return LinkInfo(
        spec=spec.label,
        fractions=[(f.p, f.q) for f in spec.fractions],
        components=count_components(diagram),
        crossings=len(diagram.crossings),
    )


def verify_classes(spec: MontesinosSpec, classes: Sequence[RepClass], tol: float | None = None) -> VerifyOutput:
    """Verify saved classes one by one on a freshly built diagram of ``spec``."""
    tol = settings.tol if tol is None else tol
    diagram = build_montesinos_diagram(spec)
    checks = [
        ClassCheck(
            index=index,
            case=rep.case,
            discrete=list(rep.params.discrete),
            sample=rep.params.sample,
            report=verify_class(diagram, rep, tol),
        )
        for index, rep in enumerate(classes)
    ]
    failures = sum(not check.report.passed for check in checks)
    if failures:
        logger.warning("%s: %d of %d classes fail at tol %.1e", spec, failures, len(checks), tol)
    return VerifyOutput(
        link=describe_link(spec, diagram),
        tol=tol,
        checks=checks,
        failures=failures,
        passed=failures == 0,
    )
