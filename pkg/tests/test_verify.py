import math
from fractions import Fraction

import numpy as np
import pytest

from conftest import STANDARD_LINKS
from montrep.enumerate import enumerate_classes, enumerate_mu_nonzero_classes, enumerate_tuples_mu_nonzero
from montrep.errors import InvalidParameter, NotClosed, UsedWrongCase
from montrep.mat2 import mat_A
from montrep.tangle import build_montesinos_diagram, build_rational_diagram, parse_montesinos, propagate, propagate_pairs
from montrep.verify import (
    closure_minima,
    closure_residuals,
    count_components,
    describe_link,
    scan_all_tuples,
    scan_closure_residual,
    verify_class,
    verify_classes,
    verify_representation,
    wrap_tuple,
)


@pytest.fixture
def trefoil_assignment(trefoil):
    rep = enumerate_mu_nonzero_classes(trefoil)[0]
    diagram = build_montesinos_diagram(trefoil)
    return diagram, propagate_pairs(diagram, zip(rep.matrices.X, rep.matrices.Y))


# ---------------------------------------------------------------------------
# Diagram checks
# ---------------------------------------------------------------------------

def test_rational_propagation_passes():
    d = build_rational_diagram([2, -1, 3])
    report = verify_representation(d, propagate(d, mat_A(1), mat_A(0.6 + 0.8j)), 1e-10)
    assert report.passed
    assert report.per_join == []
    assert len(report.per_crossing) == 6


def test_trefoil_class_passes(trefoil_assignment):
    diagram, asg = trefoil_assignment
    report = verify_representation(diagram, asg, 1e-8)
    assert report.passed
    assert report.closure_residual < 1e-8
    assert len(report.per_join) == len(diagram.joins)


@pytest.mark.parametrize("eps", [1e-6, 1e-4, 1e-2])
def test_diagonal_perturbation_breaks_tracefree(trefoil_assignment, eps):
    diagram, asg = trefoil_assignment
    tampered = asg.copy()
    arc = min(tampered.values)
    tampered.values[arc] = tampered.values[arc] + np.array([[eps, 0], [0, 0]])
    report = verify_representation(diagram, tampered, 1e-8)
    assert report.max_tracefree_residual >= eps / 10
    assert not report.passed


def test_offdiagonal_perturbation_is_local(trefoil_assignment):
    diagram, asg = trefoil_assignment
    tampered = asg.copy()
    arc = min(tampered.values)
    tampered.values[arc] = tampered.values[arc] + np.array([[0, 1e-3], [0, 0]])
    report = verify_representation(diagram, tampered, 1e-8)
    assert not report.passed

    touching = {
        i for i, c in enumerate(diagram.crossings)
        if c.over.arc == arc or arc in {port.arc for port in c.under}
    }
    broken = {i for i, r in enumerate(report.per_crossing) if r > 1e-6}
    assert broken
    assert broken <= touching
    assert all(r < 1e-8 for i, r in enumerate(report.per_crossing) if i not in touching)


def test_verify_classes_counts_failures(trefoil):
    result = enumerate_classes(trefoil)
    good = verify_classes(trefoil, result.classes, 1e-8)
    assert good.passed and good.failures == 0
    assert len(good.checks) == len(result.classes)

    rep = result.classes[-1]
    rep.matrices.Y[1] = rep.matrices.Y[1] + 1e-3
    bad = verify_classes(trefoil, result.classes, 1e-8)
    assert bad.failures == 1
    assert not bad.passed
    assert not bad.checks[-1].report.passed


# ---------------------------------------------------------------------------
# Components
# ---------------------------------------------------------------------------

@pytest.mark.parametrize("text,components", [(text, c) for text, c, _ in STANDARD_LINKS])
def test_component_count(text, components):
    spec = parse_montesinos(text)
    assert count_components(build_montesinos_diagram(spec)) == components
    assert describe_link(spec).components == components


def test_component_count_needs_closed_diagram():
    with pytest.raises(NotClosed):
        count_components(build_rational_diagram([3]))


# ---------------------------------------------------------------------------
# Residual scans
# ---------------------------------------------------------------------------

def test_wrap_tuple(trefoil):
    assert wrap_tuple(trefoil, Fraction(8, 3), (0, 0, 0)) == (Fraction(2, 3), (0, 0, 0))
    spec = parse_montesinos("M(2/1,3/1,5/1)")
    assert wrap_tuple(spec, Fraction(5, 2), (1, 2, 4)) == (Fraction(1, 2), (0, 0, 0))
    assert wrap_tuple(spec, Fraction(-1, 2), (1, 2, 4)) == (Fraction(3, 2), (0, 1, 3))


def test_trefoil_scan(trefoil):
    result = closure_minima(trefoil, (0, 0, 0), grid=10_000)
    found = [m.theta for m in result.minima if not m.degenerate]
    assert len(found) == 2
    assert found[0] == pytest.approx(2 * math.pi / 3, abs=1e-6)
    assert found[1] == pytest.approx(4 * math.pi / 3, abs=1e-6)
    assert result.table == []

    exact = closure_residuals(trefoil, (0, 0, 0), [2 * math.pi / 3, 4 * math.pi / 3])
    assert np.all(exact < 1e-9)
    assert closure_residuals(trefoil, (0, 0, 0), math.pi / 2)[0] > 0.1


def test_scan_table(trefoil):
    rows = scan_closure_residual(trefoil, (0, 0, 0), grid=400)
    assert len(rows) == 400
    assert rows[0][0] == 0.0
    [single] = scan_all_tuples(trefoil, grid=400)
    assert len(single.table) == 400


def test_scan_rejects_mu_zero(mu_zero_link):
    with pytest.raises(UsedWrongCase):
        scan_closure_residual(mu_zero_link, (0, 0, 0), grid=100)


def test_scan_rejects_bad_arguments(trefoil):
    with pytest.raises(InvalidParameter):
        scan_closure_residual(trefoil, (0, 0, 0), grid=2)
    with pytest.raises(InvalidParameter):
        scan_closure_residual(trefoil, (0, 0), grid=100)


@pytest.mark.slow
def test_scan_agrees_with_enumeration():
    spec = parse_montesinos("M(2/1,3/1,5/1)")
    expected = {wrap_tuple(spec, item.theta_over_pi, item.n_list) for item in enumerate_tuples_mu_nonzero(spec)}
    scans = {tuple(result.n_list): result for result in scan_all_tuples(spec, grid=4000)}

    def close(theta: float, target: float) -> bool:
        gap = abs(theta - target) % (2 * math.pi)
        return min(gap, 2 * math.pi - gap) < 1e-6

    for theta_over_pi, n_list in expected:
        minima = scans[n_list].minima
        assert any(close(m.theta, math.pi * float(theta_over_pi)) for m in minima), (theta_over_pi, n_list)

    for n_list, result in scans.items():
        for m in result.minima:
            if m.degenerate:
                continue
            assert any(
                n == n_list and close(m.theta, math.pi * float(t)) for t, n in expected
            ), (m.theta, n_list)
