import cmath
import math
from fractions import Fraction

import numpy as np
import pytest

from conftest import STANDARD_LINKS, random_sl2
from montrep.chain import character_vector
from montrep.enumerate import (
    ALL_CASES,
    build_representation,
    de_decompose,
    enumerate_abelian,
    enumerate_binary_irreducible,
    enumerate_classes,
    enumerate_mu_nonzero_classes,
    enumerate_mu_zero_classes,
    enumerate_reducible_nonabelian,
    enumerate_tuples_mu_nonzero,
    enumerate_tuples_mu_zero,
    exp_i_pi,
    find_collisions,
    s_phase,
    sign_tuples,
)
from montrep.errors import ClosureViolation, InvalidParameter, UsedWrongCase
from montrep.mat2 import conjugate, mat_A, mat_D, mat_E, max_norm, trace
from montrep.tangle import build_montesinos_diagram, parse_montesinos
from montrep.verify import verify_class


# ---------------------------------------------------------------------------
# Exact helpers
# ---------------------------------------------------------------------------

def test_exp_i_pi_is_exact_on_quarter_turns():
    assert exp_i_pi(Fraction(1, 2)) == 1j
    assert exp_i_pi(Fraction(5, 2)) == 1j
    assert exp_i_pi(Fraction(1)) == -1
    assert exp_i_pi(Fraction(-1, 2)) == -1j
    assert abs(exp_i_pi(Fraction(1, 3)) - cmath.exp(1j * math.pi / 3)) < 1e-15


def test_s_phase(trefoil):
    td = trefoil.tangles[0]
    assert s_phase(td, Fraction(2, 3), 0) == Fraction(5, 3)
    assert s_phase(td, Fraction(4, 3), 0) == Fraction(1, 3)


def test_sign_tuples(trefoil, mu_zero_link):
    assert sign_tuples(trefoil) == [(1, (-1, -1, -1))]
    assert sign_tuples(mu_zero_link) == [(1, (-1, -1, -1)), (-1, (1, 1, 1))]


# ---------------------------------------------------------------------------
# Cases (i) and (ii)
# ---------------------------------------------------------------------------

def test_trefoil_has_one_abelian_class(trefoil):
    classes = enumerate_abelian(trefoil)
    assert len(classes) == 1
    rep = classes[0]
    assert rep.case == "abelian"
    assert rep.params.signs == [1, -1, -1, -1]
    assert rep.a == 1


def test_reducible_classes_of_mu_zero_link(mu_zero_link):
    classes = enumerate_reducible_nonabelian(mu_zero_link)
    assert len(classes) == 4
    assert {rep.params.variant for rep in classes} == {"primary", "transposed"}
    diagram = build_montesinos_diagram(mu_zero_link)
    for rep in classes:
        assert verify_class(diagram, rep, 1e-8).passed


@pytest.mark.parametrize("text", [text for text, components, _ in STANDARD_LINKS if components == 1])
def test_knots_have_no_reducible_nonabelian_classes(text):
    spec = parse_montesinos(text)
    assert spec.mu != 0
    assert enumerate_reducible_nonabelian(spec) == []


# ---------------------------------------------------------------------------
# Case (iii)
# ---------------------------------------------------------------------------

def test_binary_case_rejects_other_a(trefoil):
    with pytest.raises(InvalidParameter):
        enumerate_binary_irreducible(trefoil, 2)


def test_binary_case_skips_integer_phases(trefoil):
    # every s-phase of the trefoil at a = +-1 is an integer
    assert enumerate_binary_irreducible(trefoil, 1, samples=2) == []
    assert enumerate_binary_irreducible(trefoil, -1, samples=2) == []


def test_binary_classes_verify():
    spec = parse_montesinos("M(2/1,3/1,7/1)")
    diagram = build_montesinos_diagram(spec)
    for a in (1, -1):
        for rep in enumerate_binary_irreducible(spec, a, samples=2, seed=7):
            assert rep.case == "irreducible_binary"
            assert rep.a == a
            assert verify_class(diagram, rep, 1e-8).passed


def test_de_decompose_reconstructs():
    b1, b2 = cmath.exp(0.7j), 1.3 * cmath.exp(1.1j)
    z = mat_D(1.2 + 0.3j) @ mat_E(b1) @ mat_D(0.8 - 0.5j) @ mat_E(b2) @ mat_D(-0.9 + 0.4j)
    c1, c2, c3 = de_decompose(z, b1, b2)
    rebuilt = mat_D(c1) @ mat_E(b1) @ mat_D(c2) @ mat_E(b2) @ mat_D(c3)
    assert max_norm(rebuilt - z) < 1e-9


def test_de_decompose_needs_unit_determinant():
    with pytest.raises(InvalidParameter):
        de_decompose(2 * np.eye(2), cmath.exp(0.7j), cmath.exp(1.1j))


# ---------------------------------------------------------------------------
# Cases (iv) and (v)
# ---------------------------------------------------------------------------

def test_mu_zero_tuples(mu_zero_link):
    tuples = enumerate_tuples_mu_zero(mu_zero_link)
    assert len(tuples) == 9
    for item in tuples:
        n1, n2, n3 = item.n_list
        assert (n1 + n2 + n3) % 3 == 0
        assert item.n == (n1 + n2 - 2 * n3) // 3 - 1


def test_mu_zero_tuples_reject_mu_nonzero(trefoil):
    with pytest.raises(UsedWrongCase):
        enumerate_tuples_mu_zero(trefoil)


def test_trefoil_mu_nonzero_tuples(trefoil):
    tuples = enumerate_tuples_mu_nonzero(trefoil)
    assert [(item.n, item.n_list) for item in tuples] == [(1, (0, 0, 0)), (2, (0, 0, 0))]
    assert [item.theta_over_pi for item in tuples] == [Fraction(2, 3), Fraction(4, 3)]
    assert abs(tuples[0].a - cmath.exp(2j * math.pi / 3)) < 1e-15


def test_mu_nonzero_tuples_reject_mu_zero(mu_zero_link):
    with pytest.raises(UsedWrongCase):
        enumerate_tuples_mu_nonzero(mu_zero_link)


def test_mu_zero_classes_all_verify(mu_zero_link):
    classes = enumerate_mu_zero_classes(mu_zero_link)
    assert len(classes) == 45
    diagram = build_montesinos_diagram(mu_zero_link)
    for rep in classes:
        assert rep.case == "irreducible_mu0"
        assert verify_class(diagram, rep, 1e-8).passed


def test_mu_zero_classes_ignore_unit_a(mu_zero_link):
    classes = enumerate_mu_zero_classes(mu_zero_link, a_values=[1, -1, 2.0])
    assert len(classes) == 9
    assert all(rep.a == 2.0 for rep in classes)


def test_trefoil_mu_nonzero_classes(trefoil):
    classes = enumerate_mu_nonzero_classes(trefoil)
    assert len(classes) == 2
    assert [rep.params.s_phases for rep in classes] == [["5/3"] * 3, ["1/3"] * 3]
    for rep in classes:
        for x, y, s in zip(rep.matrices.X, rep.matrices.Y, rep.s):
            assert abs(trace(x @ y) + (s + 1 / s)) < 1e-10


def test_perturbed_s_breaks_closure(trefoil):
    item = enumerate_tuples_mu_nonzero(trefoil)[0]
    s = exp_i_pi(Fraction(5, 3))
    build_representation(trefoil, item.a, [s, s, s])
    with pytest.raises(ClosureViolation):
        build_representation(trefoil, item.a, [1.01 * s, s, s])


def test_wrong_number_of_s_values(trefoil):
    with pytest.raises(InvalidParameter):
        build_representation(trefoil, 1, [-1, -1])


# ---------------------------------------------------------------------------
# Characters
# ---------------------------------------------------------------------------

def test_character_is_conjugation_invariant(trefoil, rng):
    rep = enumerate_mu_nonzero_classes(trefoil)[0]
    p = random_sl2(rng)
    moved = character_vector(
        [conjugate(p, x) for x in rep.matrices.X],
        [conjugate(p, y) for y in rep.matrices.Y],
    )
    assert np.allclose(moved, rep.character, atol=1e-10)


def test_find_collisions_on_duplicates(trefoil):
    rep = enumerate_abelian(trefoil)[0]
    twin = build_representation(trefoil, 1, [-1, -1, -1], mat_A(-1), case="abelian")
    assert find_collisions([rep, twin]) == [[0, 1]]
    assert find_collisions([rep]) == []


# ---------------------------------------------------------------------------
# Orchestration
# ---------------------------------------------------------------------------

def test_trefoil_enumeration(trefoil):
    result = enumerate_classes(trefoil)
    assert result.report.counts == {"abelian": 1, "irreducible_muN": 2}
    assert result.report.failures == 0
    assert result.link.components == 1
    assert result.mu == "3/1"
    assert [rep.case for rep in result.classes] == ["abelian", "irreducible_muN", "irreducible_muN"]


def test_unknown_case_is_rejected(trefoil):
    with pytest.raises(InvalidParameter):
        enumerate_classes(trefoil, ["vi"])


def test_case_selection(mu_zero_link):
    result = enumerate_classes(mu_zero_link, ["ii"])
    assert result.report.counts == {"reducible_nonabelian": 4}


def test_every_class_verifies(standard_link):
    result = enumerate_classes(standard_link, ALL_CASES, samples=2, seed=3)
    assert result.report.failures == 0
    assert all(rep.verified for rep in result.classes)
    assert result.report.verified == len(result.classes)


def test_enumeration_is_deterministic():
    spec = parse_montesinos("M(2/1,3/1)")
    first = enumerate_classes(spec, samples=2, seed=11).to_json()
    second = enumerate_classes(spec, samples=2, seed=11).to_json()
    assert first == second
    assert '"schema": 1' in first
