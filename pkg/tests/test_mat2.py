import numpy as np
import pytest

from conftest import random_sl2, unit_circle_point
from montrep.errors import InvalidParameter, NotTraceFree, SingularMatrix, ZeroParameter
from montrep.mat2 import (
    bracket,
    check_trace_free,
    conjugate,
    det,
    is_regular_pair,
    mat_A,
    mat_D,
    mat_E,
    mat_S,
    max_norm,
    pair_transfer,
    trace,
)


def test_A_is_tracefree_with_unit_determinant(rng):
    for a in [0.5, 2.0, 1j, -3 + 1j, complex(rng.normal(), rng.normal())]:
        m = mat_A(a)
        assert abs(trace(m)) < 1e-14
        assert abs(det(m) - 1) < 1e-12


def test_A_broadcasts_over_parameter_arrays():
    stack = mat_A(np.array([1.0, 2.0, 1j]))
    assert stack.shape == (3, 2, 2)
    np.testing.assert_allclose(stack[1], mat_A(2.0))


def test_A_is_odd_and_A1_squares_to_minus_identity():
    np.testing.assert_allclose(mat_A(-2.5), -mat_A(2.5))
    np.testing.assert_allclose(mat_A(1) @ mat_A(1), -np.eye(2))


def test_trace_of_normal_pair():
    s = 0.3 + 1.7j
    assert abs(-trace(mat_A(1) @ mat_A(s)) - (s + 1 / s)) < 1e-12


def test_D_and_E_have_unit_determinant():
    assert abs(det(mat_D(2 - 1j)) - 1) < 1e-14
    assert abs(det(mat_E(0.4 + 0.2j)) - 1) < 1e-14


@pytest.mark.parametrize("make", [mat_A, mat_D, mat_E])
def test_zero_parameter_is_rejected(make):
    with pytest.raises(ZeroParameter):
        make(0)


def test_S_variants():
    np.testing.assert_allclose(mat_S(1), [[1j, 1], [0, -1j]])
    np.testing.assert_allclose(mat_S(-1, "transposed"), [[-1j, 0], [1, 1j]])
    with pytest.raises(InvalidParameter):
        mat_S(2)
    with pytest.raises(InvalidParameter):
        mat_S(1, "diagonal")


def test_conjugate_by_singular_matrix():
    with pytest.raises(SingularMatrix):
        conjugate(np.zeros((2, 2)), mat_A(1))


def test_check_trace_free():
    check_trace_free(mat_A(3j))
    with pytest.raises(NotTraceFree):
        check_trace_free(np.eye(2))


# ---------------------------------------------------------------------------
# Brackets
# ---------------------------------------------------------------------------

def _finite_sum(k: int, s: complex) -> complex:
    n = abs(k)
    return np.sign(k) * sum(s ** (2 * j - 1 - n) for j in range(1, n + 1))


@pytest.mark.parametrize("k", [-5, -2, -1, 0, 1, 3, 6])
def test_bracket_matches_finite_sum(k, rng):
    for _ in range(5):
        s = complex(rng.normal(), rng.normal())
        assert abs(bracket(k, s) - _finite_sum(k, s)) < 1e-9 * max(1.0, abs(_finite_sum(k, s)))


def test_bracket_at_plus_and_minus_one():
    assert bracket(3, 1.0) == pytest.approx(3)
    assert bracket(4, -1.0) == pytest.approx(-4)
    assert bracket(-2, -1.0) == pytest.approx(2)
    assert bracket(5, 1 + 1e-8) == pytest.approx(5, abs=1e-6)


def test_bracket_vectorized():
    s = np.exp(1j * np.linspace(0.1, 3.0, 7))
    out = bracket(3, s)
    assert out.shape == (7,)
    np.testing.assert_allclose(out, s**2 + 1 + s**-2)


def test_pair_transfer_with_identity():
    nw, ne = mat_A(1), mat_A(2j)
    sw, se = pair_transfer(nw, ne, np.eye(2))
    np.testing.assert_allclose(sw, -nw)
    np.testing.assert_allclose(se, -ne)


# ---------------------------------------------------------------------------
# Regular pairs
# ---------------------------------------------------------------------------

def test_regular_pair_recovers_s(rng):
    for _ in range(10):
        s = complex(np.exp(rng.uniform(-0.5, 0.5)) * np.exp(1j * rng.uniform(0.1, np.pi - 0.1)))
        p = random_sl2(rng)
        z, w = conjugate(p, mat_A(1)), conjugate(p, mat_A(s))
        found = is_regular_pair(z, w)
        assert found.regular
        assert abs(found.s - s) < 1e-8
        q = found.normalizer
        assert max_norm(conjugate(q, z) - mat_A(1)) < 1e-8
        assert max_norm(conjugate(q, w) - mat_A(found.s)) < 1e-8


def test_regular_pair_prefers_upper_half_plane(rng):
    s = unit_circle_point(rng)
    if s.imag < 0:
        s = s.conjugate()
    found = is_regular_pair(mat_A(1), mat_A(1 / s))
    assert abs(found.s - s) < 1e-8


@pytest.mark.parametrize("a", [1, -1])
@pytest.mark.parametrize("variant", ["primary", "transposed"])
def test_non_regular_pair(a, variant, rng):
    p = random_sl2(rng)
    found = is_regular_pair(conjugate(p, mat_A(1)), conjugate(p, mat_S(a, variant)))
    assert not found.regular
    assert found.a == a
    assert found.variant == variant


def test_commuting_pair_is_regular_with_unit_s():
    found = is_regular_pair(mat_A(1), mat_A(-1))
    assert found.regular
    assert found.s == -1
