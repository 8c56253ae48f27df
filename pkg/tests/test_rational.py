from fractions import Fraction
from itertools import product
from math import gcd

import pytest

from montrep.errors import ArithmeticOverflow, DivisionByZero, InvalidFraction
from montrep.rational import (
    TangleFraction,
    cf_eval,
    cf_expand,
    check_expansion,
    mu_numerator,
    mu_of,
    tangle_data,
    tangle_fraction,
    tilde_of,
    uv_sequences,
)


# ---------------------------------------------------------------------------
# TangleFraction
# ---------------------------------------------------------------------------

@pytest.mark.parametrize(
    "raw, expected",
    [((3, 1), (3, 1)), ((-3, 2), (3, -2)), ((6, 4), (3, 2)), ((-4, -6), (2, 3)), ((5, -10), (1, -2))],
)
def test_fraction_is_reduced_with_positive_numerator(raw, expected):
    f = TangleFraction(p=raw[0], q=raw[1])
    assert (f.p, f.q) == expected


def test_fraction_accepts_tuples_and_fractions():
    assert TangleFraction.model_validate((3, -2)) == TangleFraction(p=3, q=-2)
    assert TangleFraction.model_validate(Fraction(7, 2)) == TangleFraction(p=7, q=2)
    assert str(TangleFraction(p=-7, q=2)) == "7/-2"


@pytest.mark.parametrize("p, q", [(0, 1), (2, 0), (0, 0)])
def test_zero_fraction_is_rejected(p, q):
    with pytest.raises(InvalidFraction):
        TangleFraction(p=p, q=q)


def test_fraction_outside_int64_overflows():
    with pytest.raises(ArithmeticOverflow):
        TangleFraction(p=2**64, q=1)


# ---------------------------------------------------------------------------
# Continued fractions
# ---------------------------------------------------------------------------

def test_cf_eval_reads_right_to_left():
    # [[2, 3]] = 3 + 1/2
    assert cf_eval([2, 3]) == Fraction(7, 2)
    assert cf_eval([1, 1, 1]) == Fraction(3, 2)
    assert cf_eval([-2]) == Fraction(-2)


def test_tangle_fraction_inverts_even_lengths():
    assert tangle_fraction([3]) == 3
    assert tangle_fraction([2, 3]) == Fraction(2, 7)
    assert tangle_fraction([3, -1]) == Fraction(-3, 2)


def test_vanishing_intermediate_raises():
    with pytest.raises(DivisionByZero):
        cf_eval([1, -1, 2])


@pytest.mark.parametrize("ks", [[], [1, 0, 2], [0]])
def test_bad_expansions(ks):
    with pytest.raises(InvalidFraction):
        check_expansion(ks)


def test_continuants():
    u, v = uv_sequences([2, -1, 3])
    assert u == [0, 1, -1, -2]
    assert v == [1, 2, -1, -1]


def test_tangle_data_for_three_halves():
    td = tangle_data([3, -1])
    assert (td.p, td.q, td.p_tilde, td.q_tilde) == (3, -2, 1, -1)
    assert td.m == 2
    assert td.crossings == 4
    assert td.fraction == Fraction(3, -2)


def test_tilde_matches_tangle_data():
    assert tilde_of([2, -1, 3]) == (tangle_data([2, -1, 3]).p_tilde, tangle_data([2, -1, 3]).q_tilde)


def _check_tilde_identity(max_m: int, bound: int) -> int:
    checked = 0
    coefficients = [k for k in range(-bound, bound + 1) if k != 0]
    for m in range(1, max_m + 1):
        for ks in product(coefficients, repeat=m):
            td = tangle_data(ks)
            assert td.p_tilde * td.q - td.p * td.q_tilde == 1, ks
            checked += 1
    return checked


def test_tilde_identity_short_expansions():
    assert _check_tilde_identity(max_m=4, bound=3) == 6 + 36 + 216 + 1296


@pytest.mark.slow
def test_tilde_identity_exhaustive():
    _check_tilde_identity(max_m=6, bound=5)


# ---------------------------------------------------------------------------
# cf_expand
# ---------------------------------------------------------------------------

def test_cf_expand_small_cases():
    assert cf_expand((1, 1)) == [1]
    assert cf_expand((3, 1)) == [3]
    assert cf_expand((3, -2)) == [3, -1]


def test_cf_expand_round_trip_up_to_fifty():
    for p, q in product(range(1, 51), range(-50, 51)):
        if q == 0 or gcd(p, q) != 1:
            continue
        ks = cf_expand((p, q))
        assert tangle_fraction(ks) == Fraction(p, q), (p, q, ks)
        td = tangle_data(ks)
        assert (td.p, td.q) == (p, q), (p, q, ks)


def test_cf_expand_negative_numerator_is_normalized():
    assert cf_expand((-5, 2)) == cf_expand((5, -2))


# ---------------------------------------------------------------------------
# mu
# ---------------------------------------------------------------------------

def test_mu():
    fractions = [TangleFraction(p=3, q=1), TangleFraction(p=3, q=1), TangleFraction(p=3, q=-2)]
    assert mu_of(fractions) == 0
    mu = mu_of([TangleFraction(p=2, q=1), TangleFraction(p=3, q=1)])
    assert mu == Fraction(5, 6)
    assert mu_numerator(mu) == 5
    assert mu_numerator(Fraction(-7, 4)) == 7
