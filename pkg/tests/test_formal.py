from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from klperiods.errors import DomainError
from klperiods.formal import (ExpPuiseux, antidiagonal_closed_form, formal_antiderivative, g_series_closed_form,
                              poincare_row)
from klperiods.pairings import poincare_matrix

fracs = st.fractions(min_value=-50, max_value=50, max_denominator=20)


@settings(max_examples=60, deadline=None)
@given(c=st.sampled_from([0, 2, -2, 4, Fraction(1, 2)]), mu2=st.integers(-8, 8),
       coeffs=st.lists(fracs, min_size=2, max_size=8))
def test_antiderivative_round_trip(c, mu2, coeffs):
    s = ExpPuiseux(c, Fraction(mu2, 2), tuple(coeffs))
    S, res = formal_antiderivative(s)
    lhs = S.derivative()
    if res:
        lhs = lhs + ExpPuiseux(0, -1, (res,))
    # agree on every exponent known on both sides
    for e in s.exponents():
        if e < min(lhs.order, s.order):
            assert lhs.coeff_at(e) == s.coeff_at(e)
    if c == 0 and Fraction(-1) not in s.exponents():
        assert res == 0


def test_multiplication_adds_orders():
    a = ExpPuiseux(2, Fraction(1, 2), (1, 1))
    b = ExpPuiseux(-2, 0, (1, -1))
    p = a * b
    assert p.c == 0
    assert p.coeffs[0] == 1


def test_normal_form_strips_zeros():
    s = ExpPuiseux(0, 0, (0, 0, 5))
    assert s.mu == 1 and s.coeffs == (5,)


def test_rows_k3():
    assert poincare_row(0, 3) == [0, Fraction(-2, 3)]
    assert poincare_row(1, 3) == [Fraction(-2, 3), Fraction(-1, 27)]


def test_row_k1_and_k2():
    assert poincare_row(0, 1) == [Fraction(1, 1)] or poincare_row(0, 1)[0] == antidiagonal_closed_form(0, 1)
    assert poincare_matrix(2).entries.to_json() == [["1/1"]]


@pytest.mark.parametrize("k", range(1, 11))
def test_antidiagonal(k):
    D = poincare_matrix(k).entries
    kp = (k - 1) // 2
    r = (k - 2) // 4 if k % 4 == 2 else None
    for i in range(kp + 1):
        if i == r:
            continue
        assert D[i, kp - i] == antidiagonal_closed_form(i, k)


def test_truncation_independent():
    assert poincare_row(1, 7, 8) == poincare_row(1, 7, 30)


def test_g_series_starts_at_one():
    g = g_series_closed_form(0, 8, 5)
    assert g[0] == 1 and len(g) == 6


def test_domain():
    with pytest.raises(DomainError):
        poincare_row(0, 0)
