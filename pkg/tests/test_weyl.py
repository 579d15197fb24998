from fractions import Fraction

import pytest
from mpmath import mp, mpf

from klperiods.errors import DomainError, OddExponent, ZeroOperator
from klperiods.weyl import (WeylOperator, adjoint_signed, apply_numeric, change_var_deg2, content, dim_h1,
                            graded_leading, lambda_closed_form, lambda_poly, leading_closed_form, sym_power_bessel,
                            support_exponents, twist_half, vanhove_leading_terms, weyl_mul,
                            wronskian_closed_form)

F = Fraction


def test_bessel_operator():
    L = sym_power_bessel(1)
    assert L.pretty() == "θ^2 − t^2"


def test_sym_square():
    assert sym_power_bessel(2).pretty() == "θ^3 − 4·t^2·θ − 4·t^2"


def test_commutator():
    t = WeylOperator.monomial(1)
    th = WeylOperator.theta()
    # [theta, t] = t
    assert weyl_mul(th, t) - weyl_mul(t, th) == t


def test_text_round_trip():
    L = sym_power_bessel(4)
    assert WeylOperator.from_text(L.to_text()) == L


@pytest.mark.parametrize("n", range(1, 8))
def test_annihilates_products(n):
    # the symmetric power kills every I0^a K0^(n-a)
    L = sym_power_bessel(n)
    with mp.workprec(256):
        for a in range(n + 1):
            assert abs(apply_numeric(L, a, n - a, "1.3")) < mpf(10) ** -50


def test_graded_leading_examples():
    assert graded_leading(sym_power_bessel(3)).pretty() == "θ̄^4 − 10·θ̄^2·t̄^2 + 9·t̄^4"
    for n in range(1, 9):
        g = graded_leading(sym_power_bessel(n))
        assert g == leading_closed_form(n)
        assert g.is_homogeneous() and g.degree() == n + 1


@pytest.mark.parametrize("m", range(0, 10))
def test_lambda_product(m):
    assert lambda_poly(m + 1, m) == lambda_closed_form(m)


def test_lambda_small():
    assert lambda_poly(3, 2) == (0, -4, 0, 1)


@pytest.mark.parametrize("n", range(1, 10))
def test_support_and_dim(n):
    L = sym_power_bessel(n)
    top, bottom = support_exponents(L)
    assert (top, bottom) == (2 * ((n + 1) // 2), 0)
    assert dim_h1(n) == (n + 1) // 2


def test_change_var():
    M, c = change_var_deg2(sym_power_bessel(1))
    # theta_t^2 - t^2 = 4 theta_z^2 - 4 z
    assert c == 4
    assert M.pretty() == "θ^2 − t"
    _, bottom = support_exponents(twist_half(M))
    assert bottom == 0


def test_change_var_odd():
    with pytest.raises(OddExponent):
        change_var_deg2(WeylOperator.monomial(1))


def test_adjoint_involution():
    for n in range(1, 6):
        L = sym_power_bessel(n)
        assert adjoint_signed(adjoint_signed(L)) == L
    assert adjoint_signed(sym_power_bessel(1)).pretty() == "θ^2 + 2·θ + 1 − t^2"


def test_vanhove_leading():
    top, nxt = vanhove_leading_terms(2)
    assert top == {0: F(1), -2: F(-4)}
    assert nxt == {0: F(3)}


@pytest.mark.parametrize("n", range(1, 8))
def test_wronskian_ode(n):
    assert wronskian_closed_form(n).satisfies_ode()


def test_zero_and_domain():
    with pytest.raises(ZeroOperator):
        content(WeylOperator())
    with pytest.raises(DomainError):
        sym_power_bessel(-1)
