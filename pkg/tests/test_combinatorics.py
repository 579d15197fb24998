from fractions import Fraction

import mpmath
import pytest
import sympy
from mpmath import mp, mpf

from klperiods.combinatorics import (alt_power_sum, alt_power_sum_kim, binomial, d_coeff, double_factorial,
                                     euler_number, gamma_coeff, gamma_table)
from klperiods.errors import DomainError


def test_euler_table():
    want = [1, Fraction(-1, 2), 0, Fraction(1, 4), 0, Fraction(-1, 2), 0]
    assert [euler_number(n) for n in range(7)] == want


@pytest.mark.parametrize("n", range(1, 30))
def test_euler_against_bernoulli(n):
    # E_n(0) = -2 (2^(n+1) - 1) B_(n+1) / (n+1)
    b = sympy.bernoulli(n + 1)
    ref = -2 * (2 ** (n + 1) - 1) * Fraction(int(b.p), int(b.q)) / (n + 1)
    assert euler_number(n) == ref


def test_e7():
    assert euler_number(7) == Fraction(17, 8)


@pytest.mark.parametrize("n", range(1, 9))
def test_d_coeff_solves_vandermonde(n):
    M = sympy.Matrix(n, n, lambda m, i: (2 * (i + 1)) ** (m + 1))
    sol = M.solve(sympy.Matrix([sympy.Rational(-1, 2)] * n))
    for i in range(1, n + 1):
        assert d_coeff(n, i) == Fraction(int(sol[i - 1].p), int(sol[i - 1].q))


@pytest.mark.parametrize("n,k", [(1, 1), (3, 4), (5, 7), (6, 2), (8, 9)])
def test_kim_formula(n, k):
    assert alt_power_sum(n, k) == alt_power_sum_kim(n, k)


def test_small_values():
    assert double_factorial(7) == 105
    assert double_factorial(0) == 1 and double_factorial(-1) == 1
    assert binomial(5, 7) == 0 and binomial(6, 3) == 20
    with pytest.raises(DomainError):
        double_factorial(-3)


def test_gamma_k2_matches_product_asymptotics():
    # 2t I0(t) K0(t) ~ sum gamma_{2,n} (4/t^2)^n
    with mp.workprec(300):
        t = mpf(400)
        val = 2 * t * mpmath.besseli(0, t) * mpmath.besselk(0, t)
        s = mpmath.fsum(mpmath.mpf(gamma_coeff(2, n).numerator) / gamma_coeff(2, n).denominator
                        * (4 / t ** 2) ** n for n in range(40))
        assert abs(val - s) < mpf(10) ** -70


def test_gamma_against_sympy_power():
    w = sympy.symbols("w")
    base = sum(sympy.Rational(sympy.factorial2(2 * m - 1) ** 3, 32 ** m * sympy.factorial(m)) * w ** m
               for m in range(8))
    for k in (4, 6, 10):
        ser = sympy.expand(base ** (k // 2))
        for n in range(8):
            c = ser.coeff(w, n)
            assert gamma_coeff(k, n) == Fraction(int(c.p), int(c.q))


def test_gamma_positive():
    for k in range(2, 17, 2):
        tab = gamma_table(k, 40)
        assert tab[0] == 1
        assert all(tab[n] > 0 for n in range(1, 41))
        assert tab[-1] == 0


def test_gamma_table_needs_even_k():
    with pytest.raises(DomainError):
        gamma_table(3, 4)
