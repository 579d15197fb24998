import mpmath
import pytest
from mpmath import mp, mpf

from klperiods.bessel import (BesselEvalPlan, asym_eval, bessel_all, default_plan, i0, k0, k0p, series_eval)
from klperiods.errors import DomainError
from klperiods.highprec import DEFAULT_CTX

POINTS = ["0.001", "0.25", "1", "5", "17.5", "30", "61", "100", "250"]


@pytest.mark.parametrize("t", POINTS)
def test_against_mpmath(t):
    with mp.workprec(300):
        got = bessel_all(mpf(t))
        ref = (mpmath.besseli(0, mpf(t)), mpmath.besseli(1, mpf(t)),
               mpmath.besselk(0, mpf(t)), -mpmath.besselk(1, mpf(t)))
    for g, r in zip(got, ref):
        assert abs(g / r - 1) < mpf(10) ** -52


@pytest.mark.parametrize("t", ["0.25", "1", "5", "30", "100"])
def test_wronskian(t):
    with mp.workprec(DEFAULT_CTX.work_bits):
        a, ap, b, bp = bessel_all(mpf(t))
        assert abs(a * bp - ap * b + 1 / mpf(t)) < DEFAULT_CTX.target_abs_err


def test_wronskian_at_one():
    with mp.workprec(256):
        a, ap, b, bp = bessel_all(1)
        assert abs(a * bp - ap * b + 1) < mpf(10) ** -60


def test_regimes_agree_at_switch():
    plan = default_plan()
    with mp.workprec(300):
        t = plan.tau
        s = series_eval(t)
        a = asym_eval(t)
    for x, y in zip(s, a):
        assert abs(x / y - 1) < mpf(10) ** -50


def test_tiny_argument():
    with mp.workprec(256):
        t = mpf(2) ** -300
        assert abs(k0(t) / mpmath.besselk(0, t) - 1) < mpf(10) ** -60
        assert abs(k0p(t) * t + 1) < mpf(10) ** -60


def test_domain():
    with pytest.raises(DomainError):
        k0(0)
    with pytest.raises(DomainError):
        i0(-1)
    with pytest.raises(DomainError):
        BesselEvalPlan(DEFAULT_CTX, tau=5)
