import mpmath
import pytest
from mpmath import mp, mpf

from klperiods.errors import DivergentMoment, DomainError
from klperiods.highprec import PrecisionCtx
from klperiods.moments import MomentEngine, MomentSpec


def close(x, y, tol=mpf(10) ** -55):
    return abs(x - y) <= tol * max(1, abs(y))


def test_k1(engine, hp):
    assert close(engine.value(1, 0, 0), mpmath.pi / 2)


def test_k2(engine, hp):
    assert close(engine.value(2, 0, 0), mpmath.pi ** 2 / 4)
    assert close(engine.value(2, 0, 1), mpf(1) / 2)


def test_k3_closed_form(engine, hp):
    ref = 3 * mpmath.gamma(mpf(1) / 3) ** 6 / (32 * mpmath.pi * mpf(2) ** (mpf(2) / 3))
    assert close(engine.value(3, 0, 0), ref)


@pytest.mark.parametrize("b", [0, 1, 2, 5])
def test_single_k0(engine, hp, b):
    ref = mpf(2) ** (b - 1) * mpmath.gamma(mpf(b + 1) / 2) ** 2
    assert close(engine.value(1, 0, b), ref)


def test_against_mpmath_quad(engine, hp):
    f = lambda t: mpmath.besseli(0, t) * mpmath.besselk(0, t) ** 3 * t
    with mp.workprec(120):
        ref = mpmath.quad(f, [0, 1, 4, 10, 40, mpmath.inf])
    assert abs(engine.value(4, 1, 1) - ref) < mpf(10) ** -25


def test_cutoff_independent(ctx):
    e1 = MomentEngine(ctx, T=64)
    e2 = MomentEngine(ctx, T=79)
    with mp.workprec(ctx.work_bits):
        for k, a, b, reg in [(5, 2, 3, False), (4, 2, 0, True), (4, 2, 2, True), (6, 3, 0, False)]:
            x, y = e1.value(k, a, b, reg), e2.value(k, a, b, reg)
            assert close(x, y, mpf(10) ** -50)


def test_regularized_is_finite_and_stable(engine, hp):
    v = engine.ikm_reg(4, 1)
    assert mpmath.isfinite(v)
    # the convergent moment with a = k/2 needs no regularization
    assert close(engine.value(6, 3, 0), engine.value(6, 3, 0, False))


def test_divergent(engine):
    with pytest.raises(DivergentMoment):
        engine.value(4, 2, 99)
    with pytest.raises(DivergentMoment):
        engine.value(3, 2, 0)
    with pytest.raises(DomainError):
        engine.ikm_reg(3, 0)
    with pytest.raises(DomainError):
        MomentSpec(2, 3, 0)


def test_two_scale(engine, hp):
    # int K0(xt) I0(t) t dt = 1/(x^2 - 1)
    v = engine.two_scale(2, "K0", 1, 0, 1)
    assert close(v, mpf(1) / 3)
    with pytest.raises(DivergentMoment):
        engine.two_scale("0.5", "K0", 1, 0, 1)


def test_perturbation_shifts_value(ctx):
    with mp.workprec(ctx.work_bits):
        e = MomentEngine(ctx, perturbation=mpf(10) ** -20)
        assert abs(e.value(1, 0, 0) - mpmath.pi / 2 - mpf(10) ** -20) < mpf(10) ** -50


def test_low_precision_ctx():
    e = MomentEngine(PrecisionCtx.from_digits(30))
    with mp.workprec(e.ctx.work_bits):
        assert close(e.value(2, 0, 0), mpmath.pi ** 2 / 4, mpf(10) ** -28)
