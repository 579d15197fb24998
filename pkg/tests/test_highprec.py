from fractions import Fraction

import mpmath
import pytest
from mpmath import mp, mpf

from klperiods.errors import DomainError, ShapeMismatch
from klperiods.highprec import (DEFAULT_CTX, PrecisionCtx, RationalMatrix, de_quadrature, rat_mat_inverse,
                                relative_residual)


def test_constant_integrand():
    with mp.workprec(256):
        q = de_quadrature(lambda t: mpf(3), 0, 2)
        assert abs(q.value - 6) < mpf(10) ** -60


def test_log_endpoint_singularity():
    with mp.workprec(256):
        q = de_quadrature(lambda t: -mpmath.log(t), 0, 1)
        assert abs(q.value - 1) < mpf(10) ** -50
        assert q.err_est < mpf(10) ** -40


def test_against_closed_form_gaussian():
    with mp.workprec(256):
        q = de_quadrature(lambda t: mpmath.exp(-t * t), 0, 3)
        ref = mpmath.sqrt(mpmath.pi) / 2 * mpmath.erf(3)
        assert abs(q.value - ref) < mpf(10) ** -50


def test_refinement_is_monotone():
    # sqrt has an endpoint derivative singularity; the error must not grow with precision
    exact = Fraction(2, 3)
    errs = []
    for ctx in (PrecisionCtx(128, mpf(10) ** -25), PrecisionCtx(256, mpf(10) ** -50)):
        with mp.workprec(ctx.work_bits + 20):
            q = de_quadrature(mpmath.sqrt, 0, 1, ctx)
            errs.append(abs(q.value - mpf(2) / 3))
    assert errs[1] <= errs[0]
    assert errs[1] < mpf(10) ** -45


def test_ctx_from_digits():
    c = PrecisionCtx.from_digits(60)
    assert c.target_digits == 60
    assert c.work_bits >= 256
    assert c.doubled().work_bits == 2 * c.work_bits


def test_ctx_rejects_no_guard():
    with pytest.raises(DomainError):
        PrecisionCtx(64, mpf(10) ** -40)


def test_rational_det_and_inverse():
    A = RationalMatrix([[2, 1, 0], [Fraction(1, 3), 4, 1], [0, 1, 5]])
    # cofactor expansion by hand
    assert A.det() == 2 * (20 - 1) - 1 * (Fraction(5, 3) - 0)
    Ainv = rat_mat_inverse(A)
    assert A @ Ainv == RationalMatrix.identity(3)


def test_det_with_pivoting_and_singular():
    assert RationalMatrix([[0, 1], [1, 0]]).det() == -1
    assert RationalMatrix([[1, 2], [2, 4]]).det() == 0
    assert RationalMatrix([[1, 2], [2, 4]]).rank() == 1


def test_json_round_trip():
    A = RationalMatrix([[Fraction(-1, 8), 0], [0, Fraction(-1, 6)]])
    data = A.to_json()
    assert data == [["-1/8", "0/1"], ["0/1", "-1/6"]]
    assert RationalMatrix.from_json(data) == A


def test_shape_errors():
    with pytest.raises(ShapeMismatch):
        RationalMatrix([[1, 2]]) @ RationalMatrix([[1, 2]])
    with pytest.raises(ShapeMismatch):
        RationalMatrix([[1, 2], [3, 4]]).delete(row=0).det()


def test_relative_residual_uses_unit_floor():
    assert relative_residual([[mpf("0.5")]], [[mpf("0.25")]]) == mpf("0.25")
    assert relative_residual([[mpf(100)]], [[mpf(101)]]) == mpf(1) / 101
