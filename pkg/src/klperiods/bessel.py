"""Modified Bessel functions I0, K0 and their derivatives on the positive reals.

Small arguments use the ascending series summed in fixed-point integer
arithmetic; large arguments use the optimally truncated asymptotic expansions.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

import mpmath
from mpmath import mp, mpf
from mpmath.libmp import from_man_exp, to_fixed

from .errors import DomainError
from .highprec import DEFAULT_CTX, PrecisionCtx

GUARD_BITS = 24


@lru_cache(maxsize=None)
def asym_coeff_i0(n: int) -> Fraction:
    """((2n-1)!!)^2 / (2^(3n) n!)."""
    if n < 0:
        raise DomainError("n must be non-negative")
    df = 1
    for j in range(1, 2 * n, 2):
        df *= j
    return Fraction(df * df, 8 ** n * math.factorial(n))


@lru_cache(maxsize=None)
def asym_coeff_i1(n: int) -> Fraction:
    """Coefficient a_n(1) = prod_{j<=n} (4 - (2j-1)^2) / (n! 8^n) of the order-one expansions."""
    num = 1
    for j in range(1, n + 1):
        num *= 4 - (2 * j - 1) ** 2
    return Fraction(num, math.factorial(n) * 8 ** n)


@lru_cache(maxsize=None)
def asym_coeff_i0k0_w(n: int) -> Fraction:
    """((2n-1)!!)^3 / (2^(5n) n!)."""
    if n < 0:
        raise DomainError("n must be non-negative")
    df = 1
    for j in range(1, 2 * n, 2):
        df *= j
    return Fraction(df ** 3, 32 ** n * math.factorial(n))


def _log2_min_asym_term(t: float) -> float:
    """log2 of the smallest term of the order-zero asymptotic series at t."""
    best = 0.0
    cur = 0.0
    n = 1
    while True:
        ratio = (2 * n - 1) ** 2 / (8.0 * n * t)
        if ratio >= 1:
            return best
        cur += math.log2(ratio)
        best = min(best, cur)
        n += 1


@dataclass(frozen=True)
class BesselEvalPlan:
    """Regime switch point and truncation data for one precision context."""

    ctx: PrecisionCtx = DEFAULT_CTX
    tau: mpf = field(default=None)
    asym_terms: int = field(default=None)

    def __post_init__(self):
        # relative accuracy wanted from the asymptotic regime
        want = float(mpmath.log(self.ctx.target_abs_err, 2)) - 30
        tau = self.tau
        if tau is None:
            t = 10
            while _log2_min_asym_term(t) > want:
                t += 1
            tau = t
        tau = mpf(tau)
        if tau < 10:
            raise DomainError("series cutoff must be at least 10")
        n_terms = 0
        cur = 0.0
        tf = float(tau)
        while True:
            ratio = (2 * n_terms + 1) ** 2 / (8.0 * (n_terms + 1) * tf)
            if ratio >= 1:
                break
            cur += math.log2(ratio)
            n_terms += 1
            if cur < want:
                break
        if cur > want:
            raise DomainError(
                "asymptotic series cannot reach the target at tau=%s (smallest term 2^%.1f)" % (tau, cur))
        object.__setattr__(self, "tau", tau)
        object.__setattr__(self, "asym_terms", n_terms if self.asym_terms is None else self.asym_terms)


@lru_cache(maxsize=16)
def default_plan(ctx: PrecisionCtx = DEFAULT_CTX) -> BesselEvalPlan:
    return BesselEvalPlan(ctx)


@lru_cache(maxsize=16)
def _euler_fixed(prec: int) -> int:
    with mp.workprec(prec + 10):
        return to_fixed(mpmath.euler._mpf_, prec)


def _series_all(t: mpf, prec: int):
    """I0, I1, K0, K1 at t from the ascending series, fixed point at ``prec`` bits."""
    one = 1 << prec
    tf = to_fixed(t._mpf_, prec)
    q = (tf * tf) >> (prec + 2)  # t^2/4
    term = one  # q^m / (m!)^2
    harm = 0  # H_m
    s_i0 = one
    s_i1 = one
    s_k0 = 0
    s_k1 = one  # m=0 term: (H_0 + H_1) * term / 1
    m = 0
    while True:
        m += 1
        term = (term * q >> prec) // (m * m)
        if term == 0:
            break
        harm += one // m
        t1 = term // (m + 1)
        s_i0 += term
        s_i1 += t1
        s_k0 += (harm * term) >> prec
        s_k1 += ((2 * harm + one // (m + 1)) * t1) >> prec
    with mp.workprec(prec + 10):
        lg = to_fixed(mpmath.log(t / 2)._mpf_, prec)
    L = lg + _euler_fixed(prec)
    k0 = -((L * s_i0) >> prec) + s_k0
    with mp.workprec(prec):
        # factors of t and 1/t in floating point so tiny t keeps full relative accuracy
        i1 = t * mpf(from_man_exp(s_i1, -prec)) / 2
        Lf = mpf(from_man_exp(L, -prec))
        k1 = 1 / t + Lf * i1 - t * mpf(from_man_exp(s_k1, -prec)) / 4
        return mpf(from_man_exp(s_i0, -prec)), i1, mpf(from_man_exp(k0, -prec)), k1


def _asym_sums(t: mpf, n_max: int):
    """Partial sums of the order 0 and order 1 asymptotic series (K sign)."""
    s0 = mpf(1)
    s1 = mpf(1)
    a0 = mpf(1)
    a1 = mpf(1)
    alt0 = mpf(1)
    alt1 = mpf(1)
    eps = mpf(2) ** (-mp.prec)
    for n in range(1, n_max + 1):
        a0 *= -mpf((2 * n - 1) ** 2) / (8 * n * t)
        a1 *= mpf(4 - (2 * n - 1) ** 2) / (8 * n * t)
        s0 += a0
        s1 += a1
        sg = -1 if n % 2 else 1
        alt0 += sg * a0
        alt1 += sg * a1
        if abs(a0) < eps and abs(a1) < eps:
            break
    # s*: K-type sums sum a_n/t^n; alt*: I-type sums sum (-1)^n a_n/t^n
    return s0, s1, alt0, alt1


def _asym_all(t: mpf, plan: BesselEvalPlan):
    with mp.workprec(plan.ctx.work_bits + GUARD_BITS):
        k0s, k1s, i0s, i1s = _asym_sums(t, plan.asym_terms)
        ek = mpmath.sqrt(mpmath.pi / (2 * t)) * mpmath.exp(-t)
        ei = mpmath.exp(t) / mpmath.sqrt(2 * mpmath.pi * t)
        return ei * i0s, ei * i1s, ek * k0s, ek * k1s


def bessel_all(t, plan: BesselEvalPlan = None):
    """Return (I0, I0', K0, K0') at t > 0."""
    plan = plan or default_plan()
    t = mpf(t)
    if t <= 0:
        raise DomainError("K0 needs t > 0")
    if t >= plan.tau:
        i0, i1, k0, k1 = _asym_all(t, plan)
    else:
        extra = int(math.ceil(2.9 * float(t))) + 8
        i0, i1, k0, k1 = _series_all(t, plan.ctx.work_bits + GUARD_BITS + extra)
    return i0, i1, k0, -k1


def _series_i_only(t: mpf, prec: int):
    one = 1 << prec
    tf = to_fixed(t._mpf_, prec)
    q = (tf * tf) >> (prec + 2)
    term = one
    s0 = one
    s1 = one
    m = 0
    while True:
        m += 1
        term = (term * q >> prec) // (m * m)
        if term == 0:
            break
        s0 += term
        s1 += term // (m + 1)
    with mp.workprec(prec):
        return mpf(from_man_exp(s0, -prec)), t * mpf(from_man_exp(s1, -prec)) / 2


def i0(t, plan: BesselEvalPlan = None):
    plan = plan or default_plan()
    t = mpf(t)
    if t < 0:
        raise DomainError("i0 needs t >= 0")
    if t >= plan.tau:
        return _asym_all(t, plan)[0]
    return _series_i_only(t, plan.ctx.work_bits + GUARD_BITS)[0]


def i0p(t, plan: BesselEvalPlan = None):
    plan = plan or default_plan()
    t = mpf(t)
    if t < 0:
        raise DomainError("i0p needs t >= 0")
    if t >= plan.tau:
        return _asym_all(t, plan)[1]
    return _series_i_only(t, plan.ctx.work_bits + GUARD_BITS)[1]


def k0(t, plan: BesselEvalPlan = None):
    return bessel_all(t, plan)[2]


def k0p(t, plan: BesselEvalPlan = None):
    return bessel_all(t, plan)[3]


def series_eval(t, plan: BesselEvalPlan = None):
    """Force the ascending-series regime (used to test the regime switch)."""
    plan = plan or default_plan()
    t = mpf(t)
    extra = int(math.ceil(2.9 * float(t))) + 8
    i0_, i1_, k0_, k1_ = _series_all(t, plan.ctx.work_bits + GUARD_BITS + extra)
    return i0_, i1_, k0_, -k1_


def asym_eval(t, plan: BesselEvalPlan = None):
    """Force the asymptotic regime."""
    plan = plan or default_plan()
    i0_, i1_, k0_, k1_ = _asym_all(mpf(t), plan)
    return i0_, i1_, k0_, -k1_
