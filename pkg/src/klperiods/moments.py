"""Bessel moments, regularized moments and two-scale integrals.

Every integral over (0, oo) is split into a finite part on [0, T], done by
tanh-sinh quadrature on geometric panels, and a tail on [T, oo) integrated
term by term from the asymptotic expansion of the integrand.  Bessel values at
the quadrature nodes are computed once per table and shared by all integrands.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Dict, List, Tuple

import mpmath
from mpmath import mp, mpf

from .bessel import asym_coeff_i0, asym_coeff_i1, bessel_all, default_plan
from .combinatorics import gamma_coeff
from .errors import DivergentMoment, DomainError
from .highprec import DEFAULT_CTX, PrecisionCtx, error_estimate, fmp, unit_nodes

DEFAULT_CUTOFF = 64
EXTRA_BITS = 20


def kprime(k: int) -> int:
    return (k - 1) // 2


@dataclass(frozen=True)
class MomentSpec:
    """IKM_k(a, b) = int_0^oo I0^a K0^(k-a) t^b dt, possibly regularized."""

    k: int
    a: int
    b: int
    regularized: bool = False

    def __post_init__(self):
        if self.k < 1:
            raise DomainError("k must be positive")
        if self.a < 0 or self.a > self.k or self.b < 0:
            raise DomainError("need 0 <= a <= k and b >= 0")

    @property
    def convergent(self) -> bool:
        kp = kprime(self.k)
        if self.a <= kp:
            return True
        return 2 * self.a == self.k and self.b < kp

    @property
    def regularizable(self) -> bool:
        return self.k % 2 == 0 and 2 * self.a == self.k and self.b % 2 == 0

    def label(self) -> str:
        name = "IKMreg" if self.regularized else "IKM"
        return "%s_%d(%d,%d)" % (name, self.k, self.a, self.b)

    def to_json(self):
        return {"k": self.k, "a": self.a, "b": self.b, "regularized": self.regularized}


def panel_edges(T) -> List[mpf]:
    edges = [mpf(0), mpf(1)]
    e = 2
    while e < T:
        edges.append(mpf(e))
        e *= 2
    if edges[-1] < T:
        edges.append(mpf(T))
    return edges


def default_cutoff(ctx: PrecisionCtx) -> int:
    """Cutoff T; tails of regularized moments are known only up to about exp(-2T)."""
    digits = float(-mpmath.log10(ctx.target_abs_err))
    return max(DEFAULT_CUTOFF, int(math.ceil(1.2 * digits)) + 4)


def quad_level(ctx: PrecisionCtx) -> int:
    """Tanh-sinh level that reaches the target on the geometric panels."""
    digits = float(-mpmath.log10(ctx.target_abs_err))
    # each level roughly doubles the number of correct digits; level 7 gives ~70
    lev = 7
    while 10 * 2 ** (lev - 4) < digits + 10:
        lev += 1
    return lev


class NodeTable:
    """Quadrature nodes on [0, T] with cached Bessel values.

    When ``x`` is given the kernel values I0(xt), I0'(xt), K0(xt), K0'(xt)
    are cached too.
    """

    def __init__(self, ctx: PrecisionCtx, T, level: int, x=None):
        self.ctx = ctx
        self.T = mpf(T)
        self.level = level
        self.x = None if x is None else mpf(x)
        prec = ctx.work_bits + EXTRA_BITS
        plan = default_plan(ctx)
        t_list, w_list, tag_list = [], [], []
        with mp.workprec(prec):
            edges = panel_edges(self.T)
            for lo, hi in zip(edges[:-1], edges[1:]):
                length = hi - lo
                cw, nodes = unit_nodes(ctx.work_bits, level)
                t_list.append((lo + hi) / 2)
                w_list.append(cw * length)
                tag_list.append(0)
                for delta, w, lev in nodes:
                    d = length * delta
                    for t in (lo + d, hi - d):
                        t_list.append(t)
                        w_list.append(w * length)
                        tag_list.append(lev)
            self.t = t_list
            self.w = w_list
            self.tag = tag_list
            vals = [bessel_all(t, plan) for t in t_list]
            self.i0 = [v[0] for v in vals]
            self.i0p = [v[1] for v in vals]
            self.k0 = [v[2] for v in vals]
            self.k0p = [v[3] for v in vals]
            if self.x is not None:
                kv = [bessel_all(self.x * t, plan) for t in t_list]
                self.ker = {
                    "I0": [v[0] for v in kv],
                    "K0": [v[2] for v in kv],
                    "tI0p": [t * v[1] for t, v in zip(t_list, kv)],
                    "tK0p": [t * v[3] for t, v in zip(t_list, kv)],
                }

    def __len__(self):
        return len(self.t)

    def integrate(self, values) -> Tuple[mpf, mpf]:
        """Integral of the sampled function over [0, T] and an error estimate."""
        L = self.level
        with mp.workprec(self.ctx.work_bits + EXTRA_BITS):
            sums = [mpf(0)] * (L + 1)
            absmass = mpf(0)
            for v, w, lev in zip(values, self.w, self.tag):
                c = w * v
                sums[lev] += c
                absmass += abs(c)
            q = []
            acc = mpf(0)
            for lev in range(L + 1):
                acc += sums[lev]
                q.append(acc * mpf(2) ** -lev)
            floor = absmass * mpf(2) ** (-L - self.ctx.work_bits)
            err = error_estimate(q[L], q[L - 1], q[L - 2], floor)
            return q[L], err


# ---------------------------------------------------------------------------
# asymptotic tails


def _asym_factor(kind: str, x, n_terms: int):
    """(rate, t-power, constant, coefficients in 1/t) for one factor."""
    x = mpf(x)
    if kind == "I0":
        coeffs = [fmp(asym_coeff_i0(n)) / x ** n for n in range(n_terms)]
        return x, Fraction(-1, 2), 1 / mpmath.sqrt(2 * mpmath.pi * x), coeffs
    if kind == "K0":
        coeffs = [(-1) ** n * fmp(asym_coeff_i0(n)) / x ** n for n in range(n_terms)]
        return -x, Fraction(-1, 2), mpmath.sqrt(mpmath.pi / (2 * x)), coeffs
    if kind == "tI0p":
        coeffs = [(-1) ** n * fmp(asym_coeff_i1(n)) / x ** n for n in range(n_terms)]
        return x, Fraction(1, 2), 1 / mpmath.sqrt(2 * mpmath.pi * x), coeffs
    if kind == "tK0p":
        coeffs = [fmp(asym_coeff_i1(n)) / x ** n for n in range(n_terms)]
        return -x, Fraction(1, 2), -mpmath.sqrt(mpmath.pi / (2 * x)), coeffs
    raise DomainError("unknown kernel %r" % kind)


def _mp_series_mul(a, b, n):
    return [mpmath.fsum(a[i] * b[m - i] for i in range(m + 1)) for m in range(n)]


def asymptotic_density(factors, c: int, n_terms: int):
    """Asymptotic expansion of a product of Bessel-type factors times t^c.

    ``factors`` is a list of (kind, x) pairs.  Returns (decay rate lambda,
    exponent beta, constant C, coefficients p_n) such that the integrand is
    C e^(-lambda t) t^beta sum p_n t^-n.
    """
    rate = mpf(0)
    beta = Fraction(c)
    const = mpf(1)
    series = [mpf(1)] + [mpf(0)] * (n_terms - 1)
    for kind, x in factors:
        r, tp, cst, co = _asym_factor(kind, x, n_terms)
        rate += r
        beta += tp
        const *= cst
        series = _mp_series_mul(series, co, n_terms)
    return -rate, beta, const, series


def _power_tail(s: Fraction, T):
    """int_T^oo t^s dt for s < -1."""
    s1 = s + 1
    return -mpmath.power(T, mpf(s1.numerator) / s1.denominator) / (mpf(s1.numerator) / s1.denominator)


def tail_integral(factors, c: int, T, ctx: PrecisionCtx, n_max: int = 200):
    """int_T^oo of the product of factors times t^c, from the asymptotic density."""
    lam, beta, const, coeffs = asymptotic_density(factors, c, n_max)
    if lam < 0:
        raise DivergentMoment("integrand grows exponentially")
    thresh = ctx.target_abs_err * mpf(2) ** -20
    total = mpf(0)
    prev = None
    err = mpf(0)
    T = mpf(T)
    for n, p in enumerate(coeffs):
        s = beta - n
        if p == 0:
            continue
        if lam == 0:
            if s >= -1:
                raise DivergentMoment("power-law tail t^%s is not integrable" % s)
            term = const * p * _power_tail(s, T)
        else:
            s1 = mpf(s.numerator) / s.denominator + 1
            term = const * p * mpmath.gammainc(s1, lam * T) / lam ** s1
        if prev is not None and abs(term) > abs(prev) and abs(prev) < abs(total) * mpf(2) ** -40:
            # asymptotic series started to diverge: stop at the smallest term
            err = abs(prev)
            break
        total += term
        prev = term
        if abs(term) < thresh:
            err = abs(term)
            break
    else:
        err = abs(prev)
    return total, err


def _gamma_power_terms(k: int, b: int, n_max: int):
    """(coefficient, exponent) pairs of (I0 K0)^(k/2) t^b at infinity, exact."""
    for n in range(n_max):
        coef = gamma_coeff(k, n) * Fraction(4) ** n / Fraction(2) ** (k // 2)
        alpha = Fraction(b - 2 * n) - Fraction(k, 2)
        yield coef, alpha


def _finite_part(coef: Fraction, alpha: Fraction, T):
    """int^T t^alpha as used in the subtraction (log T at alpha = -1)."""
    c = mpf(coef.numerator) / coef.denominator
    if alpha == -1:
        return c * mpmath.log(T)
    a1 = alpha + 1
    a1f = mpf(a1.numerator) / a1.denominator
    return c * mpmath.power(T, a1f) / a1f


# ---------------------------------------------------------------------------
# the engine


class MomentEngine:
    """Computes and caches moments for one precision context and cutoff."""

    def __init__(self, ctx: PrecisionCtx = DEFAULT_CTX, T=None, level: int = None, perturbation=0):
        self.ctx = ctx
        self.T = mpf(T if T is not None else default_cutoff(ctx))
        self.level = level or quad_level(ctx)
        self.perturbation = mpf(perturbation)
        self._table = None
        self._two_scale_tables: Dict = {}
        self._cache: Dict = {}

    @property
    def table(self) -> NodeTable:
        if self._table is None:
            self._table = NodeTable(self.ctx, self.T, self.level)
        return self._table

    def _finite_integral(self, k: int, a: int, b: int):
        tab = self.table
        with mp.workprec(self.ctx.work_bits + EXTRA_BITS):
            vals = [i ** a * kk ** (k - a) * t ** b for i, kk, t in zip(tab.i0, tab.k0, tab.t)]
        return tab.integrate(vals)

    def ikm_with_error(self, spec: MomentSpec):
        key = spec
        if key in self._cache:
            return self._cache[key]
        k, a, b = spec.k, spec.a, spec.b
        if spec.regularized:
            if not spec.regularizable:
                raise DomainError("regularization needs even k, a = k/2 and even b")
        elif not spec.convergent:
            raise DivergentMoment(
                "IKM_%d(%d,%d) diverges: need a <= k' (b >= 0) or a = k/2 with b < k'" % (k, a, b))
        with mp.workprec(self.ctx.work_bits + EXTRA_BITS):
            body, err = self._finite_integral(k, a, b)
            if 2 * a == k:
                tail, terr = self._power_tail_correction(k, b)
            else:
                tail, terr = tail_integral([("I0", 1)] * a + [("K0", 1)] * (k - a), b, self.T, self.ctx)
            value = body + tail + self.perturbation
        out = (+value, err + terr)
        self._cache[key] = out
        return out

    def _power_tail_correction(self, k: int, b: int):
        """Minus the finite-part integrals of the exact asymptotic density."""
        T = self.T
        thresh = self.ctx.target_abs_err * mpf(2) ** -20
        total = mpf(0)
        prev = None
        for coef, alpha in _gamma_power_terms(k, b, 2 * int(T)):
            term = -_finite_part(coef, alpha, T)
            if alpha < -1 and prev is not None and abs(term) > abs(prev):
                return total, abs(prev)
            total += term
            if alpha < -1:
                prev = term
                if abs(term) < thresh:
                    return total, abs(term)
        return total, abs(prev)

    def ikm(self, spec: MomentSpec):
        return self.ikm_with_error(spec)[0]

    def ikm_reg(self, k: int, j: int):
        if k % 2 or k < 2 or j < 0:
            raise DomainError("regularized moments need even k and j >= 0")
        return self.ikm(MomentSpec(k, k // 2, 2 * j, regularized=True))

    def value(self, k: int, a: int, b: int, regularized: bool = False):
        return self.ikm(MomentSpec(k, a, b, regularized))

    # -- two-scale integrals -------------------------------------------------

    def _two_scale_table(self, x) -> NodeTable:
        x = mpf(x)
        key = str(x)
        tab = self._two_scale_tables.get(key)
        if tab is None:
            T = max(self.T, mpmath.ceil(self.T / min(x, 1)))
            tab = NodeTable(self.ctx, T, self.level, x=x)
            self._two_scale_tables[key] = tab
        return tab

    def two_scale_with_error(self, x, kernel: str, a: int, b: int, c: int):
        x = mpf(x)
        if x <= 0:
            raise DomainError("x must be positive")
        if kernel not in ("I0", "K0", "tI0p", "tK0p"):
            raise DomainError("unknown kernel %r" % kernel)
        if a < 0 or b < 0 or c < 0:
            raise DomainError("exponents must be non-negative")
        rate = (x if kernel in ("I0", "tI0p") else -x) + a - b
        if rate > 0:
            raise DivergentMoment("integrand grows like exp(%s t)" % mpmath.nstr(rate, 8))
        if rate == 0:
            beta = Fraction(c) - Fraction(a + b + 1, 2) + (1 if kernel.startswith("t") else 0)
            if beta >= -1:
                raise DivergentMoment("power-law tail t^%s is not integrable" % beta)
        key = ("two_scale", str(x), kernel, a, b, c)
        if key in self._cache:
            return self._cache[key]
        tab = self._two_scale_table(x)
        with mp.workprec(self.ctx.work_bits + EXTRA_BITS):
            ker = tab.ker[kernel]
            vals = [kv * i ** a * kk ** b * t ** c for kv, i, kk, t in zip(ker, tab.i0, tab.k0, tab.t)]
            body, err = tab.integrate(vals)
            factors = [(kernel, x)] + [("I0", 1)] * a + [("K0", 1)] * b
            tail, terr = tail_integral(factors, c, tab.T, self.ctx)
        out = (+(body + tail), err + terr)
        self._cache[key] = out
        return out

    def two_scale(self, x, kernel: str, a: int, b: int, c: int):
        return self.two_scale_with_error(x, kernel, a, b, c)[0]

    def omega_matrix(self, size: int, x):
        """Wronskian matrix of the two-scale moment functions."""
        if size < 1:
            raise DomainError("size must be positive")
        n = size - 1
        R = (n + 1) // 2
        out = []
        for i in range(1, size + 1):
            row = []
            for j in range(1, size + 1):
                if j <= R:
                    pa, pb = j - 1, n - j + 1
                    base = "I0"
                else:
                    pa, pb = j - R - 1, n - j + R + 1
                    base = "K0"
                if i % 2:
                    row.append(self.two_scale(x, base, pa, pb, i - 1))
                else:
                    row.append(self.two_scale(x, "t" + base + "p", pa, pb, i - 2))
            out.append(row)
        return out


@lru_cache(maxsize=8)
def default_engine(ctx: PrecisionCtx = DEFAULT_CTX) -> MomentEngine:
    return MomentEngine(ctx)


def ikm(spec: MomentSpec, ctx: PrecisionCtx = DEFAULT_CTX):
    return default_engine(ctx).ikm(spec)


def ikm_reg(k: int, j: int, ctx: PrecisionCtx = DEFAULT_CTX):
    return default_engine(ctx).ikm_reg(k, j)


def two_scale(x, kernel: str, a: int, b: int, c: int, ctx: PrecisionCtx = DEFAULT_CTX):
    return default_engine(ctx).two_scale(x, kernel, a, b, c)


def omega_matrix(size: int, x, ctx: PrecisionCtx = DEFAULT_CTX):
    return default_engine(ctx).omega_matrix(size, x)
