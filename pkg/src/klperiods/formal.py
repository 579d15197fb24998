"""Truncated exponential-Puiseux series at w = 0.

An ExpPuiseux object stands for

    sqrt(pi)^pi_power * exp(-c / sqrt(w)) * w^mu * sum_{m=0}^{N} a_m w^(m/2) + O(w^order)

with rational data. It supports products, sums, derivatives and formal
antiderivatives, which is all that the residue computation of the Poincare
pairing needs.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Tuple

from .bessel import asym_coeff_i0
from .combinatorics import binomial, gamma_coeff
from .errors import DomainError, ResidueObstruction, TruncationTooShort

HALF = Fraction(1, 2)


@dataclass(frozen=True)
class ExpPuiseux:
    c: Fraction
    mu: Fraction
    coeffs: Tuple[Fraction, ...]
    pi_power: int = 0

    def __post_init__(self):
        coeffs = tuple(Fraction(x) for x in self.coeffs)
        mu = Fraction(self.mu)
        # normal form: strip leading zeros, the known range is unchanged
        while coeffs and coeffs[0] == 0:
            coeffs = coeffs[1:]
            mu += HALF
        object.__setattr__(self, "coeffs", coeffs)
        object.__setattr__(self, "mu", mu)
        object.__setattr__(self, "c", Fraction(self.c))

    @property
    def N(self) -> int:
        return len(self.coeffs) - 1

    @property
    def order(self) -> Fraction:
        """Exponent of the first unknown term."""
        return self.mu + Fraction(len(self.coeffs), 2)

    def is_zero(self) -> bool:
        return not self.coeffs

    def exponents(self):
        return [self.mu + Fraction(m, 2) for m in range(len(self.coeffs))]

    def coeff_at(self, e) -> Fraction:
        """Coefficient of w^e (exponent in mu + Z/2)."""
        e = Fraction(e)
        if e >= self.order:
            raise TruncationTooShort("w^%s lies beyond the known order w^%s" % (e, self.order))
        m = 2 * (e - self.mu)
        if m.denominator != 1:
            return Fraction(0)
        m = int(m)
        if m < 0:
            return Fraction(0)
        return self.coeffs[m]

    def shift(self, q) -> "ExpPuiseux":
        """Multiply by w^q."""
        return ExpPuiseux(self.c, self.mu + Fraction(q), self.coeffs, self.pi_power)

    def scale(self, s) -> "ExpPuiseux":
        s = Fraction(s)
        if s == 0:
            return ExpPuiseux(self.c, self.order, (), self.pi_power)
        return ExpPuiseux(self.c, self.mu, tuple(s * x for x in self.coeffs), self.pi_power)

    def __mul__(self, other: "ExpPuiseux") -> "ExpPuiseux":
        c = self.c + other.c
        pp = self.pi_power + other.pi_power
        if self.is_zero() or other.is_zero():
            if self.is_zero() and other.is_zero():
                o = self.order + other.order
            elif self.is_zero():
                o = self.order + other.mu
            else:
                o = other.order + self.mu
            return ExpPuiseux(c, o, (), pp)
        n = min(self.N, other.N)
        a, b = self.coeffs, other.coeffs
        out = [sum((a[i] * b[m - i] for i in range(m + 1)), Fraction(0)) for m in range(n + 1)]
        return ExpPuiseux(c, self.mu + other.mu, tuple(out), pp)

    def __pow__(self, e: int) -> "ExpPuiseux":
        if e < 0:
            raise DomainError("negative powers are not supported")
        result = ExpPuiseux(0, 0, (Fraction(1),) * 1 + (Fraction(0),) * self.N, 0)
        base = self
        while e:
            if e & 1:
                result = result * base
            e >>= 1
            if e:
                base = base * base
        return result

    def __add__(self, other: "ExpPuiseux") -> "ExpPuiseux":
        if self.c != other.c or self.pi_power != other.pi_power:
            raise DomainError("cannot add series with different exponential or sqrt(pi) factors")
        if (2 * (self.mu - other.mu)).denominator != 1:
            raise DomainError("exponent lattices differ")
        mu = min(self.mu, other.mu)
        order = min(self.order, other.order)
        n = int(2 * (order - mu))
        out = []
        for m in range(n):
            e = mu + Fraction(m, 2)
            out.append(self.coeff_at(e) + other.coeff_at(e))
        return ExpPuiseux(self.c, mu, tuple(out), self.pi_power)

    def __sub__(self, other):
        return self + other.scale(-1)

    def derivative(self) -> "ExpPuiseux":
        a = self.coeffs
        if self.c == 0:
            out = [(self.mu + Fraction(m, 2)) * a[m] for m in range(len(a))]
            if self.is_zero():
                return ExpPuiseux(0, self.order - 1, (), self.pi_power)
            return ExpPuiseux(0, self.mu - 1, tuple(out), self.pi_power)
        if self.is_zero():
            return ExpPuiseux(self.c, self.order - Fraction(3, 2), (), self.pi_power)
        half_c = self.c / 2
        out = []
        for m in range(len(a)):
            v = half_c * a[m]
            if m:
                v += (self.mu + Fraction(m - 1, 2)) * a[m - 1]
            out.append(v)
        return ExpPuiseux(self.c, self.mu - Fraction(3, 2), tuple(out), self.pi_power)

    def residue(self) -> Fraction:
        """Coefficient of w^-1; only meaningful without exponential factor."""
        if self.c != 0 or self.pi_power != 0:
            raise ResidueObstruction("residue of a series with exp or sqrt(pi) factor (c=%s, pi^%d/2)"
                                     % (self.c, self.pi_power))
        return self.coeff_at(-1)


def formal_antiderivative(s: ExpPuiseux) -> Tuple[ExpPuiseux, Fraction]:
    """Return (S, residue) with dS/dw = s - residue/w to the known order."""
    if s.is_zero():
        if s.c == 0:
            return ExpPuiseux(0, s.order + 1, (), s.pi_power), Fraction(0)
        return ExpPuiseux(s.c, s.order + Fraction(3, 2), (), s.pi_power), Fraction(0)
    if len(s.coeffs) < 1:
        raise TruncationTooShort("series too short to integrate")
    if s.c == 0:
        out = []
        res = Fraction(0)
        for m, f in enumerate(s.coeffs):
            e = s.mu + Fraction(m, 2)
            if e == -1:
                res = f
                out.append(Fraction(0))
            else:
                out.append(f / (e + 1))
        return ExpPuiseux(0, s.mu + 1, tuple(out), s.pi_power), res
    beta = s.mu + Fraction(3, 2)
    two_over_c = 2 / s.c
    g = []
    for m, f in enumerate(s.coeffs):
        v = f
        if m:
            v -= (beta + Fraction(m - 1, 2)) * g[m - 1]
        g.append(two_over_c * v)
    return ExpPuiseux(s.c, beta, tuple(g), s.pi_power), Fraction(0)


# ---------------------------------------------------------------------------
# series of the Bessel-type solutions


@lru_cache(maxsize=None)
def _minus_a0(N: int) -> ExpPuiseux:
    return ExpPuiseux(-2, Fraction(1, 4), tuple(asym_coeff_i0(n) / 2 ** n for n in range(N + 1)), -1)


@lru_cache(maxsize=None)
def _b0(N: int) -> ExpPuiseux:
    return ExpPuiseux(2, Fraction(1, 4), tuple((-1) ** n * asym_coeff_i0(n) / 2 ** n for n in range(N + 1)), 1)


@lru_cache(maxsize=None)
def a0b0_series(a: int, k: int, N: int) -> ExpPuiseux:
    """(-A0)^a B0^(k-a) truncated after N half-steps."""
    if not 0 <= a <= k:
        raise DomainError("need 0 <= a <= k")
    return (_minus_a0(N) ** a) * (_b0(N) ** (k - a))


def kprime(k: int) -> int:
    return (k - 1) // 2


def _integrand(i: int, a: int, k: int, N: int) -> ExpPuiseux:
    s = a0b0_series(a, k, N)
    base = s.shift(-(i + Fraction(3, 2)))
    if k % 4 == 2:
        r = (k - 2) // 4
        if i > r:
            base = base - s.shift(-(r + Fraction(3, 2))).scale(gamma_coeff(k, i - r))
        elif i == r:
            raise DomainError("index r is replaced by the m-hat class when k = 2 mod 4")
    return base


@lru_cache(maxsize=None)
def eta_series(i: int, a: int, k: int, N: int) -> ExpPuiseux:
    """Residue-free antiderivative attached to the compactly supported class of index i."""
    if not 0 <= a <= k or not 0 <= i <= kprime(k):
        raise DomainError("index out of range")
    S, res = formal_antiderivative(_integrand(i, a, k, N))
    if res != 0:
        raise ResidueObstruction("w^-1 coefficient %s survives for (i,a,k)=(%d,%d,%d)" % (res, i, a, k))
    return S


def default_truncation(k: int) -> int:
    return 2 * k + 8


def _poincare_row(i: int, k: int, N: int):
    kp = kprime(k)
    row = []
    for j in range(kp + 1):
        total = Fraction(0)
        for a in range(k + 1):
            prod = eta_series(i, a, k, N) * a0b0_series(k - a, k, N).shift(-(j + Fraction(3, 2)))
            total += (-1) ** a * binomial(k, a) * prod.residue()
        row.append(total / 2 ** k)
    return row


def poincare_row(i: int, k: int, N: int = None):
    """Pairing of the compactly supported class of index i with z^j dz/z, j = 0..k'."""
    if k < 1:
        raise DomainError("k must be positive")
    N = N or default_truncation(k)
    while True:
        try:
            return _poincare_row(i, k, N)
        except TruncationTooShort:
            N *= 2
            if N > 64 * k + 64:
                raise


def antidiagonal_closed_form(i: int, k: int) -> Fraction:
    kp = kprime(k)
    if k % 2:
        return Fraction((-2) ** kp * _fact(kp), _dfact(k))
    if k % 4 == 0:
        r = (k - 4) // 4
        return Fraction(binomial(k, k // 2), 2 ** k) / (r - i + HALF)
    r = (k - 2) // 4
    return -Fraction(binomial(k, k // 2), 2 ** k) / (r - i)


def _fact(n):
    out = 1
    for j in range(2, n + 1):
        out *= j
    return out


def _dfact(n):
    out = 1
    while n > 1:
        out *= n
        n -= 2
    return out


def g_series_closed_form(i: int, k: int, N: int):
    """1 + sum (r-i+1/2)/(r-i+1/2+n) gamma_{k,n} w^n for k = 4r+4."""
    r = (k - 4) // 4
    h = r - i + HALF
    return [Fraction(1)] + [h / (h + n) * gamma_coeff(k, n) for n in range(1, N + 1)]
