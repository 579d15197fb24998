"""Exact rational sequences: Euler numbers, double factorials, the cycle
coefficients d_n(i), alternating power sums and the gamma_{k,n} tables."""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from .errors import DomainError


def double_factorial(n: int) -> int:
    if n < -1:
        raise DomainError("double factorial undefined for n < -1")
    out = 1
    while n > 1:
        out *= n
        n -= 2
    return out


def binomial(n: int, k: int) -> int:
    if k < 0 or k > n:
        return 0
    return math.comb(n, k)


@lru_cache(maxsize=None)
def euler_number(n: int) -> Fraction:
    """E_n = E_n(0): E_0 = 1 and E_n = -1/2 sum_{k<n} C(n,k) E_k."""
    if n < 0:
        raise DomainError("n must be non-negative")
    if n == 0:
        return Fraction(1)
    return -Fraction(1, 2) * sum((binomial(n, k) * euler_number(k) for k in range(n)), Fraction(0))


def d_coeff(n: int, i: int) -> Fraction:
    """Solution of sum_i d_n(i) (2i)^m = -1/2 for 1 <= m <= n."""
    if not 1 <= i <= n:
        raise DomainError("need 1 <= i <= n")
    return Fraction((-1) ** i * binomial(n, i) * double_factorial(2 * n - 1),
                    math.factorial(n) * 2 ** (n + 1) * (2 * i - 1))


def alt_power_sum(n: int, k: int) -> Fraction:
    """T_n(k) = sum_{l<k} (-1)^l l^n."""
    if n < 1 or k < 1:
        raise DomainError("need n >= 1 and k >= 1")
    return Fraction(sum((-1) ** l * l ** n for l in range(k)))


def alt_power_sum_kim(n: int, k: int) -> Fraction:
    """Right-hand side of Kim's Euler-number formula for T_n(k)."""
    s = sum((binomial(n, l) * euler_number(l) * k ** (n - l) for l in range(n)), Fraction(0))
    return Fraction((-1) ** (k + 1), 2) * s + euler_number(n) / 2 * (1 + (-1) ** (k + 1))


def series_mul(a, b, n):
    """Product of two truncated power series (lists), keeping n+1 terms."""
    out = [Fraction(0)] * (n + 1)
    for i, x in enumerate(a[: n + 1]):
        if x == 0:
            continue
        for j, y in enumerate(b[: n + 1 - i]):
            out[i + j] += x * y
    return out


def series_pow(a, e: int, n: int):
    """a**e truncated to n+1 terms by binary powering."""
    result = [Fraction(1)] + [Fraction(0)] * n
    base = list(a[: n + 1]) + [Fraction(0)] * max(0, n + 1 - len(a))
    while e:
        if e & 1:
            result = series_mul(result, base, n)
        e >>= 1
        if e:
            base = series_mul(base, base, n)
    return result


def _c_coeff(m: int) -> Fraction:
    df = double_factorial(2 * m - 1)
    return Fraction(df ** 3, 32 ** m * math.factorial(m))


@dataclass(frozen=True)
class GammaTable:
    k: int
    coeffs: tuple
    N: int

    def __getitem__(self, n: int) -> Fraction:
        if n < 0:
            return Fraction(0)
        if n > self.N:
            raise IndexError("gamma_{%d,%d} beyond table order %d" % (self.k, n, self.N))
        return self.coeffs[n]


@lru_cache(maxsize=None)
def gamma_table(k: int, N: int) -> GammaTable:
    """Coefficients of (sum_m c_m w^m)^(k/2), c_m = ((2m-1)!!)^3/(2^(5m) m!)."""
    if k < 2 or k % 2:
        raise DomainError("gamma table needs even k >= 2")
    base = [_c_coeff(m) for m in range(N + 1)]
    return GammaTable(k, tuple(series_pow(base, k // 2, N)), N)


def gamma_coeff(k: int, n: int) -> Fraction:
    """gamma_{k,n}, zero for n < 0."""
    if n < 0:
        return Fraction(0)
    N = 16
    while N < n:
        N *= 2
    return gamma_table(k, N)[n]
