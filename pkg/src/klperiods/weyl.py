"""Operators in Q<t, theta> with theta = t d/dt, written as sum_i t^i P_i(theta).

Covers symmetric powers of the Bessel operator, graded leading terms, the
lambda polynomials, change of variable z = t^2/4, twisting, adjoints and the
two-scale (Vanhove) operators in Q<x^(+-1), theta_x>.
"""
from __future__ import annotations

import math
from fractions import Fraction
from functools import lru_cache
from typing import Dict, Tuple

import mpmath
from mpmath import mp, mpf

from .errors import DomainError, OddExponent, ZeroOperator
from .highprec import DEFAULT_CTX, PrecisionCtx

THETA = "θ"

# ---------------------------------------------------------------------------
# univariate polynomials: tuples of Fractions, lowest degree first


def p_norm(c) -> tuple:
    c = [Fraction(x) for x in c]
    while c and c[-1] == 0:
        c.pop()
    return tuple(c)


def p_add(a, b) -> tuple:
    n = max(len(a), len(b))
    return p_norm([(a[i] if i < len(a) else 0) + (b[i] if i < len(b) else 0) for i in range(n)])


def p_scale(a, c) -> tuple:
    return p_norm([x * c for x in a])


def p_mul(a, b) -> tuple:
    if not a or not b:
        return ()
    out = [Fraction(0)] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return p_norm(out)


def p_affine(a, alpha, beta) -> tuple:
    """P(alpha*theta + beta)."""
    out = ()
    lin = p_norm([beta, alpha])
    power = (Fraction(1),)
    for c in a:
        out = p_add(out, p_scale(power, c))
        power = p_mul(power, lin)
    return out


def p_shift(a, s) -> tuple:
    return p_affine(a, 1, Fraction(s))


def p_eval(a, x):
    out = 0
    for c in reversed(a):
        out = out * x + c
    return out


def p_deriv(a) -> tuple:
    return p_norm([i * a[i] for i in range(1, len(a))])


def p_from_roots(roots) -> tuple:
    out = (Fraction(1),)
    for r in roots:
        out = p_mul(out, (Fraction(-r), Fraction(1)))
    return out


def fmt_rat(c: Fraction) -> str:
    return str(c.numerator) if c.denominator == 1 else "%d/%d" % (c.numerator, c.denominator)


def p_to_text(a, var: str) -> str:
    if not a:
        return "0"
    parts = []
    for d in range(len(a) - 1, -1, -1):
        c = a[d]
        if c == 0:
            continue
        mono = "" if d == 0 else (var if d == 1 else "%s^%d" % (var, d))
        parts.append((c, mono))
    return _join_terms(parts)


def _join_terms(parts) -> str:
    out = ""
    for n, (c, mono) in enumerate(parts):
        neg = c < 0
        mag = -c if neg else c
        if mono and mag == 1:
            body = mono
        elif mono:
            body = "%s·%s" % (fmt_rat(mag), mono)
        else:
            body = fmt_rat(mag)
        if n == 0:
            out = ("−" if neg else "") + body
        else:
            out += (" − " if neg else " + ") + body
    return out or "0"


# ---------------------------------------------------------------------------
# operators


class ThetaOperator:
    """Sum of var^i P_i(theta) with the rule theta var^i = var^i (theta + i)."""

    var = "t"
    laurent = False

    __slots__ = ("terms",)

    def __init__(self, terms: Dict[int, tuple] = None):
        clean = {}
        for i, p in (terms or {}).items():
            p = p_norm(p)
            if not p:
                continue
            if not self.laurent and i < 0:
                raise DomainError("negative %s-exponent in a polynomial operator" % self.var)
            clean[int(i)] = p
        self.terms = clean

    @classmethod
    def theta(cls):
        return cls({0: (0, 1)})

    @classmethod
    def monomial(cls, i: int, c=1):
        return cls({i: (Fraction(c),)})

    @classmethod
    def const(cls, c):
        return cls({0: (Fraction(c),)})

    def __eq__(self, other):
        return type(self) is type(other) and self.terms == other.terms

    def __hash__(self):
        return hash(tuple(sorted(self.terms.items())))

    def __bool__(self):
        return bool(self.terms)

    def __add__(self, other):
        out = dict(self.terms)
        for i, p in other.terms.items():
            out[i] = p_add(out.get(i, ()), p)
        return type(self)(out)

    def __neg__(self):
        return type(self)({i: p_scale(p, -1) for i, p in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c):
        return type(self)({i: p_scale(p, Fraction(c)) for i, p in self.terms.items()})

    def __mul__(self, other):
        if not isinstance(other, ThetaOperator):
            return self.scale(other)
        out: Dict[int, tuple] = {}
        for i, p in self.terms.items():
            for j, q in other.terms.items():
                prod = p_mul(p_shift(p, j), q)
                out[i + j] = p_add(out.get(i + j, ()), prod)
        return type(self)(out)

    __rmul__ = scale

    def map_polys(self, fn):
        return type(self)({i: fn(i, p) for i, p in self.terms.items()})

    def order(self) -> int:
        return max((len(p) - 1 for p in self.terms.values()), default=-1)

    def coeff_of_theta(self, d: int) -> Dict[int, Fraction]:
        """Laurent polynomial (exponent -> coefficient) multiplying theta^d."""
        return {i: p[d] for i, p in self.terms.items() if len(p) > d and p[d] != 0}

    def to_text(self) -> str:
        """One summand per line: ``t^i * (c_d θ^d + ... + c_0)``."""
        lines = []
        for i in sorted(self.terms):
            p = self.terms[i]
            inner = " + ".join("%s %s^%d" % (fmt_rat(p[d]), THETA, d) for d in range(len(p) - 1, -1, -1) if p[d] != 0)
            lines.append("%s^%d * (%s)" % (self.var, i, inner))
        return "\n".join(lines)

    @classmethod
    def from_text(cls, text: str):
        terms = {}
        for line in text.strip().splitlines():
            head, _, body = line.partition(" * (")
            i = int(head.split("^")[1])
            body = body.rstrip(")")
            coeffs: Dict[int, Fraction] = {}
            for mono in body.split(" + "):
                c, _, d = mono.partition(" %s^" % THETA)
                coeffs[int(d)] = Fraction(c)
            deg = max(coeffs)
            terms[i] = tuple(coeffs.get(d, Fraction(0)) for d in range(deg + 1))
        return cls(terms)

    def pretty(self) -> str:
        """Expanded form, highest theta degree first, e.g. ``θ^3 − 4·t^2·θ − 4·t^2``."""
        parts = []
        deg = self.order()
        for d in range(deg, -1, -1):
            for i in sorted(self.terms):
                p = self.terms[i]
                if len(p) > d and p[d] != 0:
                    bits = []
                    if i != 0:
                        bits.append(self.var if i == 1 else "%s^%d" % (self.var, i))
                    if d != 0:
                        bits.append(THETA if d == 1 else "%s^%d" % (THETA, d))
                    parts.append((p[d], "·".join(bits)))
        return _join_terms(parts)

    def __repr__(self):
        return "%s(%s)" % (type(self).__name__, self.pretty())


class WeylOperator(ThetaOperator):
    var = "t"
    laurent = False
    __slots__ = ()


class XThetaOperator(ThetaOperator):
    var = "x"
    laurent = True
    __slots__ = ()


def weyl_mul(A: ThetaOperator, B: ThetaOperator) -> ThetaOperator:
    return A * B


# ---------------------------------------------------------------------------
# graded polynomials in (tbar, thetabar)


class GradedPoly:
    """Bivariate polynomial: dict (i, d) -> coefficient of tbar^i thetabar^d."""

    __slots__ = ("terms",)

    def __init__(self, terms=None):
        self.terms = {k: Fraction(v) for k, v in (terms or {}).items() if v != 0}

    def __eq__(self, other):
        return isinstance(other, GradedPoly) and self.terms == other.terms

    def __mul__(self, other):
        out: Dict[Tuple[int, int], Fraction] = {}
        for (i, d), c in self.terms.items():
            for (j, e), f in other.terms.items():
                out[(i + j, d + e)] = out.get((i + j, d + e), 0) + c * f
        return GradedPoly(out)

    def degree(self) -> int:
        return max((i + d for i, d in self.terms), default=-1)

    def is_homogeneous(self) -> bool:
        return len({i + d for i, d in self.terms}) <= 1

    def evaluate(self, tbar, thetabar):
        return sum(c * tbar ** i * thetabar ** d for (i, d), c in self.terms.items())

    def pretty(self) -> str:
        parts = []
        for (i, d) in sorted(self.terms, key=lambda k: (-k[1], k[0])):
            bits = []
            if d:
                bits.append("θ̄" if d == 1 else "θ̄^%d" % d)
            if i:
                bits.append("t̄" if i == 1 else "t̄^%d" % i)
            parts.append((self.terms[(i, d)], "·".join(bits)))
        return _join_terms(parts)

    def __repr__(self):
        return "GradedPoly(%s)" % self.pretty()


def graded_leading(L: ThetaOperator) -> GradedPoly:
    top = max((i + len(p) - 1 for i, p in L.terms.items()), default=-1)
    return GradedPoly({(i, d): p[d] for i, p in L.terms.items()
                       for d in range(len(p)) if i + d == top and p[d] != 0})


def leading_closed_form(n: int) -> GradedPoly:
    """Product formula for the graded image of L_{n+1}."""
    m = n + 1
    out = GradedPoly({(0, 0): 1})
    if m % 2:
        out = out * GradedPoly({(0, 1): 1})
        odd = False
    else:
        odd = True
    for i in range(1, m // 2 + 1):
        c = (2 * i - 1) if odd else 2 * i
        out = out * GradedPoly({(0, 2): 1, (2, 0): -c * c})
    return out


# ---------------------------------------------------------------------------
# symmetric powers and friends


@lru_cache(maxsize=None)
def sym_power_bessel(n: int) -> WeylOperator:
    """L_{n+1} via L_{k+1} = theta L_k - t^2 k (n+1-k) L_{k-1}."""
    if n < 0:
        raise DomainError("n must be non-negative")
    prev = WeylOperator.const(1)
    cur = WeylOperator.theta()
    theta = WeylOperator.theta()
    for k in range(1, n + 1):
        nxt = theta * cur - WeylOperator.monomial(2, k * (n + 1 - k)) * prev
        prev, cur = cur, nxt
    return cur


@lru_cache(maxsize=None)
def _lambda_table(m: int, upto: int):
    tab = [(Fraction(1),), (Fraction(0), Fraction(1))]
    x = (Fraction(0), Fraction(1))
    for k in range(1, upto):
        tab.append(p_add(p_mul(x, tab[k]), p_scale(tab[k - 1], -k * (m + 1 - k))))
    return tuple(tab)


def lambda_poly(i: int, m: int) -> tuple:
    """lambda_{i,m}(x) as a coefficient tuple in x."""
    if i < 0 or m < 0:
        raise DomainError("need i >= 0 and m >= 0")
    return _lambda_table(m, max(i, 1))[i]


def lambda_closed_form(m: int) -> tuple:
    """Product formula for lambda_{m+1,m}."""
    q = m + 1
    if q % 2 == 0:
        return p_from_roots([s * (2 * i - 1) for i in range(1, q // 2 + 1) for s in (1, -1)])
    return p_from_roots([0] + [s * 2 * i for i in range(1, q // 2 + 1) for s in (1, -1)])


def support_exponents(L: ThetaOperator) -> Tuple[int, int]:
    if not L:
        raise ZeroOperator("zero operator has no support")
    return max(L.terms), min(L.terms)


def twist_half(L: ThetaOperator) -> ThetaOperator:
    return L.map_polys(lambda i, p: p_shift(p, Fraction(1, 2)))


def content(L: ThetaOperator) -> Fraction:
    """Positive rational c with L/c integral and primitive."""
    coeffs = [c for p in L.terms.values() for c in p if c != 0]
    if not coeffs:
        raise ZeroOperator("zero operator")
    num = 0
    den = 1
    for c in coeffs:
        num = math.gcd(num, c.numerator)
        den = den * c.denominator // math.gcd(den, c.denominator)
    return Fraction(num, den)


def change_var_deg2(L: WeylOperator):
    """Rewrite in z = t^2/4: theta_t -> 2 theta_z, t^2 -> 4z.

    Returns ``(M, scalar)`` with ``M`` primitive and L = scalar * M.
    """
    out = {}
    for i, p in L.terms.items():
        if i % 2:
            raise OddExponent("odd t-exponent %d" % i)
        out[i // 2] = p_scale(p_affine(p, 2, 0), Fraction(4) ** (i // 2))
    M = WeylOperator(out)
    c = content(M)
    return M.scale(1 / c), c


def dim_h1(k: int) -> int:
    if k < 1:
        raise DomainError("k must be positive")
    M, _ = change_var_deg2(sym_power_bessel(k))
    a, b = support_exponents(twist_half(M))
    expected = (k + 1) // 2
    assert a - b == expected, "support length %d differs from %d" % (a - b, expected)
    return a - b


def adjoint_signed(L: WeylOperator) -> WeylOperator:
    """(-1)^order times the formal adjoint.

    The adjoint reverses products and sends theta to -(theta+1); moving t^i back
    to the left turns P_i(theta) into P_i(-(theta+1+i)).
    """
    sign = (-1) ** L.order()
    return L.map_polys(lambda i, p: p_scale(p_affine(p, -1, -1 - i), sign))


def vanhove(n: int) -> XThetaOperator:
    """Two-scale operator: t^(2m) P(theta) acting on F(xt) becomes P(theta_x)(x^-2 theta_x^2)^m."""
    lam = adjoint_signed(sym_power_bessel(n))
    base = XThetaOperator({-2: (0, 0, 1)})
    out = XThetaOperator()
    power = XThetaOperator.const(1)
    for m in range(0, max(lam.terms) // 2 + 1):
        p = lam.terms.get(2 * m)
        if p:
            out = out + XThetaOperator({0: p}) * power
        power = power * base
    return out


# Laurent polynomials in x: dict exponent -> Fraction


def l_norm(d):
    return {e: Fraction(c) for e, c in d.items() if c != 0}


def l_add(a, b):
    out = dict(a)
    for e, c in b.items():
        out[e] = out.get(e, 0) + c
    return l_norm(out)


def l_mul(a, b):
    out = {}
    for e, c in a.items():
        for f, d in b.items():
            out[e + f] = out.get(e + f, 0) + c * d
    return l_norm(out)


def l_scale(a, c):
    return l_norm({e: v * c for e, v in a.items()})


def l_deriv(a):
    return l_norm({e - 1: e * c for e, c in a.items()})


def lambda_x(n: int):
    """lambda_{n+1}(x): the graded image with thetabar = 1, tbar = 1/x."""
    g = leading_closed_form(n)
    out = {}
    for (i, d), c in g.terms.items():
        out[-i] = out.get(-i, 0) + c
    return l_norm(out)


def vanhove_leading_terms(n: int):
    """(theta^(n+1) coefficient, theta^n coefficient) of V_{n+1} as Laurent polys."""
    V = vanhove(n)
    return l_norm(V.coeff_of_theta(n + 1)), l_norm(V.coeff_of_theta(n))


def stirling2(m: int, j: int) -> int:
    return _stirling2(m, j)


@lru_cache(maxsize=None)
def _stirling2(m, j):
    if m == j:
        return 1
    if j == 0 or j > m:
        return 0
    return j * _stirling2(m - 1, j) + _stirling2(m - 1, j - 1)


def to_d_form(V: ThetaOperator):
    """Rewrite sum x^i Q_i(theta) as sum_j c_j(x) d^j; returns dict j -> Laurent poly."""
    out: Dict[int, dict] = {}
    for i, p in V.terms.items():
        for m, c in enumerate(p):
            if c == 0:
                continue
            for j in range(m + 1):
                s = stirling2(m, j)
                if s:
                    out[j] = l_add(out.get(j, {}), {i + j: c * s})
    return {j: v for j, v in out.items() if v}


class WronskianClosedForm:
    """C * [sign * x^(n+2) lambda_{n+1}(x)]^(-(n+1)/2)."""

    def __init__(self, n: int):
        self.n = n
        self.lam = lambda_x(n)
        self.sign = (-1) ** ((n + 1) // 2)
        self.exponent = Fraction(-(n + 1), 2)
        self.q = l_mul({n + 2: Fraction(1)}, self.lam)

    def satisfies_ode(self) -> bool:
        """Log-derivative check: x q' lam == q ((n+2) lam + x lam')."""
        n = self.n
        lhs = l_mul(l_mul({1: 1}, l_deriv(self.q)), self.lam)
        rhs = l_mul(self.q, l_add(l_scale(self.lam, n + 2), l_mul({1: 1}, l_deriv(self.lam))))
        return lhs == rhs

    def base(self, x):
        x = mpf(x)
        return self.sign * sum(c.numerator * x ** e / c.denominator for e, c in self.q.items())

    def evaluate(self, x, C):
        return C * self.base(x) ** (mpf(self.exponent.numerator) / self.exponent.denominator)


def wronskian_closed_form(n: int) -> WronskianClosedForm:
    if n < 0:
        raise DomainError("n must be non-negative")
    return WronskianClosedForm(n)


# ---------------------------------------------------------------------------
# numeric application to products of Bessel functions
#
# monomial key (e, p, q, r, s): t^e I0^p (t I0')^q K0^r (t K0')^s
# theta I0 = t I0', theta (t I0') = t^2 I0, and likewise for K0.


def _theta_expr(expr):
    out = {}

    def add(key, c):
        out[key] = out.get(key, 0) + c

    for (e, p, q, r, s), c in expr.items():
        if e:
            add((e, p, q, r, s), c * e)
        if p:
            add((e, p - 1, q + 1, r, s), c * p)
        if q:
            add((e + 2, p + 1, q - 1, r, s), c * q)
        if r:
            add((e, p, q, r - 1, s + 1), c * r)
        if s:
            add((e + 2, p, q, r + 1, s - 1), c * s)
    return {k: v for k, v in out.items() if v}


def apply_symbolic(L: WeylOperator, a: int, b: int):
    """L applied to I0^a K0^b as an exact combination of closure monomials."""
    powers = [{(0, a, 0, b, 0): Fraction(1)}]
    for _ in range(L.order()):
        powers.append(_theta_expr(powers[-1]))
    out = {}
    for i, p in L.terms.items():
        for d, c in enumerate(p):
            if c == 0:
                continue
            for (e, pp, q, r, s), v in powers[d].items():
                key = (e + i, pp, q, r, s)
                out[key] = out.get(key, 0) + c * v
    return {k: v for k, v in out.items() if v}


def apply_numeric(L: WeylOperator, a: int, b: int, t0, ctx: PrecisionCtx = DEFAULT_CTX):
    from .bessel import bessel_all, default_plan

    expr = apply_symbolic(L, a, b)
    with mp.workprec(ctx.work_bits + 30):
        t0 = mpf(t0)
        i0, i0p, k0, k0p = bessel_all(t0, default_plan(ctx))
        J = t0 * i0p
        M = t0 * k0p
        total = mpf(0)
        for (e, p, q, r, s), c in expr.items():
            total += mpf(c.numerator) / c.denominator * t0 ** e * i0 ** p * J ** q * k0 ** r * M ** s
        return +total
