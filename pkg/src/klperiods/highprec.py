"""Arithmetic substrate: precision contexts, tanh-sinh quadrature and exact
rational matrices.

Real and complex scalars are ``mpmath.mpf`` / ``mpmath.mpc``; exact scalars are
``fractions.Fraction``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Callable, NamedTuple, Sequence

import mpmath
from mpmath import mp, mpf

from .errors import DomainError, NonConvergent, ShapeMismatch, Singular

LOG2_10 = math.log2(10)


@dataclass(frozen=True)
class PrecisionCtx:
    """Working precision in bits plus the requested absolute error."""

    work_bits: int = 256
    target_abs_err: mpf = mpf(10) ** -50

    def __post_init__(self):
        if self.work_bits < 64:
            raise DomainError("work_bits must be at least 64")
        tgt = mpf(self.target_abs_err)
        object.__setattr__(self, "target_abs_err", tgt)
        if not tgt > mpf(2) ** (-self.work_bits + 16):
            raise DomainError("target_abs_err leaves no guard digits at this precision")

    @classmethod
    def from_digits(cls, digits: int) -> "PrecisionCtx":
        bits = max(256, int(math.ceil((digits + 27) * LOG2_10)))
        return cls(bits, mpf(10) ** -digits)

    @property
    def target_digits(self) -> int:
        return int(-mpmath.floor(mpmath.log10(self.target_abs_err)))

    def doubled(self) -> "PrecisionCtx":
        return PrecisionCtx(2 * self.work_bits, self.target_abs_err ** 2)

    def workprec(self):
        return mp.workprec(self.work_bits)


DEFAULT_CTX = PrecisionCtx()


# ---------------------------------------------------------------------------
# tanh-sinh quadrature


@lru_cache(maxsize=32)
def unit_nodes(prec: int, max_level: int):
    """Half-line tanh-sinh abscissae for the interval [0, 1].

    Returns ``(centre_weight, nodes)`` where each node is
    ``(delta, weight, level)``: ``delta`` is the distance to the nearest
    endpoint, ``weight`` the Jacobian (without step h) for the unit interval,
    and ``level`` the first refinement level containing it.  Each node stands for
    the symmetric pair ``delta`` and ``1 - delta``.
    """
    with mp.workprec(prec + 20):
        pi2 = mpmath.pi / 2
        tiny = mpf(2) ** (-prec - 40)
        nodes = []
        step = mpf(2) ** -max_level
        j = 1
        while True:
            u = j * step
            v = pi2 * mpmath.sinh(u)
            e = mpmath.exp(-2 * v)
            delta = e / (1 + e)
            # unit interval has half-length 1/2
            w = pi2 * mpmath.cosh(u) * 4 * e / (1 + e) ** 2 / 2
            if w < tiny:
                break
            lev = max_level
            jj = j
            while jj % 2 == 0 and lev > 0:
                jj //= 2
                lev -= 1
            nodes.append((delta, w, lev))
            j += 1
        centre_w = pi2 / 2
    return centre_w, tuple(nodes)


def _level_sums(vals_c, vals, levels, max_level):
    """Partial sums per level from node contributions."""
    out = []
    for lev in range(max_level + 1):
        s = vals_c
        for v, l in zip(vals, levels):
            if l <= lev:
                s += v
        out.append(s * mpf(2) ** -lev)
    return out


def error_estimate(q_fine, q_mid, q_coarse, floor):
    """Error estimate from three successive tanh-sinh levels.

    Uses the quadratic-convergence heuristic: if the last two differences are
    ``e1`` and ``e2`` (relative), the next one is about ``e1**(log e1/log e2)``.
    """
    scale = max(abs(q_fine), mpf(2) ** (-mp.prec))
    e1 = abs(q_fine - q_mid)
    e2 = abs(q_mid - q_coarse)
    if e1 == 0:
        return floor
    if e2 == 0 or e1 >= e2:
        return e1 + floor
    d1 = mpmath.log10(e1 / scale)
    d2 = mpmath.log10(e2 / scale)
    if d1 >= 0 or d2 >= 0:
        return e1 + floor
    est = max(d1 * d1 / d2, 2 * d1)
    return scale * mpf(10) ** est + floor


class QuadResult(NamedTuple):
    value: mpf
    err_est: mpf


def de_quadrature(f: Callable, a, b, ctx: PrecisionCtx = DEFAULT_CTX, max_level: int = 10) -> QuadResult:
    """Integrate ``f`` over [a, b] with the tanh-sinh rule.

    Levels are refined until the error estimate drops below
    ``ctx.target_abs_err``. If the top level is reached first the estimate is
    returned as is (callers can compare it with the target). Raises
    NonConvergent when the level differences stop contracting.
    """
    with mp.workprec(ctx.work_bits + 20):
        a = mpf(a)
        b = mpf(b)
        if not a < b:
            raise DomainError("de_quadrature needs a < b")
        length = b - a
        mid = (a + b) / 2
        fc = f(mid)
        eps = mpf(2) ** (-ctx.work_bits)
        sums = []
        prev_level = 0
        contributions = mpf(0)
        absmass = abs(fc)
        for level in range(0, max_level + 1):
            centre_w, nodes = unit_nodes(ctx.work_bits, level)
            # only nodes new at this level
            for delta, w, lev in nodes:
                if lev != level:
                    continue
                d = length * delta
                fl = f(a + d)
                fr = f(b - d)
                contributions += w * (fl + fr)
                absmass += w * (abs(fl) + abs(fr))
            h = mpf(2) ** -level
            q = (centre_w * fc + contributions) * h * length
            sums.append(q)
            prev_level = level
            if level >= 3:
                floor = eps * absmass * h * length
                err = error_estimate(sums[-1], sums[-2], sums[-3], floor)
                if err <= ctx.target_abs_err:
                    return QuadResult(+q, err)
        e1 = abs(sums[-1] - sums[-2])
        e2 = abs(sums[-2] - sums[-3])
        if e1 > e2 and e1 > ctx.target_abs_err:
            raise NonConvergent("tanh-sinh levels do not contract (level %d)" % prev_level)
        floor = eps * absmass
        return QuadResult(+sums[-1], error_estimate(sums[-1], sums[-2], sums[-3], floor))


# ---------------------------------------------------------------------------
# exact rational matrices


def _frac(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x)
    raise TypeError("exact entries must be int, Fraction or 'p/q' strings, got %r" % (x,))


class RationalMatrix:
    """Immutable dense matrix over the rationals."""

    __slots__ = ("_rows", "_shape")

    def __init__(self, rows: Sequence[Sequence], shape=None):
        rr = tuple(tuple(_frac(x) for x in row) for row in rows)
        if shape is None:
            ncols = len(rr[0]) if rr else 0
            shape = (len(rr), ncols)
        if len(rr) != shape[0] or any(len(r) != shape[1] for r in rr):
            raise ShapeMismatch("ragged rows or wrong shape")
        self._rows = rr
        self._shape = tuple(shape)

    @classmethod
    def identity(cls, n: int) -> "RationalMatrix":
        return cls([[1 if i == j else 0 for j in range(n)] for i in range(n)], (n, n))

    @classmethod
    def zeros(cls, m: int, n: int) -> "RationalMatrix":
        return cls([[0] * n for _ in range(m)], (m, n))

    @property
    def shape(self):
        return self._shape

    @property
    def rows(self):
        return self._rows

    def __getitem__(self, ij):
        i, j = ij
        return self._rows[i][j]

    def __eq__(self, other):
        if not isinstance(other, RationalMatrix):
            return NotImplemented
        return self._shape == other._shape and self._rows == other._rows

    def __hash__(self):
        return hash((self._shape, self._rows))

    def __repr__(self):
        return "RationalMatrix(%s)" % [[str(x) for x in r] for r in self._rows]

    def transpose(self) -> "RationalMatrix":
        m, n = self._shape
        return RationalMatrix([[self._rows[i][j] for i in range(m)] for j in range(n)], (n, m))

    T = property(transpose)

    def __add__(self, other):
        if self._shape != other._shape:
            raise ShapeMismatch("addition of %s and %s" % (self._shape, other._shape))
        return RationalMatrix([[x + y for x, y in zip(r, s)] for r, s in zip(self._rows, other._rows)], self._shape)

    def __sub__(self, other):
        if self._shape != other._shape:
            raise ShapeMismatch("subtraction of %s and %s" % (self._shape, other._shape))
        return RationalMatrix([[x - y for x, y in zip(r, s)] for r, s in zip(self._rows, other._rows)], self._shape)

    def scale(self, c) -> "RationalMatrix":
        c = _frac(c)
        return RationalMatrix([[c * x for x in r] for r in self._rows], self._shape)

    def __matmul__(self, other):
        m, n = self._shape
        n2, p = other._shape
        if n != n2:
            raise ShapeMismatch("cannot multiply %s by %s" % (self._shape, other._shape))
        cols = list(zip(*other._rows)) if p else []
        rows = [[sum((x * y for x, y in zip(r, c)), Fraction(0)) for c in cols] for r in self._rows]
        return RationalMatrix(rows if m else [], (m, p))

    def delete(self, row=None, col=None) -> "RationalMatrix":
        m, n = self._shape
        rows = [r for i, r in enumerate(self._rows) if i != row]
        rows = [[x for j, x in enumerate(r) if j != col] for r in rows]
        return RationalMatrix(rows, (m - (row is not None), n - (col is not None)))

    def det(self) -> Fraction:
        """Determinant by fraction-free Bareiss elimination."""
        m, n = self._shape
        if m != n:
            raise ShapeMismatch("determinant of a non-square matrix")
        if n == 0:
            return Fraction(1)
        # clear denominators row by row so Bareiss runs over the integers
        scale = Fraction(1)
        a = []
        for r in self._rows:
            den = 1
            for x in r:
                den = den * x.denominator // math.gcd(den, x.denominator)
            a.append([int(x * den) for x in r])
            scale *= den
        sign = 1
        prev = 1
        for k in range(n - 1):
            if a[k][k] == 0:
                for i in range(k + 1, n):
                    if a[i][k] != 0:
                        a[k], a[i] = a[i], a[k]
                        sign = -sign
                        break
                else:
                    return Fraction(0)
            akk = a[k][k]
            for i in range(k + 1, n):
                aik = a[i][k]
                row_i = a[i]
                row_k = a[k]
                for j in range(k + 1, n):
                    row_i[j] = (row_i[j] * akk - aik * row_k[j]) // prev
            prev = akk
        return Fraction(sign * a[n - 1][n - 1]) / scale

    def rank(self) -> int:
        m, n = self._shape
        a = [list(r) for r in self._rows]
        rank = 0
        for c in range(n):
            piv = next((i for i in range(rank, m) if a[i][c] != 0), None)
            if piv is None:
                continue
            a[rank], a[piv] = a[piv], a[rank]
            for i in range(m):
                if i != rank and a[i][c] != 0:
                    f = a[i][c] / a[rank][c]
                    a[i] = [x - f * y for x, y in zip(a[i], a[rank])]
            rank += 1
        return rank

    def to_json(self):
        return [[_frac_str(x) for x in r] for r in self._rows]

    @classmethod
    def from_json(cls, data) -> "RationalMatrix":
        n = len(data[0]) if data else 0
        return cls([[Fraction(x) for x in r] for r in data], (len(data), n))

    def to_mp(self):
        return [[mpf(x.numerator) / x.denominator for x in r] for r in self._rows]


def _frac_str(x: Fraction) -> str:
    return "%d/%d" % (x.numerator, x.denominator)


def rat_mat_inverse(M: RationalMatrix) -> RationalMatrix:
    """Exact inverse by Gauss-Jordan elimination."""
    m, n = M.shape
    if m != n:
        raise ShapeMismatch("inverse of a non-square matrix")
    a = [list(r) + [Fraction(int(i == j)) for j in range(n)] for i, r in enumerate(M.rows)]
    for c in range(n):
        piv = next((i for i in range(c, n) if a[i][c] != 0), None)
        if piv is None:
            raise Singular("matrix is singular")
        a[c], a[piv] = a[piv], a[c]
        p = a[c][c]
        a[c] = [x / p for x in a[c]]
        for i in range(n):
            if i != c and a[i][c] != 0:
                f = a[i][c]
                a[i] = [x - f * y for x, y in zip(a[i], a[c])]
    return RationalMatrix([r[n:] for r in a], (n, n))


# ---------------------------------------------------------------------------
# numeric matrices (nested lists of mpf/mpc)


def shape_of(A) -> tuple:
    return (len(A), len(A[0]) if A else 0)


def complex_mat_mul(A, B):
    """Product of two grids of mpmath numbers."""
    m, n = shape_of(A)
    n2, p = shape_of(B)
    if n != n2 and not (m == 0 or n2 == 0):
        raise ShapeMismatch("cannot multiply %dx%d by %dx%d" % (m, n, n2, p))
    return [[mpmath.fsum(A[i][l] * B[l][j] for l in range(n)) for j in range(p)] for i in range(m)]


def mat_transpose(A):
    m, n = shape_of(A)
    return [[A[i][j] for i in range(m)] for j in range(n)]


def mat_det(A):
    """Determinant of a numeric square grid (LU with partial pivoting)."""
    n = len(A)
    if n == 0:
        return mpf(1)
    if any(len(r) != n for r in A):
        raise ShapeMismatch("determinant of a non-square grid")
    return mpmath.det(mpmath.matrix(A))


def max_abs(A):
    return max((abs(x) for r in A for x in r), default=mpf(0))


def mat_sub(A, B):
    if shape_of(A) != shape_of(B):
        raise ShapeMismatch("subtraction of %s and %s" % (shape_of(A), shape_of(B)))
    return [[x - y for x, y in zip(r, s)] for r, s in zip(A, B)]


def relative_residual(lhs, rhs):
    """Max-norm residual divided by max(1, max |entry|)."""
    diff = max_abs(mat_sub(lhs, rhs))
    scale = max(mpf(1), max_abs(lhs), max_abs(rhs))
    return diff / scale


def fmp(x):
    """Rational (or int) to mpf at the current precision."""
    if isinstance(x, Fraction):
        return mpf(x.numerator) / x.denominator
    return mpf(x)
