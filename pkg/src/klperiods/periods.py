"""Complex period matrices built from Bessel moments, the moment matrices
M_r, N_r and their determinant formulas, and Wronskian evaluations."""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import List, Optional, Sequence, Tuple

import mpmath
from mpmath import mp, mpc, mpf

from .combinatorics import binomial, double_factorial, gamma_coeff
from .errors import DomainError
from .highprec import DEFAULT_CTX, PrecisionCtx, fmp, mat_det
from .moments import MomentEngine, MomentSpec, default_engine
from .pairings import Basis, kprime

I_POW = (mpc(1, 0), mpc(0, 1), mpc(-1, 0), mpc(0, -1))


@dataclass(frozen=True)
class EntryProvenance:
    """value = prefactor * pi^pi_power * i^i_power * sum(c * moment)."""

    prefactor: Fraction
    pi_power: int
    i_power: int
    terms: Tuple[Tuple[Fraction, MomentSpec], ...]

    def evaluate(self, engine: MomentEngine):
        with mp.workprec(engine.ctx.work_bits + 10):
            s = mpmath.fsum(fmp(c) * engine.ikm(spec) for c, spec in self.terms) if self.terms else mpf(1)
            return fmp(self.prefactor) * mpmath.pi ** self.pi_power * I_POW[self.i_power % 4] * s

    def to_json(self):
        return {"prefactor": "%d/%d" % (self.prefactor.numerator, self.prefactor.denominator),
                "pi_power": self.pi_power, "i_power": self.i_power % 4,
                "terms": [{"coeff": "%d/%d" % (c.numerator, c.denominator), "moment": s.label()}
                          for c, s in self.terms]}


@dataclass
class PeriodMatrix:
    k: int
    name: str
    values: List[List]
    provenance: List[List[EntryProvenance]]
    row_labels: Sequence[str] = ()
    col_labels: Sequence[str] = ()

    @property
    def shape(self):
        return (len(self.values), len(self.values[0]) if self.values else 0)

    def det(self):
        return mat_det(self.values)

    def to_json(self, digits: int = 30):
        return {"k": self.k, "name": self.name, "rows": list(self.row_labels), "cols": list(self.col_labels),
                "entries": [[{"re": mpmath.nstr(v.real, digits), "im": mpmath.nstr(v.imag, digits),
                              "provenance": p.to_json()} for v, p in zip(vr, pr)]
                            for vr, pr in zip(self.values, self.provenance)]}


def _assemble(k, name, prov, engine, row_labels=(), col_labels=()):
    values = [[p.evaluate(engine) for p in row] for row in prov]
    return PeriodMatrix(k, name, values, prov, tuple(row_labels), tuple(col_labels))


def _engine(ctx: PrecisionCtx, engine: Optional[MomentEngine]) -> MomentEngine:
    return engine if engine is not None else default_engine(ctx)


def period_P_provenance(k: int):
    kp = kprime(k)
    rows = []
    for b in range(kp + 1):
        rows.append([EntryProvenance(Fraction((-1) ** (k - b)) * Fraction(2) ** (k - 2 * j), b, b,
                                     ((Fraction(1), MomentSpec(k, b, 2 * j)),))
                     for j in range(kp + 1)])
    return rows


def period_P(k: int, ctx: PrecisionCtx = DEFAULT_CTX, engine: MomentEngine = None) -> PeriodMatrix:
    basis = Basis(k)
    return _assemble(k, "P", period_P_provenance(k), _engine(ctx, engine),
                     basis.delta_labels(), basis.col_labels_dr())


def _pc_terms(k: int, j: int, a: int):
    """Moment combination paired with omega~_j and gamma_a."""
    half = 2 * a == k
    if k % 4 == 0:
        r = (k - 4) // 4
        if half and j >= r + 1:
            return ((Fraction(1), MomentSpec(k, a, 2 * j, True)),)
        return ((Fraction(1), MomentSpec(k, a, 2 * j)),)
    if k % 4 == 2:
        r = (k - 2) // 4
        if j >= r + 1:
            g = -gamma_coeff(k, j - r) * Fraction(2) ** (2 * j - 2 * r)
            return ((Fraction(1), MomentSpec(k, a, 2 * j, half)), (g, MomentSpec(k, a, 2 * r, half)))
    return ((Fraction(1), MomentSpec(k, a, 2 * j)),)


def period_Pc_provenance(k: int):
    basis = Basis(k)
    rows = []
    for j in range(basis.size):
        row = []
        for a in basis.a_range:
            if j == basis.mhat_index:
                c = Fraction(2 ** k, binomial(k, k // 2)) if a == k // 2 else Fraction(0)
                row.append(EntryProvenance(c, a, a, ()))
            else:
                row.append(EntryProvenance(Fraction((-1) ** (k - a)) * Fraction(2) ** (k - 2 * j), a, a,
                                           _pc_terms(k, j, a)))
        rows.append(row)
    return rows


def period_Pc(k: int, ctx: PrecisionCtx = DEFAULT_CTX, engine: MomentEngine = None) -> PeriodMatrix:
    basis = Basis(k)
    return _assemble(k, "Pc", period_Pc_provenance(k), _engine(ctx, engine),
                     basis.row_labels(), basis.gamma_labels())


def period_Pmid(k: int, ctx: PrecisionCtx = DEFAULT_CTX, engine: MomentEngine = None) -> PeriodMatrix:
    """Rows delta_1..delta_k'; columns are the mid classes omega_i - gamma_{k,i-r} omega_r, i != r."""
    if k % 4 != 2:
        raise DomainError("the middle-part period matrix is defined here for k = 2 mod 4")
    kp, r = kprime(k), (k - 2) // 4
    cols = [i for i in range(kp + 1) if i != r]
    prov = []
    for b in range(1, kp + 1):
        pre = Fraction((-1) ** (k - b))
        row = []
        for i in cols:
            terms = [(Fraction(1), MomentSpec(k, b, 2 * i))]
            if i > r:
                terms.append((-gamma_coeff(k, i - r) * Fraction(2) ** (2 * i - 2 * r), MomentSpec(k, b, 2 * r)))
            row.append(EntryProvenance(pre * Fraction(2) ** (k - 2 * i), b, b, tuple(terms)))
        prov.append(row)
    return _assemble(k, "Pmid", prov, _engine(ctx, engine),
                     ["delta_%d" % b for b in range(1, kp + 1)], ["omega_%d" % i for i in cols])


def det_Pmid_closed(k: int):
    if k % 4 != 2:
        raise DomainError("needs k = 2 mod 4")
    kp, r = kprime(k), (k - 2) // 4
    q = Fraction(2 ** (r * (2 * r + 1)), _fact(r))
    for a in range(1, kp + 1):
        q *= Fraction(2 * a + 1) ** (kp + 1 - a) / Fraction(a + 1) ** (a + 1)
    return fmp(q) * mpmath.pi ** (r * (k + 1)) * I_POW[(r * (kp - 1)) % 4]


def _fact(n: int) -> int:
    out = 1
    for j in range(2, n + 1):
        out *= j
    return out


def det_P_closed(k: int, ctx: PrecisionCtx = DEFAULT_CTX):
    """Closed form of det P through det M or det N."""
    kp = kprime(k)
    n = kp + 1
    inner = det_M_closed(n) if k % 2 else det_N_closed(n)
    ip = kp * (kp + 1) // 2
    # (2k - k')(k'+1) is always even
    sign = (-1) ** ((2 * k - kp) * (kp + 1) // 2)
    return mpmath.pi ** ip * I_POW[ip % 4] * sign * mpf(2) ** ((k - kp) * (kp + 1)) * inner


# ---------------------------------------------------------------------------
# M_r, N_r


def mn_matrices(r: int, ctx: PrecisionCtx = DEFAULT_CTX, engine: MomentEngine = None):
    if r < 1:
        raise DomainError("r must be positive")
    eng = _engine(ctx, engine)
    M = [[eng.value(2 * r - 1, i, 2 * j) for j in range(r)] for i in range(r)]
    N = [[eng.value(2 * r, i, 2 * j) for j in range(r)] for i in range(r)]
    return M, N


def det_M_closed(r: int):
    if r == 0:
        return mpf(1)
    out = mpmath.sqrt(mpmath.pi) ** (r * (r + 1)) * mpmath.sqrt(2) ** (r * (r - 3))
    for a in range(1, r):
        out *= mpf(a) ** (r - a) / mpmath.sqrt(2 * a + 1) ** (2 * a + 1)
    return out


def det_N_closed(r: int):
    if r == 0:
        return mpf(1)
    out = mpmath.sqrt(mpmath.pi) ** ((r + 1) ** 2) / mpmath.sqrt(2) ** (r * (r + 3))
    out /= mpmath.gamma(mpf(r + 1) / 2)
    for a in range(1, r):
        out *= mpf(2 * a + 1) ** (r - a) / mpf(a + 1) ** (a + 1)
    return out


def _rel(x, y):
    return abs(x - y) / max(abs(y), mpf(2) ** (-mp.prec))


def mn_determinant_checks(r: int, ctx: PrecisionCtx = DEFAULT_CTX, engine: MomentEngine = None):
    """Relative deviations of det M_r and det N_r from their closed forms."""
    M, N = mn_matrices(r, ctx, engine)
    return _rel(mat_det(M), det_M_closed(r)), _rel(mat_det(N), det_N_closed(r))


def recursion_sides(r: int, which: int, ctx: PrecisionCtx = DEFAULT_CTX, engine: MomentEngine = None):
    """(lhs, rhs) of the first (which=1, r >= 1) or second (which=2, r >= 2) recursion."""
    eng = _engine(ctx, engine)

    def dM(s):
        return mat_det(mn_matrices(s, ctx, eng)[0]) if s else mpf(1)

    def dN(s):
        return mat_det(mn_matrices(s, ctx, eng)[1]) if s else mpf(1)

    if which == 1:
        if r < 1:
            raise DomainError("first recursion needs r >= 1")
        lhs = dM(r) * dM(r + 1)
        base = mpf(2) ** r * _fact(r) * mpmath.sqrt(2 * r + 1) / double_factorial(2 * r + 1)
        rhs = base ** (2 * r + 1) * mpmath.gamma(mpf(r + 1) / 2) ** 2 * dN(r) ** 2 / 2
        return lhs, rhs
    if which == 2:
        if r < 2:
            raise DomainError("second recursion needs r >= 2")
        lhs = dN(r - 1) * dN(r)
        base = double_factorial(2 * r - 1) * mpmath.sqrt(2 * r) / (mpf(2) ** r * _fact(r))
        rhs = mpf(2) ** r / _fact(r - 1) * base ** (2 * r) * dM(r) ** 2
        return lhs, rhs
    raise DomainError("which must be 1 or 2")


def mn_recursion_check(r: int, ctx: PrecisionCtx = DEFAULT_CTX, engine: MomentEngine = None, tol=None):
    tol = mpf(tol) if tol is not None else mpf(10) ** -28
    out = {}
    for which in (1, 2):
        if which == 2 and r < 2:
            continue
        lhs, rhs = recursion_sides(r, which, ctx, engine)
        out[which] = _rel(lhs, rhs)
    return all(v <= tol for v in out.values()), out


# ---------------------------------------------------------------------------
# Wronskians


def omega_odd_closed(r: int, x, ctx: PrecisionCtx = DEFAULT_CTX):
    x = mpf(x)
    prod = 1 / x ** 2
    for i in range(1, r + 1):
        prod *= mpf(2 * i) ** 2 / ((2 * i) ** 2 - x ** 2)
    sign = (-1) ** (r * (r + 1) // 2)
    return sign * prod ** (mpf(2 * r + 1) / 2) * mpmath.gamma(mpf(r + 1) / 2) ** 2 * det_N_closed(r) ** 2 / 2


def omega_even_closed(r: int, x):
    x = mpf(x)
    prod = 1 / x
    for i in range(1, r + 1):
        prod *= mpf(2 * i - 1) ** 2 / ((2 * i - 1) ** 2 - x ** 2)
    return (-1) ** (r * (r + 1) // 2) * prod ** r * det_M_closed(r) ** 2


def wronskian_eval_checks(r: int, ctx: PrecisionCtx = DEFAULT_CTX, engine: MomentEngine = None,
                          x_mid="0.5", x_edge=None):
    """Return a dict of name -> (numeric, reference, relative deviation)."""
    if r not in (1, 2):
        raise DomainError("Wronskian checks are provided for r in {1, 2}")
    eng = _engine(ctx, engine)
    out = {}
    w1 = mat_det(eng.omega_matrix(2 * r + 1, 1))
    ref1 = (-1) ** (r * (r + 1) // 2) * mat_det(mn_matrices(r, ctx, eng)[0]) * mat_det(mn_matrices(r + 1, ctx, eng)[0])
    out["omega_%d(1)" % (2 * r + 1)] = (w1, ref1, _rel(w1, ref1))
    x = mpf(x_mid)
    w2 = mat_det(eng.omega_matrix(2 * r + 1, x))
    ref2 = omega_odd_closed(r, x, ctx)
    out["omega_%d(%s)" % (2 * r + 1, x_mid)] = (w2, ref2, _rel(w2, ref2))
    if r == 2:
        xe = mpf(x_edge) if x_edge is not None else 1 - mpf(10) ** -3
        w3 = mpf(2) ** r * (1 - xe) ** r * mat_det(eng.omega_matrix(2 * r, xe))
        dn = [mat_det(mn_matrices(s, ctx, eng)[1]) if s else mpf(1) for s in (r - 1, r)]
        ref3 = (-1) ** (r * (r + 1) // 2) * _fact(r - 1) * dn[0] * dn[1]
        out["limit omega_%d" % (2 * r)] = (w3, ref3, _rel(w3, ref3))
    return out
