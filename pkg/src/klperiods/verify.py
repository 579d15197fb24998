"""Identity checks with structured reports."""
from __future__ import annotations

import hashlib
import json
import time
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Dict, List, Optional

import mpmath
from mpmath import mp, mpf

from . import pairings, periods, weyl
from .combinatorics import binomial, gamma_coeff, gamma_table
from .errors import DomainError, KlPeriodsError, NonConvergent, PrecisionTooLow
from .highprec import (DEFAULT_CTX, PrecisionCtx, complex_mat_mul, fmp, mat_transpose, rat_mat_inverse,
                       relative_residual)
from .moments import MomentEngine, MomentSpec, default_engine

TOL_IDENTITY = mpf(10) ** -30
TOL_MATRIX = mpf(10) ** -25
TOL_WRONSKIAN = mpf(10) ** -20
TOL_LIMIT = mpf(10) ** -2


@dataclass
class VerificationReport:
    id: str
    params: Dict
    residual: mpf
    tolerance: mpf
    seconds: float = 0.0
    precision_bits: int = 0
    note: str = ""
    digest: str = ""

    @property
    def status(self) -> str:
        return "pass" if self.residual <= self.tolerance else "fail"

    @property
    def passed(self) -> bool:
        return self.status == "pass"

    def to_json(self, digits: int = 10, timing: bool = True):
        out = {"id": self.id, "params": self.params, "residual": mpmath.nstr(self.residual, digits),
               "tolerance": mpmath.nstr(self.tolerance, 3), "status": self.status}
        if timing:
            out["seconds"] = round(self.seconds, 3)
        if self.note:
            out["note"] = self.note
        if self.digest:
            out["digest"] = self.digest
        return out


def _digest(obj) -> str:
    return hashlib.sha256(json.dumps(obj, sort_keys=True, default=str).encode()).hexdigest()[:16]


def _engine(ctx: PrecisionCtx, engine: Optional[MomentEngine]) -> MomentEngine:
    return engine if engine is not None else default_engine(ctx)


def _run(id_: str, params: Dict, tol, ctx: PrecisionCtx, body: Callable, note: str = "") -> VerificationReport:
    start = time.perf_counter()
    with mp.workprec(ctx.work_bits):
        residual = body()
    rep = VerificationReport(id_, params, mpf(residual), mpf(tol), time.perf_counter() - start,
                             ctx.work_bits, note)
    rep.digest = _digest([id_, params, str(ctx)])
    return rep


def _exact(id_: str, params: Dict, ok: bool, ctx: PrecisionCtx = DEFAULT_CTX, seconds: float = 0.0):
    rep = VerificationReport(id_, params, mpf(0) if ok else mpf(1), mpf(0), seconds, 0, "exact")
    rep.digest = _digest([id_, params])
    return rep


def _rel_sum(terms, rhs=0):
    """|sum(terms) - rhs| relative to the largest term."""
    scale = max([abs(t) for t in terms] + [abs(rhs), mpf(2) ** -mp.prec])
    return abs(mpmath.fsum(terms) - rhs) / scale


# ---------------------------------------------------------------------------
# sum rules


def sum_rule_valid_i(k: int) -> List[int]:
    kp = pairings.kprime(k)
    if k % 4 == 0:
        return list(range(kp + 1))
    if k % 4 == 2:
        r = (k - 2) // 4
        return [i for i in range(kp + 1) if i != r]
    raise DomainError("sum rules need even k")


def check_sum_rule_even(k: int, i: int, ctx: PrecisionCtx = DEFAULT_CTX, engine: MomentEngine = None,
                        tol=TOL_IDENTITY) -> VerificationReport:
    if i not in sum_rule_valid_i(k):
        raise DomainError("i=%d is outside the valid range for k=%d" % (i, k))
    eng = _engine(ctx, engine)
    kp = pairings.kprime(k)

    def lhs_terms(b):
        r_top = (k - 4) // 4 if k % 4 == 0 else (k - 2) // 4
        return [binomial(k // 2, 2 * j) * (-1) ** j * mpmath.pi ** (2 * j) * eng.value(k, 2 * j, b)
                for j in range(r_top + 1)]

    def body():
        if k % 4 == 0:
            r = (k - 4) // 4
            reg = i >= r + 1
            rhs = (-1) ** r * mpmath.pi ** (2 * r + 2) * eng.value(k, 2 * r + 2, 2 * i, regularized=reg)
            return _rel_sum(lhs_terms(2 * i), rhs)
        r = (k - 2) // 4
        terms = lhs_terms(2 * i)
        if i < r:
            return _rel_sum(terms)
        g = fmp(gamma_coeff(k, i - r) * Fraction(2) ** (2 * i - 2 * r))
        return _rel_sum(terms + [-g * t for t in lhs_terms(2 * r)])

    return _run("sum_rule_even", {"k": k, "i": i}, tol, ctx, body)


def check_sum_rule_intro(n: int, kk: int, variant: int, ctx: PrecisionCtx = DEFAULT_CTX,
                         engine: MomentEngine = None, tol=TOL_IDENTITY) -> VerificationReport:
    eng = _engine(ctx, engine)
    k = 2 * n
    if variant == 1:
        if not n >= 2 * kk >= 2:
            raise DomainError("variant 1 needs n >= 2kk >= 2")

        def body():
            terms = [(-1) ** m * binomial(n, 2 * m) * mpmath.pi ** (n - 2 * m) * eng.value(k, n - 2 * m, n - 2 * kk)
                     for m in range(n // 2 + 1)]
            return _rel_sum(terms)
    elif variant == 2:
        if not n - 1 >= 2 * kk >= 2:
            raise DomainError("variant 2 needs n-1 >= 2kk >= 2")

        def body():
            terms = [(-1) ** m * binomial(n, 2 * m - 1) * mpmath.pi ** (n - 2 * m + 1)
                     * eng.value(k, n - 2 * m + 1, n - 2 * kk - 1) for m in range(1, (n + 1) // 2 + 1)]
            return _rel_sum(terms)
    else:
        raise DomainError("variant must be 1 or 2")
    return _run("sum_rule_intro", {"n": n, "kk": kk, "variant": variant}, tol, ctx, body)


def intro_instances(n_max: int):
    out = []
    for n in range(2, n_max + 1):
        for kk in range(1, n // 2 + 1):
            out.append((n, kk, 1))
        for kk in range(1, (n - 1) // 2 + 1):
            out.append((n, kk, 2))
    return out


# ---------------------------------------------------------------------------
# quadratic relations


def _scaled_betti(k: int, B):
    c = (-1) ** k * (2 * mpmath.pi * mpmath.mpc(0, 1)) ** (k + 1)
    return [[c * x for x in row] for row in B.to_mp()]


def check_quadratic(k: int, ctx: PrecisionCtx = DEFAULT_CTX, engine: MomentEngine = None,
                    tol=TOL_MATRIX) -> VerificationReport:
    eng = _engine(ctx, engine)

    def body():
        P = periods.period_P(k, ctx, eng).values
        Pc = periods.period_Pc(k, ctx, eng).values
        Dinv = rat_mat_inverse(pairings.poincare_matrix(k).entries).to_mp()
        lhs = complex_mat_mul(complex_mat_mul(P, Dinv), Pc)
        return relative_residual(lhs, _scaled_betti(k, pairings.betti_matrix(k).entries))

    return _run("quadratic", {"k": k}, tol, ctx, body)


def _vacuous(id_, k, ctx):
    rep = VerificationReport(id_, {"k": k}, mpf(0), TOL_MATRIX, 0.0, ctx.work_bits, "vacuous (k'=0)")
    rep.digest = _digest([id_, k])
    return rep


def check_quadratic_mid(k: int, ctx: PrecisionCtx = DEFAULT_CTX, engine: MomentEngine = None,
                        tol=TOL_MATRIX) -> VerificationReport:
    if k % 4 != 2:
        raise DomainError("needs k = 2 mod 4")
    if k == 2:
        return _vacuous("quadratic_mid", k, ctx)
    eng = _engine(ctx, engine)

    def body():
        mb = pairings.mid_and_bridge(k)
        Pm = periods.period_Pmid(k, ctx, eng).values
        lhs = complex_mat_mul(complex_mat_mul(Pm, rat_mat_inverse(mb.D_mid).to_mp()), mat_transpose(Pm))
        return relative_residual(lhs, _scaled_betti(k, mb.B_mid))

    return _run("quadratic_mid", {"k": k}, tol, ctx, body)


def check_quadratic_tilde(k: int, ctx: PrecisionCtx = DEFAULT_CTX, engine: MomentEngine = None,
                          tol=TOL_MATRIX) -> VerificationReport:
    if k % 4 != 2:
        raise DomainError("needs k = 2 mod 4")
    if k == 2:
        return _vacuous("quadratic_tilde", k, ctx)
    eng = _engine(ctx, engine)

    def body():
        mb = pairings.mid_and_bridge(k)
        P = periods.period_P(k, ctx, eng).values
        lhs = complex_mat_mul(complex_mat_mul(P, mb.Dtilde.to_mp()), mat_transpose(P))
        return relative_residual(lhs, _scaled_betti(k, mb.Btilde))

    return _run("quadratic_tilde", {"k": k}, tol, ctx, body)


def check_bridge(k: int, ctx: PrecisionCtx = DEFAULT_CTX, engine: MomentEngine = None,
                 tol=TOL_MATRIX) -> VerificationReport:
    if k % 4 != 2:
        raise DomainError("needs k = 2 mod 4")
    if k == 2:
        return _vacuous("bridge", k, ctx)
    eng = _engine(ctx, engine)

    def body():
        mb = pairings.mid_and_bridge(k)
        P = periods.period_P(k, ctx, eng).values
        Pm = periods.period_Pmid(k, ctx, eng).values
        return relative_residual(complex_mat_mul(P, mb.R.to_mp()), complex_mat_mul(mb.L.to_mp(), Pm))

    return _run("bridge", {"k": k}, tol, ctx, body)


# ---------------------------------------------------------------------------
# determinants


def _rel(x, y):
    return abs(x - y) / max(abs(y), mpf(2) ** -mp.prec)


def check_det_P(k: int, ctx: PrecisionCtx = DEFAULT_CTX, engine: MomentEngine = None, tol=TOL_MATRIX):
    eng = _engine(ctx, engine)
    return _run("det_P", {"k": k}, tol, ctx,
                lambda: _rel(periods.period_P(k, ctx, eng).det(), periods.det_P_closed(k)))


def check_det_Pmid(k: int, ctx: PrecisionCtx = DEFAULT_CTX, engine: MomentEngine = None, tol=TOL_MATRIX):
    if k == 2:
        return _vacuous("det_Pmid", k, ctx)
    eng = _engine(ctx, engine)
    return _run("det_Pmid", {"k": k}, tol, ctx,
                lambda: _rel(periods.period_Pmid(k, ctx, eng).det(), periods.det_Pmid_closed(k)))


def check_det_MN(r: int, which: str, ctx: PrecisionCtx = DEFAULT_CTX, engine: MomentEngine = None,
                 tol=TOL_IDENTITY):
    eng = _engine(ctx, engine)
    idx = {"M": 0, "N": 1}[which]
    closed = periods.det_M_closed if which == "M" else periods.det_N_closed
    return _run("det_" + which, {"r": r}, tol, ctx,
                lambda: _rel(periods.mat_det(periods.mn_matrices(r, ctx, eng)[idx]), closed(r)))


def check_recursion(r: int, which: int, ctx: PrecisionCtx = DEFAULT_CTX, engine: MomentEngine = None,
                    tol=mpf(10) ** -28):
    eng = _engine(ctx, engine)

    def body():
        lhs, rhs = periods.recursion_sides(r, which, ctx, eng)
        return _rel(lhs, rhs)

    return _run("recursion_%d" % which, {"r": r}, tol, ctx, body)


def check_wronskian(r: int, ctx: PrecisionCtx = DEFAULT_CTX, engine: MomentEngine = None) -> List[VerificationReport]:
    eng = _engine(ctx, engine)
    start = time.perf_counter()
    with mp.workprec(ctx.work_bits):
        res = periods.wronskian_eval_checks(r, ctx, eng)
    secs = time.perf_counter() - start
    out = []
    for name, (_, _, dev) in res.items():
        tol = TOL_LIMIT if name.startswith("limit") else TOL_WRONSKIAN
        note = "near-boundary evaluation, first-order tolerance" if tol is TOL_LIMIT else ""
        rep = VerificationReport("wronskian", {"r": r, "quantity": name}, dev, tol, secs / len(res),
                                 ctx.work_bits, note)
        rep.digest = _digest(["wronskian", r, name])
        out.append(rep)
    return out


# ---------------------------------------------------------------------------
# exact and symbolic suites


def symbolic_reports(n_max: int = 12) -> List[VerificationReport]:
    out = []
    for n in range(1, n_max + 1):
        t0 = time.perf_counter()
        L = weyl.sym_power_bessel(n)
        out.append(_exact("graded_leading", {"n": n},
                          weyl.graded_leading(L) == weyl.leading_closed_form(n), seconds=time.perf_counter() - t0))
        out.append(_exact("support", {"n": n}, weyl.support_exponents(L) == (2 * ((n + 1) // 2), 0)))
        out.append(_exact("lambda_closed_form", {"m": n},
                          weyl.lambda_poly(n + 1, n) == weyl.lambda_closed_form(n)))
        out.append(_exact("dim_h1", {"k": n}, weyl.dim_h1(n) == (n + 1) // 2))
    for n in range(1, min(n_max, 6) + 1):
        lead, sub = weyl.vanhove_leading_terms(n)
        lam = weyl.lambda_x(n)
        want_sub = weyl.l_scale(weyl.l_add(lam, weyl.l_scale(weyl.l_mul({1: 1}, weyl.l_deriv(lam)),
                                                              Fraction(1, 2))), n + 1)
        out.append(_exact("vanhove_leading", {"n": n}, lead == lam and sub == weyl.l_norm(want_sub)))
    return out


def exact_rational_reports(k_max: int = 14, poincare_max: int = 12) -> List[VerificationReport]:
    out = []
    for k in range(1, k_max + 1):
        out.append(_exact("betti_det", {"k": k},
                          pairings.betti_matrix(k).det() == pairings.betti_det_closed(k)))
        if k % 2 == 0:
            out.append(_exact("betti_relation", {"k": k}, pairings.betti_relation_check(k)))
            out.append(_exact("betti_kernel", {"k": k}, pairings.kernel_relation_check(k)))
    for k in range(1, poincare_max + 1):
        out.append(_exact("poincare_antidiagonal", {"k": k}, pairings.poincare_antidiagonal_check(k)))
        out.append(_exact("poincare_invertible", {"k": k}, pairings.poincare_matrix(k).det() != 0))
    return out


# ---------------------------------------------------------------------------
# integer relations


@dataclass
class RelationResult:
    k: int
    a: int
    jmax: int
    coeffs: Optional[List[int]]
    residual: Optional[mpf]
    verified_residual: Optional[mpf] = None
    note: str = "demonstration only, not a proof"


def detect_q_relation(k: int, a: int, jmax: int, ctx: PrecisionCtx = DEFAULT_CTX, engine: MomentEngine = None,
                      verify_ctx: PrecisionCtx = None, maxcoeff: int = 10 ** 12) -> RelationResult:
    """Search an integer relation among IKM_k(a, 2j), j = 0..jmax."""
    if jmax < pairings.kprime(k) + 1:
        raise DomainError("jmax must be at least k'+1")
    if ctx.target_digits < 40:
        raise PrecisionTooLow("relation search needs at least 40 digits, context gives %d" % ctx.target_digits)
    eng = _engine(ctx, engine)
    with mp.workprec(ctx.work_bits):
        vals = [eng.value(k, a, 2 * j) for j in range(jmax + 1)]
        tol = mpf(10) ** -(ctx.target_digits - 10)
        rel = mpmath.pslq(vals, tol=tol, maxcoeff=maxcoeff, maxsteps=10 ** 5)
        if rel is None:
            return RelationResult(k, a, jmax, None, None)
        scale = max(abs(v) for v in vals) * mpmath.sqrt(sum(c * c for c in rel))
        residual = abs(mpmath.fsum(c * v for c, v in zip(rel, vals))) / scale
    out = RelationResult(k, a, jmax, list(rel), residual)
    if verify_ctx is not None:
        veng = default_engine(verify_ctx)
        with mp.workprec(verify_ctx.work_bits):
            vv = [veng.value(k, a, 2 * j) for j in range(jmax + 1)]
            out.verified_residual = abs(mpmath.fsum(c * v for c, v in zip(rel, vv))) / scale
    return out


def check_q_relation(k: int, a: int, jmax: int, ctx: PrecisionCtx = DEFAULT_CTX, engine: MomentEngine = None):
    start = time.perf_counter()
    res = detect_q_relation(k, a, jmax, ctx, engine)
    resid = res.residual if res.coeffs is not None else mpf(1)
    rep = VerificationReport("q_relation", {"k": k, "a": a, "jmax": jmax}, resid, TOL_IDENTITY,
                             time.perf_counter() - start, ctx.work_bits,
                             "demonstration only; coefficients %s" % res.coeffs)
    rep.digest = _digest(["q_relation", k, a, jmax, res.coeffs])
    return rep


# ---------------------------------------------------------------------------


def run_suite(k_max: int = 4, ctx: PrecisionCtx = DEFAULT_CTX, engine: MomentEngine = None,
              r_max: int = None, wronskian: bool = False, symbolic_n: int = None) -> List[VerificationReport]:
    """Every check whose parameters stay within k <= k_max."""
    if k_max > 12:
        raise DomainError("k_max above 12 is not supported by default")
    eng = _engine(ctx, engine)
    reps: List[VerificationReport] = []
    reps += symbolic_reports(symbolic_n or k_max)
    reps += exact_rational_reports(k_max, k_max)
    try:
        for k in range(1, k_max + 1):
            reps.append(check_quadratic(k, ctx, eng))
            if k <= 6:
                reps.append(check_det_P(k, ctx, eng))
            if k % 2 == 0 and k >= 4:
                for i in sum_rule_valid_i(k):
                    reps.append(check_sum_rule_even(k, i, ctx, eng))
            if k % 4 == 2:
                reps += [check_quadratic_mid(k, ctx, eng), check_quadratic_tilde(k, ctx, eng),
                         check_bridge(k, ctx, eng), check_det_Pmid(k, ctx, eng)]
        for n, kk, v in intro_instances(k_max // 2):
            reps.append(check_sum_rule_intro(n, kk, v, ctx, eng))
        r_top = r_max if r_max is not None else max(1, (k_max + 1) // 2)
        for r in range(1, r_top + 1):
            reps.append(check_det_MN(r, "M", ctx, eng))
            reps.append(check_det_MN(r, "N", ctx, eng))
        for r in range(1, r_top):
            reps.append(check_recursion(r, 1, ctx, eng))
            if r >= 2:
                reps.append(check_recursion(r, 2, ctx, eng))
        if wronskian:
            for r in (1, 2):
                reps += check_wronskian(r, ctx, eng)
    except NonConvergent:
        raise
    return reps


def summarize(reports: List[VerificationReport]) -> Dict:
    failed = [r for r in reports if not r.passed]
    return {"total": len(reports), "passed": len(reports) - len(failed), "failed": len(failed)}
