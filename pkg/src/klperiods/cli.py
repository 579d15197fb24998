"""Command-line front end.

Every flag can also be set through an environment variable KLPERIODS_<FLAG>
(for example KLPERIODS_DIGITS=80); explicit flags win.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
import time
from typing import List

import mpmath
from mpmath import mp, mpf

from . import __version__, pairings, periods, verify, weyl
from .errors import DivergentMoment, DomainError, KlPeriodsError, NonConvergent
from .highprec import PrecisionCtx
from .moments import MomentEngine, MomentSpec

ENV_PREFIX = "KLPERIODS_"
EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_NONCONV = 0, 1, 2, 3
K_LIMIT = 12


class UsageError(Exception):
    pass


def _env(name, default=None, cast=str):
    raw = os.environ.get(ENV_PREFIX + name.upper().replace("-", "_"))
    if raw is None:
        return default
    try:
        return cast(raw)
    except ValueError:
        raise UsageError("bad value %r for %s%s" % (raw, ENV_PREFIX, name.upper()))


def parse_range(text: str) -> List[int]:
    """'3' -> [3]; '1..6' -> [1..6]; '2,4,8' -> [2, 4, 8]."""
    out = []
    for part in str(text).split(","):
        part = part.strip()
        if ".." in part:
            lo, hi = part.split("..")
            out.extend(range(int(lo), int(hi) + 1))
        elif part:
            out.append(int(part))
    if not out:
        raise UsageError("empty range %r" % text)
    return out


def _add_common(p):
    p.add_argument("--digits", type=int, default=None, help="decimal digits (default 60, minimum 30)")
    p.add_argument("--cutoff", type=float, default=None, help="quadrature cutoff T")
    p.add_argument("--truncation", type=int, default=None, help="formal series truncation order")
    p.add_argument("--format", choices=("json", "csv", "pretty"), default=None)
    p.add_argument("--output", default=None, help="write to this file instead of stdout")
    p.add_argument("--unsafe-large", action="store_true", default=None, help="allow k above 12")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="klperiods", description="Bessel moment periods and their identities.")
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("moment", help="one Bessel moment IKM_k(a, b)")
    p.add_argument("k", type=int)
    p.add_argument("a", type=int)
    p.add_argument("b", type=int)
    p.add_argument("--reg", action="store_true", help="regularized moment (even k, a = k/2, even b)")
    _add_common(p)

    p = sub.add_parser("matrix", help="a pairing or period matrix")
    p.add_argument("kind", choices=("betti", "poincare", "period", "period-c", "mid"))
    p.add_argument("k", type=int)
    _add_common(p)

    p = sub.add_parser("verify", help="run identity checks")
    p.add_argument("suite", choices=("quadratic", "determinants", "sum-rules", "intro-rules", "mid", "wronskian",
                                     "symbolic", "exact", "relations", "all"))
    p.add_argument("--k", default=None, help="k values, e.g. 1..6 or 4,6")
    p.add_argument("--r", default=None, help="r values, e.g. 1..3")
    p.add_argument("--k-max", type=int, default=None)
    p.add_argument("--perturb", default=None, help="add this offset to every moment (self-test)")
    _add_common(p)

    p = sub.add_parser("symbolic", help="dump a symbolic operator or polynomial")
    p.add_argument("kind", choices=("sym-power", "vanhove", "lambda", "leading"))
    p.add_argument("n", type=int)
    p.add_argument("m", type=int, nargs="?")
    _add_common(p)
    return parser


class Config:
    def __init__(self, args):
        self.digits = args.digits if args.digits is not None else _env("digits", 60, int)
        if self.digits < 30:
            raise UsageError("--digits must be at least 30")
        self.cutoff = args.cutoff if args.cutoff is not None else _env("cutoff", None, float)
        self.truncation = args.truncation if args.truncation is not None else _env("truncation", None, int)
        self.format = args.format or _env("format", "pretty")
        if self.format not in ("json", "csv", "pretty"):
            raise UsageError("unknown format %r" % self.format)
        self.output = args.output or _env("output", None)
        unsafe = args.unsafe_large if args.unsafe_large is not None else _env("unsafe_large", "0") not in ("0", "")
        self.unsafe_large = bool(unsafe)
        self.k_max = getattr(args, "k_max", None) or _env("k_max", None, int)
        pert = getattr(args, "perturb", None) or _env("perturb", None)
        self.perturb = mpf(pert) if pert else mpf(0)
        self.ctx = PrecisionCtx.from_digits(self.digits)

    def engine(self) -> MomentEngine:
        return MomentEngine(self.ctx, T=self.cutoff, perturbation=self.perturb)

    def check_k(self, k: int):
        if k < 1:
            raise UsageError("k must be positive")
        if k > K_LIMIT and not self.unsafe_large:
            raise UsageError("k=%d exceeds %d; pass --unsafe-large to allow it" % (k, K_LIMIT))

    def as_dict(self):
        return {"digits": self.digits, "cutoff": self.cutoff, "truncation": self.truncation,
                "format": self.format, "k_max": self.k_max, "perturb": str(self.perturb),
                "work_bits": self.ctx.work_bits}


def _emit(text: str, cfg: Config):
    if cfg.output:
        with open(cfg.output, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


# ---------------------------------------------------------------------------


def cmd_moment(args, cfg: Config) -> int:
    cfg.check_k(args.k)
    spec = MomentSpec(args.k, args.a, args.b, args.reg)
    if not spec.regularized and not spec.convergent:
        raise DivergentMoment(
            "IKM_%d(%d,%d) diverges; a plain moment needs a <= (k-1)/2, or a = k/2 with b < (k-1)/2 "
            "(use --reg for even b when a = k/2)" % (args.k, args.a, args.b))
    eng = cfg.engine()
    with mp.workprec(cfg.ctx.work_bits):
        value, err = eng.ikm_with_error(spec)
    kind = "regularized" if spec.regularized else "plain"
    if cfg.format == "json":
        _emit(json.dumps({"moment": spec.label(), "kind": kind, "value": mpmath.nstr(value, cfg.digits),
                          "error_estimate": mpmath.nstr(err, 3)}) + "\n", cfg)
    elif cfg.format == "csv":
        _emit("moment,kind,value\n%s,%s,%s\n" % (spec.label(), kind, mpmath.nstr(value, cfg.digits)), cfg)
    else:
        _emit("%s\n# %s %s, error estimate %s\n" % (mpmath.nstr(value, cfg.digits), kind, spec.label(),
                                                   mpmath.nstr(err, 3)), cfg)
    return EXIT_OK


def _rat_grid_text(M) -> str:
    return "\n".join("  ".join(x for x in row) for row in M.to_json()) + "\n"


def cmd_matrix(args, cfg: Config) -> int:
    k = args.k
    cfg.check_k(k)
    kind = args.kind
    if kind in ("betti", "poincare"):
        lm = pairings.betti_matrix(k) if kind == "betti" else pairings.poincare_matrix(k, cfg.truncation)
        if cfg.format == "json":
            _emit(json.dumps(lm.to_json()) + "\n", cfg)
        elif cfg.format == "csv":
            buf = io.StringIO()
            csv.writer(buf).writerows(lm.entries.to_json())
            _emit(buf.getvalue(), cfg)
        else:
            _emit(_rat_grid_text(lm.entries), cfg)
        return EXIT_OK
    eng = cfg.engine()
    with mp.workprec(cfg.ctx.work_bits):
        if kind == "period":
            pm = periods.period_P(k, cfg.ctx, eng)
        elif kind == "period-c":
            pm = periods.period_Pc(k, cfg.ctx, eng)
        else:
            if k % 4 != 2:
                raise UsageError("the mid matrix needs k = 2 mod 4")
            pm = periods.period_Pmid(k, cfg.ctx, eng)
    if cfg.format == "json":
        _emit(json.dumps(pm.to_json(cfg.digits)) + "\n", cfg)
    elif cfg.format == "csv":
        buf = io.StringIO()
        w = csv.writer(buf)
        w.writerow(["row", "col", "re", "im"])
        for i, row in enumerate(pm.values):
            for j, v in enumerate(row):
                w.writerow([i, j, mpmath.nstr(v.real, cfg.digits), mpmath.nstr(v.imag, cfg.digits)])
        _emit(buf.getvalue(), cfg)
    else:
        lines = []
        for row in pm.values:
            lines.append("  ".join(_fmt_complex(v, cfg.digits) for v in row))
        _emit("\n".join(lines) + "\n", cfg)
    return EXIT_OK


def _fmt_complex(v, digits):
    if v.imag == 0:
        return mpmath.nstr(v.real, digits)
    if v.real == 0:
        return mpmath.nstr(v.imag, digits) + "i"
    return "%s%+si" % (mpmath.nstr(v.real, digits), mpmath.nstr(v.imag, digits))


def _suite_reports(args, cfg: Config) -> List[verify.VerificationReport]:
    eng = cfg.engine()
    ctx = cfg.ctx
    ks = parse_range(args.k) if args.k else None
    rs = parse_range(args.r) if args.r else None
    for k in ks or []:
        cfg.check_k(k)
    s = args.suite
    reps: List[verify.VerificationReport] = []
    if s == "quadratic":
        for k in ks or range(1, 7):
            reps.append(verify.check_quadratic(k, ctx, eng))
    elif s == "determinants":
        for r in rs or range(1, 4):
            reps.append(verify.check_det_MN(r, "M", ctx, eng))
            reps.append(verify.check_det_MN(r, "N", ctx, eng))
            reps.append(verify.check_recursion(r, 1, ctx, eng))
            if r >= 2:
                reps.append(verify.check_recursion(r, 2, ctx, eng))
        for k in ks or []:
            reps.append(verify.check_det_P(k, ctx, eng))
            if k % 4 == 2:
                reps.append(verify.check_det_Pmid(k, ctx, eng))
    elif s == "sum-rules":
        for k in ks or (4, 6, 8, 10):
            if k % 2:
                raise UsageError("sum rules need even k")
            for i in verify.sum_rule_valid_i(k):
                reps.append(verify.check_sum_rule_even(k, i, ctx, eng))
    elif s == "intro-rules":
        n_max = max(ks) if ks else 4
        for n, kk, v in verify.intro_instances(n_max):
            reps.append(verify.check_sum_rule_intro(n, kk, v, ctx, eng))
    elif s == "mid":
        for k in ks or (2, 6, 10):
            if k % 4 != 2:
                raise UsageError("mid checks need k = 2 mod 4")
            reps += [verify.check_quadratic_mid(k, ctx, eng), verify.check_quadratic_tilde(k, ctx, eng),
                     verify.check_bridge(k, ctx, eng), verify.check_det_Pmid(k, ctx, eng)]
    elif s == "wronskian":
        for r in rs or (1, 2):
            reps += verify.check_wronskian(r, ctx, eng)
    elif s == "symbolic":
        reps += verify.symbolic_reports(max(ks) if ks else 12)
    elif s == "exact":
        reps += verify.exact_rational_reports(max(ks) if ks else 14, min(max(ks) if ks else 12, 12))
    elif s == "relations":
        for k, a, j in ((3, 0, 2), (4, 0, 2), (5, 1, 3)):
            reps.append(verify.check_q_relation(k, a, j, ctx, eng))
    else:
        k_max = cfg.k_max or (max(ks) if ks else 4)
        if k_max > K_LIMIT and not cfg.unsafe_large:
            raise UsageError("k_max above %d needs --unsafe-large" % K_LIMIT)
        reps += verify.run_suite(k_max, ctx, eng)
    return reps


def render_report(reps, cfg: Config, timing: bool = True) -> str:
    if cfg.format == "json":
        doc = {"meta": {"version": __version__, "config": cfg.as_dict(),
                        "timestamp": time.strftime("%Y-%m-%dT%H:%M:%SZ", time.gmtime()) if timing else None},
               "results": [r.to_json(timing=timing) for r in reps]}
        return json.dumps(doc, indent=1) + "\n"
    if cfg.format == "csv":
        buf = io.StringIO()
        w = csv.writer(buf)
        w.writerow(["id", "params", "residual", "tolerance", "status", "seconds"])
        for r in reps:
            d = r.to_json(timing=True)
            w.writerow([d["id"], json.dumps(d["params"], sort_keys=True), d["residual"], d["tolerance"],
                        d["status"], d["seconds"]])
        return buf.getvalue()
    lines = []
    for r in reps:
        d = r.to_json()
        params = " ".join("%s=%s" % kv for kv in sorted(d["params"].items()))
        lines.append("%-4s %-22s %-28s residual %-10s tol %s" % (d["status"].upper(), d["id"], params,
                                                                 d["residual"], d["tolerance"]))
    s = verify.summarize(reps)
    lines.append("%d checks, %d passed, %d failed" % (s["total"], s["passed"], s["failed"]))
    return "\n".join(lines) + "\n"


def cmd_verify(args, cfg: Config) -> int:
    reps = _suite_reports(args, cfg)
    _emit(render_report(reps, cfg), cfg)
    return EXIT_OK if all(r.passed for r in reps) else EXIT_FAIL


def cmd_symbolic(args, cfg: Config) -> int:
    n = args.n
    if n < 0:
        raise UsageError("n must be non-negative")
    if args.kind == "sym-power":
        text = weyl.sym_power_bessel(n).pretty()
    elif args.kind == "vanhove":
        text = weyl.vanhove(n).pretty()
    elif args.kind == "lambda":
        m = args.m if args.m is not None else n - 1
        text = weyl.p_to_text(weyl.lambda_poly(n, m), "x")
    else:
        text = weyl.graded_leading(weyl.sym_power_bessel(n)).pretty()
    if cfg.format == "json":
        _emit(json.dumps({"kind": args.kind, "n": n, "m": args.m, "text": text}) + "\n", cfg)
    else:
        _emit(text + "\n", cfg)
    return EXIT_OK


COMMANDS = {"moment": cmd_moment, "matrix": cmd_matrix, "verify": cmd_verify, "symbolic": cmd_symbolic}


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    try:
        cfg = Config(args)
        return COMMANDS[args.command](args, cfg)
    except (UsageError, DomainError) as exc:
        sys.stderr.write("error: %s\n" % exc)
        return EXIT_USAGE
    except NonConvergent as exc:
        sys.stderr.write("non-convergence: %s\n" % exc)
        return EXIT_NONCONV
    except KlPeriodsError as exc:
        sys.stderr.write("error: %s\n" % exc)
        return EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
