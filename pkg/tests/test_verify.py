import pytest
from mpmath import mpf

from klperiods.errors import DomainError, PrecisionTooLow
from klperiods.highprec import PrecisionCtx
from klperiods.moments import MomentEngine
from klperiods.verify import (VerificationReport, check_bridge, check_quadratic, check_sum_rule_even,
                              detect_q_relation, exact_rational_reports, intro_instances, run_suite,
                              sum_rule_valid_i, summarize, symbolic_reports)


def test_report_status():
    rep = VerificationReport("x", {"k": 1}, mpf("1e-40"), mpf("1e-30"))
    assert rep.passed and rep.to_json()["status"] == "pass"
    rep = VerificationReport("x", {"k": 1}, mpf("1e-20"), mpf("1e-30"))
    assert rep.status == "fail"
    assert "seconds" not in rep.to_json(timing=False)


def test_valid_i():
    assert sum_rule_valid_i(6) == [0, 2]
    assert sum_rule_valid_i(8) == [0, 1, 2, 3]
    with pytest.raises(DomainError):
        sum_rule_valid_i(5)
    with pytest.raises(DomainError):
        check_sum_rule_even(6, 1)


def test_intro_instances():
    assert intro_instances(3) == [(2, 1, 1), (3, 1, 1), (3, 1, 2)]


@pytest.mark.parametrize("k", [1, 2, 3, 4])
def test_quadratic_small(ctx, engine, k):
    assert check_quadratic(k, ctx, engine).passed


def test_bridge_k2_vacuous(ctx, engine):
    assert check_bridge(2, ctx, engine).passed


def test_forced_failure(ctx):
    with __import__("mpmath").mp.workprec(ctx.work_bits):
        bad = MomentEngine(ctx, perturbation=mpf(10) ** -20)
    assert not check_quadratic(3, ctx, bad).passed


def test_exact_suites_pass():
    reps = symbolic_reports(6) + exact_rational_reports(8, 8)
    assert summarize(reps)["failed"] == 0


def test_run_suite_small(ctx, engine):
    reps = run_suite(2, ctx, engine)
    s = summarize(reps)
    assert s["failed"] == 0 and s["total"] == len(reps)
    with pytest.raises(DomainError):
        run_suite(13, ctx, engine)


def test_relation_k3(ctx, engine):
    res = detect_q_relation(3, 0, 2, ctx, engine)
    assert res.coeffs is not None
    assert [abs(c) for c in res.coeffs] == [1, 42, 9]
    assert res.residual < mpf(10) ** -40


def test_relation_needs_digits():
    with pytest.raises(PrecisionTooLow):
        detect_q_relation(3, 0, 2, PrecisionCtx.from_digits(30))
