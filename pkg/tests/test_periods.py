import mpmath
import pytest
from mpmath import mp, mpf

from klperiods.errors import DomainError
from klperiods.periods import (det_M_closed, det_N_closed, mn_determinant_checks, omega_even_closed,
                               period_P, period_P_provenance, period_Pc, period_Pmid)


def test_k2_period(engine, hp):
    P = period_P(2, engine=engine)
    assert abs(P.values[0][0] - mpmath.pi ** 2) < mpf(10) ** -55


def test_k1_period(engine, hp):
    P = period_P(1, engine=engine)
    assert P.shape == (1, 1)
    # -2 IKM_1(0,0)
    assert abs(P.values[0][0] + mpmath.pi) < mpf(10) ** -55


def test_provenance_round_trip(engine, hp):
    prov = period_P_provenance(4)
    P = period_P(4, engine=engine)
    for b in range(2):
        for j in range(2):
            assert prov[b][j].evaluate(engine) == P.values[b][j]
    doc = P.to_json(20)
    assert doc["k"] == 4 and len(doc["entries"]) == 2


def test_pc_and_mid_shapes(engine, hp):
    assert period_Pc(5, engine=engine).shape == (3, 3)
    assert period_Pmid(6, engine=engine).shape == (2, 2)
    with pytest.raises(DomainError):
        period_Pmid(8, engine=engine)


def test_closed_dets_small():
    assert det_N_closed(0) == 1
    assert det_M_closed(1) != 0


def test_mn_r1(engine, hp):
    devs = mn_determinant_checks(1, engine=engine)
    assert all(d < mpf(10) ** -30 for d in devs)


def test_omega_even_positive():
    with mp.workprec(200):
        assert omega_even_closed(1, mpf("0.5")) != 0
