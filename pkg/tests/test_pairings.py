from fractions import Fraction

import pytest

from klperiods.errors import DomainError, MismatchError
from klperiods.highprec import RationalMatrix
from klperiods.pairings import (Basis, betti_det_closed, betti_entry, betti_matrix, betti_relation_check,
                                check_betti_det, kernel_relation_check, kernel_vector, mhat_row, mid_and_bridge,
                                poincare_antidiagonal_check, poincare_matrix)

F = Fraction


def test_small_betti():
    assert betti_matrix(1).entries.to_json() == [["1/4"]]
    assert betti_matrix(2).entries.to_json() == [["-1/4"]]
    assert betti_matrix(3).entries == RationalMatrix([[F(-1, 8), 0], [0, F(-1, 6)]])


@pytest.mark.parametrize("k", range(1, 15))
def test_betti_det(k):
    assert check_betti_det(k) == betti_det_closed(k)


@pytest.mark.parametrize("k", range(2, 15, 2))
def test_betti_relations(k):
    assert betti_relation_check(k)
    assert kernel_relation_check(k)


def test_kernel_vector():
    assert kernel_vector(6) == [(0, 1), (2, 3)]
    with pytest.raises(DomainError):
        kernel_vector(5)


def test_betti_domain():
    with pytest.raises(DomainError):
        betti_entry(3, 2, 0)


def test_basis_labels():
    b = Basis(6)
    assert b.kp == 2 and b.r == 1 and b.mhat_index == 1
    assert b.row_labels() == ["omega~_0", "mhat_3", "omega~_2"]
    assert b.a_range == [1, 2, 3]
    assert Basis(8).mhat_index is None and Basis(8).r == 1
    with pytest.raises(DomainError):
        Basis(0)


def test_poincare_small():
    assert poincare_matrix(2).entries == RationalMatrix([[1]])
    assert poincare_matrix(3).entries == RationalMatrix([[0, F(-2, 3)], [F(-2, 3), F(-1, 27)]])


@pytest.mark.parametrize("k", range(1, 13))
def test_poincare_shape(k):
    assert poincare_antidiagonal_check(k)
    assert poincare_matrix(k).det() != 0


def test_mhat_row():
    # k = 6: r = 1, row (0, gamma_0, gamma_1)
    assert mhat_row(6) == [0, 1, F(3, 32)]


def test_bridge_k6():
    mb = mid_and_bridge(6)
    assert mb.R == RationalMatrix([[1, 0], [0, F(-3, 32)], [0, 1]])
    assert mb.L == RationalMatrix([[0, -3], [1, 0], [0, 1]])
    assert mb.Btilde.rank() == 2 and mb.Dtilde.rank() == 2
    assert mb.mid_index == [0, 2]


def test_bridge_k2_is_empty():
    mb = mid_and_bridge(2)
    assert mb.Btilde.shape == (1, 1)


def test_bridge_needs_mid_case():
    with pytest.raises(DomainError):
        mid_and_bridge(8)


def test_mismatch_is_assertion():
    assert issubclass(MismatchError, AssertionError)
