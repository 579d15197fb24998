"""Exact rational pairing matrices: Betti intersection B, Poincare D, and the
middle-part bridge matrices for k = 2 mod 4."""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import List, Tuple

from .combinatorics import binomial, euler_number, gamma_coeff
from .errors import DomainError, MismatchError
from .formal import antidiagonal_closed_form, poincare_row
from .highprec import RationalMatrix, rat_mat_inverse


def kprime(k: int) -> int:
    return (k - 1) // 2


@dataclass(frozen=True)
class Basis:
    """Index bookkeeping for one k.

    rows of D / P_c: compact-support classes, listed by i = 0..k'; when
    k = 4r+2 the slot i = r holds the m-hat class instead.
    columns of B / P_c: gamma_a with a in ``a_range``.
    rows of B / P: delta_b, b = 0..k'.  columns of D / P: omega_j, j = 0..k'.
    """

    k: int

    def __post_init__(self):
        if self.k < 1:
            raise DomainError("k must be positive")

    @property
    def kp(self) -> int:
        return kprime(self.k)

    @property
    def size(self) -> int:
        return self.kp + 1

    @property
    def a_range(self) -> List[int]:
        if self.k % 2:
            return list(range(0, self.kp + 1))
        return list(range(1, self.k // 2 + 1))

    @property
    def b_range(self) -> List[int]:
        return list(range(0, self.kp + 1))

    @property
    def is_mid_case(self) -> bool:
        return self.k % 4 == 2

    @property
    def r(self):
        """r with k = 4r+2 or k = 4r+4 (None for odd k)."""
        if self.k % 4 == 2:
            return (self.k - 2) // 4
        if self.k % 4 == 0:
            return (self.k - 4) // 4
        return None

    @property
    def mhat_index(self):
        return self.r if self.is_mid_case else None

    def row_labels(self) -> List[str]:
        out = []
        for i in range(self.size):
            out.append("mhat_%d" % (2 * self.r + 1) if i == self.mhat_index else "omega~_%d" % i)
        return out

    def col_labels_dr(self) -> List[str]:
        return ["omega_%d" % j for j in range(self.size)]

    def delta_labels(self) -> List[str]:
        return ["delta_%d" % b for b in self.b_range]

    def gamma_labels(self) -> List[str]:
        return ["gamma_%d" % a for a in self.a_range]


@dataclass(frozen=True)
class LabelledMatrix:
    k: int
    entries: RationalMatrix
    row_labels: Tuple[str, ...]
    col_labels: Tuple[str, ...]

    def to_json(self):
        return {"k": self.k, "rows": list(self.row_labels), "cols": list(self.col_labels),
                "entries": self.entries.to_json()}

    def det(self) -> Fraction:
        return self.entries.det()


BettiMatrix = LabelledMatrix
PoincareMatrix = LabelledMatrix


def betti_entry(k: int, b: int, a: int) -> Fraction:
    kp = kprime(k)
    if k < 1 or not 0 <= b <= kp or not 0 <= a <= k // 2:
        raise DomainError("need 0 <= b <= k' and 0 <= a <= floor(k/2)")
    n = k - a - b
    return (Fraction((-1) ** (a + 1), 2) * math.factorial(k - a) * math.factorial(k - b)
            / math.factorial(k) * euler_number(n) / math.factorial(n))


def _betti_rows(k: int, a_values) -> RationalMatrix:
    return RationalMatrix([[betti_entry(k, b, a) for a in a_values] for b in range(kprime(k) + 1)])


@lru_cache(maxsize=None)
def betti_matrix(k: int) -> LabelledMatrix:
    basis = Basis(k)
    return LabelledMatrix(k, _betti_rows(k, basis.a_range), tuple(basis.delta_labels()),
                          tuple(basis.gamma_labels()))


def betti_full(k: int) -> RationalMatrix:
    """B with every column a = 0..floor(k/2), used for the kernel relation."""
    return _betti_rows(k, range(k // 2 + 1))


def betti_det_closed(k: int) -> Fraction:
    kp = kprime(k)
    out = Fraction(1)
    if k % 2:
        out = Fraction(1, 2 ** (k + 1))
        for a in range(1, kp + 1):
            out *= Fraction(a) ** (kp + 1 - 2 * a) * Fraction(2 * a + 1) ** (kp - 2 * a)
        return out
    out = Fraction((-1) ** ((kp + 1) * (kp + 3)), 2 ** k)
    for a in range(1, kp + 1):
        out *= Fraction(a + 1) ** (kp - 2 * a - 1) * Fraction(2 * a + 1) ** (kp + 1 - 2 * a)
    return out


def check_betti_det(k: int) -> Fraction:
    exact = betti_matrix(k).det()
    closed = betti_det_closed(k)
    if exact != closed:
        raise MismatchError("det B_%d: exact %s, closed form %s" % (k, exact, closed))
    return exact


def betti_relation_check(k: int) -> bool:
    """B_k = -(1/k) diag(k, ..., k/2+1) B_{k-1} for even k."""
    if k % 2 or k < 2:
        raise DomainError("relation needs even k >= 2")
    lhs = betti_matrix(k).entries
    prev = betti_matrix(k - 1).entries
    n = kprime(k) + 1
    diag = RationalMatrix([[Fraction(k - i) if i == j else 0 for j in range(n)] for i in range(n)])
    return lhs == (diag @ prev).scale(Fraction(-1, k))


def kernel_vector(k: int) -> List[Tuple[int, int]]:
    """Pairs (a, C(k/2, a)) over even a, giving the vanishing combination of gamma_a."""
    if k % 2:
        raise DomainError("kernel relation needs even k")
    top = k // 4 if k % 4 == 0 else (k - 2) // 4
    return [(2 * j, binomial(k // 2, 2 * j)) for j in range(top + 1)]


def kernel_relation_check(k: int) -> bool:
    full = betti_full(k)
    n_rows = full.shape[0]
    for b in range(n_rows):
        if sum((c * full[b, a] for a, c in kernel_vector(k)), Fraction(0)) != 0:
            return False
    return True


def mhat_row(k: int) -> List[Fraction]:
    r = (k - 2) // 4
    return [gamma_coeff(k, j - r) if j >= r else Fraction(0) for j in range(kprime(k) + 1)]


@lru_cache(maxsize=None)
def poincare_matrix(k: int, N: int = None) -> LabelledMatrix:
    """N overrides the formal-series truncation (it still escalates if too short)."""
    basis = Basis(k)
    rows = []
    for i in range(basis.size):
        if i == basis.mhat_index:
            rows.append(mhat_row(k))
        else:
            rows.append(poincare_row(i, k, N))
    return LabelledMatrix(k, RationalMatrix(rows), tuple(basis.row_labels()), tuple(basis.col_labels_dr()))


def poincare_antidiagonal_check(k: int) -> bool:
    """Zeros above the anti-diagonal and the closed-form anti-diagonal values."""
    basis = Basis(k)
    D = poincare_matrix(k).entries
    kp = basis.kp
    for i in range(kp + 1):
        if i == basis.mhat_index:
            continue
        for j in range(kp + 1 - i):
            want = antidiagonal_closed_form(i, k) if i + j == kp else 0
            if D[i, j] != want:
                return False
    return True


# ---------------------------------------------------------------------------
# middle part, k = 4r+2


@dataclass(frozen=True)
class MidBridge:
    k: int
    R: RationalMatrix
    L: RationalMatrix
    B_mid: RationalMatrix
    D_mid: RationalMatrix
    Btilde: RationalMatrix
    Dtilde: RationalMatrix
    mid_index: List[int] = field(default_factory=list)


def bridge_R(k: int) -> RationalMatrix:
    kp, r = kprime(k), (k - 2) // 4
    rows = []
    for i in range(kp + 1):
        if i < r:
            rows.append([1 if c == i else 0 for c in range(kp)])
        elif i == r:
            rows.append([0] * r + [-gamma_coeff(k, n) for n in range(1, kp - r + 1)])
        else:
            rows.append([1 if c == i - 1 else 0 for c in range(kp)])
    return RationalMatrix(rows, shape=(kp + 1, kp))


def bridge_L(k: int) -> RationalMatrix:
    kp = kprime(k)
    first = [-binomial(k // 2, b) if b % 2 == 0 else 0 for b in range(1, kp + 1)]
    rows = [first] + [[1 if c == i else 0 for c in range(kp)] for i in range(kp)]
    return RationalMatrix(rows, shape=(kp + 1, kp))


@lru_cache(maxsize=None)
def mid_and_bridge(k: int) -> MidBridge:
    if k % 4 != 2:
        raise DomainError("the middle-part bridge needs k = 2 mod 4")
    kp, r = kprime(k), (k - 2) // 4
    R, L = bridge_R(k), bridge_L(k)
    B = betti_matrix(k).entries
    # rows delta_1..delta_k', columns gamma_1..gamma_k'
    B_mid = B.delete(row=0, col=B.shape[1] - 1) if kp else RationalMatrix([], shape=(0, 0))
    # pairing of omega~_i (i != r) against the mid classes omega_j - gamma_{j-r} omega_r
    D = poincare_matrix(k).entries
    D_mid = (D @ R).delete(row=r) if kp else RationalMatrix([], shape=(0, 0))
    if kp:
        Btilde = L @ B_mid @ L.T
        Dtilde = R @ rat_mat_inverse(D_mid) @ R.T
    else:
        Btilde = RationalMatrix.zeros(1, 1)
        Dtilde = RationalMatrix.zeros(1, 1)
    mid = [i for i in range(kp + 1) if i != r]
    return MidBridge(k, R, L, B_mid, D_mid, Btilde, Dtilde, mid)
