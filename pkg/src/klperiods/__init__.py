"""High-precision checks of period identities for Bessel moments."""

__version__ = "0.1.0"

from .errors import (DivergentMoment, DomainError, KlPeriodsError, MismatchError, NonConvergent,
                     PrecisionTooLow, ResidueObstruction, Singular, TruncationTooShort, ZeroOperator)
from .highprec import DEFAULT_CTX, PrecisionCtx, RationalMatrix, de_quadrature
from .moments import MomentEngine, MomentSpec, default_engine, ikm, ikm_reg, omega_matrix, two_scale
from .pairings import betti_matrix, kernel_vector, mid_and_bridge, poincare_matrix
from .periods import mn_matrices, period_P, period_Pc, period_Pmid
from .verify import VerificationReport, run_suite
