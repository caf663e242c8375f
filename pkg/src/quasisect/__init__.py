"""Finite-dimensional numerical laboratory for quasi-sectorial contractions.

Submodules
----------
matcore     dense complex kernels (Hermitian eigensolver, solves, expm, norms)
numrange    numerical-range boundary, hull distance, sector angle
dalpha      geometry of the domain D_alpha and of the power maps z -> z**n
generators  seeded m-sectorial matrices, resolvent and semigroup contractions
harness     Euler / Chernoff operator-norm error curves and rate fits
claims      the verification claims behind ``quasisect verify``
cli         command-line front end
"""

from .dalpha import DAlphaDomain, dalpha_boundary, dalpha_contains, verify_power_containment
from .errors import (
    DegenerateFit,
    NoConvergence,
    NotHermitian,
    NotSectorial,
    OutOfRange,
    Overflow,
    QuasiSectorialError,
    Singular,
)
from .generators import MatrixGenSpec, euler_resolvent, gen_msectorial, semigroup_value
from .harness import ConvergenceReport, euler_error_curve, euler_power, fit_rate
from .matcore import herm_eig, matrix_exp, op_norm, resolvent, solve
from .numrange import NumRangeBoundary, hull_distance, measured_semiangle, nr_boundary

__version__ = "0.1.0"
