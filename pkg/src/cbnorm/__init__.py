"""Multiplier norms on matrices and finite groups, computed by SDP.

Modules:

- :mod:`cbnorm.linalg`      dense complex linear algebra kernel
- :mod:`cbnorm.sdp`         deterministic interior-point SDP solver
- :mod:`cbnorm.schur`       Schur multiplier norms and factorizations
- :mod:`cbnorm.groups`      finite groups and free-group word balls
- :mod:`cbnorm.harmonic`    cb multiplier and Fourier-algebra norms
- :mod:`cbnorm.predual`     the standard predual norm and its duality
- :mod:`cbnorm.functorial`  transport of multipliers between groups
- :mod:`cbnorm.cli`         command-line front end and acceptance runner
"""

from .groups import FiniteGroup, FiniteSection, free_group_section, group_from_spec
from .harmonic import Multiplier, a_norm, cb_norm, herz_schur_matrix
from .predual import c_star_norm, pairing, q_norm
from .schur import NormReport, SchurFactorization, haagerup_predual_norm, schur_norm
from .sdp import SdpProblem, SdpSolution, SolverError, Tolerances, solve, verify_solution

__version__ = "0.1.0"

__all__ = [
    "FiniteGroup",
    "FiniteSection",
    "free_group_section",
    "group_from_spec",
    "Multiplier",
    "a_norm",
    "cb_norm",
    "herz_schur_matrix",
    "c_star_norm",
    "pairing",
    "q_norm",
    "NormReport",
    "SchurFactorization",
    "haagerup_predual_norm",
    "schur_norm",
    "SdpProblem",
    "SdpSolution",
    "SolverError",
    "Tolerances",
    "solve",
    "verify_solution",
    "__version__",
]
