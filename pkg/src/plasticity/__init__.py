"""Correlations of spin singlets under arbitrary outcome relabelings.

The trace engine computes ``Tr[rho (R_1 x ... x R_n)]`` for labeled spin
observables; :mod:`plasticity.closedforms` holds the analytic expressions it
is checked against.
"""

from .closedforms import ClosedForm, evaluate, figure_curves
from .config import DEFAULT, Tolerances
from .correlate import (
    CorrelationQuery,
    JointProbabilityTable,
    correlation,
    correlation_of,
    joint_probabilities,
    parity_correlation,
)
from .errors import NumericalError, UsageError
from .inequalities import (
    ChshSetting,
    ScanResult,
    chsh_value,
    enhancement_domain,
    optimize_chsh,
    sign_fourier_partial,
)
from .spin import (
    KS_INVERTED_LABELS,
    KS_LABELS,
    Direction,
    Spin,
    eigenprojectors,
    labeled_observable,
    spin_labels,
    spin_operator,
)
from .states import (
    DensityMatrix,
    StateVector,
    bell_singlet,
    check_uniqueness,
    clebsch_gordan_singlet,
    density,
    four_qubit_singlet,
)

__version__ = "0.1.0"

__all__ = [
    "ClosedForm", "evaluate", "figure_curves",
    "DEFAULT", "Tolerances",
    "CorrelationQuery", "JointProbabilityTable", "correlation", "correlation_of",
    "joint_probabilities", "parity_correlation",
    "NumericalError", "UsageError",
    "ChshSetting", "ScanResult", "chsh_value", "enhancement_domain", "optimize_chsh",
    "sign_fourier_partial",
    "KS_INVERTED_LABELS", "KS_LABELS", "Direction", "Spin", "eigenprojectors",
    "labeled_observable", "spin_labels", "spin_operator",
    "DensityMatrix", "StateVector", "bell_singlet", "check_uniqueness",
    "clebsch_gordan_singlet", "density", "four_qubit_singlet",
]
