"""Central tolerance record.

Every numerical threshold used by the library lives here so that callers
(and the CLI ``--tolerance`` overrides) can adjust them in one place.
"""

from dataclasses import dataclass, replace


@dataclass(frozen=True)
class Tolerances:
    hermitian: float = 1e-12
    eig_residual: float = 1e-10
    degeneracy: float = 1e-8
    eigenvalue_match: float = 1e-8
    normalization: float = 1e-10
    imaginary_residue: float = 1e-10
    probability_slack: float = 1e-10
    oracle: float = 1e-9
    engine_agreement: float = 1e-8
    max_sweeps: int = 500
    max_dim: int = 4096

    def with_overrides(self, **kwargs) -> "Tolerances":
        return replace(self, **kwargs)


DEFAULT = Tolerances()
