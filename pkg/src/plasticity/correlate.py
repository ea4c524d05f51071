"""Born-rule evaluation of joint probabilities and correlation coefficients.

Everything is a trace against the density matrix: joint probabilities are
``Tr[rho (F_m1 x F_m2 x ...)]`` and correlation coefficients are
``Tr[rho (R_1 x R_2 x ...)]`` with ``R_k = sum_m lambda_m F_m``.  Label
vectors may differ from particle to particle.
"""

from __future__ import annotations

import itertools
import string
from collections.abc import Mapping
from dataclasses import dataclass
from functools import lru_cache
from typing import NamedTuple, Sequence

import numpy as np

from . import linalg
from .config import DEFAULT, Tolerances
from .errors import NumericalError, UsageError
from .spin import Spin, SpinObservable, as_direction, as_spin, eigenprojectors, labeled_observable
from .states import DensityMatrix, StateVector, clebsch_gordan_singlet, density


def _as_density(state) -> DensityMatrix:
    if isinstance(state, StateVector):
        return density(state)
    if isinstance(state, DensityMatrix):
        return state
    raise UsageError(f"expected a StateVector or DensityMatrix, got {type(state).__name__}")


def _spins_for(state: DensityMatrix, spins) -> list[Spin]:
    if spins is None:
        spins = [Spin(d - 1) for d in state.dims]
    elif isinstance(spins, (Spin, int, float, str)) or not isinstance(spins, Sequence):
        spins = [spins] * state.n_particles
    spins = [as_spin(j) for j in spins]
    if tuple(s.dim for s in spins) != state.dims:
        raise UsageError(
            f"spins {[str(s) for s in spins]} do not match particle dimensions {state.dims}"
        )
    return spins


@dataclass(frozen=True)
class JointProbabilityTable(Mapping):
    """Outcome tuples ``(m1, ..., mn)`` mapped to Born probabilities."""

    outcomes: tuple[tuple[float, ...], ...]
    probabilities: np.ndarray

    def __getitem__(self, key):
        try:
            return float(self.probabilities[self.outcomes.index(tuple(float(m) for m in key))])
        except ValueError:
            raise KeyError(key) from None

    def __iter__(self):
        return iter(self.outcomes)

    def __len__(self):
        return len(self.outcomes)

    def total(self) -> float:
        return float(np.sum(self.probabilities))

    def expectation(self, labels: Sequence[Sequence[float]], spins: Sequence[Spin]) -> float:
        """``sum over outcomes of prod_k label_k(m_k) * P(m)``."""
        lookup = [dict(zip(s.m_values(), lab)) for s, lab in zip(spins, labels)]
        return float(sum(
            np.prod([lookup[k][m] for k, m in enumerate(out)]) * p
            for out, p in zip(self.outcomes, self.probabilities)
        ))


def joint_probabilities(state, dirs, spins=None, *, clamp: bool = True,
                        tol: Tolerances = DEFAULT) -> JointProbabilityTable:
    """Probabilities of every outcome tuple when particle k is measured along ``dirs[k]``.

    ``clamp=False`` returns the raw traces (useful for cancellation diagnostics);
    otherwise entries are clamped to [0, 1] after checking they lie within
    ``tol.probability_slack`` of that interval.
    """
    rho = _as_density(state)
    spins = _spins_for(rho, spins)
    dirs = [as_direction(d) for d in dirs]
    if len(dirs) != rho.n_particles:
        raise UsageError(f"{rho.n_particles} particles but {len(dirs)} directions")

    n = rho.n_particles
    letters = iter(string.ascii_letters)
    row = [next(letters) for _ in range(n)]
    col = [next(letters) for _ in range(n)]
    out = [next(letters) for _ in range(n)]
    # P[m..] = sum rho[i.., j..] * prod_k F_k[m_k][j_k, i_k]
    subs = "".join(row) + "".join(col)
    operands = [rho.rho.reshape(rho.dims + rho.dims)]
    for k in range(n):
        subs += "," + out[k] + col[k] + row[k]
        operands.append(np.stack(eigenprojectors(spins[k], dirs[k], tol)))
    probs = np.einsum(subs + "->" + "".join(out), *operands, optimize=True)

    if np.max(np.abs(probs.imag)) > tol.imaginary_residue:
        raise NumericalError("joint probabilities carry an imaginary residue")
    probs = probs.real.reshape(-1)
    if clamp:
        if probs.min() < -tol.probability_slack or probs.max() > 1 + tol.probability_slack:
            raise NumericalError(f"probability outside [0, 1]: {probs.min()!r}, {probs.max()!r}")
        probs = np.clip(probs, 0.0, 1.0)
    outcomes = tuple(itertools.product(*(s.m_values() for s in spins)))
    return JointProbabilityTable(outcomes, probs)


@dataclass(frozen=True)
class CorrelationQuery:
    state: DensityMatrix
    observables: tuple[SpinObservable, ...]

    def __post_init__(self):
        state = _as_density(self.state)
        obs = tuple(self.observables)
        if tuple(o.dim for o in obs) != state.dims:
            raise UsageError(
                f"observable dimensions {[o.dim for o in obs]} do not match state dims {state.dims}"
            )
        object.__setattr__(self, "state", state)
        object.__setattr__(self, "observables", obs)

    @classmethod
    def build(cls, state, dirs, labels=None, spins=None) -> "CorrelationQuery":
        """Assemble a query from directions and labels.

        ``labels`` is either one label vector shared by all particles, a list
        with one vector per particle, or ``None`` for the spin values.
        """
        rho = _as_density(state)
        spins = _spins_for(rho, spins)
        dirs = list(dirs)
        if len(dirs) != rho.n_particles:
            raise UsageError(f"{rho.n_particles} particles but {len(dirs)} directions")
        if labels is None or all(x is not None and np.ndim(x) == 0 for x in labels):
            labels = [labels] * rho.n_particles
        if len(labels) != rho.n_particles:
            raise UsageError(f"{rho.n_particles} particles but {len(labels)} label vectors")
        obs = tuple(labeled_observable(s, d, lab) for s, d, lab in zip(spins, dirs, labels))
        return cls(rho, obs)


def correlation(query: CorrelationQuery, tol: Tolerances = DEFAULT) -> float:
    """``E = Tr[rho (R_1 x ... x R_n)]``.

    Raises ``NumericalError`` if the trace has an imaginary part above
    ``tol.imaginary_residue``; that only happens when an operator or the
    state is built in an inconsistent basis.
    """
    op = linalg.kron_all(o.matrix for o in query.observables)
    value = linalg.trace(linalg.matmul(query.state.rho, op))
    if abs(value.imag) > tol.imaginary_residue:
        raise NumericalError(f"correlation has imaginary residue {value.imag!r}")
    return value.real


def correlation_of(state, dirs, labels=None, spins=None) -> float:
    return correlation(CorrelationQuery.build(state, dirs, labels, spins))


class ParityResult(NamedTuple):
    E: float
    p_even: float
    p_odd: float


def parity_correlation(state, dirs) -> ParityResult:
    """Even/odd counts of "-" outcomes for four spin-1/2 particles; ``E = P_even - P_odd``."""
    rho = _as_density(state)
    if rho.dims != (2, 2, 2, 2):
        raise UsageError(f"parity correlation needs four qubits, got dims {rho.dims}")
    table = joint_probabilities(rho, dirs, clamp=False)
    p_even = p_odd = 0.0
    for out, p in zip(table.outcomes, table.probabilities):
        if sum(m < 0 for m in out) % 2 == 0:
            p_even += p
        else:
            p_odd += p
    return ParityResult(float(p_even - p_odd), float(p_even), float(p_odd))


def correlation_general_j(j, dirs) -> float:
    """Spin-value correlation of the spin-j singlet along two directions.

    Equals ``-(j (j + 1) / 3) * (a . b)`` for unit vectors ``a``, ``b``.
    """
    spin = as_spin(j)
    if len(dirs) != 2:
        raise UsageError("need exactly two directions")
    return correlation_of(_singlet_density(spin.two_j), dirs, None, [spin, spin])


@lru_cache(maxsize=None)
def _singlet_density(two_j: int) -> DensityMatrix:
    return density(clebsch_gordan_singlet(Spin(two_j)))
