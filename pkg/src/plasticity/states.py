"""Singlet states: two-particle spin-j singlets and the two four-qubit singlets.

Particle 1 is the slowest-varying tensor index, consistent with
``numpy.kron``.  Within a factor, index ``i`` stands for ``m = j - i``.
Every constructed state has its global phase fixed so that the first
nonzero amplitude is real and positive.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import reduce

import numpy as np
from scipy.stats import qmc

from . import linalg
from .config import DEFAULT
from .errors import UsageError
from .spin import Direction, Spin, as_spin, spin_component_matrices


def fix_global_phase(amplitudes: np.ndarray, tol: float = 1e-12) -> np.ndarray:
    amps = np.asarray(amplitudes, dtype=np.complex128)
    nz = np.flatnonzero(np.abs(amps) > tol)
    if nz.size == 0:
        return amps.copy()
    a0 = amps[nz[0]]
    return amps * (abs(a0) / a0)


@dataclass(frozen=True)
class StateVector:
    dims: tuple[int, ...]
    amplitudes: np.ndarray = field(repr=False)
    name: str = ""

    def __post_init__(self):
        dims = tuple(int(d) for d in self.dims)
        amps = np.asarray(self.amplitudes, dtype=np.complex128).reshape(-1)
        if not dims or any(d < 1 for d in dims):
            raise UsageError(f"invalid particle dimensions {dims}")
        if amps.size != math.prod(dims):
            raise UsageError(f"{amps.size} amplitudes do not fit dimensions {dims}")
        if not np.all(np.isfinite(amps)):
            raise UsageError("amplitudes must be finite")
        amps.setflags(write=False)
        object.__setattr__(self, "dims", dims)
        object.__setattr__(self, "amplitudes", amps)

    @property
    def n_particles(self) -> int:
        return len(self.dims)

    @property
    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))

    def overlap(self, other: "StateVector") -> complex:
        return complex(np.vdot(self.amplitudes, other.amplitudes))

    def amplitude(self, *indices: int) -> complex:
        return complex(self.amplitudes[np.ravel_multi_index(indices, self.dims)])


def _normalized(dims, amps, name) -> StateVector:
    amps = np.asarray(amps, dtype=np.complex128)
    return StateVector(dims, fix_global_phase(amps / np.linalg.norm(amps)), name)


def basis_ket(spins, ms) -> np.ndarray:
    """Product basis vector ``|m1, m2, ...>`` for the given per-particle spins."""
    vecs = []
    for j, m in zip(spins, ms, strict=True):
        spin = as_spin(j)
        e = np.zeros(spin.dim, dtype=np.complex128)
        e[spin.basis_index(m)] = 1.0
        vecs.append(e)
    return reduce(np.kron, vecs)


def product_state(spins, ms, name: str = "") -> StateVector:
    spins = [as_spin(j) for j in spins]
    return StateVector(tuple(s.dim for s in spins), basis_ket(spins, ms), name or f"product{tuple(ms)}")


def clebsch_gordan_singlet(j) -> StateVector:
    """Total-spin-zero state of two spin-j particles.

    Sums ``|m> (x) |-m>`` weighted by the coupling coefficient
    ``<j m j -m | 0 0> = (-1)**(j - m) / sqrt(2j + 1)``.
    """
    spin = as_spin(j)
    d = spin.dim
    amps = np.zeros(d * d, dtype=np.complex128)
    for i in range(d):
        # m = j - i, partner -m sits at index d - 1 - i; j - m = i
        amps[i * d + (d - 1 - i)] = (-1) ** i / math.sqrt(d)
    return _normalized((d, d), amps, f"singlet(j={spin.j})")


def bell_singlet() -> StateVector:
    return clebsch_gordan_singlet(Spin(1))


def four_qubit_singlet(which: int) -> StateVector:
    """The two four-qubit singlets; ``which=2`` is the product of two Bell singlets."""
    half = [Spin(1)] * 4

    def ket(signs: str) -> np.ndarray:
        return basis_ket(half, [0.5 if c == "+" else -0.5 for c in signs])

    if which == 1:
        sym = [ket("+-+-"), ket("+--+"), ket("-++-"), ket("-+-+")]
        amps = (ket("++--") + ket("--++") - 0.5 * sum(sym)) / math.sqrt(3)
    elif which == 2:
        b = bell_singlet().amplitudes
        amps = np.kron(b, b)
    else:
        raise UsageError(f"four-qubit singlet selector must be 1 or 2, got {which!r}")
    return _normalized((2, 2, 2, 2), amps, f"four_qubit_singlet({which})")


@dataclass(frozen=True)
class DensityMatrix:
    rho: np.ndarray = field(repr=False)
    dims: tuple[int, ...]
    name: str = ""

    def __post_init__(self):
        rho = linalg.as_matrix(self.rho, "rho")
        dims = tuple(int(d) for d in self.dims)
        if rho.shape[0] != math.prod(dims):
            raise UsageError(f"density matrix of size {rho.shape[0]} does not fit dims {dims}")
        if not linalg.is_hermitian(rho):
            raise UsageError("density matrix must be Hermitian")
        rho = rho.copy()
        rho.setflags(write=False)
        object.__setattr__(self, "rho", rho)
        object.__setattr__(self, "dims", dims)

    @property
    def dim(self) -> int:
        return self.rho.shape[0]

    @property
    def n_particles(self) -> int:
        return len(self.dims)

    def trace(self) -> float:
        return linalg.trace(self.rho).real

    def purity(self) -> float:
        return linalg.trace(self.rho @ self.rho).real

    def min_eigenvalue(self) -> float:
        return float(linalg.eigh(self.rho).eigenvalues[0])


def density(psi: StateVector) -> DensityMatrix:
    """Pure-state density matrix ``|psi><psi|``."""
    if abs(psi.norm - 1.0) > DEFAULT.normalization:
        raise UsageError(f"state is not normalized (norm {psi.norm!r})")
    a = psi.amplitudes
    return DensityMatrix(np.outer(a, a.conj()), psi.dims, psi.name)


def sample_directions(n: int, seed: int = 42) -> list[Direction]:
    """Deterministic, roughly uniform directions on the sphere from a scrambled Halton sequence."""
    if n < 1:
        raise UsageError("need at least one direction")
    u = qmc.Halton(d=2, scramble=True, seed=seed).random(n)
    return [Direction(math.acos(1.0 - 2.0 * a), 2.0 * math.pi * b) for a, b in u]


@dataclass(frozen=True)
class UniquenessReport:
    passed: bool
    max_violation: float
    samples: int
    worst_direction: Direction | None
    worst_outcome: tuple[float, float] | None


def check_uniqueness(psi: StateVector, j=None, samples: int = 50, seed: int = 42,
                     tol: float = 1e-10) -> UniquenessReport:
    """Measure both particles along the same sampled directions and look for ``m2 != -m1`` weight."""
    from .correlate import joint_probabilities

    if psi.n_particles != 2 or psi.dims[0] != psi.dims[1]:
        raise UsageError("uniqueness check needs a two-particle state of equal dimensions")
    spin = as_spin(j) if j is not None else Spin(psi.dims[0] - 1)
    if spin.dim != psi.dims[0]:
        raise UsageError(f"j = {spin.j} does not match particle dimension {psi.dims[0]}")
    rho = density(psi)
    worst, worst_dir, worst_out = 0.0, None, None
    for d in sample_directions(samples, seed):
        table = joint_probabilities(rho, [d, d], [spin, spin], clamp=False)
        for (m1, m2), p in table.items():
            if m1 + m2 != 0 and p > worst:
                worst, worst_dir, worst_out = p, d, (m1, m2)
    return UniquenessReport(worst <= tol, worst, samples, worst_dir, worst_out)


def total_spin_squared(psi: StateVector) -> float:
    """``<psi| J_tot^2 |psi>`` with ``J_tot,a = sum_k J_a`` acting on particle k."""
    total = 0.0
    a = psi.amplitudes
    for axis in range(3):
        op = np.zeros((a.size, a.size), dtype=np.complex128)
        for k, d in enumerate(psi.dims):
            factors = [np.eye(dd) for dd in psi.dims]
            factors[k] = spin_component_matrices(Spin(d - 1))[axis]
            op += reduce(np.kron, factors)
        v = op @ a
        total += float(np.vdot(v, v).real)
    return total
