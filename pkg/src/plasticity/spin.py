"""Spin-j operators along arbitrary directions and their labeled observables.

Basis convention: index ``i`` of a spin-j factor is the Jz eigenstate with
``m = j - i``, so ``|+j>`` is ``(1, 0, ..., 0)``.  Label vectors, on the
other hand, are written in ascending ``m`` (``lambda_-j`` first).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

import numpy as np

from . import linalg
from .config import DEFAULT, Tolerances
from .errors import NumericalError, UsageError

MAX_TWO_J = 25


@dataclass(frozen=True, order=True)
class Spin:
    """Spin magnitude stored as the integer ``2j``."""

    two_j: int

    def __post_init__(self):
        if not isinstance(self.two_j, (int, np.integer)) or self.two_j < 1:
            raise UsageError(f"two_j must be a positive integer, got {self.two_j!r}")
        if self.two_j > MAX_TWO_J:
            raise UsageError(f"j = {self.two_j}/2 exceeds the supported maximum 25/2")

    @classmethod
    def of(cls, j) -> "Spin":
        """Build from ``j`` given as int, float, Fraction, str ("3/2") or Spin."""
        if isinstance(j, Spin):
            return j
        two_j = Fraction(j) * 2
        if two_j.denominator != 1:
            raise UsageError(f"j must be a multiple of 1/2, got {j!r}")
        return cls(int(two_j))

    @property
    def j(self) -> Fraction:
        return Fraction(self.two_j, 2)

    @property
    def dim(self) -> int:
        return self.two_j + 1

    def m_values(self) -> tuple[float, ...]:
        """Magnetic quantum numbers in ascending order."""
        return tuple((k - self.two_j) / 2 for k in range(0, 2 * self.two_j + 1, 2))

    def basis_index(self, m: float) -> int:
        """Row/column index of ``|m>`` in the descending-m basis."""
        i = round(self.two_j / 2 - m)
        if not 0 <= i < self.dim or abs(self.two_j / 2 - m - i) > 1e-9:
            raise UsageError(f"m = {m} is not a valid projection for j = {self.j}")
        return i

    def __str__(self):
        return str(self.j)


def as_spin(j) -> Spin:
    return Spin.of(j)


@dataclass(frozen=True)
class Direction:
    """Polar/azimuthal angles in radians, normalized to theta in [0, pi], phi in [0, 2 pi).

    Out-of-range input is folded onto the same unit vector: ``theta`` is
    reflected through the pole (which adds pi to ``phi``) and ``phi`` is
    wrapped.
    """

    theta: float = 0.0
    phi: float = 0.0

    def __post_init__(self):
        theta, phi = float(self.theta), float(self.phi)
        if not (math.isfinite(theta) and math.isfinite(phi)):
            raise UsageError("direction angles must be finite")
        theta = math.fmod(theta, 2 * math.pi)
        if theta < 0:
            theta += 2 * math.pi
        if theta > math.pi:
            theta = 2 * math.pi - theta
            phi += math.pi
        phi = math.fmod(phi, 2 * math.pi)
        if phi < 0:
            phi += 2 * math.pi
        if phi >= 2 * math.pi:
            phi = 0.0
        object.__setattr__(self, "theta", theta)
        object.__setattr__(self, "phi", phi)

    @classmethod
    def on_meridian(cls, angle: float) -> "Direction":
        """Direction at ``angle`` along the great circle through z and +x."""
        return cls(angle, 0.0)

    def unit_vector(self) -> np.ndarray:
        st = math.sin(self.theta)
        return np.array([st * math.cos(self.phi), st * math.sin(self.phi), math.cos(self.theta)])


def as_direction(d) -> Direction:
    if isinstance(d, Direction):
        return d
    theta, phi = d
    return Direction(theta, phi)


def _readonly(a: np.ndarray) -> np.ndarray:
    a.setflags(write=False)
    return a


@lru_cache(maxsize=None)
def _components(two_j: int) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    j = two_j / 2
    d = two_j + 1
    m = j - np.arange(d)
    raise_op = np.zeros((d, d), dtype=np.complex128)
    for i in range(1, d):
        raise_op[i - 1, i] = math.sqrt(j * (j + 1) - m[i] * (m[i] + 1))
    jx = (raise_op + raise_op.T) / 2
    jy = (raise_op - raise_op.T) / 2j
    jz = np.diag(m).astype(np.complex128)
    return _readonly(jx), _readonly(jy), _readonly(jz)


def spin_component_matrices(j) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Jx, Jy, Jz (units of hbar) in the descending-m Jz eigenbasis."""
    return _components(as_spin(j).two_j)


def spin_operator(j, direction) -> np.ndarray:
    """``S_j(theta, phi) = sin(theta)cos(phi) Jx + sin(theta)sin(phi) Jy + cos(theta) Jz``."""
    jx, jy, jz = spin_component_matrices(j)
    nx, ny, nz = as_direction(direction).unit_vector()
    return nx * jx + ny * jy + nz * jz


@lru_cache(maxsize=8192)
def _projectors(two_j: int, theta: float, phi: float, match_tol: float) -> tuple[np.ndarray, ...]:
    spin = Spin(two_j)
    es = linalg.eigh(spin_operator(spin, Direction(theta, phi)))
    out = []
    for k, m in enumerate(spin.m_values()):
        # eigh sorts ascending, so slot k must carry eigenvalue m
        if abs(es.eigenvalues[k] - m) > match_tol:
            raise NumericalError(
                f"no eigenvalue within {match_tol} of m = {m} (got {es.eigenvalues[k]!r})"
            )
        v = es.eigenvectors[:, k]
        out.append(_readonly(np.outer(v, v.conj())))
    return tuple(out)


def eigenprojectors(j, direction, tol: Tolerances = DEFAULT) -> tuple[np.ndarray, ...]:
    """Rank-one projectors ``F_m(theta, phi)`` ordered by ascending m."""
    spin = as_spin(j)
    d = as_direction(direction)
    return _projectors(spin.two_j, d.theta, d.phi, tol.eigenvalue_match)


def spin_labels(j) -> tuple[float, ...]:
    """The labels that turn a labeled observable back into the spin operator."""
    return as_spin(j).m_values()


KS_LABELS = (1.0, 0.0, 1.0)
KS_INVERTED_LABELS = (0.0, 1.0, 0.0)


def _check_labels(spin: Spin, labels) -> tuple[float, ...]:
    labels = tuple(float(x) for x in labels)
    if len(labels) != spin.dim:
        raise UsageError(f"spin {spin.j} needs {spin.dim} labels, got {len(labels)}")
    if not all(math.isfinite(x) for x in labels):
        raise UsageError("labels must be finite")
    return labels


@dataclass(frozen=True)
class SpinObservable:
    """Labeled one-particle observable ``sum_m labels[m] F_m(direction)``."""

    spin: Spin
    direction: Direction
    labels: tuple[float, ...]
    matrix: np.ndarray = field(repr=False, compare=False)
    projectors: tuple[np.ndarray, ...] = field(repr=False, compare=False)

    @property
    def dim(self) -> int:
        return self.spin.dim

    def projector(self, m: float) -> np.ndarray:
        try:
            k = self.spin.m_values().index(float(m))
        except ValueError:
            raise UsageError(f"m = {m} is not a valid projection for j = {self.spin.j}") from None
        return self.projectors[k]

    def outcomes(self) -> tuple[tuple[float, float], ...]:
        """``(m, label)`` pairs in ascending m."""
        return tuple(zip(self.spin.m_values(), self.labels))


def labeled_observable(j, direction, labels=None, tol: Tolerances = DEFAULT) -> SpinObservable:
    """Attach real outcome labels (ascending m) to the spin measurement along ``direction``.

    ``labels=None`` means the spin values themselves, reproducing
    :func:`spin_operator`.
    """
    spin = as_spin(j)
    d = as_direction(direction)
    labels = spin.m_values() if labels is None else _check_labels(spin, labels)
    projs = eigenprojectors(spin, d, tol)
    matrix = sum(lam * f for lam, f in zip(labels, projs))
    return SpinObservable(spin, d, labels, _readonly(np.asarray(matrix)), projs)


def ks_observable(direction, inverted: bool = False) -> SpinObservable:
    """Spin-1 observable with labels (1, 0, 1), i.e. ``I - F_0``; ``inverted`` gives (0, 1, 0)."""
    return labeled_observable(1, direction, KS_INVERTED_LABELS if inverted else KS_LABELS)



def wigner_small_d(j, beta: float) -> np.ndarray:
    """``d[m', m] = <m'| exp(-i beta Jy) |m>`` from Wigner's factorial sum, descending-m basis.

    Independent of the eigensolver; used as a cross-check on projectors.
    """
    spin = as_spin(j)
    tj = spin.two_j
    f = math.factorial
    c, s = math.cos(beta / 2), math.sin(beta / 2)
    d = np.zeros((spin.dim, spin.dim))
    for a in range(spin.dim):
        for b in range(spin.dim):
            # a = j - m', b = j - m
            jpm1, jmm1 = tj - a, a  # j + m', j - m'
            jpm2, jmm2 = tj - b, b  # j + m, j - m
            diff = b - a  # m' - m
            norm = math.sqrt(f(jpm1) * f(jmm1) * f(jpm2) * f(jmm2))
            total = 0.0
            for k in range(max(0, -diff), min(jpm2, jmm1) + 1):
                den = f(jpm2 - k) * f(k) * f(diff + k) * f(jmm1 - k)
                total += (-1) ** (diff + k) / den * c ** (jpm2 + jmm1 - 2 * k) * s ** (diff + 2 * k)
            d[a, b] = norm * total
    return d


def rotation_projectors(j, direction) -> tuple[np.ndarray, ...]:
    """``F_m = U |m><m| U^H`` with ``U = exp(-i phi Jz) exp(-i theta Jy)``, ascending m."""
    spin = as_spin(j)
    dirn = as_direction(direction)
    m_desc = spin.two_j / 2 - np.arange(spin.dim)
    u = np.exp(-1j * dirn.phi * m_desc)[:, None] * wigner_small_d(spin, dirn.theta)
    out = []
    for m in spin.m_values():
        col = u[:, spin.basis_index(m)]
        out.append(np.outer(col, col.conj()))
    return tuple(out)
