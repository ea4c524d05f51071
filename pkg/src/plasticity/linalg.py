"""Dense complex linear algebra for the small operators used throughout.

Matrices are plain ``numpy`` complex arrays.  Products, Kronecker products
and traces defer to numpy; the Hermitian eigensolver is a cyclic Jacobi
iteration, which is all a 16x16 problem needs and keeps the output
deterministic (fixed sweep order, fixed eigenvector phase).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import reduce

import numpy as np

from .config import DEFAULT, Tolerances
from .errors import NumericalError, UsageError


def as_matrix(a, name: str = "matrix") -> np.ndarray:
    """Validate and return ``a`` as a square complex128 array."""
    m = np.asarray(a, dtype=np.complex128)
    if m.ndim != 2 or m.shape[0] != m.shape[1] or m.shape[0] < 1:
        raise UsageError(f"{name} must be a non-empty square matrix, got shape {m.shape}")
    if not np.all(np.isfinite(m)):
        raise UsageError(f"{name} has non-finite entries")
    return m


def is_hermitian(a, tol: float | None = None) -> bool:
    m = as_matrix(a)
    tol = DEFAULT.hermitian if tol is None else tol
    scale = max(1.0, float(np.max(np.abs(m))))
    return bool(np.max(np.abs(m - m.conj().T)) <= tol * scale)


def matmul(a, b) -> np.ndarray:
    a, b = as_matrix(a, "a"), as_matrix(b, "b")
    if a.shape != b.shape:
        raise UsageError(f"dimension mismatch: {a.shape[0]} vs {b.shape[0]}")
    return a @ b


def kron(a, b, *, max_dim: int | None = None) -> np.ndarray:
    """Kronecker product with the first factor as the slow index."""
    a, b = as_matrix(a, "a"), as_matrix(b, "b")
    max_dim = DEFAULT.max_dim if max_dim is None else max_dim
    dim = a.shape[0] * b.shape[0]
    if dim > max_dim:
        raise UsageError(f"Kronecker product dimension {dim} exceeds {max_dim}")
    return np.kron(a, b)


def kron_all(factors) -> np.ndarray:
    factors = list(factors)
    if not factors:
        raise UsageError("kron_all needs at least one factor")
    return reduce(kron, factors)


def trace(a) -> complex:
    return complex(np.trace(as_matrix(a)))


@dataclass(frozen=True)
class EigenSystem:
    """Eigenvalues in ascending order with matching orthonormal eigenvector columns."""

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray
    sweeps: int = 0

    def __iter__(self):
        yield self.eigenvalues
        yield self.eigenvectors

    def vector(self, k: int) -> np.ndarray:
        return self.eigenvectors[:, k]

    def reconstruct(self) -> np.ndarray:
        v = self.eigenvectors
        return (v * self.eigenvalues) @ v.conj().T


def _fix_phase(v: np.ndarray) -> np.ndarray:
    # largest-magnitude component made real-positive, ties go to the lowest index
    mags = np.abs(v)
    k = int(np.flatnonzero(mags >= mags.max() - 1e-12)[0])
    return v * (abs(v[k]) / v[k])


def eigh(a, tol: Tolerances = DEFAULT) -> EigenSystem:
    """Cyclic Jacobi diagonalization of a Hermitian matrix.

    Each rotation first removes the phase of the pivot ``a[p, q]`` and then
    applies the real Givens rotation that annihilates it.  Sweeps visit the
    upper triangle row by row until the off-diagonal Frobenius norm falls to
    round-off level.

    Raises ``UsageError`` for non-Hermitian input and ``NumericalError`` when
    ``tol.max_sweeps`` sweeps do not converge.
    """
    m = as_matrix(a)
    if not is_hermitian(m, tol.hermitian):
        raise UsageError("eigh requires a Hermitian matrix")
    n = m.shape[0]
    A = 0.5 * (m + m.conj().T)
    V = np.eye(n, dtype=np.complex128)
    frob = float(np.linalg.norm(A))
    target = 4.0 * n * np.finfo(float).eps * frob

    sweeps = 0
    while n > 1 and frob > 0.0:
        off = float(np.linalg.norm(A - np.diag(np.diag(A))))
        if off <= target:
            break
        if sweeps >= tol.max_sweeps:
            raise NumericalError(f"Jacobi eigensolver did not converge in {tol.max_sweeps} sweeps")
        sweeps += 1
        rotated = False
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = A[p, q]
                r = abs(apq)
                if r <= 1e-300 or r <= 1e-18 * frob:
                    continue
                rotated = True
                app, aqq = A[p, p].real, A[q, q].real
                phase = apq / r
                theta = (aqq - app) / (2.0 * r)
                t = math.copysign(1.0, theta) / (abs(theta) + math.sqrt(theta * theta + 1.0))
                c = 1.0 / math.sqrt(t * t + 1.0)
                s = t * c
                # G acts on columns p, q: A <- G^H A G
                g = np.array([[c, s], [-s * phase.conjugate(), c * phase.conjugate()]])
                cols = A[:, [p, q]] @ g
                A[:, p], A[:, q] = cols[:, 0], cols[:, 1]
                rows = g.conj().T @ A[[p, q], :]
                A[p, :], A[q, :] = rows[0], rows[1]
                A[p, q] = A[q, p] = 0.0
                A[p, p] = A[p, p].real
                A[q, q] = A[q, q].real
                vc = V[:, [p, q]] @ g
                V[:, p], V[:, q] = vc[:, 0], vc[:, 1]
        if not rotated:
            break

    w = np.diag(A).real.copy()
    order = np.argsort(w, kind="stable")
    w = w[order]
    V = V[:, order]
    V = np.column_stack([_fix_phase(V[:, k]) for k in range(n)])
    return EigenSystem(w, V, sweeps)


def eigenspace_projectors(a, tol: Tolerances = DEFAULT) -> list[tuple[float, np.ndarray]]:
    """Group (near-)degenerate eigenvalues and return ``(eigenvalue, projector)`` pairs."""
    es = eigh(a, tol)
    groups: list[list[int]] = []
    for k, lam in enumerate(es.eigenvalues):
        if groups and abs(lam - es.eigenvalues[groups[-1][0]]) <= tol.degeneracy:
            groups[-1].append(k)
        else:
            groups.append([k])
    out = []
    for g in groups:
        v = es.eigenvectors[:, g]
        out.append((float(np.mean(es.eigenvalues[g])), v @ v.conj().T))
    return out
