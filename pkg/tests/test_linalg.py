import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from plasticity import linalg
from plasticity.config import DEFAULT
from plasticity.errors import NumericalError, UsageError

from conftest import random_hermitian


def triple_loop(a, b):
    n = len(a)
    out = [[0j] * n for _ in range(n)]
    for i in range(n):
        for k in range(n):
            out[i][k] = sum(a[i][m] * b[m][k] for m in range(n))
    return np.array(out)


def test_matmul_matches_triple_loop(rng):
    a = rng.normal(size=(5, 5)) + 1j * rng.normal(size=(5, 5))
    b = rng.normal(size=(5, 5)) + 1j * rng.normal(size=(5, 5))
    assert np.allclose(linalg.matmul(a, b), triple_loop(a.tolist(), b.tolist()), atol=1e-13)


def test_matmul_shape_mismatch():
    with pytest.raises(UsageError, match="dimension mismatch"):
        linalg.matmul(np.eye(2), np.eye(3))


def test_as_matrix_rejects_non_square_and_nan():
    with pytest.raises(UsageError):
        linalg.as_matrix(np.ones((2, 3)))
    with pytest.raises(UsageError):
        linalg.as_matrix([[np.nan]])


def test_kron_layout_and_limit():
    a = np.array([[1, 2], [3, 4]])
    b = np.eye(2)
    k = linalg.kron(a, b)
    assert k[0, 2] == 2 and k[2, 0] == 3 and k[1, 3] == 2
    with pytest.raises(UsageError, match="exceeds"):
        linalg.kron(np.eye(64), np.eye(65))
    assert linalg.kron_all([np.eye(2)] * 4).shape == (16, 16)
    with pytest.raises(UsageError):
        linalg.kron_all([])


def test_trace_is_complex():
    assert linalg.trace(np.diag([1, 2j])) == 1 + 2j


@pytest.mark.parametrize("n", [1, 2, 3, 4, 6, 9, 16])
def test_eigh_reconstructs_and_is_orthonormal(rng, n):
    a = random_hermitian(rng, n)
    es = linalg.eigh(a)
    v = es.eigenvectors
    assert np.allclose(v.conj().T @ v, np.eye(n), atol=1e-12)
    assert np.max(np.abs(es.reconstruct() - a)) <= 1e-12 * max(1, np.abs(a).max())
    assert np.all(np.diff(es.eigenvalues) >= 0)


def test_eigh_matches_characteristic_polynomial_roots(rng):
    a = random_hermitian(rng, 4)
    roots = np.sort(np.roots(np.poly(a)).real)
    assert np.allclose(linalg.eigh(a).eigenvalues, roots, atol=1e-9)


def test_eigh_residual(rng):
    a = random_hermitian(rng, 7)
    w, v = linalg.eigh(a)
    assert np.max(np.abs(a @ v - v * w)) <= DEFAULT.eig_residual


def test_eigh_phase_convention(rng):
    v = linalg.eigh(random_hermitian(rng, 5)).eigenvectors
    for k in range(5):
        col = v[:, k]
        top = col[np.argmax(np.abs(col))]
        assert abs(top.imag) < 1e-14 and top.real > 0


def test_eigh_deterministic(rng):
    a = random_hermitian(rng, 6)
    x, y = linalg.eigh(a), linalg.eigh(a.copy())
    assert np.array_equal(x.eigenvalues, y.eigenvalues)
    assert np.array_equal(x.eigenvectors, y.eigenvectors)


def test_eigh_diagonal_and_zero():
    es = linalg.eigh(np.diag([3.0, -1.0, 2.0]))
    assert np.array_equal(es.eigenvalues, [-1.0, 2.0, 3.0])
    assert es.sweeps == 0
    z = linalg.eigh(np.zeros((3, 3)))
    assert np.array_equal(z.eigenvalues, np.zeros(3))


def test_eigh_rejects_non_hermitian():
    with pytest.raises(UsageError, match="Hermitian"):
        linalg.eigh([[0, 1], [0, 0]])


def test_eigh_reports_non_convergence(rng):
    with pytest.raises(NumericalError):
        linalg.eigh(random_hermitian(rng, 5), DEFAULT.with_overrides(max_sweeps=1))


def test_eigenspace_projectors_group_degeneracy():
    u = np.linalg.qr(np.arange(16).reshape(4, 4) + np.eye(4) * 5)[0]
    a = u @ np.diag([1.0, 1.0, 2.0, 5.0]) @ u.T
    groups = linalg.eigenspace_projectors(a)
    assert [round(x, 10) for x, _ in groups] == [1.0, 2.0, 5.0]
    p = groups[0][1]
    assert np.isclose(np.trace(p).real, 2.0)
    assert np.allclose(p @ p, p, atol=1e-12)
    assert np.allclose(sum(g[1] for g in groups), np.eye(4), atol=1e-12)


@settings(max_examples=60, deadline=None)
@given(n=st.integers(1, 8), seed=st.integers(0, 2**32 - 1), scale=st.sampled_from([1e-6, 1.0, 1e4]))
def test_eigh_property_against_numpy(n, seed, scale):
    a = random_hermitian(np.random.default_rng(seed), n, scale)
    w = linalg.eigh(a).eigenvalues
    assert np.allclose(w, np.linalg.eigvalsh(a), atol=1e-11 * scale * n, rtol=0)
