import itertools
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from plasticity.correlate import (
    CorrelationQuery,
    correlation,
    correlation_general_j,
    correlation_of,
    joint_probabilities,
    parity_correlation,
)
from plasticity.errors import UsageError
from plasticity.spin import KS_LABELS, Direction, Spin, eigenprojectors
from plasticity.states import bell_singlet, clebsch_gordan_singlet, density, four_qubit_singlet

theta = st.floats(0, math.pi)
phi = st.floats(0, 2 * math.pi)


def brute_table(psi, dirs):
    """Probabilities as |<m1..mn | psi>|^2 in the rotated product basis, one outcome at a time."""
    spins = [Spin(d - 1) for d in psi.dims]
    out = {}
    for idx in itertools.product(*(range(s.dim) for s in spins)):
        op = np.array([[1.0 + 0j]])
        for s, d, k in zip(spins, dirs, idx):
            op = np.kron(op, eigenprojectors(s, d)[k])
        a = psi.amplitudes
        out[tuple(s.m_values()[k] for s, k in zip(spins, idx))] = float(np.vdot(a, op @ a).real)
    return out


def test_bell_z_table():
    t = joint_probabilities(bell_singlet(), [Direction(), Direction()])
    assert t[(0.5, -0.5)] == pytest.approx(0.5) and t[(-0.5, 0.5)] == pytest.approx(0.5)
    assert t[(0.5, 0.5)] == 0 and t[(-0.5, -0.5)] == 0
    assert t.total() == pytest.approx(1)
    with pytest.raises(KeyError):
        t[(1, 1)]


def test_spin_three_half_equal_directions():
    d = Direction(0.8, 1.3)
    t = joint_probabilities(clebsch_gordan_singlet(1.5), [d, d])
    for (m1, m2), p in t.items():
        assert p == pytest.approx(0.25 if m1 == -m2 else 0.0, abs=1e-12)


@pytest.mark.parametrize("psi", [clebsch_gordan_singlet(1), clebsch_gordan_singlet(1.5),
                                 four_qubit_singlet(1)], ids=["j1", "j3/2", "q4"])
def test_table_matches_brute_force(psi, rng):
    dirs = [Direction(rng.uniform(0, math.pi), rng.uniform(0, 2 * math.pi)) for _ in psi.dims]
    t = joint_probabilities(psi, dirs)
    for k, p in brute_table(psi, dirs).items():
        assert t[k] == pytest.approx(p, abs=1e-12)


def test_correlation_equals_table_expectation(rng):
    psi = clebsch_gordan_singlet(1)
    dirs = [Direction(0.3, 0.1), Direction(2.0, 4.0)]
    labels = [tuple(rng.normal(size=3)), tuple(rng.normal(size=3))]
    t = joint_probabilities(psi, dirs)
    e = correlation_of(density(psi), dirs, labels)
    assert e == pytest.approx(t.expectation(labels, [Spin(2)] * 2), abs=1e-12)


def test_shared_and_per_particle_labels_agree():
    rho = density(clebsch_gordan_singlet(1))
    dirs = [Direction(0.4), Direction(1.2)]
    assert correlation_of(rho, dirs, KS_LABELS) == pytest.approx(
        correlation_of(rho, dirs, [KS_LABELS, KS_LABELS]), abs=1e-15)


def test_query_validation():
    rho = density(bell_singlet())
    with pytest.raises(UsageError):
        CorrelationQuery.build(rho, [Direction()])
    with pytest.raises(UsageError):
        CorrelationQuery.build(rho, [Direction()] * 2, spins=[1, 1])
    with pytest.raises(UsageError):
        CorrelationQuery.build(rho, [Direction()] * 2, [(1, -1), (1, -1), (1, -1)])
    q = CorrelationQuery.build(rho, [Direction()] * 2)
    assert correlation(q) == pytest.approx(-0.25)


def test_correlation_accepts_state_vector():
    assert correlation_of(bell_singlet(), [Direction(), Direction()], (-1, 1)) == pytest.approx(-1)


def test_parity_all_z():
    r = parity_correlation(four_qubit_singlet(1), [Direction()] * 4)
    assert r.p_even == pytest.approx(1, abs=1e-12) and r.E == pytest.approx(1, abs=1e-12)
    assert isinstance(r.E, float)
    with pytest.raises(UsageError):
        parity_correlation(bell_singlet(), [Direction()] * 2)


@settings(max_examples=40, deadline=None)
@given(ts=st.lists(theta, min_size=4, max_size=4), ps=st.lists(phi, min_size=4, max_size=4))
def test_parity_equals_product_correlation(ts, ps):
    dirs = [Direction(t, p) for t, p in zip(ts, ps)]
    for which in (1, 2):
        psi = four_qubit_singlet(which)
        r = parity_correlation(psi, dirs)
        assert r.p_even + r.p_odd == pytest.approx(1, abs=1e-12)
        assert r.E == pytest.approx(correlation_of(psi, dirs, (-1, 1)), abs=1e-12)


@settings(max_examples=40, deadline=None)
@given(t1=theta, t2=theta, p1=phi, p2=phi, two_j=st.integers(1, 5))
def test_general_j_law(t1, t2, p1, p2, two_j):
    a, b = Direction(t1, p1), Direction(t2, p2)
    j = two_j / 2
    want = -j * (j + 1) / 3 * float(a.unit_vector() @ b.unit_vector())
    assert correlation_general_j(j, [a, b]) == pytest.approx(want, abs=1e-12)


@settings(max_examples=30, deadline=None)
@given(t1=theta, t2=theta, p1=phi, p2=phi, shift=phi)
def test_rotation_invariance(t1, t2, p1, p2, shift):
    rho = density(clebsch_gordan_singlet(1))
    e = correlation_of(rho, [Direction(t1, p1), Direction(t2, p2)], KS_LABELS)
    e2 = correlation_of(rho, [Direction(t1, p1 + shift), Direction(t2, p2 + shift)], KS_LABELS)
    assert e == pytest.approx(e2, abs=1e-12)
