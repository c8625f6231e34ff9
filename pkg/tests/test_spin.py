import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from sbmap.errors import InvalidState
from sbmap.spin import (SX, SY, SZ, SpinSystem, bloch, check_density, devectorize, eigendecompose,
                        pauli_basis, step_propagator, vectorize)

reals = st.floats(-5, 5)


def test_eigendecompose_diagonal():
    e = eigendecompose(SpinSystem(0.0, 1.0))
    assert e.energies.tolist() == [1.0, -1.0]
    assert np.array_equal(e.states, np.eye(2))


def test_eigendecompose_values():
    e = eigendecompose(SpinSystem(3.0, 4.0))
    assert e.energies == pytest.approx([5.0, -5.0], abs=1e-12)
    e = eigendecompose(SpinSystem(1.0, 0.0))
    r = 1 / math.sqrt(2)
    assert e.states[:, 0] == pytest.approx([r, r])
    assert e.states[:, 1] == pytest.approx([r, -r])


def test_degenerate_hamiltonian():
    e = eigendecompose(SpinSystem(0.0, 0.0))
    assert e.energies.tolist() == [0.0, 0.0]
    assert np.array_equal(e.states, np.eye(2))


@given(d=reals, w=reals)
def test_eigensystem_invariants(d, w):
    s = SpinSystem(d, w)
    e = eigendecompose(s)
    E = math.hypot(d, w)
    assert e.energies == pytest.approx([E, -E], abs=1e-12)
    assert np.max(np.abs(e.states.conj().T @ e.states - np.eye(2))) < 1e-12
    assert np.max(np.abs(e.reconstruct() - s.hamiltonian)) < 1e-12
    assert np.all(e.states[0].real >= 0) and np.all(e.states[0].imag == 0)


def test_step_propagator_examples():
    assert np.allclose(step_propagator(SpinSystem(0.3, 0.8), 0.0).matrix, np.eye(2))
    m = step_propagator(SpinSystem(0.0, 1.0), math.pi / 2).matrix
    assert np.max(np.abs(m - np.diag([-1j, 1j]))) < 1e-15
    for dt in (0.1, 0.77, 2.5):
        m = step_propagator(SpinSystem(3.0, 4.0), dt).matrix
        assert np.max(np.abs(m.conj().T @ m - np.eye(2))) < 1e-12
        assert np.trace(m) == pytest.approx(2 * math.cos(5 * dt), abs=1e-12)


@given(d=reals, w=reals, t1=st.floats(0, 3), t2=st.floats(0, 3))
def test_propagator_group_property(d, w, t1, t2):
    s = SpinSystem(d, w)
    a = step_propagator(s, t1).matrix @ step_propagator(s, t2).matrix
    assert np.max(np.abs(a - step_propagator(s, t1 + t2).matrix)) < 1e-12
    m = step_propagator(s, t1).matrix
    assert np.max(np.abs(m.conj().T @ m - np.eye(2))) < 1e-12


def test_pauli_basis(rng):
    G = pauli_basis()
    assert np.trace(G[0]) == pytest.approx(math.sqrt(2))
    gram = np.array([[np.trace(a.conj().T @ b) for b in G] for a in G])
    assert np.max(np.abs(gram - np.eye(4))) < 1e-14
    a = rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2))
    A = a + a.conj().T
    assert np.allclose(sum(g * np.trace(g.conj().T @ A) for g in G), A, atol=1e-14)


def test_vectorize(rng):
    assert vectorize(np.eye(2) / 2).tolist() == [0.5, 0, 0, 0.5]
    assert vectorize(np.array([[0, 1], [0, 0]])).tolist() == [0, 1, 0, 0]
    r = rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2))
    assert np.array_equal(devectorize(vectorize(r)), r)
    assert np.linalg.norm(vectorize(r)) == pytest.approx(np.linalg.norm(r, "fro"))


def test_bloch():
    assert bloch(np.diag([1, 0])) == pytest.approx((0, 0, 1))
    assert bloch(np.eye(2) / 2) == pytest.approx((0, 0, 0))
    assert bloch((np.eye(2) + SX / 2) / 2) == pytest.approx((0.5, 0, 0))
    with pytest.raises(InvalidState):
        bloch(np.eye(2))


def test_check_density():
    with pytest.raises(InvalidState):
        check_density(np.array([[1, 1], [0, 0]]))
    with pytest.raises(InvalidState):
        check_density(np.diag([1.5, -0.5]))
    with pytest.raises(InvalidState):
        check_density(np.eye(3) / 3)
    assert check_density((np.eye(2) + SY / 3) / 2) is not None
    assert SZ[1, 1] == -1
