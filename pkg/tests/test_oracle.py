import math

import numpy as np
import pytest

from sbmap.bath import DiscretizedBath, build_kernels
from sbmap.errors import InvalidArgument, ResourceLimit
from sbmap.limits import pure_dephasing_density
from sbmap.oracle import (TruncatedEnvironment, brute_force_G, exact_reduced_density, full_propagator,
                          thermal_state, total_hamiltonian)
from sbmap.pathsum import PathString, f_weight, g_weight
from sbmap.spin import NAMED_STATES, SpinSystem, step_propagator

from conftest import ln2_beta, random_density


def test_dimension_ceiling():
    env = TruncatedEnvironment(((1.0, 0.1), (2.0, 0.1)), 4)
    assert env.dim == 50
    with pytest.raises(ResourceLimit):
        TruncatedEnvironment(((1.0, 0.1),) * 4, 9)
    with pytest.raises(ResourceLimit):
        TruncatedEnvironment(((1.0, 0.1),), 40, max_dim=64)
    with pytest.raises(InvalidArgument):
        TruncatedEnvironment(((1.0, 0.1),), 0)


def test_thermal_state_vacuum():
    w = thermal_state(TruncatedEnvironment(((1.0, 0.2),), 6)).weights
    assert w[0] == 1 and np.all(w[1:] == 0)


def test_thermal_state_ln2():
    env = TruncatedEnvironment(((1.0, 0.2),), 40, beta=ln2_beta())
    w = thermal_state(env).weights
    assert abs(w.sum() - 1) <= 1e-14
    assert abs(np.dot(np.arange(41), w) - 1) <= 1e-8


def test_thermal_state_two_modes_is_product():
    env = TruncatedEnvironment(((1.0, 0.2), (0.5, 0.1)), 5, beta=1.5)
    w = thermal_state(env).weights.reshape(6, 6)
    a = np.exp(-1.5 * np.arange(6)); a /= a.sum()
    b = np.exp(-0.75 * np.arange(6)); b /= b.sum()
    assert np.allclose(w, np.outer(a, b), atol=1e-15)


def test_zero_coupling_is_free_evolution(rng):
    system = SpinSystem(0.7, 0.4)
    env = TruncatedEnvironment(((1.0, 0.0), (1.5, 0.0)), 3, beta=1.0)
    rho0 = random_density(rng)
    t = 1.3
    U = step_propagator(system, t).matrix
    got = exact_reduced_density(system, env, rho0, t)
    assert np.max(np.abs(got - U @ rho0 @ U.conj().T)) <= 1e-12


@pytest.mark.parametrize("beta", [math.inf, 1.0])
def test_dephasing_matches_closed_form(beta):
    bath = DiscretizedBath.from_modes([(1.0, 0.3)], beta)
    env = TruncatedEnvironment.from_bath(bath, 40)
    system = SpinSystem(0.0, 0.8)
    times = [0.5, 1.7, 3.0]
    got = exact_reduced_density(system, env, NAMED_STATES["plus"], times)
    for t, rho in zip(times, got):
        ref = pure_dephasing_density(0.8, -0.8, bath, NAMED_STATES["plus"], t)
        assert np.max(np.abs(rho - ref)) <= 1e-6


def test_cutoff_convergence():
    bath = DiscretizedBath.from_modes([(1.0, 0.2)])
    system = SpinSystem(0.5, 1.0)
    a = exact_reduced_density(system, TruncatedEnvironment.from_bath(bath, 8), NAMED_STATES["plus"], 1.0)
    b = exact_reduced_density(system, TruncatedEnvironment.from_bath(bath, 16), NAMED_STATES["plus"], 1.0)
    assert np.max(np.abs(a - b)) < 1e-8


def test_propagator_unitary_and_trace(rng):
    system = SpinSystem(0.5, 1.0)
    env = TruncatedEnvironment(((1.0, 0.3), (2.0, 0.2)), 5, beta=0.9)
    U = full_propagator(system, env, 0.8)
    assert np.max(np.abs(U.conj().T @ U - np.eye(env.dim))) <= 1e-10
    H = total_hamiltonian(system, env)
    assert np.max(np.abs(H - H.conj().T)) == 0
    rho = exact_reduced_density(system, env, random_density(rng), [0.3, 2.0])
    for r in rho:
        assert abs(np.trace(r) - 1) <= 1e-12


def test_time_list_matches_scalar():
    system = SpinSystem(0.5, 1.0)
    env = TruncatedEnvironment(((1.0, 0.3),), 6)
    many = exact_reduced_density(system, env, NAMED_STATES["zero"], [0.4, 1.1])
    one = exact_reduced_density(system, env, NAMED_STATES["zero"], 1.1)
    assert many.shape == (2, 2, 2)
    assert np.allclose(many[1], one, atol=1e-14)


def test_brute_force_G_zero_coupling():
    env = TruncatedEnvironment(((1.0, 0.0),), 10)
    assert brute_force_G(PathString(3, 2), PathString(1, 2), env, 0.5) == pytest.approx(1, abs=1e-15)


def test_brute_force_G_uniform_identity():
    bath = DiscretizedBath.from_modes([(1.0, 0.3)], math.log(3.0))
    env = TruncatedEnvironment.from_bath(bath, 40)
    k = build_kernels(bath, 0.5, 3)
    for v in (1j, -1j):
        l = PathString.uniform(v, 3)
        F = f_weight(k, l)
        assert abs(F * np.conj(F) * brute_force_G(l, l, env, 0.5) - 1) <= 1e-6


def test_brute_force_G_matches_closed_form(rng):
    bath = DiscretizedBath.from_modes([(1.0, 0.3)], math.log(3.0))
    env = TruncatedEnvironment.from_bath(bath, 40)
    k = build_kernels(bath, 0.5, 3)
    for _ in range(10):
        a, b = rng.integers(0, 8, size=2)
        l, lp = PathString(int(a), 3), PathString(int(b), 3)
        ref = brute_force_G(l, lp, env, 0.5)
        assert abs(g_weight(k, l, lp) - ref) <= 1e-6 * abs(ref)


def test_brute_force_G_errors():
    env = TruncatedEnvironment(((1.0, 0.3), (2.0, 0.1)), 3)
    with pytest.raises(InvalidArgument):
        brute_force_G(PathString(0, 1), PathString(0, 1), env, 0.5)
    env1 = TruncatedEnvironment(((1.0, 0.3),), 3)
    with pytest.raises(InvalidArgument):
        brute_force_G(PathString(0, 1), PathString(0, 2), env1, 0.5)
