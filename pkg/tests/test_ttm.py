import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from sbmap.bath import BathSpec, DiscretizedBath, build_bath, build_kernels
from sbmap.errors import InvalidCutoff, InvalidInput
from sbmap.pathsum import DynamicalMap, compute_map
from sbmap.spin import NAMED_STATES, SpinSystem
from sbmap.ttm import learn_tensors, memory_diagnostic, propagate, reconstruct

from conftest import random_density

SYSTEM = SpinSystem(0.5, 1.0)


def maps_for(bath, dt, n, system=SYSTEM, kernels=None):
    k = build_kernels(bath, dt, n) if kernels is None else kernels
    return [compute_map(system, k.prefix(j), j) for j in range(1, n + 1)]


@pytest.fixture(scope="module")
def single_mode_maps():
    return maps_for(DiscretizedBath.from_modes([(1.0, 0.3)]), 0.25, 6)


def semigroup(phi1: DynamicalMap, n):
    return [DynamicalMap(np.linalg.matrix_power(phi1.matrix, j), phi1.dt, j) for j in range(1, n + 1)]


def test_single_map(single_mode_maps):
    T = learn_tensors(single_mode_maps[:1])
    assert T.cutoff == 1
    assert np.array_equal(T.tensors[0], single_mode_maps[0].matrix)


def test_T2_and_T3_explicit(single_mode_maps):
    P = [m.matrix for m in single_mode_maps]
    T = learn_tensors(single_mode_maps[:3]).tensors
    assert np.max(np.abs(T[1] - (P[1] - P[0] @ P[0]))) <= 1e-12
    assert np.max(np.abs(T[2] - (P[2] - T[0] @ P[1] - T[1] @ P[0]))) <= 1e-12


def test_reconstruction(single_mode_maps):
    T = learn_tensors(single_mode_maps)
    for n in range(1, 7):
        assert np.max(np.abs(reconstruct(T, n) - single_mode_maps[n - 1].matrix)) <= 1e-12


def test_semigroup_input_has_no_memory(single_mode_maps):
    T = learn_tensors(semigroup(single_mode_maps[0], 6))
    norms = memory_diagnostic(T)
    assert all(x <= 1e-10 for x in norms[1:])
    traj = propagate(learn_tensors(single_mode_maps[:1]), NAMED_STATES["plus"], 5)
    for n in range(1, 6):
        direct = np.linalg.matrix_power(single_mode_maps[0].matrix, n) @ NAMED_STATES["plus"].reshape(4)
        assert np.max(np.abs(traj[n - 1].reshape(4) - direct)) <= 1e-13


def test_full_memory_equals_direct(single_mode_maps, rng):
    T = learn_tensors(single_mode_maps)
    rho0 = random_density(rng)
    traj = propagate(T, rho0, 6)
    for n in range(1, 7):
        assert np.max(np.abs(traj[n - 1] - single_mode_maps[n - 1].apply(rho0))) <= 1e-10


def test_zero_coupling_diagnostic():
    maps = maps_for(DiscretizedBath.from_modes([(1.0, 0.0)]), 0.3, 4)
    norms = memory_diagnostic(learn_tensors(maps))
    assert norms[0] == pytest.approx(np.linalg.norm(maps[0].matrix, 2), abs=1e-14)
    assert max(norms[1:]) <= 1e-12


def test_memory_norm_pins(single_mode_maps):
    norms = memory_diagnostic(learn_tensors(single_mode_maps))
    pins = [0.9999999999999998, 0.020985880090591262, 0.017613503100115946,
            0.013184073574804445, 0.013186044490798129, 0.01411044309980832]
    assert np.allclose(norms, pins, rtol=0, atol=1e-12)


def test_truncated_memory_matches_full():
    bath = build_bath(BathSpec("ohmic-family", alpha=0.05, s=1.0, omega_c=5.0, omega_max=50.0, modes=200))
    dt, n = 0.2, 10
    k = build_kernels(bath, dt, n).truncated(2)
    T = learn_tensors(maps_for(bath, dt, n, kernels=k))
    rho0 = NAMED_STATES["plus"]
    full = propagate(T, rho0, n)
    short = propagate(T, rho0, n, K=6)
    assert np.max(np.abs(full - short)) <= 1e-6
    # tensors decay beyond the forced two-lag memory
    norms = memory_diagnostic(T)
    assert norms[6] < norms[3] < norms[2]


def test_long_horizon_beyond_learning(single_mode_maps):
    T = learn_tensors(single_mode_maps)
    traj = propagate(T, NAMED_STATES["zero"], 40, K=4)
    assert traj.shape == (40, 2, 2)
    assert np.max(np.abs(np.trace(traj, axis1=1, axis2=2) - 1)) <= 1e-8


def test_errors(single_mode_maps):
    T = learn_tensors(single_mode_maps[:3])
    with pytest.raises(InvalidCutoff):
        propagate(T, NAMED_STATES["zero"], 4, K=0)
    with pytest.raises(InvalidCutoff):
        propagate(T, NAMED_STATES["zero"], 4, K=4)
    with pytest.raises(InvalidInput):
        propagate(T, NAMED_STATES["zero"], 0)
    with pytest.raises(InvalidInput):
        learn_tensors([])
    bad = [single_mode_maps[0], DynamicalMap(single_mode_maps[1].matrix, 0.5, 2)]
    with pytest.raises(InvalidInput):
        learn_tensors(bad)
    with pytest.raises(InvalidInput):
        learn_tensors([single_mode_maps[1]])


@settings(max_examples=20)
@given(seed=st.integers(0, 2 ** 32 - 1), a=st.floats(0, 1), K=st.integers(1, 6), n=st.integers(1, 12))
def test_linear_and_trace_preserving(single_mode_maps, seed, a, K, n):
    rng = np.random.default_rng(seed)
    T = learn_tensors(single_mode_maps)
    r1, r2 = random_density(rng), random_density(rng, 1)
    mix = propagate(T, a * r1 + (1 - a) * r2, n, K)
    sep = a * propagate(T, r1, n, K) + (1 - a) * propagate(T, r2, n, K)
    assert np.max(np.abs(mix - sep)) <= 1e-12
    assert np.max(np.abs(np.trace(mix, axis1=1, axis2=2) - 1)) <= 1e-8
