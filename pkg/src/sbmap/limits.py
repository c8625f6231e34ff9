"""Closed-form references: pure dephasing and the memory-less single-step map."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .bath import DiscretizedBath, KernelSet, dephasing_rate
from .errors import InvalidArgument
from .pathsum import DEFAULT_SPLITTING, DynamicalMap, dynamical_map, step_factors
from .spin import SpinSystem, check_density, pauli_basis


@dataclass(frozen=True)
class DephasingSolution:
    gamma: float
    phase: float  # (E_1 - E_0) t
    populations: tuple[float, float]


def dephasing_solution(E0: float, E1: float, bath: DiscretizedBath, rho0, t: float) -> DephasingSolution:
    if t < 0:
        raise InvalidArgument("t must be >= 0")
    rho0 = check_density(rho0)
    return DephasingSolution(dephasing_rate(bath, t), (E1 - E0) * t,
                             (float(rho0[0, 0].real), float(rho0[1, 1].real)))


def pure_dephasing_density(E0: float, E1: float, bath: DiscretizedBath, rho0, t: float) -> np.ndarray:
    """Populations frozen; rho_01 picks up exp(-i (E0 - E1) t - Gamma(t))."""
    sol = dephasing_solution(E0, E1, bath, rho0, t)
    rho = np.array(rho0, dtype=complex)
    decay = np.exp(-sol.gamma)
    rho[0, 1] *= np.exp(1j * sol.phase) * decay
    rho[1, 0] *= np.exp(-1j * sol.phase) * decay
    return rho


def dephasing_energies(system: SpinSystem) -> tuple[float, float]:
    """(E_0, E_1) = (+omega_s, -omega_s) for a sigma_z-diagonal Hamiltonian."""
    if system.delta != 0:
        raise InvalidArgument("pure dephasing needs delta = 0")
    return system.omega_s, -system.omega_s


def markov_map(kernels: KernelSet, system: SpinSystem, splitting: str = DEFAULT_SPLITTING) -> DynamicalMap:
    """Single-step map from the four memory-less string pairs (l_0, l_0')."""
    fac = step_factors(system, kernels.dt, splitting)
    b0 = kernels.beta0
    bt0 = complex(kernels.beta_T[0]).real
    basis = pauli_basis()
    f = np.zeros((4, 4), dtype=complex)
    for a, la in enumerate((-1j, 1j)):
        pa = np.outer(fac.head[:, a], fac.tail[a, :])
        ta = np.array([np.trace(pa @ g) for g in basis])
        for b, lb in enumerate((-1j, 1j)):
            pb = np.outer(fac.head[:, b], fac.tail[b, :])
            tb = np.array([np.trace(pb.conj().T @ g) for g in basis])
            lbc = np.conj(lb)
            w = np.exp(-b0 + (la + lbc) ** 2 * bt0 + la * lbc * b0)
            f += w * np.outer(ta, tb)
    return dynamical_map(f, basis, kernels.dt, 1)


def semigroup_defect(phi1: DynamicalMap, phi2: DynamicalMap) -> float:
    """max |Phi_2 - Phi_1 Phi_1|; zero for a memory-less (semigroup) evolution."""
    if phi1.dt != phi2.dt:
        raise InvalidArgument("maps must share the time step")
    return float(np.max(np.abs(phi2.matrix - phi1.matrix @ phi1.matrix)))
