"""Brute-force reference dynamics on a truncated Fock space.

Used to check the path sum against exact spin-boson evolution and to check
the closed-form Gaussian bath trace against an explicit operator trace.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np
from scipy.linalg import expm

from .bath import DiscretizedBath, alpha_coeff
from .errors import InvalidArgument, ResourceLimit
from .pathsum import PathString
from .spin import SZ, SpinSystem, check_density

DEFAULT_MAX_DIM = 8192


@dataclass(frozen=True)
class TruncatedEnvironment:
    modes: tuple[tuple[float, float], ...]
    fock_cutoff: int
    beta: float = math.inf
    max_dim: int = DEFAULT_MAX_DIM

    def __post_init__(self):
        if self.fock_cutoff < 1:
            raise InvalidArgument("Fock cutoff must be >= 1")
        if not self.modes:
            raise InvalidArgument("truncated environment needs at least one mode")
        if self.dim > self.max_dim:
            raise ResourceLimit(f"Hilbert dimension {self.dim} exceeds the ceiling {self.max_dim}")

    @classmethod
    def from_bath(cls, bath: DiscretizedBath, fock_cutoff: int, max_dim: int = DEFAULT_MAX_DIM):
        modes = tuple(zip(bath.omegas.tolist(), bath.couplings.tolist()))
        return cls(modes, fock_cutoff, bath.beta, max_dim)

    @property
    def levels(self) -> int:
        return self.fock_cutoff + 1

    @property
    def env_dim(self) -> int:
        return self.levels ** len(self.modes)

    @property
    def dim(self) -> int:
        return 2 * self.env_dim


@dataclass(frozen=True)
class ThermalState:
    weights: np.ndarray  # diagonal of rho_E in the product Fock basis

    @property
    def matrix(self) -> np.ndarray:
        return np.diag(self.weights).astype(complex)


def annihilation(levels: int) -> np.ndarray:
    return np.diag(np.sqrt(np.arange(1, levels)), k=1).astype(complex)


def _mode_operator(op: np.ndarray, k: int, n_modes: int) -> np.ndarray:
    out = np.ones((1, 1), dtype=complex)
    eye = np.eye(op.shape[0], dtype=complex)
    for i in range(n_modes):
        out = np.kron(out, op if i == k else eye)
    return out


def thermal_state(env: TruncatedEnvironment) -> ThermalState:
    """Gibbs weights renormalized over the truncated space; vacuum at beta = inf."""
    occ = np.arange(env.levels)
    weights = np.ones(1)
    for w, _ in env.modes:
        if math.isinf(env.beta):
            p = (occ == 0).astype(float)
        else:
            p = np.exp(-env.beta * w * occ)
            p /= p.sum()
        weights = np.kron(weights, p)
    return ThermalState(weights / weights.sum())


def bath_operators(env: TruncatedEnvironment) -> tuple[np.ndarray, np.ndarray]:
    """(H_E, B) on the truncated environment space."""
    a = annihilation(env.levels)
    K = len(env.modes)
    HE = np.zeros((env.env_dim, env.env_dim), dtype=complex)
    B = np.zeros_like(HE)
    for k, (w, g) in enumerate(env.modes):
        bk = _mode_operator(a, k, K)
        HE += w * bk.conj().T @ bk
        B += g * (bk + bk.conj().T)
    return HE, B


def total_hamiltonian(system: SpinSystem, env: TruncatedEnvironment) -> np.ndarray:
    HE, B = bath_operators(env)
    eye_e = np.eye(env.env_dim)
    return np.kron(system.hamiltonian, eye_e) + np.kron(np.eye(2), HE) + np.kron(SZ, B)


def full_propagator(system: SpinSystem, env: TruncatedEnvironment, t: float) -> np.ndarray:
    H = total_hamiltonian(system, env)
    E, V = np.linalg.eigh(H)
    return (V * np.exp(-1j * E * t)) @ V.conj().T


def exact_reduced_density(system: SpinSystem, env: TruncatedEnvironment, rho0, t: float | Sequence[float]):
    """Exact reduced state(s) at time(s) t by dense diagonalization of H.

    The Schroedinger-picture reduced state equals the path-sum one because the
    free bath rotation acts only on the traced-out factor.
    """
    rho0 = check_density(rho0)
    H = total_hamiltonian(system, env)
    E, V = np.linalg.eigh(H)
    rho_tot = np.kron(rho0, thermal_state(env).matrix)
    # evolve in the eigenbasis
    r = V.conj().T @ rho_tot @ V
    times = np.atleast_1d(np.asarray(t, dtype=float))
    out = []
    de = env.env_dim
    for ti in times:
        ph = np.exp(-1j * E * ti)
        rt = V @ (ph[:, None] * r * ph.conj()[None, :]) @ V.conj().T
        out.append(np.trace(rt.reshape(2, de, 2, de), axis1=1, axis2=3))
    return out[0] if np.ndim(t) == 0 else np.array(out)


def brute_force_G(l: PathString, lp: PathString, env: TruncatedEnvironment, dt: float) -> complex:
    """Tr_E{e^{A b^dag} e^{B b} rho_E e^{C b^dag} e^{D b}} by explicit matrix exponentials."""
    if len(env.modes) != 1:
        raise InvalidArgument("brute-force bath trace is implemented for one mode")
    if l.length != lp.length:
        raise InvalidArgument("path strings must have equal length")
    bath = DiscretizedBath.from_modes(env.modes, env.beta)
    alphas = np.array([alpha_coeff(bath, 0, j, dt) for j in range(l.length)])
    lv = l.values()
    lc = np.conj(lp.values())
    A = np.sum(lv * alphas.conj())
    B = np.sum(lv * alphas)
    C = np.sum(lc * alphas.conj())
    D = np.sum(lc * alphas)
    a = annihilation(env.levels)
    ad = a.conj().T
    rho = thermal_state(env).matrix
    op = expm(A * ad) @ expm(B * a) @ rho @ expm(C * ad) @ expm(D * a)
    return complex(np.trace(op))
