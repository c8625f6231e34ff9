"""Two-level system: Hamiltonian, step propagator, Pauli basis, vectorization."""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import InvalidArgument, InvalidState

I2 = np.eye(2, dtype=complex)
SX = np.array([[0, 1], [1, 0]], dtype=complex)
SY = np.array([[0, -1j], [1j, 0]], dtype=complex)
SZ = np.array([[1, 0], [0, -1]], dtype=complex)


@dataclass(frozen=True)
class SpinSystem:
    """H_S = delta * sigma_x + omega_s * sigma_z, coupled to the bath through sigma_z."""
    delta: float = 0.0
    omega_s: float = 0.0

    @property
    def hamiltonian(self) -> np.ndarray:
        return self.delta * SX + self.omega_s * SZ


@dataclass(frozen=True)
class EigenSystem:
    energies: np.ndarray  # (E_+, E_-)
    states: np.ndarray  # columns |+>, |->

    def reconstruct(self) -> np.ndarray:
        return (self.states * self.energies) @ self.states.conj().T


@dataclass(frozen=True)
class StepPropagator:
    matrix: np.ndarray
    dt: float


def eigendecompose(system: SpinSystem) -> EigenSystem:
    d, w = float(system.delta), float(system.omega_s)
    e = math.hypot(d, w)
    if e == 0.0:
        return EigenSystem(np.zeros(2), np.eye(2, dtype=complex))
    if d == 0.0:
        # already diagonal; |+> is whichever basis state carries +e
        states = np.eye(2, dtype=complex) if w > 0 else np.eye(2, dtype=complex)[:, ::-1]
        return EigenSystem(np.array([e, -e]), states.copy())
    # H = e (cos th sz + sin th sx); half-angle form avoids cancellation at small delta
    th = math.atan2(d, w)
    c, s = math.cos(0.5 * th), math.sin(0.5 * th)
    minus = np.array([s, -c]) if s >= 0 else np.array([-s, c])
    states = np.column_stack([np.array([c, s]), minus]).astype(complex)
    return EigenSystem(np.array([e, -e]), states)


def step_propagator(system: SpinSystem, dt: float) -> StepPropagator:
    if not dt >= 0:
        raise InvalidArgument("dt must be >= 0")
    eig = eigendecompose(system)
    phases = np.exp(-1j * eig.energies * dt)
    m = (eig.states * phases) @ eig.states.conj().T
    return StepPropagator(m, dt)


def pauli_basis() -> list[np.ndarray]:
    """Normalized basis {1, sx, sy, sz} / sqrt(2)."""
    r = 1.0 / math.sqrt(2.0)
    return [r * I2, r * SX, r * SY, r * SZ]


def vectorize(rho) -> np.ndarray:
    """Row-major (r00, r01, r10, r11)."""
    return np.asarray(rho, dtype=complex).reshape(4).copy()


def devectorize(v) -> np.ndarray:
    return np.asarray(v, dtype=complex).reshape(2, 2).copy()


def bloch(rho) -> tuple[float, float, float]:
    rho = np.asarray(rho, dtype=complex)
    if abs(np.trace(rho) - 1) > 1e-8:
        raise InvalidState(f"density matrix trace is {np.trace(rho)}, expected 1")
    return tuple(float(np.trace(rho @ s).real) for s in (SX, SY, SZ))


def check_density(rho, tol: float = 1e-8) -> np.ndarray:
    """Validate a 2x2 density matrix (Hermitian, unit trace, PSD) and return it."""
    rho = np.asarray(rho, dtype=complex)
    if rho.shape != (2, 2):
        raise InvalidState(f"expected a 2x2 matrix, got shape {rho.shape}")
    if np.max(np.abs(rho - rho.conj().T)) > tol:
        raise InvalidState("density matrix is not Hermitian")
    if abs(np.trace(rho) - 1) > tol:
        raise InvalidState(f"density matrix trace is {np.trace(rho).real}, expected 1")
    if np.linalg.eigvalsh(0.5 * (rho + rho.conj().T)).min() < -tol:
        raise InvalidState("density matrix is not positive semidefinite")
    return rho


NAMED_STATES = {
    "zero": np.array([[1, 0], [0, 0]], dtype=complex),
    "one": np.array([[0, 0], [0, 1]], dtype=complex),
    "plus": np.full((2, 2), 0.5, dtype=complex),
    "mixed": 0.5 * I2,
}

NAMED_GATES = {
    "x": SX,
    "y": SY,
    "z": SZ,
    "h": (SX + SZ) / math.sqrt(2.0),
}
