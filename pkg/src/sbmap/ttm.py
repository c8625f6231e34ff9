"""Transfer tensors: learn memory kernels from short maps, propagate to long times."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import InvalidCutoff, InvalidInput
from .pathsum import DynamicalMap
from .spin import check_density


@dataclass(frozen=True)
class TransferTensorSet:
    tensors: tuple[np.ndarray, ...]  # T_1 .. T_K
    dt: float

    @property
    def cutoff(self) -> int:
        return len(self.tensors)


def learn_tensors(maps: Sequence[DynamicalMap]) -> TransferTensorSet:
    """T_n = Phi_n - sum_{j=1}^{n-1} T_{n-j} Phi_j, with maps = Phi_1..Phi_K."""
    if not maps:
        raise InvalidInput("need at least one map")
    dt = maps[0].dt
    for k, m in enumerate(maps, start=1):
        if m.dt != dt:
            raise InvalidInput("maps are on different time grids")
        if m.steps not in (0, k):
            raise InvalidInput(f"map {k} reports {m.steps} steps")
    phis = [np.asarray(m.matrix, dtype=complex) for m in maps]
    tensors: list[np.ndarray] = []
    for n in range(1, len(phis) + 1):
        t = phis[n - 1].copy()
        for j in range(1, n):
            t = t - tensors[n - j - 1] @ phis[j - 1]
        tensors.append(t)
    return TransferTensorSet(tuple(tensors), dt)


def reconstruct(tensors: TransferTensorSet, n: int) -> np.ndarray:
    """Phi_n rebuilt from the tensors (n <= cutoff)."""
    T = tensors.tensors
    phis: list[np.ndarray] = []
    for k in range(1, n + 1):
        acc = T[k - 1].copy()
        for j in range(1, k):
            acc = acc + T[k - j - 1] @ phis[j - 1]
        phis.append(acc)
    return phis[n - 1]


def propagate(tensors: TransferTensorSet, rho0, n: int, K: int | None = None) -> np.ndarray:
    """rho(t_m) = sum_{j=m-K}^{m-1} T_{m-j} rho(t_j) for m = 1..n; returns shape (n, 2, 2)."""
    if K is None:
        K = tensors.cutoff
    if K < 1:
        raise InvalidCutoff("memory cutoff must be >= 1")
    if K > tensors.cutoff:
        raise InvalidCutoff(f"cutoff {K} exceeds the {tensors.cutoff} learned tensors")
    if n < 1:
        raise InvalidInput("number of steps must be >= 1")
    rho0 = check_density(rho0)
    hist = [rho0.reshape(4)]
    for m in range(1, n + 1):
        acc = np.zeros(4, dtype=complex)
        for j in range(max(0, m - K), m):
            acc = acc + tensors.tensors[m - j - 1] @ hist[j]
        hist.append(acc)
    return np.array(hist[1:]).reshape(n, 2, 2)


def memory_diagnostic(tensors: TransferTensorSet) -> list[float]:
    """Spectral norm of each T_p, p = 1..K."""
    return [float(np.linalg.norm(t, 2)) for t in tensors.tensors]
