"""Path sum over sigma_z projector histories.

Each Trotter step contributes ``M |l_j><l_j|`` on the spin and a displacement
exponential on the bath, with ``l_j = -i`` for |0> and ``l_j = +i`` for |1>.
After normal ordering the bath trace is Gaussian, so every pair of histories
``(l, l')`` carries a scalar weight ``F(l) F*(l') G(l, l')`` built from the
lag tables of a :class:`~sbmap.bath.KernelSet`.

Histories are encoded as integers: bit j of the index is l_j. The pair sum
is evaluated in fixed row blocks whose shape depends only on ``n``, and the
block partials are combined by a fixed pairwise tree, so the result does not
depend on the number of worker threads.
"""
from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .bath import DiscretizedBath, KernelSet, b_norm_proxy
from .errors import InvalidArgument, InvalidGate, ResourceLimit
from .spin import SpinSystem, StepPropagator, check_density, pauli_basis, step_propagator

DEFAULT_MAX_STEPS = 16
SPLITTINGS = ("symmetric", "forward")
DEFAULT_SPLITTING = "symmetric"
# elements of the complex pair-weight block held in memory at once
BLOCK_ELEMENTS = 1 << 18

Gate = tuple[int, np.ndarray]


@dataclass(frozen=True)
class PathString:
    bits: int
    length: int

    def __post_init__(self):
        if self.length < 1:
            raise InvalidArgument("path string length must be >= 1")
        if not 0 <= self.bits < (1 << self.length):
            raise InvalidArgument(f"bits {self.bits} out of range for length {self.length}")

    @classmethod
    def uniform(cls, value: complex, n: int) -> "PathString":
        return cls((1 << n) - 1 if value == 1j else 0, n)

    @classmethod
    def from_values(cls, values: Sequence[complex]) -> "PathString":
        bits = 0
        for j, v in enumerate(values):
            if v == 1j:
                bits |= 1 << j
            elif v != -1j:
                raise InvalidArgument(f"path values must be +-i, got {v}")
        return cls(bits, len(values))

    def states(self) -> np.ndarray:
        """Computational-basis index (0 or 1) of every step."""
        return (self.bits >> np.arange(self.length)) & 1

    def signs(self) -> np.ndarray:
        """l_j / i, i.e. -1 for |0> and +1 for |1>."""
        return 2.0 * self.states() - 1.0

    def values(self) -> np.ndarray:
        return 1j * self.signs()


@dataclass(frozen=True)
class ProjectorString:
    """Rank-one product ``scale * column (x) row``.

    ``column = head |l_{n-1}>`` and ``row = <l_0| tail``; for the forward
    splitting ``head = M`` and ``tail = 1``.
    """
    scale: complex
    column: np.ndarray
    row: np.ndarray
    initial: int

    @property
    def matrix(self) -> np.ndarray:
        return self.scale * np.outer(self.column, self.row)


@dataclass(frozen=True)
class StepFactors:
    """System propagators around the projector string.

    forward:   U_step = M T[bath], so Pi = M P ... M P.
    symmetric: U_step = M_h T[bath] M_h, so Pi = M_h P M ... M P M_h; adjacent
               half steps merge into M unless a gate sits between them.
    """
    full: np.ndarray
    half: np.ndarray | None = None

    @property
    def head(self) -> np.ndarray:
        return self.full if self.half is None else self.half

    @property
    def tail(self) -> np.ndarray:
        return np.eye(2, dtype=complex) if self.half is None else self.half

    def link(self, gate=None) -> np.ndarray:
        if gate is None:
            return self.full
        return gate @ self.full if self.half is None else self.half @ gate @ self.half


@dataclass(frozen=True)
class DynamicalMap:
    matrix: np.ndarray
    dt: float
    steps: int
    coefficients: np.ndarray | None = None

    def apply(self, rho) -> np.ndarray:
        return (self.matrix @ np.asarray(rho, dtype=complex).reshape(4)).reshape(2, 2)


def step_factors(system: SpinSystem, dt: float, splitting: str = DEFAULT_SPLITTING) -> StepFactors:
    if splitting not in SPLITTINGS:
        raise InvalidArgument(f"splitting must be one of {SPLITTINGS}, got {splitting!r}")
    full = step_propagator(system, dt).matrix
    if splitting == "forward":
        return StepFactors(full)
    return StepFactors(full, step_propagator(system, 0.5 * dt).matrix)


def _as_factors(M) -> StepFactors:
    if isinstance(M, StepFactors):
        return M
    return StepFactors(M.matrix if isinstance(M, StepPropagator) else np.asarray(M, dtype=complex))


def _gate_table(gates, n: int) -> list[np.ndarray | None]:
    """Gate (or None) acting just before step j, for j = 0..n-1."""
    table: list[np.ndarray | None] = [None] * n
    last = 0
    for step, v in gates or ():
        step = int(step)
        v = np.asarray(v, dtype=complex)
        if not (1 <= step <= n - 1) or step <= last:
            raise InvalidGate(f"gate steps must be strictly increasing within [1, {n - 1}], got {step}")
        if v.shape != (2, 2) or np.max(np.abs(v.conj().T @ v - np.eye(2))) > 1e-10:
            raise InvalidGate(f"gate at step {step} is not a 2x2 unitary")
        table[step] = v
        last = step
    return table


def pi_string(M, l: PathString, gates: Sequence[Gate] | None = None) -> ProjectorString:
    """Product ``M|l_{n-1}><l_{n-1}| ... V ... M|l_0><l_0|`` in rank-one form.

    ``M`` is a step propagator (forward splitting) or a :class:`StepFactors`.
    """
    fac = _as_factors(M)
    st = l.states()
    vtab = _gate_table(gates, l.length)
    scale = 1.0 + 0j
    for j in range(l.length - 1):
        scale *= fac.link(vtab[j + 1])[st[j + 1], st[j]]
    return ProjectorString(complex(scale), fac.head[:, st[-1]].copy(),
                           fac.tail[st[0], :].copy(), int(st[0]))


def _log_f(kernels: KernelSet, signs: np.ndarray) -> np.ndarray:
    # signs: (..., n); F exponent is -sum_{j<p} s_j s_p beta(p - j) - (n/2) beta(0)
    n = signs.shape[-1]
    out = np.full(signs.shape[:-1], -0.5 * n * kernels.beta0, dtype=complex)
    for m in range(1, n):
        corr = np.sum(signs[..., :-m] * signs[..., m:], axis=-1)
        out = out - kernels.beta[m] * corr
    return out


def f_weight(kernels: KernelSet, l: PathString) -> complex:
    if l.length > kernels.horizon:
        raise InvalidArgument("path string longer than the kernel horizon")
    return complex(np.exp(_log_f(kernels, l.signs())))


def _log_g(kernels: KernelSet, l: PathString, lp: PathString) -> complex:
    n = l.length
    lv = l.values()
    lc = np.conj(lp.values())
    B = kernels.lag_matrix("beta", n)
    BT = kernels.lag_matrix("beta_T", n)
    d = lv + lc
    # both double sums run over all (j, p); A[j, p] = kernel(t_p - t_j)
    return complex(d @ BT @ d + lv @ B @ lc)


def g_weight(kernels: KernelSet, l: PathString, lp: PathString) -> complex:
    if l.length != lp.length:
        raise InvalidArgument("path strings must have equal length")
    if l.length > kernels.horizon:
        raise InvalidArgument("path string longer than the kernel horizon")
    return complex(np.exp(_log_g(kernels, l, lp)))


def pair_weight(kernels: KernelSet, l: PathString, lp: PathString) -> complex:
    """Combined weight F(l) F*(l') G(l, l')."""
    e = _log_f(kernels, l.signs()) + np.conj(_log_f(kernels, lp.signs())) + _log_g(kernels, l, lp)
    return complex(np.exp(e))


def all_signs(n: int) -> np.ndarray:
    idx = np.arange(1 << n)
    return 2.0 * ((idx[:, None] >> np.arange(n)[None, :]) & 1) - 1.0


def projector_table(M, n: int, gates: Sequence[Gate] | None = None) -> np.ndarray:
    """Row-major vec(Pi_l) for every history, shape (2**n, 4)."""
    fac = _as_factors(M)
    vtab = _gate_table(gates, n)
    idx = np.arange(1 << n)
    st = (idx[:, None] >> np.arange(n)[None, :]) & 1
    scale = np.ones(1 << n, dtype=complex)
    for j in range(n - 1):
        scale = scale * fac.link(vtab[j + 1])[st[:, j + 1], st[:, j]]
    cols = fac.head[:, st[:, -1]].T
    rows = fac.tail[st[:, 0], :]
    pis = scale[:, None, None] * cols[:, :, None] * rows[:, None, :]
    return pis.reshape(-1, 4)


def _tree_sum(parts: list[np.ndarray]) -> np.ndarray:
    while len(parts) > 1:
        nxt = [parts[i] + parts[i + 1] for i in range(0, len(parts) - 1, 2)]
        if len(parts) % 2:
            nxt.append(parts[-1])
        parts = nxt
    return parts[0]


def process_matrix(kernels: KernelSet, M, n: int, gates: Sequence[Gate] | None = None,
                   threads: int = 1, max_steps: int = DEFAULT_MAX_STEPS) -> np.ndarray:
    """4x4 Hermitian K = sum_{l,l'} F F* G vec(Pi_l) vec(Pi_l')^dag.

    ``rho(t_n)[y, y'] = sum_{x, x'} K[(y, x), (y', x')] rho0[x, x']``.
    """
    if n < 1:
        raise InvalidArgument("number of steps must be >= 1")
    if n > max_steps:
        raise ResourceLimit(f"{n} steps exceeds the direct path-sum ceiling of {max_steps}; "
                            "use transfer tensors for longer horizons")
    if n > kernels.horizon:
        raise InvalidArgument(f"kernels cover {kernels.horizon} steps, {n} requested")
    N = 1 << n
    S = all_signs(n)
    V = projector_table(M, n, gates)
    Vc = V.conj()
    B = kernels.lag_matrix("beta", n)
    BT = kernels.lag_matrix("beta_T", n)
    # per-string projections onto the kernel matrices, in a fixed summation order
    PB = np.zeros((N, n), dtype=complex)
    PT = np.zeros((N, n), dtype=complex)
    for j in range(n):
        PB += S[:, j, None] * B[j][None, :]
        PT += S[:, j, None] * BT[j][None, :]
    q = np.sum(PT.real * S, axis=1)
    # row part (l) and column part (l') of the pair exponent
    row = _log_f(kernels, S) - q
    col = np.conj(_log_f(kernels, S)) - q
    Q = PB + 2.0 * PT.real
    rows = max(1, min(N, BLOCK_ELEMENTS // N))

    def block(r0: int) -> np.ndarray:
        r1 = r0 + rows
        E = row[r0:r1, None] + col[None, :]
        for p in range(n):
            E = E + Q[r0:r1, p, None] * S[None, :, p]
        W = np.exp(E)
        Y = np.stack([np.sum(W * Vc[None, :, b], axis=1) for b in range(4)], axis=1)
        return np.array([[np.sum(V[r0:r1, a] * Y[:, b]) for b in range(4)] for a in range(4)])

    starts = range(0, N, rows)
    if threads > 1 and len(starts) > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            parts = list(pool.map(block, starts))
    else:
        parts = [block(r) for r in starts]
    return _tree_sum(parts)


def _contract(K: np.ndarray, rho0: np.ndarray) -> np.ndarray:
    return np.einsum("yxzw,xw->yz", K.reshape(2, 2, 2, 2), rho0)


def reduced_density(system: SpinSystem, kernels: KernelSet, rho0, n: int,
                    splitting: str = DEFAULT_SPLITTING, threads: int = 1,
                    max_steps: int = DEFAULT_MAX_STEPS) -> np.ndarray:
    """rho_S(t_n) = sum_{l,l'} G F F* Pi_l rho0 Pi_l'^dag.

    The second Magnus phase is omitted: it multiplies U by a unit-modulus
    scalar per step and cancels against U^dag.
    """
    rho0 = check_density(rho0)
    K = process_matrix(kernels, step_factors(system, kernels.dt, splitting), n,
                       threads=threads, max_steps=max_steps)
    return _contract(K, rho0)


def conditioned_evolution(system: SpinSystem, kernels: KernelSet, rho0, gates: Sequence[Gate],
                          n: int, splitting: str = DEFAULT_SPLITTING, threads: int = 1,
                          max_steps: int = DEFAULT_MAX_STEPS) -> np.ndarray:
    """Reduced state with spin-only unitaries inserted at step boundaries.

    A gate at step s acts at time t_s, after s Trotter steps. The bath weights
    are unchanged because the gates commute with every bath operator.
    """
    rho0 = check_density(rho0)
    K = process_matrix(kernels, step_factors(system, kernels.dt, splitting), n, gates=gates,
                       threads=threads, max_steps=max_steps)
    return _contract(K, rho0)


def _basis_rows(basis) -> np.ndarray:
    # Tr(Pi G_u) = vec(Pi) . vec(G_u^T)
    return np.array([np.asarray(g).T.reshape(4) for g in basis])


def coefficients_from_process(K: np.ndarray, basis=None) -> np.ndarray:
    R = _basis_rows(pauli_basis() if basis is None else basis)
    return R @ K @ R.conj().T


def map_coefficients(system: SpinSystem, kernels: KernelSet, n: int, basis=None,
                     splitting: str = DEFAULT_SPLITTING, gates: Sequence[Gate] | None = None,
                     threads: int = 1, max_steps: int = DEFAULT_MAX_STEPS) -> np.ndarray:
    """f_uv(t_n) = sum_{l,l'} G F F* Tr(Pi_l G_u) Tr(Pi_l'^dag G_v)."""
    K = process_matrix(kernels, step_factors(system, kernels.dt, splitting), n, gates=gates,
                       threads=threads, max_steps=max_steps)
    return coefficients_from_process(K, basis)


def dynamical_map(f, basis=None, dt: float = 0.0, steps: int = 0) -> DynamicalMap:
    """Phi = sum_uv f_uv G_u (x) G_v^T on row-major vectorized states.

    The transpose on the right factor is what makes Phi vec(rho) = vec(sum f G_u rho G_v).
    """
    basis = pauli_basis() if basis is None else basis
    f = np.asarray(f, dtype=complex)
    phi = np.zeros((4, 4), dtype=complex)
    for u, gu in enumerate(basis):
        for v, gv in enumerate(basis):
            phi += f[u, v] * np.kron(gu, np.asarray(gv).T)
    return DynamicalMap(phi, dt, steps, f)


def compute_map(system: SpinSystem, kernels: KernelSet, n: int,
                splitting: str = DEFAULT_SPLITTING, threads: int = 1,
                max_steps: int = DEFAULT_MAX_STEPS) -> DynamicalMap:
    f = map_coefficients(system, kernels, n, splitting=splitting, threads=threads,
                         max_steps=max_steps)
    return dynamical_map(f, dt=kernels.dt, steps=n)


def choi_matrix(phi: DynamicalMap) -> np.ndarray:
    """C = sum_ab |a><b| (x) Phi[|a><b|]."""
    P = phi.matrix.reshape(2, 2, 2, 2)  # [y, y', a, b]
    return P.transpose(2, 0, 3, 1).reshape(4, 4)


def choi_eigenvalues(phi: DynamicalMap) -> np.ndarray:
    C = choi_matrix(phi)
    return np.sort(np.linalg.eigvalsh(0.5 * (C + C.conj().T)))[::-1]


def trotter_bound(system: SpinSystem, bath: DiscretizedBath, dt: float,
                  b_norm: float | None = None) -> float:
    """Prefactor c12 of the per-step splitting error c12 * dt**2.

    ||[H_S, sigma_z B]|| = 2 |delta| ||B|| and the nested step integral gives dt**2 / 2.
    The unbounded ||B|| is replaced by its thermal standard deviation unless given.
    """
    if b_norm is None:
        b_norm = b_norm_proxy(bath)
    if b_norm < 0:
        raise InvalidArgument("b_norm must be >= 0")
    return abs(system.delta) * b_norm
