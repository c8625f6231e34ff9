"""Bosonic bath: spectral densities, mode discretization and step kernels.

The bath couples to the spin through ``sigma_z (x) sum_k g_k (b_k^dag + b_k)``.
Everything the path sum needs from the environment is collected in a
:class:`KernelSet`, a pair of lag tables on the time grid.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import InvalidArgument, InvalidSpec

FAMILIES = ("ohmic-family", "flat", "explicit-modes")


@dataclass(frozen=True)
class BathSpec:
    family: str = "ohmic-family"
    alpha: float = 0.1
    s: float = 1.0
    omega_c: float = 5.0
    omega_max: float = 50.0
    modes: int = 200
    beta: float = math.inf
    explicit_modes: tuple[tuple[float, float], ...] | None = None

    def validate(self) -> None:
        if self.family not in FAMILIES:
            raise InvalidSpec(f"unknown bath family {self.family!r}")
        if not self.beta > 0:
            raise InvalidSpec("inverse temperature must be positive (inf for T = 0)")
        if self.family == "explicit-modes":
            if not self.explicit_modes:
                raise InvalidSpec("explicit-modes bath needs a non-empty mode list")
            for w, g in self.explicit_modes:
                if not w > 0:
                    raise InvalidSpec(f"mode frequency must be > 0, got {w}")
                if not math.isfinite(g):
                    raise InvalidSpec(f"mode coupling must be finite, got {g}")
            return
        if self.modes < 1:
            raise InvalidSpec("mode count must be >= 1")
        if not self.omega_max > 0:
            raise InvalidSpec("omega_max must be > 0")
        if self.alpha < 0:
            raise InvalidSpec("coupling strength must be >= 0")
        if self.family == "ohmic-family" and not (self.s > 0 and self.omega_c > 0):
            raise InvalidSpec("ohmic family needs s > 0 and omega_c > 0")


@dataclass(frozen=True)
class DiscretizedBath:
    omegas: np.ndarray
    couplings: np.ndarray
    beta: float = math.inf

    def __post_init__(self):
        w = np.asarray(self.omegas, dtype=float)
        g = np.asarray(self.couplings, dtype=float)
        if w.shape != g.shape or w.ndim != 1:
            raise InvalidSpec("frequencies and couplings must be 1-d of equal length")
        if np.any(w <= 0):
            raise InvalidSpec("all mode frequencies must be strictly positive")
        if not np.all(np.isfinite(g)):
            raise InvalidSpec("all couplings must be finite")
        w.setflags(write=False)
        g.setflags(write=False)
        object.__setattr__(self, "omegas", w)
        object.__setattr__(self, "couplings", g)

    @classmethod
    def from_modes(cls, modes: Sequence[tuple[float, float]], beta: float = math.inf):
        modes = list(modes)
        if not modes:
            raise InvalidSpec("empty mode list")
        w, g = zip(*modes)
        return cls(np.array(w, dtype=float), np.array(g, dtype=float), beta)

    @property
    def occupations(self) -> np.ndarray:
        return np.array([bose_einstein(w, self.beta) for w in self.omegas])

    def __len__(self):
        return len(self.omegas)


def spectral_density(spec: BathSpec, omega):
    """J(omega) for the sampled families.

    ohmic-family: (pi/2) alpha omega_c^(1-s) omega^s exp(-omega/omega_c).
    flat: alpha on (0, omega_max).
    """
    omega = np.asarray(omega, dtype=float)
    if spec.family == "ohmic-family":
        return (0.5 * np.pi * spec.alpha * spec.omega_c ** (1.0 - spec.s)
                * omega ** spec.s * np.exp(-omega / spec.omega_c))
    if spec.family == "flat":
        return np.where((omega > 0) & (omega < spec.omega_max), spec.alpha, 0.0)
    raise InvalidSpec(f"family {spec.family!r} has no spectral density")


def build_bath(spec: BathSpec) -> DiscretizedBath:
    spec.validate()
    if spec.family == "explicit-modes":
        return DiscretizedBath.from_modes(spec.explicit_modes, spec.beta)
    dw = spec.omega_max / spec.modes
    # midpoints keep every mode away from omega = 0
    w = (np.arange(1, spec.modes + 1) - 0.5) * dw
    g = np.sqrt(spectral_density(spec, w) * dw)
    return DiscretizedBath(w, g, spec.beta)


def bose_einstein(omega: float, beta: float) -> float:
    if not omega > 0:
        raise InvalidArgument(f"Bose-Einstein occupation needs omega > 0, got {omega}")
    if math.isinf(beta):
        return 0.0
    return 1.0 / math.expm1(beta * omega)


def alpha_coeff(bath: DiscretizedBath, k: int, j: int, dt: float) -> complex:
    """Step integral g_k * int_{t_j}^{t_j+dt} exp(-i w_k s) ds."""
    w = bath.omegas[k]
    g = bath.couplings[k]
    tj = j * dt
    return complex(g * np.exp(-1j * w * tj) * np.expm1(-1j * w * dt) / (-1j * w))


def _smeared_weights(bath: DiscretizedBath, dt: float) -> np.ndarray:
    # |alpha_kj|^2 = 4 g^2 sin^2(w dt / 2) / w^2
    w = bath.omegas
    return 4.0 * np.sin(0.5 * w * dt) ** 2 * bath.couplings ** 2 / w ** 2


def _lag_sum(weights, omegas, dt, m):
    if m < 0:
        return np.conj(_lag_sum(weights, omegas, dt, -m))
    if m == 0:
        return complex(np.sum(weights))
    return complex(np.sum(weights * np.exp(-1j * omegas * (m * dt))))


def kernel_beta(bath: DiscretizedBath, dt: float, m: int) -> complex:
    return _lag_sum(_smeared_weights(bath, dt), bath.omegas, dt, int(m))


def kernel_beta_T(bath: DiscretizedBath, dt: float, m: int) -> complex:
    return _lag_sum(_smeared_weights(bath, dt) * bath.occupations, bath.omegas, dt, int(m))


def omega2_scalar(bath: DiscretizedBath, dt: float) -> complex:
    """Second Magnus term of one step; a pure phase, identical for every step."""
    w = bath.omegas
    x = w * dt
    # sin(x) - x loses digits for small x; switch to its series there
    small = np.abs(x) < 1e-3
    d = np.where(small, -x ** 3 / 6 + x ** 5 / 120, np.sin(x) - x)
    return complex(0.0, -float(np.sum(bath.couplings ** 2 / w ** 2 * d)))


@dataclass(frozen=True)
class KernelSet:
    dt: float
    horizon: int
    beta: np.ndarray
    beta_T: np.ndarray
    omega2: complex = 0j

    def __post_init__(self):
        for name in ("beta", "beta_T"):
            a = np.array(getattr(self, name), dtype=complex)
            if a.shape != (self.horizon,):
                raise InvalidArgument(f"{name} table must have length {self.horizon}")
            a.setflags(write=False)
            object.__setattr__(self, name, a)

    @property
    def beta0(self) -> float:
        return float(self.beta[0].real)

    def lag(self, table: str, m: int) -> complex:
        a = getattr(self, table)
        return complex(a[m]) if m >= 0 else complex(np.conj(a[-m]))

    def lag_matrix(self, table: str, n: int) -> np.ndarray:
        """n x n matrix A[j, p] = table((p - j) dt); lower triangle by conjugation."""
        a = getattr(self, table)[:n]
        j = np.arange(n)
        d = j[None, :] - j[:, None]
        return np.where(d >= 0, a[np.abs(d)], np.conj(a[np.abs(d)]))

    def truncated(self, support: int = 1) -> "KernelSet":
        """Copy with every lag >= support set to zero (forced finite memory)."""
        b = self.beta.copy()
        bt = self.beta_T.copy()
        b[support:] = 0
        bt[support:] = 0
        return KernelSet(self.dt, self.horizon, b, bt, self.omega2)

    def prefix(self, n: int) -> "KernelSet":
        return KernelSet(self.dt, n, self.beta[:n], self.beta_T[:n], self.omega2)


def build_kernels(bath: DiscretizedBath, dt: float, n: int) -> KernelSet:
    if not dt > 0:
        raise InvalidArgument("dt must be > 0")
    if n < 1:
        raise InvalidArgument("horizon must be >= 1")
    weights = _smeared_weights(bath, dt)
    occ = bath.occupations
    beta = np.array([_lag_sum(weights, bath.omegas, dt, m) for m in range(n)])
    beta_T = np.array([_lag_sum(weights * occ, bath.omegas, dt, m) for m in range(n)])
    # zero lag is real by construction; drop the 0j rounding noise explicitly
    beta[0] = beta[0].real
    beta_T[0] = beta_T[0].real
    return KernelSet(dt, n, beta, beta_T, omega2_scalar(bath, dt))


def bath_correlation(bath: DiscretizedBath, t: float) -> complex:
    w = bath.omegas
    occ = bath.occupations
    g2 = bath.couplings ** 2
    return complex(np.sum(g2 * ((occ + 1) * np.exp(-1j * w * t) + occ * np.exp(1j * w * t))))


def coth_factor(bath: DiscretizedBath) -> np.ndarray:
    """coth(beta w / 2) = 2 N(w) + 1, exactly 1 at zero temperature."""
    return 2.0 * bath.occupations + 1.0


def dephasing_rate(bath: DiscretizedBath, t: float) -> float:
    w = bath.omegas
    return float(8.0 * np.sum(bath.couplings ** 2 / w ** 2 * np.sin(0.5 * w * t) ** 2
                              * coth_factor(bath)))


def b_norm_proxy(bath: DiscretizedBath) -> float:
    """Thermal standard deviation of the bath operator B."""
    return float(np.sqrt(np.sum(bath.couplings ** 2 * coth_factor(bath))))
