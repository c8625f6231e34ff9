"""Command-line front end.

    sbmap evolve --config run.json --out results/

Exit codes: 0 success / check passed, 1 check failed, 2 invalid input,
3 resource limit exceeded.
"""
from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

import numpy as np

from .bath import build_bath, build_kernels, dephasing_rate
from .config import ConfigError, RunConfig, load_config
from .errors import ResourceLimit, SpinBosonError
from .limits import dephasing_energies, markov_map, pure_dephasing_density, semigroup_defect
from .oracle import TruncatedEnvironment, exact_reduced_density
from .pathsum import (choi_eigenvalues, compute_map, conditioned_evolution, reduced_density,
                      trotter_bound)
from .spin import bloch
from .ttm import learn_tensors, memory_diagnostic, propagate, reconstruct

log = logging.getLogger("sbmap")

TRAJECTORY_HEADER = ("t,re_r00,im_r00,re_r01,im_r01,re_r10,im_r10,re_r11,im_r11,"
                     "bloch_x,bloch_y,bloch_z")

OHMIC_HELP = ("Bath families: ohmic-family J(w) = (pi/2) alpha omega_c^(1-s) w^s exp(-w/omega_c); "
              "flat J(w) = alpha on (0, omega_max); explicit-modes [[omega, g], ...]. Sampled "
              "families use midpoint modes w_k = (k - 1/2) omega_max/K with g_k^2 = J(w_k) omega_max/K.")


def _fmt(x: float) -> str:
    return repr(float(x))


def _cpair(z: complex) -> list[float]:
    return [float(z.real), float(z.imag)]


def _cmatrix(a: np.ndarray) -> list:
    return [[_cpair(z) for z in row] for row in a]


def write_trajectory(path: Path, times, states) -> None:
    lines = [TRAJECTORY_HEADER]
    for t, rho in zip(times, states):
        vals = [t]
        for z in np.asarray(rho).reshape(4):
            vals += [z.real, z.imag]
        vals += list(bloch(rho))
        lines.append(",".join(_fmt(v) for v in vals))
    path.write_text("\n".join(lines) + "\n")


def read_trajectory(path) -> tuple[np.ndarray, np.ndarray]:
    """Inverse of :func:`write_trajectory`: (times, states of shape (n, 2, 2))."""
    data = np.loadtxt(path, delimiter=",", skiprows=1, ndmin=2)
    rho = (data[:, 1:9:2] + 1j * data[:, 2:9:2]).reshape(-1, 2, 2)
    return data[:, 0], rho


def _write_json(path: Path, obj) -> None:
    path.write_text(json.dumps(obj, indent=2) + "\n")


class Runner:
    def __init__(self, cfg: RunConfig, out: Path, threads: int = 1):
        self.cfg = cfg
        self.out = out
        self.threads = threads
        self.bath = build_bath(cfg.bath)
        self.n = cfg.grid.steps
        self.dt = cfg.grid.dt

    def kernels(self, n: int | None = None, dt: float | None = None):
        return build_kernels(self.bath, self.dt if dt is None else dt, self.n if n is None else n)

    def _engine_kw(self):
        return dict(splitting=self.cfg.grid.splitting, threads=self.threads,
                    max_steps=self.cfg.grid.max_steps)

    def trajectory(self) -> list[np.ndarray]:
        cfg = self.cfg
        k = self.kernels()
        states = [cfg.initial_state.copy()]
        for j in range(1, self.n + 1):
            gates = [g for g in cfg.gates if g[0] < j]
            kj = k.prefix(j)
            if gates:
                states.append(conditioned_evolution(cfg.system, kj, cfg.initial_state, gates, j,
                                                    **self._engine_kw()))
            else:
                states.append(reduced_density(cfg.system, kj, cfg.initial_state, j, **self._engine_kw()))
        return states

    def maps(self, n: int, kernels=None):
        k = self.kernels(n) if kernels is None else kernels
        return [compute_map(self.cfg.system, k.prefix(j), j, **self._engine_kw())
                for j in range(1, n + 1)]

    # subcommands -----------------------------------------------------------

    def evolve(self) -> int:
        if self.cfg.gates and max(g[0] for g in self.cfg.gates) >= self.n:
            raise ConfigError(f"gates: steps must lie within [1, {self.n - 1}]")
        states = self.trajectory()
        write_trajectory(self.out / "trajectory.csv", [j * self.dt for j in range(self.n + 1)], states)
        return 0

    def map(self) -> int:
        records = []
        for phi in self.maps(self.n):
            records.append({
                "step": phi.steps,
                "dt": phi.dt,
                "phi": _cmatrix(phi.matrix),
                "f": _cmatrix(phi.coefficients),
                "choi_eigenvalues": [float(x) for x in choi_eigenvalues(phi)],
            })
        _write_json(self.out / "maps.json", records)
        return 0

    def ttm(self) -> int:
        tc = self.cfg.ttm
        if tc is None:
            raise ConfigError("ttm: section required for the ttm subcommand")
        if tc.cutoff < 1 or tc.cutoff > tc.learn_steps:
            raise ConfigError(f"ttm.cutoff must lie in [1, {tc.learn_steps}]")
        maps = self.maps(tc.learn_steps, self.kernels(tc.learn_steps))
        tensors = learn_tensors(maps)
        recon = max(float(np.max(np.abs(reconstruct(tensors, j) - maps[j - 1].matrix)))
                    for j in range(1, tc.learn_steps + 1))
        traj = propagate(tensors, self.cfg.initial_state, tc.total_steps, tc.cutoff)
        overlap = min(tc.total_steps, tc.learn_steps)
        direct = max(float(np.max(np.abs(traj[j - 1] - maps[j - 1].apply(self.cfg.initial_state))))
                     for j in range(1, overlap + 1))
        tol = self.cfg.tolerances["ttm"]
        ok = recon <= tol and (tc.cutoff < tc.learn_steps or direct <= tol)
        write_trajectory(self.out / "ttm_trajectory.csv",
                         [j * self.dt for j in range(tc.total_steps + 1)],
                         [self.cfg.initial_state] + list(traj))
        _write_json(self.out / "report.json", {
            "check": "ttm",
            "learn_steps": tc.learn_steps,
            "cutoff": tc.cutoff,
            "total_steps": tc.total_steps,
            "reconstruction_error": recon,
            "direct_propagation_error": direct,
            "memory_norms": memory_diagnostic(tensors),
            "tolerance": tol,
            "pass": ok,
        })
        return 0 if ok else 1

    def dephasing_check(self) -> int:
        cfg = self.cfg
        if cfg.system.delta != 0:
            raise ConfigError("dephasing-check requires system.delta = 0")
        E0, E1 = dephasing_energies(cfg.system)
        states = self.trajectory()
        errors = []
        for j in range(1, self.n + 1):
            ref = pure_dephasing_density(E0, E1, self.bath, cfg.initial_state, j * self.dt)
            errors.append(float(np.max(np.abs(states[j] - ref))))
        t = self.n * self.dt
        single = reduced_density(cfg.system, self.kernels(1, t), cfg.initial_state, 1, **self._engine_kw())
        ref = pure_dephasing_density(E0, E1, self.bath, cfg.initial_state, t)
        single_err = float(np.max(np.abs(single - ref)))
        tol = cfg.tolerances["dephasing"]
        err = max(errors + [single_err])
        _write_json(self.out / "report.json", {
            "check": "dephasing",
            "t": t,
            "gamma": dephasing_rate(self.bath, t),
            "max_error_grid": max(errors),
            "error_single_step": single_err,
            "tolerance": tol,
            "pass": err <= tol,
        })
        return 0 if err <= tol else 1

    def markov_check(self) -> int:
        cfg = self.cfg
        k = self.kernels(2)
        kw = self._engine_kw()
        phi1 = compute_map(cfg.system, k.prefix(1), 1, **kw)
        consistency = float(np.max(np.abs(markov_map(k.prefix(1), cfg.system, cfg.grid.splitting).matrix
                                          - phi1.matrix)))
        kt = k.truncated(1)
        forced = semigroup_defect(compute_map(cfg.system, kt.prefix(1), 1, **kw),
                                  compute_map(cfg.system, kt, 2, **kw))
        raw = semigroup_defect(phi1, compute_map(cfg.system, k, 2, **kw))
        tc, td = cfg.tolerances["markov_consistency"], cfg.tolerances["markov_defect"]
        ok = consistency <= tc and forced <= td
        _write_json(self.out / "report.json", {
            "check": "markov",
            "dt": self.dt,
            "markov_vs_single_step_map": consistency,
            "forced_memoryless_semigroup_defect": forced,
            "semigroup_defect": raw,
            "tolerance_consistency": tc,
            "tolerance_defect": td,
            "pass": ok,
        })
        return 0 if ok else 1

    def oracle_compare(self) -> int:
        cfg = self.cfg
        oc = cfg.oracle
        env = TruncatedEnvironment.from_bath(self.bath, oc.fock_cutoff, oc.max_dim)
        times = [j * self.dt for j in range(1, self.n + 1)]
        exact = exact_reduced_density(cfg.system, env, cfg.initial_state, times)
        states = self.trajectory()[1:]
        errors = [float(np.max(np.abs(a - b))) for a, b in zip(states, exact)]
        report = {
            "check": "oracle",
            "fock_cutoff": oc.fock_cutoff,
            "splitting": cfg.grid.splitting,
            "errors": errors,
            "max_error": max(errors),
            "trotter_c12": trotter_bound(cfg.system, self.bath, self.dt),
        }
        if oc.convergence_check:
            env2 = TruncatedEnvironment.from_bath(self.bath, 2 * oc.fock_cutoff, oc.max_dim)
            exact2 = exact_reduced_density(cfg.system, env2, cfg.initial_state, times)
            report["cutoff_doubling_change"] = float(np.max(np.abs(exact2 - exact)))
        tol = cfg.tolerances["oracle"]
        report["tolerance"] = tol
        report["pass"] = max(errors) <= tol
        _write_json(self.out / "report.json", report)
        return 0 if report["pass"] else 1


COMMANDS = {
    "evolve": Runner.evolve,
    "map": Runner.map,
    "ttm": Runner.ttm,
    "dephasing-check": Runner.dephasing_check,
    "markov-check": Runner.markov_check,
    "oracle-compare": Runner.oracle_compare,
}


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="sbmap", description="Spin-boson dynamical map via a Trotter path sum.",
                                epilog=OHMIC_HELP)
    sub = p.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        s = sub.add_parser(name, epilog=OHMIC_HELP)
        s.add_argument("--config", required=True, help="JSON run configuration")
        s.add_argument("--out", default=None, help="output directory (overrides output.directory)")
        s.add_argument("--threads", type=int, default=1,
                       help="worker threads for the path sum; results do not depend on it")
        s.add_argument("-v", "--verbose", action="store_true")
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        cfg = load_config(args.config)
        out = Path(args.out or cfg.output_dir or ".")
        out.mkdir(parents=True, exist_ok=True)
        if args.threads < 1:
            raise ConfigError("--threads must be >= 1")
        runner = Runner(cfg, out, args.threads)
        code = COMMANDS[args.command](runner)
        log.info("%s finished with exit code %d", args.command, code)
        return code
    except ResourceLimit as exc:
        print(f"sbmap: resource limit: {exc}", file=sys.stderr)
        return 3
    except SpinBosonError as exc:
        print(f"sbmap: invalid input: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
