"""Splitting error against exact diagonalization as the step is refined.

    python scripts/trotter_scaling.py --steps 2 4 8 --splitting symmetric forward
"""
import argparse

import numpy as np

from sbmap.bath import DiscretizedBath, build_kernels
from sbmap.oracle import TruncatedEnvironment, exact_reduced_density
from sbmap.pathsum import reduced_density
from sbmap.spin import NAMED_STATES, SpinSystem


def main():
    ap = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    ap.add_argument("--delta", type=float, default=0.5)
    ap.add_argument("--omega-s", type=float, default=1.0)
    ap.add_argument("--mode", type=float, nargs=2, default=(1.0, 0.2), metavar=("OMEGA", "G"))
    ap.add_argument("--t", type=float, default=1.0)
    ap.add_argument("--fock", type=int, default=8)
    ap.add_argument("--state", default="plus", choices=sorted(NAMED_STATES))
    ap.add_argument("--steps", type=int, nargs="+", default=[2, 4, 8])
    ap.add_argument("--splitting", nargs="+", default=["symmetric", "forward"])
    args = ap.parse_args()

    bath = DiscretizedBath.from_modes([tuple(args.mode)])
    system = SpinSystem(args.delta, args.omega_s)
    rho0 = NAMED_STATES[args.state]
    exact = exact_reduced_density(system, TruncatedEnvironment.from_bath(bath, args.fock), rho0, args.t)
    check = exact_reduced_density(system, TruncatedEnvironment.from_bath(bath, 2 * args.fock), rho0, args.t)
    print(f"# oracle cutoff change on doubling: {np.max(np.abs(check - exact)):.2e}")
    print("splitting,n,dt,error,ratio")
    for split in args.splitting:
        prev = None
        for n in args.steps:
            rho = reduced_density(system, build_kernels(bath, args.t / n, n), rho0, n, splitting=split)
            err = float(np.max(np.abs(rho - exact)))
            ratio = "" if prev is None else f"{prev / err:.3f}"
            print(f"{split},{n},{args.t / n!r},{err!r},{ratio}")
            prev = err


if __name__ == "__main__":
    main()
