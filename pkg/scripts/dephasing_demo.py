"""Pure dephasing under an ohmic bath: path sum vs closed form on a time grid.

Prints t, |rho_01| from the engine, the closed form, and their difference.
"""
import argparse

import numpy as np

from sbmap.bath import BathSpec, build_bath, build_kernels
from sbmap.limits import pure_dephasing_density
from sbmap.pathsum import reduced_density
from sbmap.spin import NAMED_STATES, SpinSystem


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--alpha", type=float, default=0.1)
    ap.add_argument("--s", type=float, default=1.0)
    ap.add_argument("--omega-c", type=float, default=5.0)
    ap.add_argument("--omega-max", type=float, default=50.0)
    ap.add_argument("--modes", type=int, default=200)
    ap.add_argument("--beta", type=float, default=float("inf"))
    ap.add_argument("--dt", type=float, default=0.25)
    ap.add_argument("--steps", type=int, default=12)
    args = ap.parse_args()

    bath = build_bath(BathSpec("ohmic-family", alpha=args.alpha, s=args.s, omega_c=args.omega_c,
                               omega_max=args.omega_max, modes=args.modes, beta=args.beta))
    system = SpinSystem(0.0, 1.0)
    rho0 = NAMED_STATES["plus"]
    k = build_kernels(bath, args.dt, args.steps)
    print("t,engine,closed_form,abs_diff")
    for n in range(1, args.steps + 1):
        rho = reduced_density(system, k.prefix(n), rho0, n)
        ref = pure_dephasing_density(1.0, -1.0, bath, rho0, n * args.dt)
        print(f"{n * args.dt!r},{float(abs(rho[0, 1]))!r},{float(abs(ref[0, 1]))!r},{abs(rho[0, 1] - ref[0, 1]):.2e}")


if __name__ == "__main__":
    main()
