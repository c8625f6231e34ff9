"""Learn transfer tensors from short maps and push the state far past the horizon.

Also prints the tensor norms, which is what one looks at to pick a cutoff.
"""
import argparse

import numpy as np

from sbmap.bath import BathSpec, build_bath, build_kernels
from sbmap.pathsum import compute_map
from sbmap.spin import NAMED_STATES, SpinSystem, bloch
from sbmap.ttm import learn_tensors, memory_diagnostic, propagate


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--alpha", type=float, default=0.05)
    ap.add_argument("--omega-c", type=float, default=5.0)
    ap.add_argument("--beta", type=float, default=2.0)
    ap.add_argument("--delta", type=float, default=0.5)
    ap.add_argument("--omega-s", type=float, default=1.0)
    ap.add_argument("--dt", type=float, default=0.2)
    ap.add_argument("--learn", type=int, default=8)
    ap.add_argument("--cutoff", type=int, default=None)
    ap.add_argument("--total", type=int, default=200)
    ap.add_argument("--threads", type=int, default=1)
    args = ap.parse_args()

    bath = build_bath(BathSpec("ohmic-family", alpha=args.alpha, s=1.0, omega_c=args.omega_c,
                               omega_max=10 * args.omega_c, modes=200, beta=args.beta))
    system = SpinSystem(args.delta, args.omega_s)
    k = build_kernels(bath, args.dt, args.learn)
    maps = [compute_map(system, k.prefix(j), j, threads=args.threads) for j in range(1, args.learn + 1)]
    T = learn_tensors(maps)
    print("# |T_p|:", " ".join(f"{x:.3e}" for x in memory_diagnostic(T)))
    traj = propagate(T, NAMED_STATES["zero"], args.total, args.cutoff)
    print("t,bloch_x,bloch_y,bloch_z,trace_err")
    for n, rho in enumerate(traj, start=1):
        x, y, z = bloch(rho)
        print(f"{n * args.dt!r},{x!r},{y!r},{z!r},{abs(np.trace(rho) - 1):.1e}")


if __name__ == "__main__":
    main()
