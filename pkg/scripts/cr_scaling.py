"""How the Cauchy-Riemann residual responds to halving h.

For a holomorphic g the centred stencil leaves h^2 |g'''| / 3, so halving h
should cut the residual by 4. f itself is locally constant: its residual is
pure rounding (about eps / h), which grows when h shrinks. The individual
log terms of f still show the h^2 law at moderate h.
"""

import argparse
import math

import numpy as np

from branchaudit.audit import cr_residual
from branchaudit.core import pln
from branchaudit.functions import eval_F1, eval_F2, eval_F3, make_f


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--probes", type=int, default=20)
    ap.add_argument("--seed", type=int, default=7)
    args = ap.parse_args()

    rng = np.random.default_rng(args.seed)
    # right half-plane away from the cuts of every term
    zs = rng.uniform(0.5, 4, args.probes) + 1j * rng.uniform(-3, -0.5, args.probes)
    funcs = {
        "f": make_f(),
        "Ln F1": lambda z: pln(eval_F1(z)),
        "Ln F2": lambda z: pln(eval_F2(z)),
        "Ln F3": lambda z: pln(eval_F3(z)),
    }
    hs = [1e-2, 1e-3, 1e-4, 5e-5]
    print(f"{'term':>6} " + " ".join(f"{'r(' + format(h, 'g') + ')':>12}" for h in hs)
          + f" {'ratio 1e-3':>11} {'ratio 1e-4':>11}")
    for name, g in funcs.items():
        med = [float(np.median([cr_residual(g, z, h) for z in zs])) for h in hs]
        r3 = np.median([cr_residual(g, z, 1e-3) / max(cr_residual(g, z, 5e-4), 1e-300) for z in zs])
        r4 = np.median([cr_residual(g, z, 1e-4) / max(cr_residual(g, z, 5e-5), 1e-300) for z in zs])
        print(f"{name:>6} " + " ".join(f"{m:12.3e}" for m in med) + f" {r3:11.2f} {r4:11.2f}")
    print(f"rounding floor ~ eps/h at h=5e-5: {np.finfo(float).eps / 5e-5:.1e}")


if __name__ == "__main__":
    main()
