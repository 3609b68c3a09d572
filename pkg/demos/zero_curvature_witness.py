"""The zero-curvature witness mechanism behind the exclusion arguments.

On the so(5)/so(3) witness space, a commuting pair (u, v) from the two
split root planes satisfies U(u, v) = 0 for every reversible invariant
norm, forcing a flag of zero curvature: the space admits no positively
curved reversible invariant metric.  The same works for the two-factor
torus quotient SU(2)xSU(2)/U(1).
"""

import numpy as np

from flagcurv.coset import preset
from flagcurv.curvature import (
    CurvatureEngine,
    exclusion_witness_pair,
    verify_exclusion_witness,
)
from flagcurv.norms import random_invariant_norm


def main():
    for name, params in [("bn_excluded_subcase1", (2,)),
                         ("a1a1_diagonal", (1,)),
                         ("cn_excluded_subcase1", (3,))]:
        sp = preset(name, *params)
        print(f"{sp.name}  (dim m = {sp.dim_m})")
        for seed in range(3):
            norm = random_invariant_norm(sp, seed)
            eng = CurvatureEngine(sp, norm)
            u, v = exclusion_witness_pair(sp, norm)
            eta = eng.eta(u)[0]
            rep = eng.flag_curvature_commutative(u, v)
            print(f"  seed {seed}: |eta(u)| = {np.linalg.norm(eta):.1e}, "
                  f"|U(u,v)|_u = {np.sqrt(max(rep.k, 0.0)):.1e}  "
                  f"K = {rep.k:.1e} (cross-check {rep.cross_check_k:.1e})")
        summary = verify_exclusion_witness(sp, seed=99)
        print(f"  fresh seed 99: K = {summary['K_commutative']:.1e}\n")
    print("Every sampled reversible invariant norm yields a flat flag:")
    print("these candidate spaces are excluded from the positively curved list.")


if __name__ == "__main__":
    main()
