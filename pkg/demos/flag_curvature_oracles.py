"""Flag curvature of invariant metrics against two classical oracles.

The invariant-frame engine (spray vector, connection operator, curvature
quadratic form) is compared with the closed-form curvature of bi-invariant
metrics on compact groups and of normal homogeneous metrics on spheres.
"""

from fractions import Fraction

import numpy as np

from flagcurv.coset import SubalgebraSpec, build_coset, preset
from flagcurv.curvature import (
    bi_invariant_oracle,
    flag_curvature,
    normal_homogeneous_oracle,
)
from flagcurv.liealg import AlgebraSpec, realize
from flagcurv.norms import Quadratic, random_invariant_norm


def main():
    rng = np.random.default_rng(0)

    print("Bi-invariant metric on su(3): engine vs |[u,v]|^2/(4 area^2)")
    alg = realize(AlgebraSpec((("A", 2, Fraction(1)),)))
    group = build_coset(alg, SubalgebraSpec(), name="su(3)")
    norm = Quadratic(np.eye(group.dim_m))
    worst = 0.0
    for _ in range(50):
        u, v = rng.standard_normal(group.dim_m), rng.standard_normal(group.dim_m)
        k = flag_curvature(group, norm, u, v).k
        worst = max(worst, abs(k - bi_invariant_oracle(group, u, v)))
    print(f"  worst deviation over 50 flags: {worst:.2e}")

    print("\nNormal homogeneous metric on U(3)/U(2):")
    sp = preset("sphere_un", 3)
    norm = Quadratic(np.eye(sp.dim_m))
    ks = []
    worst = 0.0
    for _ in range(50):
        u, v = rng.standard_normal(sp.dim_m), rng.standard_normal(sp.dim_m)
        rep = flag_curvature(sp, norm, u, v)
        ks.append(rep.k)
        worst = max(worst, abs(rep.k - normal_homogeneous_oracle(sp, u, v)))
    print(f"  worst deviation: {worst:.2e}; K ranges over "
          f"[{min(ks):.4f}, {max(ks):.4f}] (a genuinely pinched sphere)")

    print("\nRound sphere SO(6)/SO(5): constant curvature")
    sp = preset("sphere_so2n", 3)
    norm = Quadratic(np.eye(sp.dim_m))
    ks = []
    for _ in range(50):
        u, v = rng.standard_normal(sp.dim_m), rng.standard_normal(sp.dim_m)
        ks.append(flag_curvature(sp, norm, u, v).k)
    print(f"  K in [{min(ks):.12f}, {max(ks):.12f}]")

    print("\nA reversible non-quadratic invariant norm on the same sphere")
    inv = random_invariant_norm(sp, seed=1)
    ks = []
    for _ in range(50):
        u, v = rng.standard_normal(sp.dim_m), rng.standard_normal(sp.dim_m)
        ks.append(flag_curvature(sp, inv, u, v).k)
    print(f"  sampled K in [{min(ks):.4f}, {max(ks):.4f}]")


if __name__ == "__main__":
    main()
