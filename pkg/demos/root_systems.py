"""Tour of the exact root-system layer.

Builds every family, checks the classical cardinalities, and shows exact
angle and reflection arithmetic in the quartic field Q(sqrt2, sqrt3).
"""

from fractions import Fraction

from flagcurv.rootsys import (
    QNum,
    angle,
    build_root_system,
    root_sum_status,
    rv,
    weyl_reflect,
)


def main():
    print("Root systems of the compact simple Lie algebras")
    print("=" * 60)
    for family, rank in [("A", 4), ("B", 4), ("C", 4), ("D", 5),
                         ("E6", 6), ("E7", 7), ("E8", 8), ("F4", 4), ("G2", 2)]:
        rs = build_root_system(family, rank)
        label = family if family[-1].isdigit() else f"{family}{rank}"
        print(f"  {label:4s}  {len(rs):4d} roots in R^{rs.ambient_dim}")

    print("\nExact angle arithmetic in G2:")
    long_root = rv(QNum(0, 0, 1), 0)               # (sqrt3, 0)
    short_root = rv(QNum(0, 0, Fraction(1, 2)), Fraction(1, 2))
    print(f"  long root      {long_root}")
    print(f"  short root     {short_root}")
    print(f"  angle          {angle(long_root, short_root)}")

    print("\nWeyl reflections permute the roots (sample in B3):")
    b3 = build_root_system("B", 3)
    alpha = rv(1, 0, 0)
    for v in [rv(1, 1, 0), rv(0, 1, 0), rv(1, -1, 0)]:
        print(f"  s_e1({v}) = {weyl_reflect(b3, alpha, v)}")

    print("\nRoot-sum membership drives the bracket relations:")
    c3 = build_root_system("C", 3)
    print("  C3, e1+e2 vs e1-e2:", root_sum_status(c3, rv(1, 1, 0), rv(1, -1, 0)))
    print("  B3, e1+e2 vs e1-e2:",
          root_sum_status(build_root_system("B", 3), rv(1, 1, 0), rv(1, -1, 0)))


if __name__ == "__main__":
    main()
