#!/usr/bin/env python3
"""Distortion floors from the cotype side, checked against actual maps.

The exact Hilbert constant at (n, m) = (2, 4) turns into the floor
sqrt(2) / (2 gamma) = 4/3 for any injection of Z_4^2 into l_2^3. Random
Gaussian injections, even after adversarial cleanup, stay above it. The
identity into l_q grids shows the n^(1/q) floor is exactly attained.
"""

import math

import numpy as np

from cotypelab import (
    distortion,
    gamma_hilbert_exact,
    grid_distortion_bound,
    grid_lower_bound_check,
    grid_points,
    points_space,
    shift_growth_bound,
)


def main() -> None:
    g, _ = gamma_hilbert_exact(2, 4)
    floor = math.sqrt(2.0) / (2.0 * g)
    print(f"gamma(2, 4) = {g:.12f}  ->  floor sqrt(2)/(2 gamma) = {floor:.12f}")

    chk = grid_lower_bound_check(2, 4, 3, trials=60, seed=0, adversarial_steps=25)
    print(f"worst of 60 random injections Z_4^2 -> l_2^3: {chk.rhs:.6f}")
    print(f"floor respected: {chk.passed}\n")

    print("identity [m]_inf^n -> l_q^n attains its n^(1/q) floor exactly:")
    for n in (2, 3, 4):
        for q in (2.0, 4.0):
            pts = grid_points(n, 2)
            d = distortion(np.arange(len(pts)),
                           points_space(pts, math.inf),
                           points_space(pts, q))
            print(f"  n={n} q={q:.0f}   distortion {d.distortion:.12f}"
                  f"   n^(1/q) = {n ** (1.0 / q):.12f}")

    print("\nderived growth and distortion bounds:")
    print(f"  shift growth from (n0=4, l0=4) at n=10: {shift_growth_bound(4, 4, 10):.1f}")
    for n in (4, 9):
        k = grid_distortion_bound(n, 2.0, 1.0)
        print(f"  bijection floor n={n}, q=2, K=1: {k:.3f}")


if __name__ == "__main__":
    main()
