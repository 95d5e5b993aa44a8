#!/usr/bin/env python3
"""Stress the two smoothing-window bounds with random and adversarial
witnesses and report the worst observed margins.

A positive margin (lhs above rhs) anywhere would falsify the bound; the
point of the audit is watching how far below zero the hill-climber gets
stuck.
"""

import numpy as np

from cotypelab import (
    GridFunction,
    NormTarget,
    TorusDomain,
    adversarial_approx_search,
    adversarial_cancellation_search,
    check_lemma_approx,
    check_lemma_cancellation_all,
    random_vector_values,
)

CELLS = [(2, 8, 1), (2, 8, 3), (3, 6, 1), (2, 10, 3)]
RANDOM_TRIALS = 200


def main() -> None:
    norm = NormTarget(p=2.0, dim=2)
    rng = np.random.default_rng(0)

    print(f"random audit, {RANDOM_TRIALS} witnesses per cell, p = 2")
    print(f"{'cell':>14}  {'approx margin':>16}  {'cancel margin':>16}")
    for n, m, k in CELLS:
        dom = TorusDomain(n=n, m=m)
        worst_a = worst_c = -np.inf
        for i in range(RANDOM_TRIALS):
            f = GridFunction.vector(dom, random_vector_values(dom, 2, rng))
            chk = check_lemma_approx(f, norm, i % n, k, 2.0)
            worst_a = max(worst_a, chk.lhs - chk.rhs)
            for chk in check_lemma_cancellation_all(f, norm, k, 2.0):
                worst_c = max(worst_c, chk.lhs - chk.rhs)
        print(f"  n={n} m={m:2d} k={k}  {worst_a:16.6f}  {worst_c:16.6f}")

    print("\nadversarial audit, 80-step hill climbs")
    for n, m, k in CELLS:
        a = adversarial_approx_search(n, m, 0, k, 2.0, norm, steps=80, seed=1)
        c = adversarial_cancellation_search(n, m, k, 2.0,
                                            np.ones(n, dtype=np.int64),
                                            norm, steps=80, seed=1)
        print(f"  n={n} m={m:2d} k={k}  approx {a.lhs - a.rhs:14.6f}   "
              f"cancel {c.lhs - c.rhs:14.6f}   "
              f"{'ok' if a.passed and c.passed else 'VIOLATION'}")


if __name__ == "__main__":
    main()
