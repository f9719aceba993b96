"""
Derivatives at the terminal time and the gain rule
==================================================

A chain of n integrators needs n time derivatives of the solution to
vanish at tf. Near tf the k-th derivative scales like (tf - t)^(eta - k),
so it vanishes for eta > k, jumps for eta = k and blows up for eta < k.
"""

from ptcontrol import (
    PredefParams,
    classify_singularity,
    kth_derivative,
    min_gain_for_dimension,
)

x0 = 0.7
for k in (1, 2, 3):
    for eta in (k - 0.5, k, k + 0.5):
        if eta <= 1:
            continue
        p = PredefParams.make(eta)
        v = classify_singularity(p, x0, k)
        near = kth_derivative(1 - 1e-6, x0, p, k)
        print(f"k={k} eta={eta:3.1f}: slope {v.slope:+.3f} -> {v.classification:22s} "
              f"d^k x/dt^k at tf-1e-6 = {near:+.4g}")

for n in (2, 3):
    print(f"n={n}: choose eta > {min_gain_for_dimension(n):g}")
