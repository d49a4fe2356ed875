"""Martingale transforms on dyadic and tree filtrations.

A martingale adapted to a finite filtration can be transformed by signs
delta_i applied to its increments.  In Hilbert space at p = 2 every
transform preserves the L_2 norm; in ell_1 the worst sign pattern can
expand it, and on a skewed tree two steps already suffice.
"""

import numpy as np

from walshcube import (
    FiniteFiltration,
    HypercubeFunction,
    MartingaleSequence,
    NormSpace,
    RademacherAveragePlan,
    SignAssignment,
    make_dyadic_martingale,
    martingale_type_ratio,
    umd_minus_ratio,
    umd_plus_ratio,
    umd_ratio,
)

rng = np.random.default_rng(3)
plan = RademacherAveragePlan(mode="exact")

print("== dyadic martingale from a random function, n = 5 ==")
f = HypercubeFunction.from_values(rng.standard_normal((32, 2)))
M = make_dyadic_martingale(f)
hilbert = NormSpace(2, 2.0)
l1 = NormSpace(2, 1.0)
print(f"  Hilbert p=2: worst-sign ratio {umd_ratio(M, 2.0, hilbert):.9f} (always 1)")
print(f"  ell_1  p=2: worst-sign ratio {umd_ratio(M, 2.0, l1):.6f}")
print(f"  ell_1  p=2: averaged ratios  +{umd_plus_ratio(M, 2.0, l1, plan):.6f}"
      f"  -{umd_minus_ratio(M, 2.0, l1, plan):.6f}")

print("\n== a two-step tree with uneven masses beats every uniform two-step cube ==")
levels = [[0, 0, 0, 0, 0], [0, 0, 0, 1, 1], [0, 1, 2, 3, 4]]
weights = [0.125, 0.5, 0.125, 0.0625, 0.1875]
terminal = np.array(
    [[-0.25, 1.0], [-0.25, -0.75], [1.0, -1.0], [-2.75, -1.0], [0.0, -3.0]]
)
filtration = FiniteFiltration.tree(levels, weights)
values = np.stack([filtration.condition(terminal, i) for i in range(3)])
tree_m = MartingaleSequence(filtration=filtration, m=2, values=values)
print(f"  worst sign pattern on the tree, ell_1 p=2: {umd_ratio(tree_m, 2.0, l1):.6f}")
for mask in range(4):
    one = umd_ratio(tree_m, 2.0, l1, SignAssignment(n=2, bitmask=mask))
    print(f"    pattern {mask:02b}: {one:.6f}")

print("\n== martingale type: ell_1 fails to have type 2 ==")
switch = HypercubeFunction.from_values(
    np.array([[1.0, 1.0], [1.0, -1.0], [-1.0, 1.0], [-1.0, -1.0]])
)
M2 = make_dyadic_martingale(switch)
print(f"  end-value over ell_2-sum of increments, ell_1 target: "
      f"{martingale_type_ratio(M2, 2.0, l1):.6f} (> 1)")
print(f"  same martingale, Hilbert target:                      "
      f"{martingale_type_ratio(M2, 2.0, hilbert):.6f} (= 1)")
