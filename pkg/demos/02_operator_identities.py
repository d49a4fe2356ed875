"""The operator algebra on the cube, checked numerically.

Partial derivatives and coordinate averages are complementary halves of
the identity; conditional expectations are iterated averages and also
spectral truncations; martingale differences have two equivalent
formulas; the inverse Laplacian undoes the summed derivatives.
"""

import numpy as np

from walshcube import (
    HypercubeFunction,
    Permutation,
    averaging_operator,
    conditional_expectation,
    conditional_expectation_permuted,
    fractional_laplacian,
    martingale_difference,
    partial_derivative,
)

n, m = 6, 2
rng = np.random.default_rng(1)
f = HypercubeFunction.from_values(rng.standard_normal((1 << n, m)))


def gap(a, b):
    return float(np.max(np.abs(a - b)))


print("identity check                                          max gap")
print("-" * 64)

worst = 0.0
for i in range(1, n + 1):
    worst = max(worst, gap(averaging_operator(f, i).values + partial_derivative(f, i).values, f.values))
print(f"average + derivative = identity                         {worst:.2e}")

level = 3
composed = f
for j in range(n, level, -1):
    composed = averaging_operator(composed, j)
print(
    "projection onto first 3 coordinates = iterated averages "
    f"{gap(conditional_expectation(f, level).values, composed.values):.2e}"
)

worst = 0.0
for i in range(1, n + 1):
    d = martingale_difference(f, i)
    via = conditional_expectation(partial_derivative(f, i), i)
    worst = max(worst, gap(d.values, via.values))
print(f"difference formula = projected derivative               {worst:.2e}")

total = sum(martingale_difference(f, i).values for i in range(1, n + 1))
print(f"differences telescope to f - mean                       {gap(total, f.values - f.mean()):.2e}")

summed = sum(partial_derivative(f, i).values for i in range(1, n + 1))
recovered = fractional_laplacian(HypercubeFunction.from_values(summed), -1.0)
print(f"inverse Laplacian of summed derivatives = f - mean      {gap(recovered.values, f.values - f.mean()):.2e}")

pi = Permutation(n=n, image=(3, 6, 1, 5, 2, 4))
plain = conditional_expectation(f, 2)
permuted = conditional_expectation_permuted(f, Permutation.identity(n), 2)
print(f"identity permutation reproduces the plain projection    {gap(plain.values, permuted.values):.2e}")

kept = HypercubeFunction.character(n, pi.prefix_mask(2), np.ones(m))
print(
    "permuted projection keeps characters inside its prefix  "
    f"{gap(conditional_expectation_permuted(kept, pi, 2).values, kept.values):.2e}"
)
