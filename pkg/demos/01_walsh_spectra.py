"""A tour of the transform layer.

Functions on the discrete cube {-1,+1}^n are stored as dense tables of
2^n rows; the Walsh transform rewrites them in the character basis
w_A(eps) = prod_{i in A} eps_i.  This script builds a few functions whose
spectra are known in closed form, checks the round trip, and shows the
energy split across degrees.
"""

import numpy as np

from walshcube import (
    HypercubeFunction,
    walsh_forward,
    walsh_forward_naive,
    walsh_inverse,
)
from walshcube.hypercube import subset_sizes

n, m = 5, 1
rng = np.random.default_rng(0)

print("== a constant function concentrates on the empty set ==")
const = HypercubeFunction.constant(n, np.array([3.0]))
spectrum = walsh_forward(const)
print(f"coefficient at the empty set: {spectrum.coefficient(0)[0]:+.3f}")
print(f"largest other coefficient:    {np.abs(spectrum.coefficients[1:]).max():.2e}")

print("\n== a single character is an atom of the spectrum ==")
atom = HypercubeFunction.character(n, 0b10110, np.array([2.0]))
spectrum = walsh_forward(atom)
print(f"coefficient at its own mask 0b10110: {spectrum.coefficient(0b10110)[0]:+.3f}")

print("\n== random function: round trip and the fast/naive agreement ==")
f = HypercubeFunction.from_values(rng.standard_normal((1 << n, m)))
spectrum = walsh_forward(f)
back = walsh_inverse(spectrum)
print(f"round-trip max error: {np.abs(back.values - f.values).max():.2e}")
gap = np.abs(spectrum.coefficients - walsh_forward_naive(f).coefficients).max()
print(f"fast vs naive gap:    {gap:.2e}")

print("\n== energy by degree (squared-coefficient mass per |A|) ==")
energy = np.zeros(n + 1)
degrees = subset_sizes(n)
for a in range(1 << n):
    energy[degrees[a]] += float(spectrum.coefficients[a] @ spectrum.coefficients[a])
total = float(np.mean(np.sum(f.values**2, axis=1)))
for k, e in enumerate(energy):
    bar = "#" * int(40 * e / total)
    print(f"  degree {k}: {e / total:6.1%} {bar}")
print(f"  (sums to 1 by the energy identity: {energy.sum() / total:.12f})")
