"""Linear operators on hypercube functions.

Discrete partial derivatives, coordinate averaging, conditional
expectations with respect to the coordinate filtration (optionally
reordered by a permutation), fractional Laplacians, the degree-one
projection, and martingale differences.  All operators are pure and act
pointwise or through the Walsh spectrum.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .hypercube import (
    HypercubeFunction,
    WalshSpectrum,
    subset_sizes,
    walsh_forward,
    walsh_inverse,
)

__all__ = [
    "Permutation",
    "partial_derivative",
    "derivative_stack",
    "averaging_operator",
    "conditional_expectation",
    "conditional_expectation_permuted",
    "fractional_laplacian",
    "rademacher_projection",
    "martingale_difference",
]


@dataclass(frozen=True)
class Permutation:
    """A bijection of coordinates {1, ..., n}, stored as the image table."""

    n: int
    image: tuple[int, ...]

    def __post_init__(self) -> None:
        if len(self.image) != self.n or sorted(self.image) != list(range(1, self.n + 1)):
            raise ValueError(f"image {self.image} is not a permutation of 1..{self.n}")

    @classmethod
    def identity(cls, n: int) -> "Permutation":
        return cls(n=n, image=tuple(range(1, n + 1)))

    def __call__(self, i: int) -> int:
        return self.image[i - 1]

    def inverse(self) -> "Permutation":
        inv = [0] * self.n
        for i, j in enumerate(self.image, start=1):
            inv[j - 1] = i
        return Permutation(n=self.n, image=tuple(inv))

    def prefix_mask(self, level: int) -> int:
        """Bitmask of the coordinate set {pi(1), ..., pi(level)}."""
        if not 0 <= level <= self.n:
            raise ValueError(f"level {level} out of range 0..{self.n}")
        mask = 0
        for j in self.image[:level]:
            mask |= 1 << (j - 1)
        return mask


def _check_coordinate(f: HypercubeFunction, i: int) -> int:
    if not 1 <= i <= f.n:
        raise ValueError(f"coordinate {i} out of range 1..{f.n}")
    return 1 << (i - 1)


@lru_cache(maxsize=None)
def _flip_indices(n: int, i: int) -> np.ndarray:
    idx = np.arange(1 << n) ^ (1 << (i - 1))
    idx.setflags(write=False)
    return idx


def _flipped(f: HypercubeFunction, i: int) -> np.ndarray:
    _check_coordinate(f, i)
    return f.values[_flip_indices(f.n, i)]


def partial_derivative(f: HypercubeFunction, i: int) -> HypercubeFunction:
    """d_i f(eps) = (f(eps) - f(eps with coordinate i flipped)) / 2."""
    return HypercubeFunction(n=f.n, m=f.m, values=0.5 * (f.values - _flipped(f, i)))


def derivative_stack(f: HypercubeFunction) -> np.ndarray:
    """All n partial derivatives stacked to (n, 2^n, m), for the hot paths."""
    return np.stack(
        [0.5 * (f.values - f.values[_flip_indices(f.n, i)]) for i in range(1, f.n + 1)]
    )


def averaging_operator(f: HypercubeFunction, i: int) -> HypercubeFunction:
    """E_i f(eps) = (f(eps) + f(eps with coordinate i flipped)) / 2 = (id - d_i) f."""
    return HypercubeFunction(n=f.n, m=f.m, values=0.5 * (f.values + _flipped(f, i)))


def conditional_expectation(f: HypercubeFunction, level: int) -> HypercubeFunction:
    """Average over coordinates level+1 .. n, projecting onto the first `level` coordinates.

    Direct averaging of the defining sum: with the bit convention, the
    trailing coordinates occupy the high bits of the point index, so the
    average is a single mean over the leading reshape axis.
    """
    if not 0 <= level <= f.n:
        raise ValueError(f"level {level} out of range 0..{f.n}")
    if level == f.n:
        return f
    block = 1 << level
    tail = 1 << (f.n - level)
    averaged = f.values.reshape(tail, block, f.m).mean(axis=0)
    out = np.broadcast_to(averaged, (tail, block, f.m)).reshape(1 << f.n, f.m)
    return HypercubeFunction(n=f.n, m=f.m, values=out)


def conditional_expectation_permuted(
    f: HypercubeFunction, pi: Permutation, level: int
) -> HypercubeFunction:
    """Conditional expectation onto the coordinates {pi(1), ..., pi(level)}.

    Implemented through the Walsh side: every coefficient whose subset is
    not contained in the prefix set is zeroed.
    """
    if pi.n != f.n:
        raise ValueError(f"permutation on {pi.n} coordinates applied to n={f.n}")
    allowed = pi.prefix_mask(level)
    spectrum = walsh_forward(f)
    masks = np.arange(1 << f.n)
    keep = (masks & ~allowed) == 0
    coeffs = np.where(keep[:, None], spectrum.coefficients, 0.0)
    return walsh_inverse(WalshSpectrum(n=f.n, m=f.m, coefficients=coeffs))


def fractional_laplacian(f: HypercubeFunction, alpha: float) -> HypercubeFunction:
    """Multiply fhat(A) by |A|^alpha for A nonempty and drop the mean term."""
    alpha = float(alpha)
    if not np.isfinite(alpha):
        raise ValueError("alpha must be finite")
    spectrum = walsh_forward(f)
    sizes = subset_sizes(f.n).astype(np.float64)
    multiplier = np.zeros(1 << f.n)
    multiplier[1:] = sizes[1:] ** alpha
    coeffs = spectrum.coefficients * multiplier[:, None]
    return walsh_inverse(WalshSpectrum(n=f.n, m=f.m, coefficients=coeffs))


def rademacher_projection(f: HypercubeFunction) -> HypercubeFunction:
    """Keep exactly the degree-one Walsh terms fhat({i}) w_{i}."""
    spectrum = walsh_forward(f)
    singleton = subset_sizes(f.n) == 1
    coeffs = np.where(singleton[:, None], spectrum.coefficients, 0.0)
    return walsh_inverse(WalshSpectrum(n=f.n, m=f.m, coefficients=coeffs))


def martingale_difference(f: HypercubeFunction, i: int) -> HypercubeFunction:
    """The i-th dyadic martingale difference of f against the coordinate filtration."""
    _check_coordinate(f, i)
    return conditional_expectation(f, i) - conditional_expectation(f, i - 1)
