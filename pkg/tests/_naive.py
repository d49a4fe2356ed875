"""Direct-definition reference implementations used as test oracles.

Everything here is written from the defining sums, with explicit Python
loops where that keeps the code obviously correct.  These routines are
deliberately slow and independent of the library's fast paths; golden
data is produced only through them.
"""

from __future__ import annotations

import numpy as np

from walshcube.hypercube import HypercubeFunction, WalshSpectrum


def character_value(subset: int, point: int) -> float:
    """w_A(eps) as a literal product over the coordinates of A."""
    value = 1.0
    i = 0
    while subset >> i:
        if (subset >> i) & 1:
            value *= -1.0 if (point >> i) & 1 else 1.0
        i += 1
    return value


def forward_double_sum(f: HypercubeFunction) -> np.ndarray:
    """fhat(A) = 2^-n sum_eps f(eps) w_A(eps), as an explicit double loop."""
    size = 1 << f.n
    coeffs = np.zeros((size, f.m))
    for a in range(size):
        acc = np.zeros(f.m)
        for k in range(size):
            acc += f.values[k] * character_value(a, k)
        coeffs[a] = acc / size
    return coeffs


def inverse_double_sum(s: WalshSpectrum) -> np.ndarray:
    """f(eps) = sum_A fhat(A) w_A(eps), as an explicit double loop."""
    size = 1 << s.n
    values = np.zeros((size, s.m))
    for k in range(size):
        acc = np.zeros(s.m)
        for a in range(size):
            acc += s.coefficients[a] * character_value(a, k)
        values[k] = acc
    return values


def conditional_expectation_sum(f: HypercubeFunction, level: int) -> np.ndarray:
    """The defining average over the trailing coordinates, looped per point."""
    size = 1 << f.n
    out = np.zeros_like(f.values)
    tail = f.n - level
    low_mask = (1 << level) - 1
    for k in range(size):
        acc = np.zeros(f.m)
        for high in range(1 << tail):
            acc += f.values[(k & low_mask) | (high << level)]
        out[k] = acc / (1 << tail)
    return out


def lp_norm_sum(values: np.ndarray, p: float, q: float) -> float:
    """L_p(ell_q) norm over the uniform measure, from the defining sums."""
    point_norms = []
    for row in values:
        if np.isinf(q):
            point_norms.append(np.max(np.abs(row)))
        else:
            point_norms.append(np.sum(np.abs(row) ** q) ** (1.0 / q))
    point_norms = np.asarray(point_norms)
    if np.isinf(p):
        return float(point_norms.max())
    return float(np.mean(point_norms**p) ** (1.0 / p))


def signs_of_mask(mask: int, n: int) -> np.ndarray:
    return np.array([-1.0 if (mask >> i) & 1 else 1.0 for i in range(n)])


def rademacher_average_enumerated(tables: np.ndarray, p: float, q: float) -> float:
    """Sign-enumerated average of || sum_i delta_i t_i ||_{L_p}^p, then the p-th root."""
    count = tables.shape[0]
    total = 0.0
    for mask in range(1 << count):
        delta = signs_of_mask(mask, count)
        combo = np.tensordot(delta, tables, axes=(0, 0))
        total += lp_norm_sum(combo, p, q) ** p
    return (total / (1 << count)) ** (1.0 / p)
