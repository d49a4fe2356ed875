"""Target-space norms, vector-valued L_p norms and Rademacher averages.

Every inequality functional measures through this layer: a `NormSpace`
fixes the finite-dimensional target ell_q^m, `lp_norm` takes the L_p norm
over the uniform cube measure, and `rademacher_average` averages the norm
of signed combinations of a function family over sign vectors, either by
exact enumeration or by a deterministic counter-based Monte Carlo.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .hypercube import HypercubeFunction, sign_matrix

__all__ = [
    "DegenerateInputError",
    "NormSpace",
    "FunctionFamily",
    "RademacherAveragePlan",
    "lp_norm",
    "rademacher_average",
    "duality_pairing",
    "sample_sign_masks",
    "signed_combination_average",
]

DEGENERATE_EPS = 1e-14

_CHUNK = 1024  # sign vectors per block; fixed so reduction order never varies


class DegenerateInputError(ValueError):
    """A ratio denominator fell below the degeneracy threshold (1e-14)."""


@dataclass(frozen=True)
class NormSpace:
    """The target space ell_q^m with its Hoelder-conjugate index.

    q may be any real in [1, inf]; use ``math.inf`` for the max norm.
    """

    m: int
    q: float

    def __post_init__(self) -> None:
        if self.m < 1:
            raise ValueError("target dimension m must be >= 1")
        q = float(self.q)
        if not (q >= 1.0):
            raise ValueError(f"norm index q must satisfy q >= 1, got {q}")
        object.__setattr__(self, "q", q)

    @property
    def dual_index(self) -> float:
        """q* with 1/q + 1/q* = 1 (q* = inf when q = 1 and vice versa)."""
        if self.q == 1.0:
            return math.inf
        if math.isinf(self.q):
            return 1.0
        return self.q / (self.q - 1.0)

    def dual(self) -> "NormSpace":
        return NormSpace(m=self.m, q=self.dual_index)

    def norm(self, vector: np.ndarray) -> float:
        return float(self.norms(np.asarray(vector, dtype=np.float64)[None, :])[0])

    def norms(self, table: np.ndarray) -> np.ndarray:
        """ell_q norms along the last axis."""
        if table.shape[-1] != self.m:
            raise ValueError(f"vectors of length {table.shape[-1]} in ell_q^{self.m}")
        a = np.abs(table)
        if math.isinf(self.q):
            return a.max(axis=-1)
        if self.q == 1.0:
            return a.sum(axis=-1)
        if self.q == 2.0:
            return np.sqrt((a * a).sum(axis=-1))
        return (a**self.q).sum(axis=-1) ** (1.0 / self.q)

    def label(self) -> str:
        return f"l{self.q:g}^{self.m}"


@dataclass(frozen=True)
class FunctionFamily:
    """An ordered family (f_1, ..., f_n) of functions on C_n sharing (n, m)."""

    functions: tuple[HypercubeFunction, ...]

    def __post_init__(self) -> None:
        if not self.functions:
            raise ValueError("family must not be empty")
        object.__setattr__(self, "functions", tuple(self.functions))
        n, m = self.functions[0].n, self.functions[0].m
        for f in self.functions:
            if (f.n, f.m) != (n, m):
                raise ValueError("family members must share (n, m)")
        if len(self.functions) != n:
            raise ValueError(
                f"family must contain exactly n={n} functions, got {len(self.functions)}"
            )

    @property
    def n(self) -> int:
        return self.functions[0].n

    @property
    def m(self) -> int:
        return self.functions[0].m

    def stacked(self) -> np.ndarray:
        """Member tables stacked to shape (n, 2^n, m)."""
        return np.stack([f.values for f in self.functions])

    def __len__(self) -> int:
        return len(self.functions)

    def __iter__(self):
        return iter(self.functions)

    def __getitem__(self, i: int) -> HypercubeFunction:
        return self.functions[i]

    def to_json_dict(self) -> dict:
        return {
            "n": self.n,
            "m": self.m,
            "functions": [f.values.tolist() for f in self.functions],
        }

    @classmethod
    def from_json_dict(cls, data: dict) -> "FunctionFamily":
        members = tuple(
            HypercubeFunction.from_values(np.asarray(v, dtype=np.float64))
            for v in data["functions"]
        )
        return cls(functions=members)


@dataclass(frozen=True)
class RademacherAveragePlan:
    """How sign averages are evaluated: exact enumeration or Monte Carlo.

    Exact enumeration costs ~ count * 2^count sign vectors and is the
    default up to `exact_threshold`; beyond it, `samples` deterministic
    draws keyed on (seed, sample index) are used.
    """

    mode: str = "exact"
    samples: int = 20000
    seed: int = 0
    exact_threshold: int = 10

    def __post_init__(self) -> None:
        if self.mode not in ("exact", "monte-carlo"):
            raise ValueError(f"unknown plan mode {self.mode!r}")
        if self.samples < 1:
            raise ValueError("sample count must be >= 1")

    @classmethod
    def auto(cls, count: int, samples: int = 20000, seed: int = 0, exact_threshold: int = 10):
        mode = "exact" if count <= exact_threshold else "monte-carlo"
        return cls(mode=mode, samples=samples, seed=seed, exact_threshold=exact_threshold)


_MASK64 = np.uint64(0xFFFFFFFFFFFFFFFF)
_GOLDEN = np.uint64(0x9E3779B97F4A7C15)


def _mix64(x: np.ndarray) -> np.ndarray:
    """SplitMix64 finalizer, vectorized over uint64 (wrapping arithmetic)."""
    x = (x ^ (x >> np.uint64(30))) * np.uint64(0xBF58476D1CE4E5B9)
    x = (x ^ (x >> np.uint64(27))) * np.uint64(0x94D049BB133111EB)
    return x ^ (x >> np.uint64(31))


def sample_sign_masks(seed: int, count: int, n: int) -> np.ndarray:
    """Deterministic sign-vector bitmasks keyed on (seed, sample index).

    Sample j depends only on (seed, j), so any parallel or serial
    evaluation order reproduces the same draw.
    """
    idx = np.arange(1, count + 1, dtype=np.uint64)
    state = (np.uint64(seed & 0xFFFFFFFFFFFFFFFF) + idx * _GOLDEN) & _MASK64
    return (_mix64(state) & np.uint64((1 << n) - 1)).astype(np.int64)


def _check_p_finite(p: float) -> float:
    p = float(p)
    if not (p > 0.0) or math.isinf(p):
        raise ValueError(f"exponent p must be finite and positive, got {p}")
    return p


def lp_norm(f: HypercubeFunction, p: float, space: NormSpace) -> float:
    """(mean over the cube of ||f(eps)||_X^p)^(1/p); max over the cube for p = inf."""
    if f.m != space.m:
        raise ValueError(f"function into R^{f.m} measured in ell_q^{space.m}")
    pointwise = space.norms(f.values)
    p = float(p)
    if math.isinf(p):
        return float(pointwise.max())
    if p < 1.0:
        raise ValueError(f"L_p norm needs p >= 1 or p = inf, got {p}")
    return float(np.mean(pointwise**p) ** (1.0 / p))


def signed_combination_average(
    tables: np.ndarray,
    p: float,
    space: NormSpace,
    plan: RademacherAveragePlan,
    weights: np.ndarray | None = None,
) -> float:
    """(avg over delta of || sum_i delta_i t_i ||_{L_p}^p)^(1/p) for stacked tables.

    `tables` has shape (count, points, m); the point measure is uniform
    unless `weights` gives probabilities.  Shared by the cube-side
    Rademacher averages and the martingale transform averages.
    """
    count, _, m = tables.shape
    if m != space.m:
        raise ValueError(f"tables into R^{m} measured in ell_q^{space.m}")
    p = _check_p_finite(p)

    if plan.mode == "exact":
        if count > 20:
            raise ValueError(f"exact sign enumeration is limited to 20 members, got {count}")
        total_masks = 1 << count
        masks = np.arange(total_masks, dtype=np.int64)
        denominator = float(total_masks)
    else:
        masks = sample_sign_masks(plan.seed, plan.samples, count)
        denominator = float(plan.samples)

    flat = np.ascontiguousarray(tables.reshape(count, -1))
    # One combination buffer for the whole run; repeated fresh allocations
    # of the combination table dominate the cost otherwise.
    buffer = np.empty((min(_CHUNK, len(masks)), flat.shape[1]))
    accumulated = 0.0
    # Chunks of fixed size in ascending mask/sample order keep the
    # reduction deterministic regardless of any internal parallelism.
    for start in range(0, len(masks), _CHUNK):
        block = masks[start : start + _CHUNK]
        signs = sign_matrix(count, block)
        view = buffer[: len(block)]
        np.matmul(signs, flat, out=view)
        np.abs(view, out=view)
        shaped = view.reshape(len(block), -1, m)
        pointwise = _norms_of_absolute(shaped, space.q) ** p
        if weights is None:
            powered = pointwise.mean(axis=1)
        else:
            powered = pointwise @ weights
        accumulated += float(powered.sum())
    return (accumulated / denominator) ** (1.0 / p)


def _norms_of_absolute(table: np.ndarray, q: float) -> np.ndarray:
    """ell_q norms along the last axis of an already-absolute table.

    May overwrite `table`; callers pass scratch buffers.
    """
    if math.isinf(q):
        return table.max(axis=-1)
    if q == 1.0:
        return table.sum(axis=-1)
    if q == 2.0:
        np.multiply(table, table, out=table)
        return np.sqrt(table.sum(axis=-1))
    np.power(table, q, out=table)
    return table.sum(axis=-1) ** (1.0 / q)


def rademacher_average(
    family: FunctionFamily, p: float, space: NormSpace, plan: RademacherAveragePlan
) -> float:
    """(2^-n sum_delta || sum_i delta_i g_i ||_{L_p}^p)^(1/p) over delta in C_n."""
    return signed_combination_average(family.stacked(), p, space, plan)


def duality_pairing(f: HypercubeFunction, g: HypercubeFunction) -> float:
    """2^-n sum_eps <f(eps), g(eps)> with the Euclidean pairing on R^m."""
    f._check_same_shape(g)
    return float(np.mean(np.einsum("km,km->k", f.values, g.values)))
