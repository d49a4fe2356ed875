"""Finite filtered probability spaces and martingale transform ratios.

Two kinds of filtration are supported: the coordinate filtration of the
hypercube (uniform measure, level i generated by the first i coordinates)
and finite rooted trees with arbitrary branching and point masses.  Both
are stored the same way: one cell-membership table per level plus a
probability vector.  All estimated constants are witnessed lower bounds
over this finite class; reports carry the filtration kind so the
restriction stays visible.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass

import numpy as np

from .hypercube import HypercubeFunction, SignAssignment, sign_vector
from .norms import (
    DEGENERATE_EPS,
    DegenerateInputError,
    NormSpace,
    RademacherAveragePlan,
    signed_combination_average,
)
from .operators import conditional_expectation

__all__ = [
    "FiniteFiltration",
    "MartingaleSequence",
    "make_dyadic_martingale",
    "martingale_lp_norm",
    "umd_ratio",
    "umd_plus_ratio",
    "umd_minus_ratio",
    "martingale_type_ratio",
    "load_martingale",
    "save_martingale",
]

MARTINGALE_TOL = 1e-12


@dataclass(frozen=True, eq=False)
class FiniteFiltration:
    """An increasing sequence of partitions of a finite probability space.

    `levels[i]` maps each sample point to its level-i cell id; level 0 is
    the trivial partition and each level refines the previous one.
    """

    kind: str
    n: int
    probabilities: np.ndarray
    levels: tuple[np.ndarray, ...]

    def __post_init__(self) -> None:
        probs = np.asarray(self.probabilities, dtype=np.float64)
        levels = tuple(np.asarray(lvl, dtype=np.int64) for lvl in self.levels)
        if self.kind not in ("dyadic-hypercube", "tree"):
            raise ValueError(f"unknown filtration kind {self.kind!r}")
        if len(levels) != self.n + 1:
            raise ValueError(f"need {self.n + 1} levels for {self.n} steps, got {len(levels)}")
        size = probs.shape[0]
        if size < 1 or probs.ndim != 1:
            raise ValueError("probabilities must be a nonempty vector")
        if np.any(probs <= 0.0):
            raise ValueError("point probabilities must be positive")
        if abs(probs.sum() - 1.0) > 1e-12:
            raise ValueError("point probabilities must sum to 1 within 1e-12")
        for i, lvl in enumerate(levels):
            if lvl.shape != (size,):
                raise ValueError(f"level {i} table has wrong length")
            if np.any(lvl < 0):
                raise ValueError("cell ids must be nonnegative")
        if np.unique(levels[0]).size != 1:
            raise ValueError("level 0 must be the trivial partition")
        for i in range(1, len(levels)):
            # Refinement: every level-i cell sits inside a single level-(i-1) cell.
            parent_of = {}
            for child, parent in zip(levels[i].tolist(), levels[i - 1].tolist()):
                if parent_of.setdefault(child, parent) != parent:
                    raise ValueError(f"level {i} does not refine level {i - 1}")
        probs.setflags(write=False)
        for lvl in levels:
            lvl.setflags(write=False)
        object.__setattr__(self, "probabilities", probs)
        object.__setattr__(self, "levels", levels)

    @property
    def size(self) -> int:
        return self.probabilities.shape[0]

    @classmethod
    def dyadic(cls, n: int) -> "FiniteFiltration":
        """The coordinate filtration of C_n: level i groups points by their low i bits."""
        if not 1 <= n <= 20:
            raise ValueError(f"dyadic filtration needs n in [1, 20], got {n}")
        size = 1 << n
        points = np.arange(size, dtype=np.int64)
        levels = tuple(points & ((1 << i) - 1) for i in range(n + 1))
        probs = np.full(size, 1.0 / size)
        return cls(kind="dyadic-hypercube", n=n, probabilities=probs, levels=levels)

    @classmethod
    def tree(cls, levels, probabilities) -> "FiniteFiltration":
        levels = tuple(np.asarray(lvl, dtype=np.int64) for lvl in levels)
        return cls(
            kind="tree",
            n=len(levels) - 1,
            probabilities=np.asarray(probabilities, dtype=np.float64),
            levels=levels,
        )

    def condition(self, table: np.ndarray, level: int) -> np.ndarray:
        """Probability-weighted cell averages of a (size, m) value table."""
        if not 0 <= level <= self.n:
            raise ValueError(f"level {level} out of range 0..{self.n}")
        cells = self.levels[level]
        ncells = int(cells.max()) + 1
        mass = np.bincount(cells, weights=self.probabilities, minlength=ncells)
        averaged = np.zeros((ncells, table.shape[1]))
        for j in range(table.shape[1]):
            averaged[:, j] = np.bincount(
                cells, weights=self.probabilities * table[:, j], minlength=ncells
            )
        # Cell ids need not be contiguous; empty ids keep average 0 and are
        # never indexed below.
        occupied = mass > 0.0
        averaged[occupied] /= mass[occupied, None]
        return averaged[cells]

    def to_json_dict(self) -> dict:
        return {
            "kind": self.kind,
            "n": self.n,
            "probabilities": self.probabilities.tolist(),
            "levels": [lvl.tolist() for lvl in self.levels],
        }

    @classmethod
    def from_json_dict(cls, data: dict) -> "FiniteFiltration":
        kind = data["kind"]
        if kind == "dyadic-hypercube" and "levels" not in data:
            return cls.dyadic(int(data["n"]))
        return cls(
            kind=kind,
            n=int(data["n"]),
            probabilities=np.asarray(data["probabilities"], dtype=np.float64),
            levels=tuple(np.asarray(lvl, dtype=np.int64) for lvl in data["levels"]),
        )


@dataclass(frozen=True, eq=False)
class MartingaleSequence:
    """An adapted martingale M_0, ..., M_n with values in R^m.

    Construction validates measurability and the martingale property to
    1e-12 (relative to the value scale); inputs violating either are
    rejected so downstream ratios stay meaningful.
    """

    filtration: FiniteFiltration
    m: int
    values: np.ndarray  # (n + 1, size, m)

    def __post_init__(self) -> None:
        values = np.asarray(self.values, dtype=np.float64)
        expected = (self.filtration.n + 1, self.filtration.size, self.m)
        if values.shape != expected:
            raise ValueError(f"value table must have shape {expected}, got {values.shape}")
        if not np.all(np.isfinite(values)):
            raise ValueError("martingale values must be finite")
        scale = max(1.0, float(np.max(np.abs(values))))
        for i in range(self.filtration.n + 1):
            projected = self.filtration.condition(values[i], i)
            if np.max(np.abs(projected - values[i])) > MARTINGALE_TOL * scale:
                raise ValueError(f"level {i} values are not measurable at level {i}")
        for i in range(1, self.filtration.n + 1):
            pulled = self.filtration.condition(values[i], i - 1)
            if np.max(np.abs(pulled - values[i - 1])) > MARTINGALE_TOL * scale:
                raise ValueError(f"martingale property fails between levels {i - 1} and {i}")
        values.setflags(write=False)
        object.__setattr__(self, "values", values)

    @property
    def steps(self) -> int:
        return self.filtration.n

    def differences(self) -> np.ndarray:
        """The increments d_i = M_i - M_{i-1}, shape (n, size, m)."""
        return self.values[1:] - self.values[:-1]

    def increment(self) -> np.ndarray:
        """M_n - M_0 as a (size, m) table."""
        return self.values[-1] - self.values[0]

    def to_json_dict(self) -> dict:
        return {
            "filtration": self.filtration.to_json_dict(),
            "m": self.m,
            "values": self.values.tolist(),
        }

    @classmethod
    def from_json_dict(cls, data: dict) -> "MartingaleSequence":
        return cls(
            filtration=FiniteFiltration.from_json_dict(data["filtration"]),
            m=int(data["m"]),
            values=np.asarray(data["values"], dtype=np.float64),
        )


def make_dyadic_martingale(f: HypercubeFunction) -> MartingaleSequence:
    """The martingale of conditional expectations of f along the coordinate filtration."""
    filtration = FiniteFiltration.dyadic(f.n)
    values = np.stack(
        [conditional_expectation(f, i).values for i in range(f.n + 1)]
    )
    return MartingaleSequence(filtration=filtration, m=f.m, values=values)


def martingale_lp_norm(
    table: np.ndarray, p: float, space: NormSpace, probabilities: np.ndarray
) -> float:
    """L_p norm of a (size, m) table under the filtration's point measure."""
    pointwise = space.norms(table)
    p = float(p)
    if math.isinf(p):
        return float(pointwise.max())
    if p < 1.0:
        raise ValueError(f"L_p norm needs p >= 1 or p = inf, got {p}")
    return float((pointwise**p @ probabilities) ** (1.0 / p))


def _check_transform_p(p: float) -> float:
    p = float(p)
    if not (1.0 < p < math.inf):
        raise ValueError(f"martingale transform ratios require p in (1, inf), got {p}")
    return p


def umd_ratio(
    M: MartingaleSequence,
    p: float,
    space: NormSpace,
    signs: SignAssignment | None = None,
) -> float:
    """|| sum_i delta_i d_i ||_{L_p} / || M_n - M_0 ||_{L_p}.

    With `signs` given the single transform is evaluated; otherwise all
    2^n sign patterns are enumerated and the largest ratio returned.
    """
    p = _check_transform_p(p)
    diffs = M.differences()
    probs = M.filtration.probabilities
    denominator = martingale_lp_norm(M.increment(), p, space, probs)
    if denominator < DEGENERATE_EPS:
        raise DegenerateInputError("constant martingale has no transform ratio")

    if signs is not None:
        if signs.n != M.steps:
            raise ValueError(f"sign assignment on {signs.n} steps for a {M.steps}-step martingale")
        transformed = np.tensordot(signs.signs(), diffs, axes=(0, 0))
        return martingale_lp_norm(transformed, p, space, probs) / denominator

    if M.steps > 20:
        raise ValueError("exhaustive sign search is limited to 20 steps")
    best = -math.inf
    for mask in range(1 << M.steps):
        transformed = np.tensordot(sign_vector(M.steps, mask), diffs, axes=(0, 0))
        ratio = martingale_lp_norm(transformed, p, space, probs) / denominator
        if ratio > best:
            best = ratio
    return best


def umd_plus_ratio(
    M: MartingaleSequence, p: float, space: NormSpace, plan: RademacherAveragePlan
) -> float:
    """Sign-averaged transform norm over the final increment norm."""
    p = _check_transform_p(p)
    probs = M.filtration.probabilities
    denominator = martingale_lp_norm(M.increment(), p, space, probs)
    if denominator < DEGENERATE_EPS:
        raise DegenerateInputError("constant martingale has no transform ratio")
    averaged = signed_combination_average(M.differences(), p, space, plan, weights=probs)
    return averaged / denominator


def umd_minus_ratio(
    M: MartingaleSequence, p: float, space: NormSpace, plan: RademacherAveragePlan
) -> float:
    """Final increment norm over the sign-averaged transform norm."""
    p = _check_transform_p(p)
    probs = M.filtration.probabilities
    averaged = signed_combination_average(M.differences(), p, space, plan, weights=probs)
    if averaged < DEGENERATE_EPS:
        raise DegenerateInputError("sign-averaged transform norm is degenerate")
    return martingale_lp_norm(M.increment(), p, space, probs) / averaged


def martingale_type_ratio(M: MartingaleSequence, s: float, space: NormSpace) -> float:
    """|| M_n - M_0 ||_{L_s} over the ell_s sum of increment norms."""
    s = float(s)
    if not (1.0 < s <= 2.0):
        raise ValueError(f"martingale type exponent s must lie in (1, 2], got {s}")
    probs = M.filtration.probabilities
    increments = M.differences()
    denominator = (
        sum(martingale_lp_norm(d, s, space, probs) ** s for d in increments) ** (1.0 / s)
    )
    if denominator < DEGENERATE_EPS:
        raise DegenerateInputError("constant martingale has no type ratio")
    return martingale_lp_norm(M.increment(), s, space, probs) / denominator


def load_martingale(path: str) -> MartingaleSequence:
    with open(path, "r", encoding="utf-8") as handle:
        return MartingaleSequence.from_json_dict(json.load(handle))


def save_martingale(M: MartingaleSequence, path: str) -> None:
    with open(path, "w", encoding="utf-8") as handle:
        json.dump(M.to_json_dict(), handle)
        handle.write("\n")
