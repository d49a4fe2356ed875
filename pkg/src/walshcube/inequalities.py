"""Left/right functionals for the hypercube inequalities and proof identities.

Each inequality is exposed as a pair of functionals (its two sides) plus a
report builder that records the witnessed ratio.  A witnessed ratio is a
certified lower bound for the corresponding space constant; upper bounds
are out of reach for any finite search and are never claimed.

Ratios with a denominator below 1e-14 are degenerate (constant inputs make
every inequality 0 <= 0) and are reported through the `degenerate` flag
rather than as numbers.
"""

from __future__ import annotations

import itertools
import json
import math
from dataclasses import dataclass

import numpy as np

from .hypercube import HypercubeFunction, WalshSpectrum, sign_matrix, walsh_forward, walsh_inverse
from .norms import (
    DEGENERATE_EPS,
    DegenerateInputError,
    FunctionFamily,
    NormSpace,
    RademacherAveragePlan,
    lp_norm,
    rademacher_average,
    signed_combination_average,
)
from .operators import (
    Permutation,
    conditional_expectation,
    derivative_stack,
    fractional_laplacian,
    martingale_difference,
    partial_derivative,
    rademacher_projection,
)

__all__ = [
    "InequalityReport",
    "FactoredProductFunction",
    "pisier_lhs",
    "pisier_rhs",
    "pisier_report",
    "theorem1_lhs",
    "theorem1_rhs",
    "theorem1_report",
    "corollary2_lhs",
    "corollary2_rhs",
    "corollary2_report",
    "stein_lhs",
    "stein_rhs",
    "stein_report",
    "verify_symmetrization_identity",
    "hn_extract_component",
    "hn_remark_lhs",
    "hn_remark_rhs",
    "hn_remark_report",
    "k_convexity_ratio",
    "rademacher_type_ratio",
    "pisier_envelope",
    "derivative_family",
    "REPORT_CSV_COLUMNS",
]

REPORT_CSV_COLUMNS = ("name", "n", "m", "p", "q", "lhs", "rhs", "ratio", "seed", "mode")


@dataclass(frozen=True)
class InequalityReport:
    """A witnessed two-sided evaluation: lhs, rhs and their ratio.

    The stored parameters (shape, exponents, averaging plan and seed) are
    sufficient to recompute both sides from the same inputs.
    """

    name: str
    lhs: float
    rhs: float
    ratio: float | None
    degenerate: bool
    n: int
    m: int
    p: float
    q: float
    mode: str
    samples: int
    seed: int

    @classmethod
    def build(
        cls,
        name: str,
        lhs: float,
        rhs: float,
        n: int,
        m: int,
        p: float,
        q: float,
        plan: RademacherAveragePlan,
    ) -> "InequalityReport":
        degenerate = rhs < DEGENERATE_EPS
        ratio = None if degenerate else lhs / rhs
        return cls(
            name=name,
            lhs=lhs,
            rhs=rhs,
            ratio=ratio,
            degenerate=degenerate,
            n=n,
            m=m,
            p=p,
            q=q,
            mode=plan.mode,
            samples=plan.samples,
            seed=plan.seed,
        )

    def to_json_dict(self) -> dict:
        return {
            "name": self.name,
            "lhs": self.lhs,
            "rhs": self.rhs,
            "ratio": self.ratio,
            "degenerate": self.degenerate,
            "n": self.n,
            "m": self.m,
            "p": self.p,
            "q": "inf" if math.isinf(self.q) else self.q,
            "mode": self.mode,
            "samples": self.samples,
            "seed": self.seed,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_json_dict(), sort_keys=True, indent=2) + "\n"

    @classmethod
    def from_json_dict(cls, data: dict) -> "InequalityReport":
        q = data["q"]
        return cls(
            name=data["name"],
            lhs=float(data["lhs"]),
            rhs=float(data["rhs"]),
            ratio=None if data["ratio"] is None else float(data["ratio"]),
            degenerate=bool(data["degenerate"]),
            n=int(data["n"]),
            m=int(data["m"]),
            p=float(data["p"]),
            q=math.inf if q in ("inf", "Infinity") else float(q),
            mode=data["mode"],
            samples=int(data["samples"]),
            seed=int(data["seed"]),
        )

    def csv_row(self) -> tuple:
        return (
            self.name,
            self.n,
            self.m,
            self.p,
            "inf" if math.isinf(self.q) else self.q,
            self.lhs,
            self.rhs,
            "" if self.ratio is None else self.ratio,
            self.seed,
            self.mode,
        )


def _check_open_p(p: float, name: str) -> float:
    p = float(p)
    if not (1.0 < p < math.inf):
        raise ValueError(f"{name} requires p in (1, inf), got {p}")
    return p


def pisier_envelope(n: int) -> float:
    """The explicit deviation-vs-gradient constant 2 e log n (vacuous at n = 1)."""
    return 2.0 * math.e * math.log(n)


def derivative_family(f: HypercubeFunction) -> FunctionFamily:
    """(d_1 f, ..., d_n f) as a family, the right-hand side input of the deviation bound."""
    return FunctionFamily(tuple(partial_derivative(f, i) for i in range(1, f.n + 1)))


def pisier_lhs(f: HypercubeFunction, p: float, space: NormSpace) -> float:
    """|| f - mean f ||_{L_p}."""
    p = float(p)
    if not (p >= 1.0) or math.isinf(p):
        raise ValueError(f"the deviation functional requires p in [1, inf), got {p}")
    return lp_norm(f - conditional_expectation(f, 0), p, space)


def pisier_rhs(
    f: HypercubeFunction, p: float, space: NormSpace, plan: RademacherAveragePlan
) -> float:
    """Sign-averaged norm of sum_i delta_i d_i f."""
    p = float(p)
    if not (p >= 1.0) or math.isinf(p):
        raise ValueError(f"the deviation functional requires p in [1, inf), got {p}")
    if f.m != space.m:
        raise ValueError(f"function into R^{f.m} measured in ell_q^{space.m}")
    return signed_combination_average(derivative_stack(f), p, space, plan)


def pisier_report(
    f: HypercubeFunction, p: float, space: NormSpace, plan: RademacherAveragePlan
) -> InequalityReport:
    return InequalityReport.build(
        "pisier",
        pisier_lhs(f, p, space),
        pisier_rhs(f, p, space, plan),
        f.n,
        f.m,
        float(p),
        space.q,
        plan,
    )


def theorem1_lhs(family: FunctionFamily, p: float, space: NormSpace) -> float:
    """|| sum_i (E_i f_i - E_{i-1} f_i) ||_{L_p} for the coordinate filtration."""
    p = _check_open_p(p, "the martingale-difference functional")
    total = np.zeros((1 << family.n, family.m))
    for i, f in enumerate(family, start=1):
        total += martingale_difference(f, i).values
    return lp_norm(HypercubeFunction.from_values(total), p, space)


def theorem1_rhs(
    family: FunctionFamily, p: float, space: NormSpace, plan: RademacherAveragePlan
) -> float:
    """Sign-averaged norm of sum_i delta_i d_i f_i."""
    p = _check_open_p(p, "the martingale-difference functional")
    if family.m != space.m:
        raise ValueError(f"family into R^{family.m} measured in ell_q^{space.m}")
    derivatives = np.stack(
        [partial_derivative(f, i).values for i, f in enumerate(family, start=1)]
    )
    return signed_combination_average(derivatives, p, space, plan)


def theorem1_report(
    family: FunctionFamily, p: float, space: NormSpace, plan: RademacherAveragePlan
) -> InequalityReport:
    return InequalityReport.build(
        "theorem1",
        theorem1_lhs(family, p, space),
        theorem1_rhs(family, p, space, plan),
        family.n,
        family.m,
        float(p),
        space.q,
        plan,
    )


def corollary2_lhs(family: FunctionFamily, p: float, space: NormSpace) -> float:
    """|| sum_i Delta^-1 d_i f_i ||_{L_p}."""
    p = _check_open_p(p, "the inverse-Laplacian functional")
    total = np.zeros((1 << family.n, family.m))
    for i, f in enumerate(family, start=1):
        total += fractional_laplacian(partial_derivative(f, i), -1.0).values
    return lp_norm(HypercubeFunction.from_values(total), p, space)


def corollary2_rhs(
    family: FunctionFamily, p: float, space: NormSpace, plan: RademacherAveragePlan
) -> float:
    """Identical right side as the martingale-difference inequality."""
    return theorem1_rhs(family, p, space, plan)


def corollary2_report(
    family: FunctionFamily, p: float, space: NormSpace, plan: RademacherAveragePlan
) -> InequalityReport:
    return InequalityReport.build(
        "corollary2",
        corollary2_lhs(family, p, space),
        corollary2_rhs(family, p, space, plan),
        family.n,
        family.m,
        float(p),
        space.q,
        plan,
    )


def stein_lhs(
    family: FunctionFamily, p: float, space: NormSpace, plan: RademacherAveragePlan
) -> float:
    """Sign-averaged norm of sum_i delta_i E_i f_i over the coordinate filtration."""
    p = _check_open_p(p, "the conditional-expectation functional")
    projected = FunctionFamily(
        tuple(conditional_expectation(f, i) for i, f in enumerate(family, start=1))
    )
    return rademacher_average(projected, p, space, plan)


def stein_rhs(
    family: FunctionFamily, p: float, space: NormSpace, plan: RademacherAveragePlan
) -> float:
    """Sign-averaged norm of sum_i delta_i f_i."""
    p = _check_open_p(p, "the conditional-expectation functional")
    return rademacher_average(family, p, space, plan)


def stein_report(
    family: FunctionFamily, p: float, space: NormSpace, plan: RademacherAveragePlan
) -> InequalityReport:
    return InequalityReport.build(
        "stein",
        stein_lhs(family, p, space, plan),
        stein_rhs(family, p, space, plan),
        family.n,
        family.m,
        float(p),
        space.q,
        plan,
    )


def verify_symmetrization_identity(
    family: FunctionFamily,
    permutation_samples: int | None = None,
    seed: int = 0,
) -> float:
    """Max pointwise gap between the permutation average and the inverse-Laplacian sum.

    Averages sum_i E_i^pi d_{pi(i)} f_{pi(i)} over permutations pi (all n!
    of them for n <= 8, otherwise `permutation_samples` uniform draws) and
    compares with sum_i Delta^-1 d_i f_i.

    The permuted projections are applied through their Walsh-restriction
    rule on precomputed derivative spectra, with a single inverse
    transform of the accumulated sum; by linearity this matches applying
    `conditional_expectation_permuted` term by term.
    """
    n, m = family.n, family.m
    derivatives = [partial_derivative(f, i) for i, f in enumerate(family, start=1)]

    if permutation_samples is None:
        if n > 8:
            raise ValueError(
                "full permutation enumeration is limited to n <= 8; "
                "pass permutation_samples for larger n"
            )
        perms = itertools.permutations(range(1, n + 1))
        count = math.factorial(n)
    else:
        if permutation_samples < 1:
            raise ValueError("permutation sample count must be >= 1")
        rng = np.random.default_rng(seed)
        perms = (
            tuple(int(v) + 1 for v in rng.permutation(n)) for _ in range(permutation_samples)
        )
        count = permutation_samples

    spectra = [walsh_forward(d).coefficients for d in derivatives]
    masks = np.arange(1 << n)
    accumulated = np.zeros((1 << n, m))
    for image in perms:
        pi = Permutation(n=n, image=tuple(image))
        for level in range(1, n + 1):
            keep = (masks & ~pi.prefix_mask(level)) == 0
            accumulated[keep] += spectra[pi(level) - 1][keep]
    averaged = walsh_inverse(
        WalshSpectrum(n=n, m=m, coefficients=accumulated / count)
    ).values

    target = np.zeros((1 << n, m))
    for d in derivatives:
        target += fractional_laplacian(d, -1.0).values
    return float(np.max(np.abs(averaged - target)))


@dataclass(frozen=True)
class FactoredProductFunction:
    """F(eps, delta) = G_0(eps) + sum_j delta_j G_j(eps) on C_n x C_n.

    The factored form is how product-space inputs are held at any size;
    a dense (2^n, 2^n, m) table indexed (eps, delta) is accepted up to
    n = 8 by the extraction below.
    """

    base: HypercubeFunction
    components: tuple[HypercubeFunction, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "components", tuple(self.components))
        n, m = self.base.n, self.base.m
        if len(self.components) != n:
            raise ValueError(f"need exactly n={n} delta-components, got {len(self.components)}")
        for g in self.components:
            if (g.n, g.m) != (n, m):
                raise ValueError("all components must share the base shape")

    @property
    def n(self) -> int:
        return self.base.n

    @property
    def m(self) -> int:
        return self.base.m

    def to_dense(self) -> np.ndarray:
        """The full (2^n, 2^n, m) table; refuses n > 8."""
        n = self.n
        if n > 8:
            raise ValueError("dense product tables are limited to n <= 8")
        signs = sign_matrix(n, np.arange(1 << n))  # (delta index, j)
        stacked = np.stack([g.values for g in self.components])  # (j, eps, m)
        dense = np.einsum("dj,jem->edm", signs, stacked)
        dense += self.base.values[:, None, :]
        return dense


def hn_extract_component(
    product: FactoredProductFunction | np.ndarray, i: int
) -> HypercubeFunction:
    """F_i(eps) = 2^-n sum_delta delta_i F(eps, delta).

    For a factored input this is the i-th component exactly; a dense table
    (eps index, delta index, coordinates) is averaged directly.
    """
    if isinstance(product, FactoredProductFunction):
        if not 1 <= i <= product.n:
            raise ValueError(f"component {i} out of range 1..{product.n}")
        return product.components[i - 1]

    dense = np.asarray(product, dtype=np.float64)
    if dense.ndim == 2:
        dense = dense[:, :, None]
    if dense.ndim != 3 or dense.shape[0] != dense.shape[1]:
        raise ValueError("dense product input must have shape (2^n, 2^n, m)")
    rows = dense.shape[0]
    n = rows.bit_length() - 1
    if rows != 1 << n:
        raise ValueError("dense product input must have 2^n rows")
    if n > 8:
        raise ValueError("dense product extraction is limited to n <= 8")
    if not 1 <= i <= n:
        raise ValueError(f"component {i} out of range 1..{n}")
    delta_signs = 1.0 - 2.0 * ((np.arange(rows) >> (i - 1)) & 1).astype(np.float64)
    values = np.einsum("d,edm->em", delta_signs, dense) / rows
    return HypercubeFunction.from_values(values)


def hn_remark_lhs(components: FunctionFamily, p: float, space: NormSpace) -> float:
    """|| sum_i Delta^-1 d_i F_i ||_{L_p} for extracted components F_i."""
    p = _check_open_p(p, "the product-extraction functional")
    total = np.zeros((1 << components.n, components.m))
    for i, g in enumerate(components, start=1):
        total += fractional_laplacian(partial_derivative(g, i), -1.0).values
    return lp_norm(HypercubeFunction.from_values(total), p, space)


def hn_remark_rhs(
    components: FunctionFamily, p: float, space: NormSpace, plan: RademacherAveragePlan
) -> float:
    """Sign-averaged norm of sum_i delta_i F_i (no derivatives on the right)."""
    p = _check_open_p(p, "the product-extraction functional")
    return rademacher_average(components, p, space, plan)


def hn_remark_report(
    components: FunctionFamily, p: float, space: NormSpace, plan: RademacherAveragePlan
) -> InequalityReport:
    return InequalityReport.build(
        "hn-remark",
        hn_remark_lhs(components, p, space),
        hn_remark_rhs(components, p, space, plan),
        components.n,
        components.m,
        float(p),
        space.q,
        plan,
    )


def k_convexity_ratio(f: HypercubeFunction, r: float, space: NormSpace) -> float:
    """|| Rad f ||_{L_r} / || f ||_{L_r}; witnessed values lower-bound the
    degree-one projection norm."""
    r = _check_open_p(r, "the degree-one projection ratio")
    denominator = lp_norm(f, r, space)
    if denominator < DEGENERATE_EPS:
        raise DegenerateInputError("zero function has no projection ratio")
    return lp_norm(rademacher_projection(f), r, space) / denominator


def rademacher_type_ratio(vectors: np.ndarray, s: float, space: NormSpace) -> float:
    """Sign-averaged norm of sum_i delta_i x_i against the ell_s sum of norms.

    Exact enumeration over all sign vectors; at most 20 vectors.
    """
    s = float(s)
    if not (1.0 < s <= 2.0):
        raise ValueError(f"type exponent s must lie in (1, 2], got {s}")
    table = np.asarray(vectors, dtype=np.float64)
    if table.ndim != 2:
        raise ValueError("vectors must form a (k, m) table")
    k = table.shape[0]
    if k > 20:
        raise ValueError("exact sign enumeration is limited to 20 vectors")
    norms = space.norms(table)
    denominator = float(np.sum(norms**s) ** (1.0 / s))
    if denominator < DEGENERATE_EPS:
        raise DegenerateInputError("all-zero vectors have no type ratio")
    signs = sign_matrix(k, np.arange(1 << k))
    combos = signs @ table
    numerator = float(np.mean(space.norms(combos) ** s) ** (1.0 / s))
    return numerator / denominator
