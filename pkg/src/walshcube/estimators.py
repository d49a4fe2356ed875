"""Random-restart ascent for extremal inequality witnesses.

Every registered ratio functional maps a flat parameter vector to a
(lhs, rhs) pair; the search maximizes log(lhs/rhs) with central
finite-difference gradients and a halving line search.  The objective is
homogeneous of degree zero, so iterates are renormalized to unit scale
and any returned value is automatically a witnessed, re-checkable lower
bound: the certificate stores the witness and enough configuration to
reproduce both sides exactly.
"""

from __future__ import annotations

import csv
import hashlib
import json
import math
from dataclasses import asdict, dataclass

import numpy as np

from .hypercube import HypercubeFunction
from .inequalities import (
    InequalityReport,
    corollary2_lhs,
    corollary2_rhs,
    hn_remark_lhs,
    hn_remark_rhs,
    pisier_envelope,
    pisier_lhs,
    pisier_rhs,
    stein_lhs,
    stein_rhs,
    theorem1_lhs,
    theorem1_rhs,
)
from .martingales import make_dyadic_martingale, martingale_lp_norm, umd_ratio
from .norms import (
    DEGENERATE_EPS,
    FunctionFamily,
    NormSpace,
    RademacherAveragePlan,
    lp_norm,
    signed_combination_average,
)
from .operators import rademacher_projection

__all__ = [
    "SearchConfig",
    "RatioCertificate",
    "CertificateMismatchError",
    "SearchFailedError",
    "FUNCTIONAL_NAMES",
    "maximize_ratio",
    "scan_dimension",
    "reevaluate_certificate",
    "load_certificate",
    "save_certificate",
]

_MIN_LINE_STEP = 1e-10


class CertificateMismatchError(ValueError):
    """A stored certificate does not reproduce its own claims."""


class SearchFailedError(RuntimeError):
    """No nondegenerate starting point could be drawn."""


@dataclass(frozen=True)
class SearchConfig:
    """Shape, exponents and budgets for one extremal search."""

    functional: str
    n: int
    m: int
    p: float
    q: float
    restarts: int = 16
    iterations: int = 300
    step: float = 1e-5
    tol: float = 1e-9
    probes: int = 2000
    seed: int = 0
    plan_mode: str = "auto"
    plan_samples: int = 20000

    def __post_init__(self) -> None:
        if self.restarts < 1 or self.iterations < 1 or self.probes < 1:
            raise ValueError("restarts, iterations and probes must all be >= 1")
        if not (self.step > 0.0):
            raise ValueError("finite-difference step must be positive")
        if not (self.tol > 0.0):
            raise ValueError("convergence tolerance must be positive")
        if not (1.0 < float(self.p) < math.inf):
            raise ValueError(f"search requires p in (1, inf), got {self.p}")

    def space(self) -> NormSpace:
        return NormSpace(m=self.m, q=self.q)

    def plan(self) -> RademacherAveragePlan:
        if self.plan_mode == "auto":
            return RademacherAveragePlan.auto(self.n, samples=self.plan_samples, seed=self.seed)
        return RademacherAveragePlan(
            mode=self.plan_mode, samples=self.plan_samples, seed=self.seed
        )

    def to_json_dict(self) -> dict:
        data = asdict(self)
        if math.isinf(self.q):
            data["q"] = "inf"
        return data

    @classmethod
    def from_json_dict(cls, data: dict) -> "SearchConfig":
        data = dict(data)
        if data.get("q") in ("inf", "Infinity"):
            data["q"] = math.inf
        return cls(**data)


def _function_witness(flat: np.ndarray, config: SearchConfig) -> HypercubeFunction:
    return HypercubeFunction.from_values(flat.reshape(1 << config.n, config.m))


def _family_witness(flat: np.ndarray, config: SearchConfig) -> FunctionFamily:
    tables = flat.reshape(config.n, 1 << config.n, config.m)
    return FunctionFamily(tuple(HypercubeFunction.from_values(t) for t in tables))


def _vectors_witness(flat: np.ndarray, config: SearchConfig) -> np.ndarray:
    return flat.reshape(config.n, config.m)


_WITNESS_KINDS = {
    "function": (lambda c: (1 << c.n) * c.m, _function_witness),
    "family": (lambda c: c.n * (1 << c.n) * c.m, _family_witness),
    "vectors": (lambda c: c.n * c.m, _vectors_witness),
}


def _eval_pisier(f, config, plan):
    space = config.space()
    return pisier_lhs(f, config.p, space), pisier_rhs(f, config.p, space, plan)


def _eval_theorem1(family, config, plan):
    space = config.space()
    return theorem1_lhs(family, config.p, space), theorem1_rhs(family, config.p, space, plan)


def _eval_corollary2(family, config, plan):
    space = config.space()
    return corollary2_lhs(family, config.p, space), corollary2_rhs(family, config.p, space, plan)


def _eval_stein(family, config, plan):
    space = config.space()
    return stein_lhs(family, config.p, space, plan), stein_rhs(family, config.p, space, plan)


def _eval_hn_remark(family, config, plan):
    space = config.space()
    return hn_remark_lhs(family, config.p, space), hn_remark_rhs(family, config.p, space, plan)


def _eval_k_convexity(f, config, plan):
    space = config.space()
    return (
        lp_norm(rademacher_projection(f), config.p, space),
        lp_norm(f, config.p, space),
    )


def _eval_rademacher_type(vectors, config, plan):
    space = config.space()
    s = config.p
    norms = space.norms(vectors)
    denominator = float(np.sum(norms**s) ** (1.0 / s))
    plan_exact = RademacherAveragePlan(mode="exact")
    numerator = signed_combination_average(vectors[:, None, :], s, space, plan_exact)
    return numerator, denominator


def _eval_umd(f, config, plan):
    M = make_dyadic_martingale(f)
    space = config.space()
    probs = M.filtration.probabilities
    denominator = martingale_lp_norm(M.increment(), config.p, space, probs)
    if denominator < DEGENERATE_EPS:
        return 0.0, denominator
    return umd_ratio(M, config.p, space) * denominator, denominator


def _eval_umd_plus(f, config, plan):
    M = make_dyadic_martingale(f)
    space = config.space()
    probs = M.filtration.probabilities
    averaged = signed_combination_average(M.differences(), config.p, space, plan, weights=probs)
    return averaged, martingale_lp_norm(M.increment(), config.p, space, probs)


def _eval_umd_minus(f, config, plan):
    M = make_dyadic_martingale(f)
    space = config.space()
    probs = M.filtration.probabilities
    averaged = signed_combination_average(M.differences(), config.p, space, plan, weights=probs)
    return martingale_lp_norm(M.increment(), config.p, space, probs), averaged


def _eval_martingale_type(f, config, plan):
    M = make_dyadic_martingale(f)
    space = config.space()
    s = config.p
    probs = M.filtration.probabilities
    denominator = float(
        sum(martingale_lp_norm(d, s, space, probs) ** s for d in M.differences()) ** (1.0 / s)
    )
    return martingale_lp_norm(M.increment(), s, space, probs), denominator


_FUNCTIONALS = {
    "pisier": ("function", _eval_pisier),
    "theorem1": ("family", _eval_theorem1),
    "corollary2": ("family", _eval_corollary2),
    "stein": ("family", _eval_stein),
    "hn-remark": ("family", _eval_hn_remark),
    "k-convexity": ("function", _eval_k_convexity),
    "rademacher-type": ("vectors", _eval_rademacher_type),
    "umd": ("function", _eval_umd),
    "umd-plus": ("function", _eval_umd_plus),
    "umd-minus": ("function", _eval_umd_minus),
    "martingale-type": ("function", _eval_martingale_type),
}

FUNCTIONAL_NAMES = tuple(sorted(_FUNCTIONALS))

_TYPE_EXPONENT_FUNCTIONALS = ("rademacher-type", "martingale-type")


def _lookup(config: SearchConfig):
    if config.functional not in _FUNCTIONALS:
        raise ValueError(
            f"unknown functional {config.functional!r}; choose one of {FUNCTIONAL_NAMES}"
        )
    if config.functional in _TYPE_EXPONENT_FUNCTIONALS and not (1.0 < config.p <= 2.0):
        raise ValueError(f"{config.functional} requires p in (1, 2], got {config.p}")
    kind, evaluate = _FUNCTIONALS[config.functional]
    dimension, unflatten = _WITNESS_KINDS[kind]
    return kind, evaluate, dimension(config), unflatten


@dataclass(frozen=True)
class RatioCertificate:
    """A reproducible extremal witness: inputs, both sides, and their ratio."""

    functional: str
    witness_kind: str
    witness: tuple
    lhs: float
    rhs: float
    ratio: float
    config: SearchConfig
    discarded_restarts: int
    digest: str

    def to_json_dict(self) -> dict:
        return {
            "functional": self.functional,
            "witness_kind": self.witness_kind,
            "witness": self.witness,
            "lhs": self.lhs,
            "rhs": self.rhs,
            "ratio": self.ratio,
            "config": self.config.to_json_dict(),
            "discarded_restarts": self.discarded_restarts,
            "digest": self.digest,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_json_dict(), sort_keys=True, indent=2) + "\n"

    @classmethod
    def from_json_dict(cls, data: dict) -> "RatioCertificate":
        return cls(
            functional=data["functional"],
            witness_kind=data["witness_kind"],
            witness=_freeze(data["witness"]),
            lhs=float(data["lhs"]),
            rhs=float(data["rhs"]),
            ratio=float(data["ratio"]),
            config=SearchConfig.from_json_dict(data["config"]),
            discarded_restarts=int(data["discarded_restarts"]),
            digest=data["digest"],
        )

    def witness_array(self) -> np.ndarray:
        return np.asarray(self.witness, dtype=np.float64)


def _freeze(nested):
    if isinstance(nested, (list, tuple)):
        return tuple(_freeze(item) for item in nested)
    return nested


def _thaw(nested):
    if isinstance(nested, tuple):
        return [_thaw(item) for item in nested]
    return nested


def _certificate_digest(functional: str, witness_kind: str, witness, config: SearchConfig) -> str:
    payload = json.dumps(
        {
            "functional": functional,
            "witness_kind": witness_kind,
            "witness": _thaw(witness),
            "config": config.to_json_dict(),
        },
        sort_keys=True,
        separators=(",", ":"),
    )
    return hashlib.sha256(payload.encode("utf-8")).hexdigest()


class _NonFiniteValue(Exception):
    pass


def _make_objective(evaluate, unflatten, config, plan):
    def objective(flat: np.ndarray):
        """Returns (ratio, lhs, rhs); ratio is None for a degenerate rhs."""
        lhs, rhs = evaluate(unflatten(flat, config), config, plan)
        if not (math.isfinite(lhs) and math.isfinite(rhs)):
            raise _NonFiniteValue
        if rhs < DEGENERATE_EPS:
            return None, lhs, rhs
        return lhs / rhs, lhs, rhs

    return objective


def _rms(x: np.ndarray) -> float:
    return float(np.sqrt(np.mean(x * x)))


def _ascend(objective, x0: np.ndarray, config: SearchConfig):
    """Gradient ascent on log(ratio) with backtracking halving line search.

    Iterates are renormalized to unit root-mean-square scale (the ratio is
    scale invariant), which makes the constant finite-difference step
    `config.step` a relative step in every coordinate.
    """
    x = x0 / _rms(x0)
    ratio, lhs, rhs = objective(x)
    if ratio is None:
        raise _NonFiniteValue
    h = config.step
    trial_step = 0.5
    for _ in range(config.iterations):
        gradient = np.empty_like(x)
        for k in range(x.size):
            bump = np.zeros_like(x)
            bump[k] = h
            up, _, _ = objective(x + bump)
            down, _, _ = objective(x - bump)
            if up is None or down is None or up <= 0.0 or down <= 0.0:
                raise _NonFiniteValue
            gradient[k] = (math.log(up) - math.log(down)) / (2.0 * h)
        norm = float(np.linalg.norm(gradient))
        if norm == 0.0 or not math.isfinite(norm):
            break
        direction = gradient / norm
        t = trial_step
        accepted = None
        while t >= _MIN_LINE_STEP:
            candidate = x + t * direction
            cand_ratio, cand_lhs, cand_rhs = objective(candidate)
            if cand_ratio is not None and cand_ratio > ratio:
                accepted = (candidate, cand_ratio, cand_lhs, cand_rhs)
                break
            t *= 0.5
        if accepted is None:
            break
        candidate, cand_ratio, cand_lhs, cand_rhs = accepted
        improvement = (cand_ratio - ratio) / ratio
        x = candidate / _rms(candidate)
        ratio, lhs, rhs = cand_ratio, cand_lhs, cand_rhs
        trial_step = min(2.0 * t, 1.0)
        if improvement < config.tol:
            break
    # Re-evaluate at the stored (renormalized) point so the certificate is exact.
    ratio, lhs, rhs = objective(x)
    if ratio is None:
        raise _NonFiniteValue
    return x, ratio, lhs, rhs


def maximize_ratio(config: SearchConfig) -> RatioCertificate:
    """Run probes plus restarts and certify the best witnessed ratio.

    The returned ratio is at least the best pure-probe ratio of the run;
    ties between candidates resolve to the earliest one, so identical
    configurations yield byte-identical certificates.
    """
    kind, evaluate, dimension, unflatten = _lookup(config)
    plan = config.plan()
    objective = _make_objective(evaluate, unflatten, config, plan)
    rng = np.random.default_rng(config.seed)

    def draw_nondegenerate() -> tuple[np.ndarray, float, float, float]:
        for _ in range(1000):
            x = rng.standard_normal(dimension)
            try:
                ratio, lhs, rhs = objective(x)
            except _NonFiniteValue:
                continue
            if ratio is not None:
                return x, ratio, lhs, rhs
        raise SearchFailedError(
            f"could not draw a nondegenerate input for {config.functional!r} "
            f"with shape (n={config.n}, m={config.m})"
        )

    best = None  # (ratio, x, lhs, rhs); first strictly better candidate wins
    for _ in range(config.probes):
        x, ratio, lhs, rhs = draw_nondegenerate()
        if best is None or ratio > best[0]:
            best = (ratio, x, lhs, rhs)

    discarded = 0
    for _ in range(config.restarts):
        x0, _, _, _ = draw_nondegenerate()
        try:
            x, ratio, lhs, rhs = _ascend(objective, x0, config)
        except _NonFiniteValue:
            discarded += 1
            continue
        if ratio > best[0]:
            best = (ratio, x, lhs, rhs)

    ratio, x, lhs, rhs = best
    witness = _witness_payload(kind, x, config)
    digest = _certificate_digest(config.functional, kind, witness, config)
    return RatioCertificate(
        functional=config.functional,
        witness_kind=kind,
        witness=witness,
        lhs=lhs,
        rhs=rhs,
        ratio=ratio,
        config=config,
        discarded_restarts=discarded,
        digest=digest,
    )


def _witness_payload(kind: str, flat: np.ndarray, config: SearchConfig):
    if kind == "function":
        shaped = flat.reshape(1 << config.n, config.m)
    elif kind == "family":
        shaped = flat.reshape(config.n, 1 << config.n, config.m)
    else:
        shaped = flat.reshape(config.n, config.m)
    return _freeze(shaped.tolist())


def reevaluate_certificate(cert: RatioCertificate) -> InequalityReport:
    """Recompute both sides from the stored witness; any drift is an error."""
    expected = _certificate_digest(cert.functional, cert.witness_kind, cert.witness, cert.config)
    if expected != cert.digest:
        raise CertificateMismatchError("certificate digest does not match its payload")
    config = cert.config
    kind, evaluate, dimension, unflatten = _lookup(config)
    if kind != cert.witness_kind:
        raise CertificateMismatchError(
            f"witness kind {cert.witness_kind!r} does not fit functional {config.functional!r}"
        )
    flat = cert.witness_array().reshape(-1)
    if flat.size != dimension:
        raise CertificateMismatchError("witness size does not match the declared shape")
    plan = config.plan()
    lhs, rhs = evaluate(unflatten(flat, config), config, plan)
    scale = max(abs(cert.lhs), abs(cert.rhs), 1e-30)
    if abs(lhs - cert.lhs) > 1e-9 * scale or abs(rhs - cert.rhs) > 1e-9 * scale:
        raise CertificateMismatchError(
            f"stored values (lhs={cert.lhs}, rhs={cert.rhs}) do not reproduce "
            f"(lhs={lhs}, rhs={rhs})"
        )
    return InequalityReport.build(
        cert.functional,
        lhs,
        rhs,
        config.n,
        config.m,
        config.p,
        config.q,
        plan,
    )


def scan_dimension(
    config: SearchConfig,
    n_values,
    m_for_n=None,
    csv_path: str | None = None,
) -> list[RatioCertificate]:
    """One certificate per dimension, with the explicit 2 e log n envelope column.

    `m_for_n` optionally maps n to a target dimension (e.g. ``lambda n: 2**n``
    for max-norm targets that grow with the cube).
    """
    certificates = []
    for n in n_values:
        m = config.m if m_for_n is None else int(m_for_n(n))
        shaped = SearchConfig(**{**asdict(config), "n": int(n), "m": m})
        certificates.append(maximize_ratio(shaped))
    if csv_path is not None:
        with open(csv_path, "w", newline="", encoding="utf-8") as handle:
            writer = csv.writer(handle)
            writer.writerow(["n", "ratio", "envelope_2e_log_n"])
            for cert in certificates:
                writer.writerow([cert.config.n, cert.ratio, pisier_envelope(cert.config.n)])
    return certificates


def save_certificate(cert: RatioCertificate, path: str) -> None:
    with open(path, "w", encoding="utf-8") as handle:
        handle.write(cert.to_json())


def load_certificate(path: str) -> RatioCertificate:
    with open(path, "r", encoding="utf-8") as handle:
        return RatioCertificate.from_json_dict(json.load(handle))
