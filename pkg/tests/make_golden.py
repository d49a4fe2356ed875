"""Regenerate the committed golden data under data/.

Run as a script from the repository root:

    python tests/make_golden.py

Everything here goes through the direct-definition oracles in
tests/_naive.py, never the fast library paths, so a regression in the
butterfly or in any operator cannot silently refresh the golden values.
"""

from __future__ import annotations

import json
import pathlib
import sys

import numpy as np

sys.path.insert(0, str(pathlib.Path(__file__).resolve().parent))

from _naive import (  # noqa: E402
    forward_double_sum,
    inverse_double_sum,
    lp_norm_sum,
    rademacher_average_enumerated,
)
from walshcube.hypercube import HypercubeFunction, WalshSpectrum  # noqa: E402

DATA_DIR = pathlib.Path(__file__).resolve().parent.parent / "data"

N, M, P, Q = 4, 2, 2.0, 2.0
SEED = 2024


def naive_derivative(values: np.ndarray, i: int) -> np.ndarray:
    out = np.zeros_like(values)
    for k in range(values.shape[0]):
        out[k] = (values[k] - values[k ^ (1 << (i - 1))]) / 2.0
    return out


def naive_inverse_laplacian(values: np.ndarray) -> np.ndarray:
    f = HypercubeFunction.from_values(values)
    coeffs = forward_double_sum(f)
    for a in range(1, coeffs.shape[0]):
        coeffs[a] /= bin(a).count("1")
    coeffs[0] = 0.0
    return inverse_double_sum(WalshSpectrum.from_coefficients(coeffs))


def main() -> None:
    rng = np.random.default_rng(SEED)
    tables = [rng.standard_normal((1 << N, M)) for _ in range(N)]

    derivatives = [naive_derivative(t, i) for i, t in enumerate(tables, start=1)]
    total = np.zeros((1 << N, M))
    for d in derivatives:
        total += naive_inverse_laplacian(d)
    lhs = lp_norm_sum(total, P, Q)
    rhs = rademacher_average_enumerated(np.stack(derivatives), P, Q)

    DATA_DIR.mkdir(exist_ok=True)
    family_path = DATA_DIR / "sample_family.json"
    golden_path = DATA_DIR / "golden_corollary2.json"
    with open(family_path, "w", encoding="utf-8") as handle:
        json.dump({"n": N, "m": M, "functions": [t.tolist() for t in tables]}, handle)
        handle.write("\n")
    golden = {
        "name": "corollary2",
        "lhs": lhs,
        "rhs": rhs,
        "ratio": lhs / rhs,
        "degenerate": False,
        "n": N,
        "m": M,
        "p": P,
        "q": Q,
        "mode": "exact",
        "samples": 20000,
        "seed": 7,
    }
    with open(golden_path, "w", encoding="utf-8") as handle:
        json.dump(golden, handle, indent=2, sort_keys=True)
        handle.write("\n")
    print(f"wrote {family_path} and {golden_path}: lhs={lhs!r} rhs={rhs!r}")


if __name__ == "__main__":
    main()
