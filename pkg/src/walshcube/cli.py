"""Command-line entry point.

One process runs one command:

    walshcube --command verify    run the identity suite, exit 0 iff all pass
    walshcube --command eval      evaluate a named functional on a JSON input
    walshcube --command estimate  search for an extremal witness, emit a certificate
    walshcube --command scan      one certificate per dimension, CSV trend table
    walshcube --command bench     time fast vs naive transforms and sign averaging
    walshcube --command transform Walsh-transform a JSON function (or invert a spectrum)

Exit codes: 0 success, 1 check failure, 2 input error, 3 degenerate-only
result.  All output is written once at the end of the run.
"""

from __future__ import annotations

import argparse
import csv
import json
import math
import sys
import time

import numpy as np

from .estimators import (
    FUNCTIONAL_NAMES,
    SearchConfig,
    maximize_ratio,
    save_certificate,
    scan_dimension,
)
from .hypercube import (
    HypercubeFunction,
    WalshSpectrum,
    walsh_forward,
    walsh_forward_naive,
    walsh_inverse,
)
from .inequalities import (
    REPORT_CSV_COLUMNS,
    InequalityReport,
    corollary2_report,
    hn_remark_report,
    pisier_report,
    stein_report,
    theorem1_report,
)
from .martingales import (
    MartingaleSequence,
    make_dyadic_martingale,
    martingale_lp_norm,
    umd_ratio,
)
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
from .operators import rademacher_projection
from .verification import run_verification_suite

EXIT_OK = 0
EXIT_CHECK_FAILURE = 1
EXIT_INPUT_ERROR = 2
EXIT_DEGENERATE = 3


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="walshcube",
        description="Hypercube Fourier analysis and inequality-witness toolkit",
    )
    parser.add_argument(
        "--command",
        required=True,
        choices=["verify", "eval", "estimate", "scan", "bench", "transform"],
    )
    parser.add_argument("--n", type=int, default=6, help="cube dimension")
    parser.add_argument("--n-min", type=int, default=None, help="scan start (default 2)")
    parser.add_argument("--n-max", type=int, default=None, help="scan end (default --n)")
    parser.add_argument(
        "--m", type=int, default=2, help="target dimension; 0 means 2^n inside scans"
    )
    parser.add_argument("--p", type=float, default=2.0, help="L_p exponent")
    parser.add_argument("--q", type=float, default=2.0, help="ell_q target index (inf allowed)")
    parser.add_argument("--mode", choices=["exact", "mc"], default=None)
    parser.add_argument("--samples", type=int, default=20000)
    parser.add_argument("--seed", type=int, default=7)
    parser.add_argument("--restarts", type=int, default=16)
    parser.add_argument("--iters", type=int, default=300)
    parser.add_argument("--probes", type=int, default=2000)
    parser.add_argument("--functional", default="pisier", help=f"one of {FUNCTIONAL_NAMES}")
    parser.add_argument("--in", dest="input_path", default=None, metavar="PATH")
    parser.add_argument("--out", dest="output_path", default=None, metavar="PATH")
    parser.add_argument("--format", choices=["json", "csv"], default="json")
    parser.add_argument("--corrupt", default=None, help=argparse.SUPPRESS)
    return parser


def _plan_from_args(args, count: int) -> RademacherAveragePlan:
    if args.mode == "exact":
        return RademacherAveragePlan(mode="exact", samples=args.samples, seed=args.seed)
    if args.mode == "mc":
        return RademacherAveragePlan(mode="monte-carlo", samples=args.samples, seed=args.seed)
    return RademacherAveragePlan.auto(count, samples=args.samples, seed=args.seed)


def _emit(text: str, path: str | None) -> None:
    if path is None:
        sys.stdout.write(text if text.endswith("\n") else text + "\n")
    else:
        with open(path, "w", encoding="utf-8") as handle:
            handle.write(text if text.endswith("\n") else text + "\n")


def _load_json(path: str | None):
    if path is None:
        raise ValueError("this command needs an input file (--in PATH)")
    with open(path, "r", encoding="utf-8") as handle:
        try:
            return json.load(handle)
        except json.JSONDecodeError as err:
            raise ValueError(f"{path}:{err.lineno}:{err.colno}: {err.msg}") from err


def cmd_verify(args) -> int:
    results = run_verification_suite(
        n=args.n, m=args.m, seed=args.seed, corrupt=args.corrupt
    )
    report = {
        "command": "verify",
        "n": args.n,
        "m": args.m,
        "seed": args.seed,
        "checks": [r.to_json_dict() for r in results],
        "passed": all(r.passed for r in results),
    }
    _emit(json.dumps(report, indent=2, sort_keys=True), args.output_path)
    failing = [r.name for r in results if not r.passed]
    if failing:
        sys.stderr.write(f"verification failed: {failing[0]}\n")
        return EXIT_CHECK_FAILURE
    return EXIT_OK


def _report_from_martingale(name: str, data: dict, args) -> InequalityReport:
    M = MartingaleSequence.from_json_dict(data)
    space = NormSpace(M.m, args.q)
    plan = _plan_from_args(args, M.steps)
    probs = M.filtration.probabilities
    denominator = martingale_lp_norm(M.increment(), args.p, space, probs)
    if name == "umd":
        if denominator < DEGENERATE_EPS:
            raise DegenerateInputError("constant martingale")
        ratio = umd_ratio(M, args.p, space)
        lhs, rhs = ratio * denominator, denominator
    elif name == "umd-plus":
        lhs = signed_combination_average(M.differences(), args.p, space, plan, weights=probs)
        rhs = denominator
    elif name == "umd-minus":
        lhs = denominator
        rhs = signed_combination_average(M.differences(), args.p, space, plan, weights=probs)
    else:  # martingale-type
        if not (1.0 < args.p <= 2.0):
            raise ValueError(f"martingale-type requires p in (1, 2], got {args.p}")
        lhs = denominator
        rhs = float(
            sum(
                martingale_lp_norm(d, args.p, space, probs) ** args.p
                for d in M.differences()
            )
            ** (1.0 / args.p)
        )
    return InequalityReport.build(name, lhs, rhs, M.steps, M.m, args.p, space.q, plan)


def cmd_eval(args) -> int:
    data = _load_json(args.input_path)
    name = args.functional
    if name in ("pisier", "k-convexity"):
        f = HypercubeFunction.from_json_dict(data)
        space = NormSpace(f.m, args.q)
        plan = _plan_from_args(args, f.n)
        if name == "pisier":
            report = pisier_report(f, args.p, space, plan)
        else:
            numerator = lp_norm(rademacher_projection(f), args.p, space)
            denominator = lp_norm(f, args.p, space)
            report = InequalityReport.build(
                name, numerator, denominator, f.n, f.m, args.p, space.q, plan
            )
    elif name in ("theorem1", "corollary2", "stein", "hn-remark"):
        family = FunctionFamily.from_json_dict(data)
        space = NormSpace(family.m, args.q)
        plan = _plan_from_args(args, family.n)
        builder = {
            "theorem1": theorem1_report,
            "corollary2": corollary2_report,
            "stein": stein_report,
            "hn-remark": hn_remark_report,
        }[name]
        report = builder(family, args.p, space, plan)
    elif name == "rademacher-type":
        if not (1.0 < args.p <= 2.0):
            raise ValueError(f"rademacher-type requires p in (1, 2], got {args.p}")
        vectors = np.asarray(data["vectors"], dtype=np.float64)
        space = NormSpace(vectors.shape[1], args.q)
        plan = RademacherAveragePlan(mode="exact", seed=args.seed)
        norms = space.norms(vectors)
        rhs = float(np.sum(norms**args.p) ** (1.0 / args.p))
        lhs = signed_combination_average(vectors[:, None, :], args.p, space, plan)
        report = InequalityReport.build(
            name, lhs, rhs, vectors.shape[0], vectors.shape[1], args.p, space.q, plan
        )
    elif name in ("umd", "umd-plus", "umd-minus", "martingale-type"):
        if "values" in data and "filtration" not in data:
            M = make_dyadic_martingale(HypercubeFunction.from_json_dict(data))
            data = M.to_json_dict()
        report = _report_from_martingale(name, data, args)
    else:
        raise ValueError(f"unknown functional {name!r}; choose one of {FUNCTIONAL_NAMES}")

    if args.format == "csv":
        lines = [",".join(REPORT_CSV_COLUMNS)]
        lines.append(",".join(str(v) for v in report.csv_row()))
        _emit("\n".join(lines), args.output_path)
    else:
        _emit(report.to_json(), args.output_path)
    return EXIT_DEGENERATE if report.degenerate else EXIT_OK


def cmd_estimate(args) -> int:
    config = SearchConfig(
        functional=args.functional,
        n=args.n,
        m=args.m,
        p=args.p,
        q=args.q,
        restarts=args.restarts,
        iterations=args.iters,
        probes=args.probes,
        seed=args.seed,
        plan_mode={"exact": "exact", "mc": "monte-carlo", None: "auto"}[args.mode],
        plan_samples=args.samples,
    )
    certificate = maximize_ratio(config)
    if args.output_path is not None:
        save_certificate(certificate, args.output_path)
        sys.stdout.write(
            f"{certificate.functional}: ratio {certificate.ratio:.12g} "
            f"-> {args.output_path}\n"
        )
    else:
        sys.stdout.write(certificate.to_json())
    return EXIT_OK


def cmd_scan(args) -> int:
    n_lo = 2 if args.n_min is None else args.n_min
    n_hi = args.n if args.n_max is None else args.n_max
    if n_lo > n_hi:
        raise ValueError(f"empty scan range {n_lo}..{n_hi}")
    m_for_n = (lambda n: 1 << n) if args.m == 0 else None
    config = SearchConfig(
        functional=args.functional,
        n=n_lo,
        m=args.m if args.m != 0 else 1,
        p=args.p,
        q=args.q,
        restarts=args.restarts,
        iterations=args.iters,
        probes=args.probes,
        seed=args.seed,
        plan_mode={"exact": "exact", "mc": "monte-carlo", None: "auto"}[args.mode],
        plan_samples=args.samples,
    )
    out = args.output_path if args.output_path is not None else "scan.csv"
    certificates = scan_dimension(config, range(n_lo, n_hi + 1), m_for_n=m_for_n, csv_path=out)
    for cert in certificates:
        sys.stdout.write(
            f"n={cert.config.n} m={cert.config.m} ratio={cert.ratio:.9g}\n"
        )
    sys.stdout.write(f"scan table -> {out}\n")
    return EXIT_OK


def _time_call(fn, repeats: int = 5) -> float:
    best = math.inf
    for _ in range(repeats):
        start = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - start)
    return best


def bench_rows(n_max: int, m: int, seed: int, samples: int) -> list[dict]:
    """Per-dimension timings: fast vs naive transforms, exact vs MC sign averages."""
    rng = np.random.default_rng(seed)
    rows = []
    for n in range(1, n_max + 1):
        f = HypercubeFunction.from_values(rng.standard_normal((1 << n, m)))
        fast_s = _time_call(lambda: walsh_forward(f))
        row = {"n": n, "fast_transform_s": fast_s}
        if n <= 10:
            naive_s = _time_call(lambda: walsh_forward_naive(f))
            gap = float(
                np.max(
                    np.abs(
                        walsh_forward(f).coefficients - walsh_forward_naive(f).coefficients
                    )
                )
            )
            scale = max(1.0, float(np.max(np.abs(walsh_forward(f).coefficients))))
            row.update(
                naive_transform_s=naive_s,
                speedup=naive_s / fast_s,
                agreement=gap / scale,
            )
        if n <= 8:
            family = FunctionFamily(
                tuple(
                    HypercubeFunction.from_values(rng.standard_normal((1 << n, m)))
                    for _ in range(n)
                )
            )
            space = NormSpace(m, 2.0)
            exact_plan = RademacherAveragePlan(mode="exact")
            mc_plan = RademacherAveragePlan(mode="monte-carlo", samples=samples, seed=seed)
            row["exact_average_s"] = _time_call(
                lambda: rademacher_average(family, 2.0, space, exact_plan), repeats=3
            )
            row["mc_average_s"] = _time_call(
                lambda: rademacher_average(family, 2.0, space, mc_plan), repeats=3
            )
        rows.append(row)
    return rows


def cmd_bench(args) -> int:
    rows = bench_rows(args.n, args.m, args.seed, args.samples)
    worst = max((row.get("agreement", 0.0) for row in rows), default=0.0)
    payload = {"command": "bench", "rows": rows, "worst_agreement": worst}
    if args.format == "csv":
        keys = [
            "n",
            "fast_transform_s",
            "naive_transform_s",
            "speedup",
            "agreement",
            "exact_average_s",
            "mc_average_s",
        ]
        lines = [",".join(keys)]
        for row in rows:
            lines.append(",".join(str(row.get(k, "")) for k in keys))
        _emit("\n".join(lines), args.output_path)
    else:
        _emit(json.dumps(payload, indent=2, sort_keys=True), args.output_path)
    if worst > 1e-12:
        sys.stderr.write(f"fast/naive transform disagreement {worst:.3e} > 1e-12\n")
        return EXIT_CHECK_FAILURE
    return EXIT_OK


def cmd_transform(args) -> int:
    data = _load_json(args.input_path)
    if "values" in data:
        f = HypercubeFunction.from_json_dict(data)
        out = walsh_forward(f).to_json_dict()
    elif "coefficients" in data:
        s = WalshSpectrum.from_json_dict(data)
        out = walsh_inverse(s).to_json_dict()
    else:
        raise ValueError("transform input must carry either 'values' or 'coefficients'")
    _emit(json.dumps(out), args.output_path)
    return EXIT_OK


_COMMANDS = {
    "verify": cmd_verify,
    "eval": cmd_eval,
    "estimate": cmd_estimate,
    "scan": cmd_scan,
    "bench": cmd_bench,
    "transform": cmd_transform,
}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return _COMMANDS[args.command](args)
    except DegenerateInputError as err:
        sys.stderr.write(f"degenerate input: {err}\n")
        return EXIT_DEGENERATE
    except (ValueError, OSError, KeyError) as err:
        sys.stderr.write(f"input error: {err}\n")
        return EXIT_INPUT_ERROR


if __name__ == "__main__":
    sys.exit(main())
