"""Command-line entry point: ``python -m apfluct <command> ...``.

Exit status is 0 on success, 1 when a computation fails and 2 on usage errors.
``APFLUCT_BUDGET`` and ``APFLUCT_THREADS`` override the default brute-force
budget and worker count.
"""

from __future__ import annotations

import argparse
import dataclasses
import math
import os
import sys
from fractions import Fraction
from typing import List, Optional

from . import census as cen
from . import explorer, io, kernel, moments, repro, simulate
from .progressions import (
    DomainError,
    ModelParams,
    ResourceError,
    count_aps,
    expected_count,
    parse_probability,
)

COMMANDS = ("count", "pairs", "kernel", "kappa", "regime", "covariance", "moments", "bounds", "simulate", "oracle", "repro")


class UsageError(Exception):
    pass


def _probability(text: str):
    try:
        return parse_probability(text)
    except DomainError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from exc


def _length(text: str):
    if text.lower() in ("inf", "infinity"):
        return math.inf
    try:
        return int(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"length must be an integer or 'inf', got {text!r}") from exc


def _number(text: str):
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise argparse.ArgumentTypeError(f"malformed number {text!r}") from exc


def _env_int(name: str, default: Optional[int]) -> Optional[int]:
    value = os.environ.get(name)
    if value is None:
        return default
    try:
        return int(value)
    except ValueError:
        raise UsageError(f"{name} must be an integer, got {value!r}")


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="apfluct", description="AP counts in random subsets of [n].")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def add(name, help_text, *fields, fmt="json"):
        cmd = sub.add_parser(name, help=help_text)
        for f in fields:
            required = not f.endswith("?")
            f = f.rstrip("?")
            kind = {"p": _probability, "ell": _length, "ell2": _length, "c": float, "u1": _number, "u2": _number}.get(f, int)
            cmd.add_argument(f"--{f}", type=kind, required=required)
        cmd.add_argument("--format", choices=("csv", "json"), default=fmt)
        cmd.add_argument("--out", help="write to this path instead of stdout")
        return cmd

    add("count", "number of ell-APs in [n]", "n", "ell", "p?", fmt="csv")
    pairs = add("pairs", "intersection census of ordered AP pairs", "n", "ell", "ell2?", "budget?", fmt="csv")
    pairs.add_argument("--method", choices=("fast", "brute"), default="fast")
    add("kernel", "kernel samples on a grid, or the loose-pair constant", "ell", "grid?", "ell2?", fmt="csv")
    kap = add("kappa", "limiting correlation", "ell", "ell2", "c?")
    kap.add_argument("--regime", choices=("overlap", "intermediate", "loose"), required=True)
    add("regime", "regime classification at finite n", "n", "p", "ell", "ell2?")
    add("covariance", "exact covariance of X_ell and X_ell2", "n", "ell", "ell2?", "p")
    add("moments", "exact standardized joint moment", "n", "ell", "ell2", "p", "k", "u1?", "u2?", "budget?")
    add("bounds", "Chen-Stein and normal-approximation diagnostics", "n", "ell", "p", "s?")
    add("simulate", "Monte Carlo batch", "n", "ell", "ell2?", "p", "replicas", "seed", "threads?", fmt="csv")
    add("oracle", "exact joint pmf by subset enumeration", "n", "ell", "ell2?", "p", fmt="csv")
    rep = sub.add_parser("repro", help="run every acceptance check and print a summary table")
    rep.add_argument("--only", type=int, nargs="*", help="criterion numbers to run")
    rep.add_argument("--format", choices=("csv", "json"), default="csv")
    rep.add_argument("--out")
    return parser


def parse_args(argv: List[str]) -> argparse.Namespace:
    args = build_parser().parse_args(argv)
    if args.command in ("pairs", "regime", "covariance", "simulate", "oracle") and args.ell2 is None:
        args.ell2 = args.ell
    if args.command == "kernel" and args.grid is None and args.ell2 is None:
        raise UsageError("kernel needs --grid or --ell2")
    if args.command == "kappa" and args.regime == "intermediate" and args.c is None:
        raise UsageError("intermediate regime needs --c")
    for name in ("n", "replicas", "threads", "grid"):
        value = getattr(args, name, None)
        if value is not None and value < 0:
            raise UsageError(f"--{name} must be non-negative")
    if hasattr(args, "budget") and args.budget is None:
        args.budget = _env_int("APFLUCT_BUDGET", None)
    if hasattr(args, "threads") and args.threads is None:
        args.threads = _env_int("APFLUCT_THREADS", 1)
    return args


def _finite_lengths(*values):
    for v in values:
        if v == math.inf:
            raise UsageError("this command needs finite lengths")
    return values


def _ordered_lengths(a, b):
    return (a, b) if a >= b else (b, a)


def _flatten(record: dict, prefix: str = ""):
    for k, v in sorted(record.items()):
        if isinstance(v, dict):
            yield from _flatten(v, f"{prefix}{k}.")
        else:
            yield [f"{prefix}{k}", io._jsonable(v)]


def _kv_csv(record: dict) -> str:
    return io._csv_text(["key", "value"], _flatten(record))


def _report(record: dict, fmt: str) -> str:
    return io.to_json(record) if fmt == "json" else _kv_csv(record)


def run_command(args) -> str:
    cmd = args.command
    if cmd == "count":
        _finite_lengths(args.ell)
        record = {"n": args.n, "ell": args.ell, "count": count_aps(args.n, args.ell)}
        if args.p is not None:
            record["p"] = args.p
            record["expected"] = expected_count(args.n, args.ell, args.p)
        if args.format == "json":
            return io.to_json(record)
        return f"{record['count']}\n" if args.p is None else _kv_csv(record)
    if cmd == "pairs":
        ell, ell2 = _ordered_lengths(*_finite_lengths(args.ell, args.ell2))
        if args.method == "brute":
            budget = args.budget if args.budget is not None else cen.DEFAULT_BUDGET
            result = cen.census_bruteforce(args.n, ell, ell2, budget=budget)
        else:
            result = cen.census_fast(args.n, ell, ell2)
        if args.format == "csv":
            return io.census_to_csv(result)
        return io.to_json({**dataclasses.asdict(result), "loose": result.loose, "overlap": result.overlap, "positional_sum": result.positional_sum})
    if cmd == "kernel":
        if args.ell2 is not None:
            return io.to_json(kernel.lambda_report(args.ell, args.ell2))
        k = kernel.build_phi(args.ell)
        samples = k.samples(args.grid)
        if args.format == "json":
            return io.to_json([{"x": x, "phi": y} for x, y in samples])
        return io.kernel_samples_to_csv(samples)
    if cmd == "kappa":
        value = kernel.kappa(args.ell, args.ell2, args.regime, args.c)
        record = {"ell1": args.ell, "ell2": args.ell2, "regime": args.regime, "c": args.c, "kappa": value}
        if args.regime == "intermediate":
            record["gamma"] = kernel.gamma(args.ell, args.c)
        return _report(record, args.format)
    if cmd == "regime":
        ell, ell2 = _ordered_lengths(*_finite_lengths(args.ell, args.ell2))
        return _report(kernel.classify_regimes(ModelParams(args.n, args.p, ell, ell2)).to_dict(), args.format)
    if cmd == "covariance":
        ell, ell2 = _finite_lengths(args.ell, args.ell2)
        cov = moments.exact_covariance(args.n, ell, ell2, args.p)
        return _report({"n": args.n, "ell": ell, "ell2": ell2, "p": args.p, "covariance": cov, "value": float(cov)}, args.format)
    if cmd == "moments":
        ell, ell2 = _ordered_lengths(*_finite_lengths(args.ell, args.ell2))
        u1 = args.u1 if args.u1 is not None else Fraction(1)
        u2 = args.u2 if args.u2 is not None else Fraction(0)
        budget = args.budget if args.budget is not None else explorer.DEFAULT_MOMENT_BUDGET
        rep = explorer.exact_joint_moment(args.n, ell, ell2, Fraction(args.p), args.k, u1, u2, budget)
        record = {
            "k": rep.k,
            "u1": rep.u1,
            "u2": rep.u2,
            "exact": float(rep.exact),
            "exact_terms": {f"v1^-{i}/2*v2^-{j}/2": c for (i, j), c in rep.exact.coeffs},
            "dominant": rep.dominant,
            "residual": rep.residual,
            "dominant_formula": rep.dominant_formula,
            "kappa_hat": rep.kappa_hat,
        }
        return _report(record, args.format)
    if cmd == "bounds":
        _finite_lengths(args.ell)
        return _report(moments.chen_stein_bound(args.n, args.ell, args.p, args.s or 3).to_dict(), args.format)
    if cmd == "simulate":
        ell, ell2 = _ordered_lengths(*_finite_lengths(args.ell, args.ell2))
        batch = simulate.run_experiment(ModelParams(args.n, args.p, ell, ell2), args.replicas, args.seed, args.threads)
        if args.format == "csv":
            return io.batch_to_csv(batch)
        record = {"replicas": batch.replicas, "seed": batch.master_seed, "means": batch.means, "sigmas": batch.sigmas}
        if batch.replicas:
            record["empirical_mean"] = [float(batch.counts[:, j].mean()) for j in (0, 1)]
            record["correlation"] = simulate.empirical_correlation(batch)
            record["ks"] = simulate.ks_distance(batch.standardized[:, 0]) if batch.sigmas[0] > 0 else math.nan
        return io.to_json(record)
    if cmd == "oracle":
        ell, ell2 = _ordered_lengths(*_finite_lengths(args.ell, args.ell2))
        dist = moments.exact_joint_distribution(args.n, ell, ell2, args.p)
        if args.format == "csv":
            return io.pmf_to_csv(dist)
        return io.to_json([{"x_ell1": a, "x_ell2": b, "prob": pr} for (a, b), pr in zip(dist.support, dist.probs)])
    if cmd == "repro":
        results = repro.run_all(args.only)
        args.failed = not all(r.passed for r in results)
        for r in results:
            print(r.line, file=sys.stderr, flush=True)
        if args.format == "json":
            return io.to_json([dataclasses.asdict(r) for r in results])
        return io._csv_text(
            ["criterion", "title", "status", "seconds", "detail"],
            ([r.number, r.title, "PASS" if r.passed else "FAIL", f"{r.seconds:.1f}", r.detail] for r in results),
        )
    raise UsageError(f"unknown command {cmd!r}")


def _emit(text: str, out: Optional[str]):
    if out:
        with open(out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _wants_json(argv: List[str]) -> bool:
    for i, a in enumerate(argv):
        if a == "--format" and i + 1 < len(argv):
            return argv[i + 1] == "json"
        if a == "--format=json":
            return True
    return False


def _fail(kind: str, message: str, as_json: bool, status: int) -> int:
    if as_json:
        sys.stdout.write(io.to_json({"error": kind, "message": message, "status": status}))
    else:
        print(f"apfluct: {kind}: {message}", file=sys.stderr)
    return status


def main(argv: Optional[List[str]] = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    as_json = _wants_json(argv)
    try:
        args = parse_args(argv)
    except UsageError as exc:
        return _fail("usage", str(exc), as_json, 2)
    except SystemExit as exc:  # --help
        return int(exc.code or 0)
    try:
        text = run_command(args)
    except UsageError as exc:
        return _fail("usage", str(exc), as_json, 2)
    except (DomainError, ResourceError, OverflowError, ZeroDivisionError) as exc:
        return _fail(type(exc).__name__, str(exc), as_json, 1)
    _emit(text, args.out)
    return 1 if getattr(args, "failed", False) else 0


if __name__ == "__main__":
    sys.exit(main())
