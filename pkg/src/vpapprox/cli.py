"""Command-line front end.

Subcommands: `coeffs` dumps Fourier coefficients of a corpus function as
CSV, `verify` runs a verification campaign from a config file, `sequence`
prints an index sequence with its invariant checks as JSON.

Exit codes partition the failure causes: 2 usage / unknown name, 3 config
parse or validation error, 4 numeric check failure or anomaly, 5 solver
non-convergence.
"""

from __future__ import annotations

import argparse
import csv
import json
import math
import sys

import numpy as np

from .approx import clear_caches
from .config import STATEMENTS, ConfigError, RunConfig, canonical_text, load_config
from .corpus import DEFAULT_CORPUS, corpus_members
from .errors import SolverConvergenceError
from .fourier import fourier_coefficients
from .harness import run_campaign, write_artifacts
from .sequences import decreasing_index_sequence, increasing_index_sequence

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_CONFIG = 3
EXIT_NUMERIC = 4
EXIT_SOLVER = 5


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="vpapprox",
        description="Trigonometric approximation checks by de la Vallee-Poussin means")
    sub = parser.add_subparsers(dest="command", required=True)

    p_coeffs = sub.add_parser("coeffs", help="dump Fourier coefficients as CSV")
    p_coeffs.add_argument("function", help="corpus function name")
    p_coeffs.add_argument("--samples", type=int, default=16384)
    p_coeffs.add_argument("--kmax", type=int, default=16)

    p_verify = sub.add_parser("verify", help="run a verification campaign")
    p_verify.add_argument("--config", help="path to a configuration file")
    p_verify.add_argument("--out", help="output directory (overrides config)")
    p_verify.add_argument("--statements", help="comma-separated statement ids")
    p_verify.add_argument("--corpus", help="comma-separated corpus names")
    p_verify.add_argument("--grid-n", help="comma-separated grid orders")
    p_verify.add_argument("--seed", type=int, help="reserved; no randomized component")
    p_verify.add_argument("--quiet", action="store_true")
    p_verify.add_argument("--print-config", action="store_true",
                          help="print the canonical configuration and exit")

    p_seq = sub.add_parser("sequence", help="print an index sequence as JSON")
    p_seq.add_argument("kind", choices=["decreasing", "increasing"])
    p_seq.add_argument("--m", type=int, required=True)
    p_seq.add_argument("--n", type=int)
    p_seq.add_argument("--function", default="poly5")
    p_seq.add_argument("--x", type=float, default=0.0)
    p_seq.add_argument("--p", default="2")
    p_seq.add_argument("--samples", type=int, default=1024)
    return parser


def cmd_coeffs(args) -> int:
    if args.function not in DEFAULT_CORPUS:
        print(f"unknown function {args.function!r}; known: "
              f"{', '.join(DEFAULT_CORPUS)}", file=sys.stderr)
        return EXIT_USAGE
    member = DEFAULT_CORPUS[args.function]
    try:
        f = member.materialize(args.samples)
        c = fourier_coefficients(f, args.kmax)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    writer = csv.writer(sys.stdout, lineterminator="\n")
    writer.writerow(["k", "a_k", "b_k"])
    writer.writerow([0, repr(c.a0), repr(0.0)])
    for k in range(1, c.kmax + 1):
        writer.writerow([k, repr(float(c.a[k - 1])), repr(float(c.b[k - 1]))])
    return EXIT_OK


def cmd_verify(args) -> int:
    try:
        cfg = load_config(args.config) if args.config else RunConfig()
        if args.statements is not None:
            ids = [s.strip() for s in args.statements.split(",") if s.strip()]
            cfg = _replace(cfg, statements=ids)
        if args.corpus is not None:
            cfg = _replace(cfg, corpus=[s.strip() for s in args.corpus.split(",")])
        if args.grid_n is not None:
            cfg = _replace(cfg, n_list=[int(s) for s in args.grid_n.split(",")])
        if args.out is not None:
            cfg = _replace(cfg, out_dir=args.out)
        if args.seed is not None:
            cfg = _replace(cfg, seed=args.seed)
        if args.quiet:
            cfg = _replace(cfg, quiet=True)
        cfg = cfg.validate()
        corpus_members(cfg.corpus)  # check names before the expensive run
    except (ConfigError, ValueError, KeyError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    if args.print_config:
        sys.stdout.write(canonical_text(cfg))
        return EXIT_OK
    if not cfg.statements:
        return EXIT_OK  # nothing selected, nothing written

    progress = None if cfg.quiet else lambda msg: print(msg, file=sys.stderr)
    try:
        result = run_campaign(cfg, progress=progress)
    except SolverConvergenceError as exc:
        print(f"solver failure: {exc}", file=sys.stderr)
        return EXIT_SOLVER
    finally:
        clear_caches()
    write_artifacts(result, cfg.out_dir)
    if not cfg.quiet:
        for sid, res in result.statements.items():
            k = f" K={res.fitted_constant:.4f}" if res.fitted_constant else ""
            print(f"{sid}: {len(res.reports)} rows, "
                  f"{sum(1 for r in res.reports if r.passed is False)} failures{k}",
                  file=sys.stderr)
    if result.anomaly_count > 0 or result.check_failure_count > 0:
        return EXIT_NUMERIC
    if result.solver_failure_count > 0:
        return EXIT_SOLVER
    return EXIT_OK


def _replace(cfg: RunConfig, **kw) -> RunConfig:
    from dataclasses import replace

    return replace(cfg, **kw)


def cmd_sequence(args) -> int:
    try:
        if args.kind == "decreasing":
            seq = decreasing_index_sequence(args.m)
        else:
            if args.n is None:
                print("increasing sequences need --n", file=sys.stderr)
                return EXIT_USAGE
            if args.function not in DEFAULT_CORPUS:
                print(f"unknown function {args.function!r}", file=sys.stderr)
                return EXIT_USAGE
            p = math.inf if args.p.lower() == "inf" else float(args.p)
            f = DEFAULT_CORPUS[args.function].materialize(args.samples)
            seq = increasing_index_sequence(f, args.x, args.n, args.m, p)
    except ValueError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except SolverConvergenceError as exc:
        print(f"solver failure: {exc}", file=sys.stderr)
        return EXIT_SOLVER
    finally:
        clear_caches()
    json.dump(seq.to_json_dict(), sys.stdout, indent=2, sort_keys=True)
    sys.stdout.write("\n")
    return EXIT_OK


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    if args.command == "coeffs":
        return cmd_coeffs(args)
    if args.command == "verify":
        return cmd_verify(args)
    return cmd_sequence(args)


if __name__ == "__main__":
    sys.exit(main())
