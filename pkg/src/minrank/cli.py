"""Command-line front end.

Exit codes: 0 success, 2 bad input, 3 search exhausted under pruning,
4 oracle budget refused, 5 invalid code.
"""

from __future__ import annotations

import argparse
import math
import sys
from pathlib import Path
from typing import Sequence

from . import report as rep
from .gf import FieldSpec
from .indexcoding import CodeValidityError, code_from_transmissions, parse_code, parse_problem, verify_code
from .masked import parse_masked
from .oracle import DEFAULT_BUDGET, BudgetExceeded, oracle_min_rank
from .pipeline import monotone_in_threshold, run_benchmark, solve_problem, summarize_benchmark
from .tree import SearchExhausted, TreeConfig, complete_min_rank

EXIT_OK, EXIT_INPUT, EXIT_EXHAUSTED, EXIT_BUDGET, EXIT_INVALID = 0, 2, 3, 4, 5


class InputError(Exception):
    pass


def _threshold(s: str) -> float:
    if s.lower() in ("inf", "infinity", "none"):
        return math.inf
    try:
        v = int(s)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a positive integer or 'inf', got {s!r}") from None
    if v < 1:
        raise argparse.ArgumentTypeError("prune threshold must be at least 1")
    return float(v)


def _positive(s: str) -> int:
    v = int(s)
    if v < 1:
        raise argparse.ArgumentTypeError("must be at least 1")
    return v


def _read(path: str) -> str:
    try:
        return Path(path).read_text(encoding="utf-8")
    except OSError as e:
        raise InputError(f"cannot read {path}: {e.strerror}") from None


def _field(q: int | None, default: int = 2) -> FieldSpec:
    return FieldSpec(default if q is None else q)


def _tree_config(args: argparse.Namespace) -> TreeConfig:
    return TreeConfig(prune_threshold=args.prune, seed=args.seed, algo1_iters=args.algo1_iters, threads=args.threads)


def _emit(args: argparse.Namespace, report: dict, text_prefix: str = "") -> None:
    if args.output == "json":
        sys.stdout.write(rep.to_json(report))
    else:
        sys.stdout.write(text_prefix + rep.to_text(report))


def cmd_solve(args: argparse.Namespace) -> int:
    p = parse_problem(_read(args.problem))
    p = p.with_settings(
        field=None if args.field is None else FieldSpec(args.field),
        block_length=args.block,
    )
    out = solve_problem(p, _tree_config(args), trials=args.trials)
    _emit(args, rep.solve_report(args.problem, out, args.seed, args.prune))
    return EXIT_OK if out.verification.valid else EXIT_INVALID


def cmd_complete(args: argparse.Namespace) -> int:
    m = parse_masked(_read(args.matrix), _field(args.field))
    res = complete_min_rank(m, _tree_config(args))
    _emit(args, rep.completion_report(args.matrix, m, res, args.seed, args.prune))
    return EXIT_OK


def cmd_oracle(args: argparse.Namespace) -> int:
    m = parse_masked(_read(args.matrix), _field(args.field))
    res = oracle_min_rank(m, budget=args.budget)
    _emit(args, rep.oracle_report(args.matrix, m, res))
    return EXIT_OK


def cmd_verify(args: argparse.Namespace) -> int:
    p = parse_problem(_read(args.problem))
    p = p.with_settings(
        field=None if args.field is None else FieldSpec(args.field),
        block_length=args.block,
    )
    transmissions = parse_code(_read(args.code), p.field)
    if not transmissions:
        raise InputError("code file lists no transmissions")
    code = code_from_transmissions(transmissions, p)
    v = verify_code(code, p, trials=args.trials, seed=args.seed)
    _emit(args, rep.verify_report(args.problem, args.code, code, p, v))
    if not v.valid:
        print(f"invalid code: receivers {', '.join(v.failing_receivers) or '(simulation)'} cannot decode", file=sys.stderr)
        return EXIT_INVALID
    return EXIT_OK


def cmd_benchmark(args: argparse.Namespace) -> int:
    seeds = range(args.seed, args.seed + args.instances)
    rows = run_benchmark(args.size, args.density, args.thresholds, seeds, args.algo1_iters, _field(args.field))
    summary = summarize_benchmark(rows, args.size, args.density)
    ts = args.thresholds
    loose_ok = monotone_in_threshold(rows, max(ts), min(ts)) if len(ts) > 1 else None
    report = rep.benchmark_report(rows, summary, args.size, args.density, seeds, loose_ok)
    _emit(args, report, rep.benchmark_table(report) + "\n")
    return EXIT_OK if all(r.sound for r in rows) else EXIT_INVALID


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--field", type=int, default=None, help="prime field size q (default: from file, else 2)")
    common.add_argument("--seed", type=int, default=0, help="RNG seed (default 0)")
    common.add_argument("--output", choices=("text", "json"), default="text")

    search = argparse.ArgumentParser(add_help=False)
    search.add_argument("--prune", type=_threshold, default=math.inf, help="max live branches, or 'inf' (default)")
    search.add_argument("--algo1-iters", type=_positive, default=100, help="stall limit of the sub-matrix search")
    search.add_argument("--threads", type=_positive, default=1, help="branches expanded concurrently")

    trials = argparse.ArgumentParser(add_help=False)
    trials.add_argument("--block", type=_positive, default=None, help="block length n (default: from file, else 1)")
    trials.add_argument("--trials", type=int, default=100, help="random decoding trials (default 100)")

    parser = argparse.ArgumentParser(prog="minrank", description="Minimum-rank matrix completion and linear index code design over GF(q).")
    sub = parser.add_subparsers(dest="command", required=True)

    s = sub.add_parser("solve", parents=[common, search, trials], help="design and verify an index code")
    s.add_argument("problem")
    s.set_defaults(func=cmd_solve)

    c = sub.add_parser("complete", parents=[common, search], help="minimum-rank completion of a matrix file")
    c.add_argument("matrix")
    c.set_defaults(func=cmd_complete)

    o = sub.add_parser("oracle", parents=[common], help="exhaustive minimum rank of a matrix file")
    o.add_argument("matrix")
    o.add_argument("--budget", type=int, default=DEFAULT_BUDGET, help="max completions to enumerate")
    o.set_defaults(func=cmd_oracle)

    v = sub.add_parser("verify", parents=[common, trials], help="check a code file against a problem")
    v.add_argument("problem")
    v.add_argument("code")
    v.set_defaults(func=cmd_verify)

    b = sub.add_parser("benchmark", parents=[common], help="pruning benchmark on random unicast instances")
    b.add_argument("--size", type=_positive, default=7)
    b.add_argument("--density", type=float, default=0.59, help="fraction of erased entries")
    b.add_argument("--instances", type=_positive, default=10, help="instances, seeded from --seed upward")
    b.add_argument("--thresholds", type=_threshold, nargs="+", default=[math.inf, 2000.0, 500.0])
    b.add_argument("--algo1-iters", type=_positive, default=100)
    b.set_defaults(func=cmd_benchmark)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (InputError, ValueError, CodeValidityError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_INPUT
    except SearchExhausted as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_EXHAUSTED
    except BudgetExceeded as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_BUDGET


if __name__ == "__main__":
    sys.exit(main())
