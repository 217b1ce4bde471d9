"""End-to-end runs shared by the CLI: solve a problem, benchmark pruning."""

from __future__ import annotations

import math
import random
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from statistics import mean
from typing import Sequence

from .gf import GF2, FieldSpec, mat_rank
from .indexcoding import (
    IndexCode,
    IndexCodingProblem,
    VerificationReport,
    build_matrix,
    extract_code,
    lift,
    pattern_matrix,
    verify_code,
)
from .masked import ERASED, MaskedMatrix
from .tree import CompletionResult, TreeConfig, complete_min_rank


@dataclass(frozen=True)
class SolveOutcome:
    problem: IndexCodingProblem
    matrix: MaskedMatrix
    result: CompletionResult
    code: IndexCode
    verification: VerificationReport
    lift_rank: int | None

    @property
    def rate(self) -> Fraction:
        return Fraction(self.problem.block_length, self.result.achieved_rank)


def check_completion(m: MaskedMatrix, result: CompletionResult) -> None:
    """Raise ``AssertionError`` unless ``result`` is a sound completion of ``m``."""
    if not m.agrees_with(result.completed):
        raise AssertionError("completion disagrees with the input mask")
    if mat_rank(result.completed) != result.achieved_rank:
        raise AssertionError("reported rank differs from the recomputed rank")


def solve_problem(p: IndexCodingProblem, cfg: TreeConfig = TreeConfig(), trials: int = 100) -> SolveOutcome:
    """Build the matrix, complete it, extract a code and verify it.

    For block length n > 1 the scalar problem is solved first and its
    block-diagonal lift is handed to the search as the incumbent, so the
    vector code is never worse than n copies of the scalar one.
    """
    m = build_matrix(p)
    lift_rank = None
    incumbent = None
    if p.block_length > 1:
        scalar = complete_min_rank(pattern_matrix(p), cfg)
        incumbent = lift(scalar.completed, p.block_length)
        lift_rank = mat_rank(incumbent)
    result = complete_min_rank(m, cfg, incumbent=incumbent)
    check_completion(m, result)
    code = extract_code(result.completed, p)
    report = verify_code(code, p, trials=trials, seed=cfg.seed)
    return SolveOutcome(p, m, result, code, report, lift_rank)


def random_unicast(rng: random.Random, n: int, density: float, field: FieldSpec = GF2) -> MaskedMatrix:
    """n x n unicast pattern: 1 on the diagonal, round(density*n*n) off-diagonal erasures, 0 elsewhere."""
    off = [(i, j) for i in range(n) for j in range(n) if i != j]
    k = round(density * n * n)
    if k > len(off):
        raise ValueError(f"density {density} leaves too few off-diagonal slots for {k} erasures")
    erased = set(rng.sample(off, k))
    rows = tuple(tuple(1 if i == j else ERASED if (i, j) in erased else 0 for j in range(n)) for i in range(n))
    return MaskedMatrix(field, rows, n)


def random_masked(rng: random.Random, a: int, b: int, erasures: int, field: FieldSpec = GF2) -> MaskedMatrix:
    """Uniform random entries with ``erasures`` uniformly placed erased positions."""
    cells = [(i, j) for i in range(a) for j in range(b)]
    erased = set(rng.sample(cells, erasures))
    rows = tuple(
        tuple(ERASED if (i, j) in erased else rng.randrange(field.q) for j in range(b)) for i in range(a)
    )
    return MaskedMatrix(field, rows, b)


@dataclass(frozen=True)
class BenchRow:
    instance: int
    seed: int
    threshold: float
    initial_rank: int
    achieved_rank: int
    sound: bool
    branches: int
    pruned: int
    wall_ms: float


def _threshold_label(t: float) -> str:
    return "inf" if t == math.inf else str(int(t))


def run_benchmark(
    size: int = 7,
    density: float = 0.59,
    thresholds: Sequence[float] = (math.inf, 2000, 500),
    seeds: Sequence[int] = tuple(range(10)),
    algo1_iters: int = 100,
    field: FieldSpec = GF2,
) -> list[BenchRow]:
    """Run every threshold on one random unicast instance per seed."""
    rows = []
    for idx, seed in enumerate(seeds):
        m = random_unicast(random.Random(seed), size, density, field)
        for t in thresholds:
            cfg = TreeConfig(prune_threshold=t, seed=seed, algo1_iters=algo1_iters)
            res = complete_min_rank(m, cfg)
            try:
                check_completion(m, res)
                sound = True
            except AssertionError:
                sound = False
            rows.append(
                BenchRow(
                    idx,
                    seed,
                    t,
                    res.initial_sub.rank if res.initial_sub else res.achieved_rank,
                    res.achieved_rank,
                    sound,
                    res.stats.created,
                    res.stats.pruned,
                    res.stats.wall_ms,
                )
            )
    return rows


def summarize_benchmark(rows: Sequence[BenchRow], size: int, density: float) -> list[dict]:
    """One summary line per threshold, shaped like a results table."""
    out = []
    thresholds = list(dict.fromkeys(r.threshold for r in rows))
    for t in thresholds:
        sel = [r for r in rows if r.threshold == t]
        ranks = Counter(r.achieved_rank for r in sel)
        init = Counter(r.initial_rank for r in sel)
        out.append(
            {
                "size": f"{size}x{size}",
                "erasure": f"{round(density * 100)}%",
                "initial_rank": {str(k): v for k, v in sorted(init.items())},
                "threshold": _threshold_label(t),
                "tests": len(sel),
                "achieved_rank": {str(k): v for k, v in sorted(ranks.items())},
                "avg_runtime_ms": round(mean(r.wall_ms for r in sel), 3),
            }
        )
    return out


def monotone_in_threshold(rows: Sequence[BenchRow], loose: float, tight: float) -> bool:
    """True if every instance reaches rank at ``loose`` no worse than at ``tight``."""
    by = {(r.instance, r.threshold): r.achieved_rank for r in rows}
    return all(by[(i, loose)] <= by[(i, tight)] for i in {r.instance for r in rows})
