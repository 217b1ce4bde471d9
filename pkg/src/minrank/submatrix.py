"""Randomized search for a maximal complete sub-matrix of highest rank.

Starting from all rows and no columns, each iteration tries to enlarge either
the row set or the column set (chosen at random, weighted by the current set
sizes). A candidate line is added, lines that become incomplete are dropped
from the other set, and the change is kept only if the rank strictly grows.
The loop stops after ``stall_limit`` consecutive iterations without change;
a greedy post-pass then absorbs every row or column that is already complete
over the other set, so the result cannot be enlarged.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Sequence

from .gf import rank_rows
from .masked import ERASED, MaskedMatrix, SubmatrixIndex


@dataclass(frozen=True)
class SearchConfig:
    stall_limit: int = 100
    seed: int = 0

    def __post_init__(self) -> None:
        if self.stall_limit < 1:
            raise ValueError("stall_limit must be at least 1")


def _rank(m: MaskedMatrix, rows: Sequence[int], cols: Sequence[int]) -> int:
    if not rows or not cols:
        return 0
    return rank_rows([[m.data[i][j] for j in cols] for i in rows], len(cols), m.q)  # type: ignore[misc]


def _try_rows(m: MaskedMatrix, rows: set[int], cols: set[int], k: int):
    d = m.data
    cands = [i for i in range(m.n_rows) if i not in rows]
    cands.sort(key=lambda i: (sum(d[i][j] is ERASED for j in cols), i))
    for i in cands:
        new_rows = rows | {i}
        new_cols = {j for j in cols if d[i][j] is not ERASED}
        r = _rank(m, sorted(new_rows), sorted(new_cols))
        if r > k:
            return new_rows, new_cols, r
    return None


def _try_cols(m: MaskedMatrix, rows: set[int], cols: set[int], k: int):
    d = m.data
    cands = [j for j in range(m.n_cols) if j not in cols]
    cands.sort(key=lambda j: (sum(d[i][j] is ERASED for i in rows), j))
    for j in cands:
        new_cols = cols | {j}
        new_rows = {i for i in rows if d[i][j] is not ERASED}
        r = _rank(m, sorted(new_rows), sorted(new_cols))
        if r > k:
            return new_rows, new_cols, r
    return None


def make_maximal(m: MaskedMatrix, rows: set[int], cols: set[int]) -> tuple[set[int], set[int]]:
    """Absorb rows/columns (0-based) that are complete over the other index set."""
    d = m.data
    rows, cols = set(rows), set(cols)
    changed = True
    while changed:
        changed = False
        for i in range(m.n_rows):
            if i not in rows and all(d[i][j] is not ERASED for j in cols):
                rows.add(i)
                changed = True
        for j in range(m.n_cols):
            if j not in cols and all(d[i][j] is not ERASED for i in rows):
                cols.add(j)
                changed = True
    return rows, cols


def find_max_complete_submatrix(
    m: MaskedMatrix, cfg: SearchConfig = SearchConfig(), trace: list[SubmatrixIndex] | None = None
) -> SubmatrixIndex:
    """Return a maximal complete sub-matrix of (heuristically) highest rank.

    If ``trace`` is given, every accepted improvement is appended to it.
    """
    if m.n_rows == 0 or m.n_cols == 0:
        raise ValueError("matrix must have at least one row and one column")
    rng = random.Random(cfg.seed)
    rows: set[int] = set(range(m.n_rows))
    cols: set[int] = set()
    k = 0
    stall = 0
    while stall < cfg.stall_limit:
        th = len(rows) / (len(rows) + len(cols))
        if rng.random() > th:
            step = _try_rows(m, rows, cols, k)
        else:
            step = _try_cols(m, rows, cols, k)
        if step is None:
            stall += 1
            continue
        rows, cols, k = step
        stall = 0
        if trace is not None:
            trace.append(SubmatrixIndex.from_zero_based(rows, cols, k))
    rows, cols = make_maximal(m, rows, cols)
    return SubmatrixIndex.from_zero_based(rows, cols, _rank(m, sorted(rows), sorted(cols)))


def best_of_seeds(m: MaskedMatrix, stall_limit: int, seeds: Sequence[int]) -> SubmatrixIndex:
    """Run one search per seed and keep the best by (rank, size, lowest seed)."""
    best = None
    for s in seeds:
        sub = find_max_complete_submatrix(m, SearchConfig(stall_limit, s))
        if best is None or (sub.rank, sub.size) > (best.rank, best.size):
            best = sub
    if best is None:
        raise ValueError("no seeds given")
    return best
