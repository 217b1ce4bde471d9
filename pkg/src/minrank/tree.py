"""Best-first decision-tree search for a minimum-rank completion.

Every branch carries a partially completed matrix, a complete sub-matrix of
known rank and the direction of its next projection. Expanding a branch
projects every line outside the sub-matrix onto the code spanned by it:

* lines with a unique in-code completion are filled and absorbed, and the
  direction flips (one child);
* otherwise, if some line has no in-code completion, the rank must grow: one
  child per filling of that line, each of rank k + 1, unless k + 1 already
  reaches the bound, in which case the branch is eliminated;
* otherwise every line is ambiguous, and the one with the fewest completions
  spawns a child per completion, in the flipped direction.

The live branch with the highest metric (fraction of known entries divided by
rank) is expanded first. With a finite prune threshold the lowest-metric
branches are dropped whenever the frontier grows past it.
"""

from __future__ import annotations

import heapq
import math
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace
from enum import Enum
from fractions import Fraction
from itertools import product
from typing import Sequence

from .gf import GFMatrix, RowBasis, mat_rank
from .masked import ERASED, MaskedMatrix, SubmatrixIndex
from .projection import ProjectionOutcome, build_code, project_vector
from .submatrix import SearchConfig, find_max_complete_submatrix


class Direction(str, Enum):
    HORIZONTAL = "horizontal"
    VERTICAL = "vertical"

    def flipped(self) -> Direction:
        return Direction.VERTICAL if self is Direction.HORIZONTAL else Direction.HORIZONTAL


class SearchExhausted(RuntimeError):
    """Pruning discarded every branch before any completion was reached."""

    def __init__(self, message: str, stats: TreeStats) -> None:
        super().__init__(message)
        self.stats = stats


@dataclass(frozen=True)
class TreeConfig:
    prune_threshold: float = math.inf
    seed: int = 0
    algo1_iters: int = 100
    initial_direction: str = "auto"
    threads: int = 1

    def __post_init__(self) -> None:
        if not (self.prune_threshold == math.inf or (int(self.prune_threshold) == self.prune_threshold and self.prune_threshold >= 1)):
            raise ValueError("prune_threshold must be a positive integer or infinity")
        if self.initial_direction not in ("auto", "horizontal", "vertical"):
            raise ValueError(f"unknown initial direction {self.initial_direction!r}")
        if self.threads < 1:
            raise ValueError("threads must be at least 1")


@dataclass(frozen=True)
class Branch:
    matrix: MaskedMatrix
    sub: SubmatrixIndex
    rank: int
    direction: Direction
    serial: int = 0

    def is_complete(self) -> bool:
        return self.matrix.is_complete()


@dataclass
class TreeStats:
    created: int = 0
    pruned: int = 0
    eliminated: int = 0
    expansions: int = 0
    projections: int = 0
    prune_events: int = 0
    completions: int = 0
    max_live: int = 0
    restarts: int = 0
    wall_ms: float = 0.0

    def as_dict(self) -> dict:
        return dict(self.__dict__)


@dataclass(frozen=True)
class Expansion:
    """Result of one projection pass.

    ``case`` is ``"unique"``, ``"multiple"``, ``"infeasible"``, ``"eliminated"``
    or ``"complete"`` (nothing left to project).
    """

    case: str
    children: tuple[Branch, ...]
    direction: Direction
    line: int | None = None
    outcomes: tuple[ProjectionOutcome, ...] = ()


@dataclass(frozen=True)
class CompletionResult:
    completed: GFMatrix
    achieved_rank: int
    initial_sub: SubmatrixIndex | None
    stats: TreeStats = field(compare=False)
    source: str = "search"


def branch_metric(branch: Branch) -> Fraction:
    m = branch.matrix
    total = m.n_rows * m.n_cols
    return Fraction(m.known_count, total) / max(branch.rank, 1)


def _heap_key(branch: Branch) -> float:
    # Same order as branch_metric: the ratio of two small integers is
    # correctly rounded, so equal metrics give equal floats.
    return -branch.matrix.known_count / max(branch.rank, 1)


def _frontier(m: MaskedMatrix, rows: Sequence[int], cols: Sequence[int], d: Direction) -> list[int]:
    if d is Direction.HORIZONTAL:
        taken = set(rows)
        return [i for i in range(m.n_rows) if i not in taken]
    taken = set(cols)
    return [j for j in range(m.n_cols) if j not in taken]


def initial_direction(m: MaskedMatrix, sub: SubmatrixIndex, policy: str = "auto") -> Direction:
    if policy != "auto":
        return Direction(policy)
    return Direction.HORIZONTAL if m.n_rows - len(sub.rows) <= m.n_cols - len(sub.cols) else Direction.VERTICAL


def _absorb(rows_data: list[list], rows: set[int], cols: set[int], q: int) -> None:
    """Grow (rows, cols) by complete lines already inside the current span."""
    n_rows, n_cols = len(rows_data), len(rows_data[0]) if rows_data else 0
    changed = True
    while changed:
        changed = False
        cs = sorted(cols)
        basis = RowBasis(q)
        for i in rows:
            basis.insert([rows_data[i][j] for j in cs])
        for i in range(n_rows):
            if i in rows:
                continue
            vec = [rows_data[i][j] for j in cs]
            if all(x is not ERASED for x in vec) and basis.contains(vec):
                rows.add(i)
                changed = True
        rs = sorted(rows)
        basis = RowBasis(q)
        for j in cols:
            basis.insert([rows_data[i][j] for i in rs])
        for j in range(n_cols):
            if j in cols:
                continue
            vec = [rows_data[i][j] for i in rs]
            if all(x is not ERASED for x in vec) and basis.contains(vec):
                cols.add(j)
                changed = True


def expand_branch(branch: Branch, best_rank: int) -> Expansion:
    """Run one projection pass on ``branch``.

    Children must reach a rank strictly below ``best_rank`` to be useful, so a
    branch whose rank would have to grow to ``best_rank`` is eliminated.
    """
    m = branch.matrix
    q = m.q
    rows0, cols0 = branch.sub.zero_based()
    d = branch.direction
    lines = _frontier(m, rows0, cols0, d)
    if not lines:
        d = d.flipped()
        lines = _frontier(m, rows0, cols0, d)
        if not lines:
            return Expansion("complete", (branch,), d)

    horizontal = d is Direction.HORIZONTAL
    # Work on row-oriented data: for vertical passes the lines are columns.
    data = [list(r) for r in m.data] if horizontal else [list(c) for c in zip(*m.data)]
    owned = set(rows0 if horizontal else cols0)
    cross = sorted(cols0 if horizontal else rows0)
    sub = GFMatrix(m.field, tuple(tuple(data[i][c] for c in cross) for i in sorted(owned)), len(cross))
    code = build_code(sub)
    outcomes = tuple(project_vector(code, [data[L][c] for c in cross], index=L + 1) for L in lines)

    def child(new_data: list[list], new_owned: set[int], rank: int, direction: Direction) -> Branch:
        if horizontal:
            mat = MaskedMatrix(m.field, tuple(tuple(r) for r in new_data), m.n_cols)
            new_sub = SubmatrixIndex.from_zero_based(new_owned, cross, rank)
        else:
            mat = MaskedMatrix(m.field, tuple(zip(*new_data)), m.n_cols)
            new_sub = SubmatrixIndex.from_zero_based(cross, new_owned, rank)
        return Branch(mat, new_sub, rank, direction)

    def write(target: list[list], o: ProjectionOutcome, values: Sequence[int]) -> None:
        row = target[o.index - 1]  # type: ignore[operator]
        for pos, x in zip(o.erased, values):
            row[cross[pos]] = x

    unique = [o for o in outcomes if o.is_unique]
    if unique:
        new_data = [list(r) for r in data]
        new_owned = set(owned)
        for o in unique:
            write(new_data, o, next(iter(o.solutions)))
            new_owned.add(o.index - 1)  # type: ignore[operator]
        if horizontal:
            r_set, c_set = new_owned, set(cross)
            _absorb(new_data, r_set, c_set, q)
            mat = MaskedMatrix(m.field, tuple(tuple(r) for r in new_data), m.n_cols)
        else:
            c_set, r_set = new_owned, set(cross)
            row_major = [list(r) for r in zip(*new_data)]
            _absorb(row_major, r_set, c_set, q)
            mat = MaskedMatrix(m.field, tuple(tuple(r) for r in row_major), m.n_cols)
        new_sub = SubmatrixIndex.from_zero_based(r_set, c_set, branch.rank)
        return Expansion("unique", (Branch(mat, new_sub, branch.rank, d.flipped()),), d, outcomes=outcomes)

    infeasible = [o for o in outcomes if o.is_infeasible]
    if infeasible:
        if branch.rank + 1 >= best_rank:
            return Expansion("eliminated", (), d, outcomes=outcomes)
        o = min(infeasible, key=lambda o: (len(o.erased), o.index))
        kids = []
        for values in product(range(q), repeat=len(o.erased)):
            new_data = [list(r) for r in data]
            write(new_data, o, values[::-1])
            kids.append(child(new_data, owned | {o.index - 1}, branch.rank + 1, d))  # type: ignore[operator]
        return Expansion("infeasible", tuple(kids), d, o.index, outcomes)

    o = min(outcomes, key=lambda o: (o.solutions.count(), len(o.erased), o.index))
    kids = []
    for values in o.solutions:
        new_data = [list(r) for r in data]
        write(new_data, o, values)
        kids.append(child(new_data, owned | {o.index - 1}, branch.rank, d.flipped()))  # type: ignore[operator]
    return Expansion("multiple", tuple(kids), d, o.index, outcomes)


def prune(live: Sequence[Branch], cfg: TreeConfig) -> list[Branch]:
    """Keep the ``cfg.prune_threshold`` best branches (metric, then oldest)."""
    if len(live) <= cfg.prune_threshold:
        return list(live)
    keep = int(cfg.prune_threshold)
    return sorted(live, key=lambda b: (-branch_metric(b), b.serial))[:keep]


def _check_incumbent(m: MaskedMatrix, incumbent: GFMatrix) -> int:
    if not m.agrees_with(incumbent):
        raise ValueError("incumbent completion disagrees with the input matrix")
    return mat_rank(incumbent)


def _search(m: MaskedMatrix, root_sub: SubmatrixIndex, cfg: TreeConfig, stats: TreeStats, incumbent: GFMatrix | None):
    a, b = m.shape
    best: GFMatrix | None = incumbent
    bound = _check_incumbent(m, incumbent) if incumbent is not None else min(a, b) + 1
    serial = 0
    root = Branch(m, root_sub, root_sub.rank, initial_direction(m, root_sub, cfg.initial_direction), serial)
    stats.created += 1
    heap: list[tuple[float, int, Branch]] = [(_heap_key(root), root.serial, root)]
    found_any = False
    pool = ThreadPoolExecutor(cfg.threads) if cfg.threads > 1 else None
    try:
        while heap:
            batch = []
            while heap and len(batch) < cfg.threads:
                _, _, br = heapq.heappop(heap)
                if br.rank >= bound:
                    stats.eliminated += 1
                    continue
                batch.append(br)
            if not batch:
                continue
            cur_bound = bound
            if pool is None:
                results = [expand_branch(br, cur_bound) for br in batch]
            else:
                results = list(pool.map(lambda br: expand_branch(br, cur_bound), batch))
            for exp in results:
                stats.expansions += 1
                stats.projections += len(exp.outcomes)
                if exp.case == "eliminated":
                    stats.eliminated += 1
                    continue
                for kid in exp.children:
                    if kid.matrix.is_complete():
                        stats.completions += 1
                        done = kid.matrix.to_gf()
                        r = mat_rank(done)
                        found_any = True
                        if r < bound:
                            best, bound = done, r
                        continue
                    if kid.rank >= bound:
                        stats.eliminated += 1
                        continue
                    serial += 1
                    kid = replace(kid, serial=serial)
                    stats.created += 1
                    heapq.heappush(heap, (_heap_key(kid), serial, kid))
            if len(heap) > cfg.prune_threshold:
                keep = int(cfg.prune_threshold)
                survivors = heapq.nsmallest(keep, heap)
                stats.pruned += len(heap) - keep
                stats.prune_events += 1
                heap = survivors
                heapq.heapify(heap)
            stats.max_live = max(stats.max_live, len(heap))
    finally:
        if pool is not None:
            pool.shutdown()
    return best, found_any


def complete_min_rank(m: MaskedMatrix, cfg: TreeConfig = TreeConfig(), incumbent: GFMatrix | None = None) -> CompletionResult:
    """Search for a minimum-rank completion of ``m``.

    ``incumbent`` is an optional known completion; the search then only keeps
    branches that can beat its rank, and it is returned if nothing better is
    found.
    """
    if m.n_rows == 0 or m.n_cols == 0:
        raise ValueError("matrix must be nonempty")
    start = time.perf_counter()
    stats = TreeStats()
    if m.is_complete():
        done = m.to_gf()
        stats.wall_ms = (time.perf_counter() - start) * 1e3
        return CompletionResult(done, mat_rank(done), None, stats, "input")

    root_sub = find_max_complete_submatrix(m, SearchConfig(cfg.algo1_iters, cfg.seed))
    best, _ = _search(m, root_sub, cfg, stats, incumbent)
    if best is None and cfg.prune_threshold != math.inf:
        stats.restarts += 1
        retry = replace(cfg, prune_threshold=cfg.prune_threshold * 2)
        best, _ = _search(m, root_sub, retry, stats, incumbent)
    stats.wall_ms = (time.perf_counter() - start) * 1e3
    if best is None:
        raise SearchExhausted("no completion found under pruning", stats)

    if not m.agrees_with(best):
        raise AssertionError("completion disagrees with the input mask")
    source = "incumbent" if incumbent is not None and best is incumbent else "search"
    return CompletionResult(best, mat_rank(best), root_sub, stats, source)

