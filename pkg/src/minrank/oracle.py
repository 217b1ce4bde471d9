"""Exhaustive minimum-rank completion for small instances.

Every completion is visited. Erased positions are enumerated in row-major
odometer order (the last erased position changes fastest), so the witness is
the first minimum-rank completion in that order. The fast path walks rows
depth-first and reuses the echelon basis of the rows above; ``mode="plain"``
recomputes the rank of every candidate from scratch.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product
from typing import Sequence

from .gf import GFMatrix, RowBasis, rank_rows
from .masked import ERASED, MaskedMatrix

DEFAULT_BUDGET = 2**24


class BudgetExceeded(RuntimeError):
    def __init__(self, required: int, budget: int) -> None:
        self.required = required
        self.budget = budget
        super().__init__(f"exhaustive search needs {required} completions, budget is {budget}")


@dataclass(frozen=True)
class OracleResult:
    min_rank: int
    witness: GFMatrix
    optimum_count: int
    enumerated: int


def _fill(m: MaskedMatrix, positions: Sequence[tuple[int, int]], values: Sequence[int]) -> list[list[int]]:
    rows = [list(r) for r in m.data]
    for (i, j), v in zip(positions, values):
        rows[i][j] = v
    return rows  # type: ignore[return-value]


def _plain(m: MaskedMatrix, positions: list[tuple[int, int]]) -> tuple[int, tuple[int, ...], int, int]:
    q = m.q
    best = None
    witness: tuple[int, ...] = ()
    count = seen = 0
    for values in product(range(q), repeat=len(positions)):
        seen += 1
        r = rank_rows(_fill(m, positions, values), m.n_cols, q)
        if best is None or r < best:
            best, witness, count = r, values, 1
        elif r == best:
            count += 1
    assert best is not None
    return best, witness, count, seen


def _incremental(m: MaskedMatrix) -> tuple[int, list[list[int]], int, int]:
    q = m.q
    a = m.n_rows
    row_slots = [[j for j, x in enumerate(row) if x is ERASED] for row in m.data]
    state = {"best": None, "witness": None, "count": 0, "seen": 0}
    chosen: list[list[int]] = [[] for _ in range(a)]

    def visit(i: int, basis: RowBasis) -> None:
        if i == a:
            state["seen"] += 1
            r = len(basis)
            if state["best"] is None or r < state["best"]:
                state["best"], state["count"] = r, 1
                state["witness"] = [list(c) for c in chosen]
            elif r == state["best"]:
                state["count"] += 1
            return
        base = list(m.data[i])
        slots = row_slots[i]
        for values in product(range(q), repeat=len(slots)):
            row = base[:]
            for j, v in zip(slots, values):
                row[j] = v
            chosen[i] = row  # type: ignore[assignment]
            nxt = basis.copy()
            nxt.insert(row)  # type: ignore[arg-type]
            visit(i + 1, nxt)

    visit(0, RowBasis(q))
    return state["best"], state["witness"], state["count"], state["seen"]  # type: ignore[return-value]


def oracle_min_rank(
    m: MaskedMatrix, budget: int = DEFAULT_BUDGET, mode: str = "incremental", reverse: bool = False
) -> OracleResult:
    """Exact minimum rank over all completions of ``m``.

    ``reverse`` walks the erased positions in reverse order (plain mode only);
    it exists to check that the minimum does not depend on visiting order.
    """
    e = m.erasure_count
    required = m.q**e
    if required > budget:
        raise BudgetExceeded(required, budget)
    if mode == "incremental" and not reverse:
        best, rows, count, seen = _incremental(m)
        witness = GFMatrix(m.field, tuple(tuple(r) for r in rows), m.n_cols)
    elif mode in ("plain", "incremental"):
        positions = m.erased_positions()
        if reverse:
            positions = positions[::-1]
        best, values, count, seen = _plain(m, positions)
        witness = GFMatrix(m.field, tuple(tuple(r) for r in _fill(m, positions, values)), m.n_cols)
    else:
        raise ValueError(f"unknown oracle mode {mode!r}")
    return OracleResult(best, witness, count, seen)
