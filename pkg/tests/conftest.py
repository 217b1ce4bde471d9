from __future__ import annotations

import itertools
import random
from pathlib import Path

import pytest

from minrank.gf import GF2, FieldSpec, rank_rows
from minrank.indexcoding import parse_problem
from minrank.masked import ERASED, MaskedMatrix, parse_masked

DATA = Path(__file__).resolve().parent.parent / "data"

FIG2_TEXT = "1 X 0 0 X\nX 1 X X 0\n0 0 1 1 X\n0 0 X 1 X\nX X 0 0 1\n"


@pytest.fixture
def fig2() -> MaskedMatrix:
    return parse_masked(FIG2_TEXT, GF2)


@pytest.fixture
def fig1_problem():
    return parse_problem((DATA / "fig1.problem").read_text())


@pytest.fixture
def data_dir() -> Path:
    return DATA


def random_masked(rng: random.Random, a: int, b: int, erasures: int, q: int = 2) -> MaskedMatrix:
    cells = [(i, j) for i in range(a) for j in range(b)]
    gone = set(rng.sample(cells, erasures))
    rows = [[ERASED if (i, j) in gone else rng.randrange(q) for j in range(b)] for i in range(a)]
    return MaskedMatrix.from_rows(rows, FieldSpec(q), b)


def brute_min_rank(m: MaskedMatrix) -> int:
    """Minimum rank by trying every filling; deliberately naive."""
    pos = [(i, j) for i in range(m.n_rows) for j in range(m.n_cols) if m.data[i][j] is ERASED]
    best = None
    for values in itertools.product(range(m.q), repeat=len(pos)):
        rows = [list(r) for r in m.data]
        for (i, j), v in zip(pos, values):
            rows[i][j] = v
        r = rank_rows(rows, m.n_cols, m.q)
        best = r if best is None else min(best, r)
    return best


# Acceptance criteria append (number, description, passed, detail) here; the
# summary hook prints one line per criterion after the run.
ACCEPTANCE_RESULTS: list[tuple[int, str, bool, str]] = []


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for number, desc, passed, detail in sorted(ACCEPTANCE_RESULTS):
        status = "PASS" if passed else "FAIL"
        terminalreporter.write_line(f"criterion {number}: {status}  {desc}" + (f"  ({detail})" if detail else ""))
