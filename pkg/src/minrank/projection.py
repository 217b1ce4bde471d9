"""Erasure decoding against the code spanned by a complete sub-matrix.

The independent rows of a complete sub-matrix generate a linear block code.
A partially erased row is treated as a codeword received with erasures: the
parity-check constraints restricted to the erased positions give a small
linear system whose solutions are exactly the in-code completions.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator, Sequence

from .gf import AffineSolutionSet, DimensionError, FieldSpec, GFMatrix, Vector, _solve_rows, rref_rows
from .masked import ERASED, Entry


@dataclass(frozen=True)
class LinearCode:
    """Generator in RREF, parity-check matrix, and 1-based pivot columns."""

    generator: GFMatrix
    parity: GFMatrix
    pivot_cols: tuple[int, ...]

    @property
    def field(self) -> FieldSpec:
        return self.generator.field

    @property
    def length(self) -> int:
        return self.generator.n_cols

    @property
    def dimension(self) -> int:
        return self.generator.n_rows


def _parity_rows(red: Sequence[Sequence[int]], pivots: Sequence[int], m: int, q: int) -> list[Vector]:
    # Move pivot columns to the front so G = [I | P], take H = [-P^T | I],
    # then undo the column permutation.
    k = len(pivots)
    free = [c for c in range(m) if c not in set(pivots)]
    perm = list(pivots) + free  # permuted position -> original column
    rows = []
    for t, f in enumerate(free):
        h_perm = [(-red[i][f]) % q for i in range(k)] + [int(s == t) for s in range(m - k)]
        h = [0] * m
        for pos, col in enumerate(perm):
            h[col] = h_perm[pos]
        rows.append(tuple(h))
    return rows


def build_code(complete_sub: GFMatrix) -> LinearCode:
    """Build the code generated by the rows of ``complete_sub``."""
    m, q = complete_sub.n_cols, complete_sub.q
    red, pivots = rref_rows(complete_sub.data, m, q)
    gen = GFMatrix(complete_sub.field, tuple(tuple(r) for r in red[: len(pivots)]), m)
    par = GFMatrix(complete_sub.field, tuple(_parity_rows(red, pivots, m, q)), m)
    return LinearCode(gen, par, tuple(p + 1 for p in pivots))


@dataclass(frozen=True)
class ProjectionOutcome:
    """Completions of one partial vector inside a code.

    ``solutions`` ranges over the values of the erased positions (listed
    0-based in ``erased``); ``index`` is the 1-based line number the vector
    came from, if any.
    """

    index: int | None
    partial: tuple[Entry, ...]
    erased: tuple[int, ...]
    solutions: AffineSolutionSet

    @property
    def is_unique(self) -> bool:
        return self.solutions.dimension == 0

    @property
    def is_infeasible(self) -> bool:
        return self.solutions.is_empty

    def fill(self, values: Sequence[int]) -> Vector:
        v = list(self.partial)
        for pos, x in zip(self.erased, values):
            v[pos] = x
        return tuple(v)  # type: ignore[arg-type]

    def candidates(self) -> Iterator[Vector]:
        for values in self.solutions:
            yield self.fill(values)


def project_vector(code: LinearCode, partial: Sequence[Entry], index: int | None = None) -> ProjectionOutcome:
    """Solve ``parity . c = 0`` for the erased entries of ``partial``."""
    if len(partial) != code.length:
        raise DimensionError(f"vector of length {len(partial)} against code length {code.length}")
    q = code.field.q
    erased = tuple(j for j, x in enumerate(partial) if x is ERASED)
    lhs = []
    rhs = []
    for h in code.parity.data:
        lhs.append([h[j] for j in erased])
        rhs.append((-sum(h[j] * x for j, x in enumerate(partial) if x is not ERASED)) % q)
    particular, basis = _solve_rows(lhs, rhs, len(erased), q)
    sol = AffineSolutionSet(code.field, len(erased), particular, tuple(basis))
    return ProjectionOutcome(index, tuple(partial), erased, sol)


def solution_count(outcome: ProjectionOutcome) -> int:
    return outcome.solutions.count()
