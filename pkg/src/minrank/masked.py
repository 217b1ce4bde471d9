"""Partially erased matrices over GF(q).

An entry is either a field element or :data:`ERASED`. Index sets taken by
the public helpers here (``submatrix``, :class:`SubmatrixIndex`) are 1-based.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterable, Optional, Sequence

from .gf import DimensionError, FieldError, FieldSpec, GFMatrix, rank_rows

ERASED = None

Entry = Optional[int]


class MatrixFormatError(ValueError):
    """Malformed matrix text."""

    def __init__(self, message: str, line: int | None = None) -> None:
        self.line = line
        super().__init__(f"line {line}: {message}" if line is not None else message)


class BoundsError(IndexError):
    """Index outside the matrix."""


@dataclass(frozen=True)
class MaskedMatrix:
    field: FieldSpec
    data: tuple[tuple[Entry, ...], ...]
    n_cols: int

    def __post_init__(self) -> None:
        q = self.field.q
        for i, row in enumerate(self.data):
            if len(row) != self.n_cols:
                raise DimensionError(f"row {i + 1} has {len(row)} entries, expected {self.n_cols}")
            for x in row:
                if x is not ERASED and (isinstance(x, bool) or not isinstance(x, int) or not 0 <= x < q):
                    raise FieldError(f"entry {x!r} in row {i + 1} is not in GF({q})")

    @classmethod
    def from_rows(cls, rows: Iterable[Iterable[Entry]], field: FieldSpec, n_cols: int | None = None) -> MaskedMatrix:
        data = tuple(tuple(r) for r in rows)
        if n_cols is None:
            n_cols = len(data[0]) if data else 0
        return cls(field, data, n_cols)

    @classmethod
    def from_gf(cls, m: GFMatrix) -> MaskedMatrix:
        return cls(m.field, m.data, m.n_cols)

    @property
    def n_rows(self) -> int:
        return len(self.data)

    @property
    def shape(self) -> tuple[int, int]:
        return len(self.data), self.n_cols

    @property
    def q(self) -> int:
        return self.field.q

    def __getitem__(self, ij: tuple[int, int]) -> Entry:
        i, j = ij
        return self.data[i][j]

    @property
    def erasure_count(self) -> int:
        return sum(x is ERASED for row in self.data for x in row)

    @property
    def known_count(self) -> int:
        return self.n_rows * self.n_cols - self.erasure_count

    def is_complete(self) -> bool:
        return all(x is not ERASED for row in self.data for x in row)

    def erased_positions(self) -> list[tuple[int, int]]:
        """0-based (row, col) of every erasure, row-major."""
        return [(i, j) for i, row in enumerate(self.data) for j, x in enumerate(row) if x is ERASED]

    def to_gf(self) -> GFMatrix:
        if not self.is_complete():
            raise ValueError(f"matrix still has {self.erasure_count} erased entries")
        return GFMatrix(self.field, self.data, self.n_cols)  # type: ignore[arg-type]

    def transpose(self) -> MaskedMatrix:
        if not self.data:
            return MaskedMatrix(self.field, tuple(() for _ in range(self.n_cols)), 0)
        return MaskedMatrix(self.field, tuple(zip(*self.data)), self.n_rows)

    def filled(self, values: dict[tuple[int, int], int]) -> MaskedMatrix:
        """Copy with 0-based positions overwritten by ``values``."""
        rows = [list(r) for r in self.data]
        for (i, j), v in values.items():
            rows[i][j] = v
        return MaskedMatrix(self.field, tuple(tuple(r) for r in rows), self.n_cols)

    def agrees_with(self, other: MaskedMatrix | GFMatrix) -> bool:
        """True if ``other`` matches every non-erased entry of ``self``."""
        if (self.n_rows, self.n_cols) != (other.n_rows, other.n_cols):
            return False
        for r, s in zip(self.data, other.data):
            for x, y in zip(r, s):
                if x is not ERASED and x != y:
                    return False
        return True

    def render(self) -> str:
        return "".join(" ".join("X" if x is ERASED else str(x) for x in row) + "\n" for row in self.data)


_INT = re.compile(r"[0-9]+\Z")


def parse_masked(text: str, field: FieldSpec) -> MaskedMatrix:
    """Parse whitespace-separated rows of integers and ``X`` tokens.

    Lines starting with ``#`` are comments; blank lines after the last row are
    ignored.
    """
    rows: list[tuple[Entry, ...]] = []
    width = None
    blank_at = None
    for lineno, line in enumerate(text.splitlines(), start=1):
        stripped = line.strip()
        if stripped.startswith("#"):
            continue
        if not stripped:
            if rows and blank_at is None:
                blank_at = lineno
            continue
        if blank_at is not None:
            raise MatrixFormatError("blank line inside matrix", blank_at)
        row: list[Entry] = []
        for tok in stripped.split():
            if tok == "X":
                row.append(ERASED)
            elif _INT.match(tok):
                v = int(tok)
                if v >= field.q:
                    raise FieldError(f"line {lineno}: token {tok} is not in GF({field.q})")
                row.append(v)
            else:
                raise MatrixFormatError(f"bad token {tok!r}", lineno)
        if width is None:
            width = len(row)
        elif len(row) != width:
            raise MatrixFormatError(f"row has {len(row)} entries, expected {width}", lineno)
        rows.append(tuple(row))
    if not rows:
        raise MatrixFormatError("empty matrix")
    return MaskedMatrix(field, tuple(rows), width or 0)


def _check_indices(idx: Sequence[int], bound: int, what: str) -> list[int]:
    out = []
    for i in idx:
        if isinstance(i, bool) or not isinstance(i, int) or not 1 <= i <= bound:
            raise BoundsError(f"{what} index {i!r} outside 1..{bound}")
        out.append(i - 1)
    return out


def submatrix(m: MaskedMatrix, rows: Sequence[int], cols: Sequence[int]) -> MaskedMatrix:
    """Restriction of ``m`` to the 1-based index sequences ``rows`` x ``cols``."""
    r0 = _check_indices(rows, m.n_rows, "row")
    c0 = _check_indices(cols, m.n_cols, "column")
    return MaskedMatrix(m.field, tuple(tuple(m.data[i][j] for j in c0) for i in r0), len(c0))


def blow_up(m: MaskedMatrix, n: int) -> MaskedMatrix:
    """Replace each entry by an n x n block: 1 -> identity, 0 -> zeros, X -> all erased."""
    if n < 1:
        raise ValueError("block length must be at least 1")
    rows = []
    for i, row in enumerate(m.data):
        for j, x in enumerate(row):
            if x is not ERASED and x not in (0, 1):
                raise ValueError(f"entry ({i + 1},{j + 1}) = {x}: blow-up needs a 0/1/X pattern")
        for s in range(n):
            out: list[Entry] = []
            for x in row:
                if x is ERASED:
                    out.extend([ERASED] * n)
                else:
                    out.extend(x if t == s else 0 for t in range(n))
            rows.append(tuple(out))
    return MaskedMatrix(m.field, tuple(rows), m.n_cols * n)


def erasure_profile(m: MaskedMatrix) -> tuple[list[int], list[int]]:
    rows = [sum(x is ERASED for x in r) for r in m.data]
    cols = [sum(r[j] is ERASED for r in m.data) for j in range(m.n_cols)]
    return rows, cols


@dataclass(frozen=True)
class SubmatrixIndex:
    """A complete sub-matrix given by 1-based sorted row/column sets and its rank."""

    rows: tuple[int, ...]
    cols: tuple[int, ...]
    rank: int

    @classmethod
    def from_zero_based(cls, rows: Iterable[int], cols: Iterable[int], rank: int) -> SubmatrixIndex:
        return cls(tuple(sorted(i + 1 for i in rows)), tuple(sorted(j + 1 for j in cols)), rank)

    def zero_based(self) -> tuple[list[int], list[int]]:
        return [i - 1 for i in self.rows], [j - 1 for j in self.cols]

    @property
    def size(self) -> int:
        return len(self.rows) + len(self.cols)

    def validate(self, m: MaskedMatrix) -> None:
        """Raise ``ValueError`` unless this index is complete in ``m`` with the stated rank."""
        sub = submatrix(m, self.rows, self.cols)
        if not sub.is_complete():
            raise ValueError("sub-matrix contains erased entries")
        k = rank_rows(sub.data, sub.n_cols, m.q)  # type: ignore[arg-type]
        if k != self.rank:
            raise ValueError(f"sub-matrix rank is {k}, index claims {self.rank}")
