"""Exact linear algebra over prime fields GF(q).

Matrices are immutable tuples of rows. Elimination over GF(2) packs each row
into a Python int and works with XOR; larger fields use plain integer rows
with a precomputed inverse table. Pivot search takes the first nonzero entry
at or below the current row, so every routine is deterministic.

Pivot columns in public return values are 1-based.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from itertools import product
from typing import Iterable, Iterator, Sequence

MAX_MODULUS = 251

Vector = tuple[int, ...]


class FieldError(ValueError):
    """Raised for an invalid modulus or an element outside the field."""


class DimensionError(ValueError):
    """Raised when matrix/vector shapes do not line up."""


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    d = 2
    while d * d <= n:
        if n % d == 0:
            return False
        d += 1
    return True


@lru_cache(maxsize=None)
def _inverse_table(q: int) -> tuple[int, ...]:
    return (0,) + tuple(pow(x, q - 2, q) for x in range(1, q))


@dataclass(frozen=True)
class FieldSpec:
    """The prime field GF(q) with alphabet {0, ..., q-1}."""

    q: int

    def __post_init__(self) -> None:
        if isinstance(self.q, bool) or not isinstance(self.q, int):
            raise FieldError(f"field size must be an integer, got {self.q!r}")
        if not 2 <= self.q <= MAX_MODULUS:
            raise FieldError(f"field size {self.q} outside [2, {MAX_MODULUS}]")
        if not is_prime(self.q):
            raise FieldError(f"field size {self.q} is not prime")

    def check(self, x: int) -> int:
        if isinstance(x, bool) or not isinstance(x, int) or not 0 <= x < self.q:
            raise FieldError(f"{x!r} is not an element of GF({self.q})")
        return x

    def add(self, x: int, y: int) -> int:
        return (x + y) % self.q

    def sub(self, x: int, y: int) -> int:
        return (x - y) % self.q

    def mul(self, x: int, y: int) -> int:
        return (x * y) % self.q

    def neg(self, x: int) -> int:
        return (-x) % self.q

    def inv(self, x: int) -> int:
        if x % self.q == 0:
            raise ZeroDivisionError("zero has no inverse")
        return _inverse_table(self.q)[x % self.q]


GF2 = FieldSpec(2)


def field_ops(x: int, y: int, which: str, field: FieldSpec) -> int:
    """Apply one of ``add``, ``sub``, ``mul`` or ``inv`` (which ignores ``y``)."""
    field.check(x)
    if which == "inv":
        return field.inv(x)
    field.check(y)
    try:
        op = {"add": field.add, "sub": field.sub, "mul": field.mul}[which]
    except KeyError:
        raise ValueError(f"unknown field operation {which!r}") from None
    return op(x, y)


@dataclass(frozen=True)
class GFMatrix:
    """Dense a x b matrix over GF(q), stored as a tuple of row tuples."""

    field: FieldSpec
    data: tuple[Vector, ...]
    n_cols: int

    def __post_init__(self) -> None:
        q = self.field.q
        for i, row in enumerate(self.data):
            if len(row) != self.n_cols:
                raise DimensionError(f"row {i + 1} has {len(row)} entries, expected {self.n_cols}")
            for x in row:
                if isinstance(x, bool) or not isinstance(x, int) or not 0 <= x < q:
                    raise FieldError(f"entry {x!r} in row {i + 1} is not in GF({q})")

    @classmethod
    def from_rows(cls, rows: Iterable[Iterable[int]], field: FieldSpec, n_cols: int | None = None) -> GFMatrix:
        data = tuple(tuple(r) for r in rows)
        if n_cols is None:
            if not data:
                raise DimensionError("column count is required for a matrix with no rows")
            n_cols = len(data[0])
        return cls(field, data, n_cols)

    @classmethod
    def zeros(cls, a: int, b: int, field: FieldSpec) -> GFMatrix:
        return cls(field, tuple((0,) * b for _ in range(a)), b)

    @classmethod
    def identity(cls, n: int, field: FieldSpec) -> GFMatrix:
        return cls(field, tuple(tuple(int(i == j) for j in range(n)) for i in range(n)), n)

    @property
    def n_rows(self) -> int:
        return len(self.data)

    @property
    def shape(self) -> tuple[int, int]:
        return len(self.data), self.n_cols

    @property
    def q(self) -> int:
        return self.field.q

    def __getitem__(self, ij: tuple[int, int]) -> int:
        i, j = ij
        return self.data[i][j]

    def row(self, i: int) -> Vector:
        return self.data[i]

    def column(self, j: int) -> Vector:
        return tuple(r[j] for r in self.data)

    def transpose(self) -> GFMatrix:
        if not self.data:
            return GFMatrix(self.field, tuple(() for _ in range(self.n_cols)), 0)
        return GFMatrix(self.field, tuple(zip(*self.data)), len(self.data))

    def __matmul__(self, other: GFMatrix) -> GFMatrix:
        if self.field != other.field:
            raise FieldError("matrices over different fields")
        if self.n_cols != other.n_rows:
            raise DimensionError(f"cannot multiply {self.shape} by {other.shape}")
        q = self.q
        cols = [other.column(j) for j in range(other.n_cols)]
        data = tuple(tuple(sum(x * y for x, y in zip(r, c)) % q for c in cols) for r in self.data)
        return GFMatrix(self.field, data, other.n_cols)

    def mul_vec(self, v: Sequence[int]) -> Vector:
        if len(v) != self.n_cols:
            raise DimensionError(f"vector of length {len(v)} against {self.n_cols} columns")
        q = self.q
        return tuple(sum(x * y for x, y in zip(r, v)) % q for r in self.data)

    def select(self, rows: Sequence[int] | None = None, cols: Sequence[int] | None = None) -> GFMatrix:
        """Restriction to 0-based ``rows`` x ``cols`` (``None`` keeps all)."""
        rs = range(self.n_rows) if rows is None else rows
        cs = range(self.n_cols) if cols is None else cols
        return GFMatrix(self.field, tuple(tuple(self.data[i][j] for j in cs) for i in rs), len(cs))

    def is_zero(self) -> bool:
        return all(not any(r) for r in self.data)

    def tolist(self) -> list[list[int]]:
        return [list(r) for r in self.data]


# -- elimination kernels on raw rows -----------------------------------------


def pack_bits(row: Sequence[int]) -> int:
    out = 0
    for j, x in enumerate(row):
        if x:
            out |= 1 << j
    return out


def unpack_bits(word: int, n: int) -> Vector:
    return tuple((word >> j) & 1 for j in range(n))


def _rref_bits(rows: list[int], limit: int) -> list[int]:
    """In-place RREF of bit-packed rows; pivots searched in columns < limit."""
    pivots: list[int] = []
    r = 0
    n = len(rows)
    for c in range(limit):
        if r == n:
            break
        bit = 1 << c
        for i in range(r, n):
            if rows[i] & bit:
                break
        else:
            continue
        rows[r], rows[i] = rows[i], rows[r]
        pr = rows[r]
        for i in range(n):
            if i != r and rows[i] & bit:
                rows[i] ^= pr
        pivots.append(c)
        r += 1
    return pivots


def _rref_lists(rows: list[list[int]], limit: int, q: int) -> list[int]:
    """In-place RREF of integer rows mod q; pivots searched in columns < limit."""
    inv = _inverse_table(q)
    pivots: list[int] = []
    r = 0
    n = len(rows)
    for c in range(limit):
        if r == n:
            break
        for i in range(r, n):
            if rows[i][c]:
                break
        else:
            continue
        rows[r], rows[i] = rows[i], rows[r]
        s = inv[rows[r][c]]
        if s != 1:
            rows[r] = [(x * s) % q for x in rows[r]]
        pr = rows[r]
        for i in range(n):
            f = rows[i][c]
            if i != r and f:
                rows[i] = [(x - f * y) % q for x, y in zip(rows[i], pr)]
        pivots.append(c)
        r += 1
    return pivots


def rref_rows(rows: Sequence[Sequence[int]], n_cols: int, q: int, limit: int | None = None) -> tuple[list[list[int]], list[int]]:
    """RREF of raw rows; returns (all rows in reduced order, 0-based pivots)."""
    limit = n_cols if limit is None else limit
    if q == 2:
        words = [pack_bits(r) for r in rows]
        pivots = _rref_bits(words, limit)
        return [list(unpack_bits(w, n_cols)) for w in words], pivots
    work = [[x % q for x in r] for r in rows]
    pivots = _rref_lists(work, limit, q)
    return work, pivots


def rank_rows(rows: Sequence[Sequence[int]], n_cols: int, q: int) -> int:
    if q == 2:
        return gf2_rank_words([pack_bits(r) for r in rows])
    work = [[x % q for x in r] for r in rows]
    return len(_rref_lists(work, n_cols, q))


def gf2_rank_words(words: Iterable[int]) -> int:
    """Rank of bit-packed GF(2) rows, by insertion into a pivot-keyed basis."""
    basis: dict[int, int] = {}
    for w in words:
        while w:
            top = w.bit_length() - 1
            b = basis.get(top)
            if b is None:
                basis[top] = w
                break
            w ^= b
    return len(basis)


class RowBasis:
    """Incremental echelon basis; ``insert`` reports whether the rank grew."""

    __slots__ = ("q", "_pivots")

    def __init__(self, q: int) -> None:
        self.q = q
        self._pivots: dict[int, object] = {}

    def __len__(self) -> int:
        return len(self._pivots)

    def copy(self) -> RowBasis:
        out = RowBasis(self.q)
        out._pivots = dict(self._pivots)
        return out

    def reduce(self, row: Sequence[int] | int):
        if self.q == 2:
            w = row if isinstance(row, int) else pack_bits(row)
            while w:
                top = w.bit_length() - 1
                b = self._pivots.get(top)
                if b is None:
                    return w
                w ^= b  # type: ignore[operator]
            return 0
        q = self.q
        v = [x % q for x in row]  # type: ignore[union-attr]
        for j in range(len(v)):
            x = v[j]
            if not x:
                continue
            b = self._pivots.get(j)
            if b is None:
                return v
            v = [(s - x * t) % q for s, t in zip(v, b)]  # type: ignore[arg-type]
        return None

    def insert(self, row: Sequence[int] | int) -> bool:
        r = self.reduce(row)
        if not r:
            return False
        if self.q == 2:
            self._pivots[r.bit_length() - 1] = r  # type: ignore[union-attr]
            return True
        j = next(i for i, x in enumerate(r) if x)  # type: ignore[union-attr]
        s = _inverse_table(self.q)[r[j]]  # type: ignore[index]
        self._pivots[j] = [(x * s) % self.q for x in r]  # type: ignore[union-attr]
        return True

    def contains(self, row: Sequence[int] | int) -> bool:
        return not self.reduce(row)


def _solve_rows(a_rows: Sequence[Sequence[int]], rhs: Sequence[int], n: int, q: int) -> tuple[Vector | None, list[Vector]]:
    """Solve a.x = rhs for x in GF(q)^n; returns (particular or None, basis)."""
    aug = [list(r) + [b] for r, b in zip(a_rows, rhs)]
    red, pivots = rref_rows(aug, n + 1, q, limit=n)
    rank = len(pivots)
    for row in red[rank:]:
        if row[n] % q:
            return None, []
    particular = [0] * n
    for i, p in enumerate(pivots):
        particular[p] = red[i][n]
    return tuple(particular), _null_from_rref(red, pivots, n, q)


def _null_from_rref(red: Sequence[Sequence[int]], pivots: Sequence[int], n: int, q: int) -> list[Vector]:
    pivset = set(pivots)
    basis = []
    for f in range(n):
        if f in pivset:
            continue
        v = [0] * n
        v[f] = 1
        for i, p in enumerate(pivots):
            v[p] = (-red[i][f]) % q
        basis.append(tuple(v))
    return basis


# -- public operations ---------------------------------------------------------


def mat_rank(m: GFMatrix) -> int:
    """Dimension of the row space of ``m``."""
    return rank_rows(m.data, m.n_cols, m.q)


def rref(m: GFMatrix) -> tuple[GFMatrix, list[int]]:
    """Reduced row echelon form of ``m`` and its 1-based pivot columns."""
    red, pivots = rref_rows(m.data, m.n_cols, m.q)
    return GFMatrix(m.field, tuple(tuple(r) for r in red), m.n_cols), [p + 1 for p in pivots]


def nullspace_basis(m: GFMatrix) -> list[Vector]:
    """Basis of the right nullspace {v : m v^T = 0}, one vector per free column."""
    red, pivots = rref_rows(m.data, m.n_cols, m.q)
    return _null_from_rref(red, pivots, m.n_cols, m.q)


def in_row_space(m: GFMatrix, v: Sequence[int]) -> bool:
    if len(v) != m.n_cols:
        raise DimensionError(f"vector of length {len(v)} against {m.n_cols} columns")
    return rank_rows(list(m.data) + [list(v)], m.n_cols, m.q) == mat_rank(m)


@dataclass(frozen=True)
class AffineSolutionSet:
    """Solutions of a linear system: ``particular`` + span(``basis``).

    ``particular`` is ``None`` when the system is inconsistent. Iteration walks
    the free positions as an odometer, lowest free position fastest.
    """

    field: FieldSpec
    length: int
    particular: Vector | None
    basis: tuple[Vector, ...] = ()

    @property
    def is_empty(self) -> bool:
        return self.particular is None

    @property
    def dimension(self) -> int | None:
        return None if self.particular is None else len(self.basis)

    def count(self) -> int:
        if self.particular is None:
            return 0
        return self.field.q ** len(self.basis)

    def __len__(self) -> int:
        return self.count()

    def __iter__(self) -> Iterator[Vector]:
        if self.particular is None:
            return
        q = self.field.q
        base = self.particular
        d = len(self.basis)
        for coeffs in product(range(q), repeat=d):
            v = list(base)
            # product() varies its last slot fastest; reverse so basis[0] is fastest
            for c, b in zip(reversed(coeffs), self.basis):
                if c:
                    for j, x in enumerate(b):
                        if x:
                            v[j] = (v[j] + c * x) % q
            yield tuple(v)

    def __contains__(self, x: object) -> bool:
        if self.particular is None or not isinstance(x, (tuple, list)) or len(x) != self.length:
            return False
        q = self.field.q
        diff = [(a - b) % q for a, b in zip(x, self.particular)]
        if not self.basis:
            return not any(diff)
        return rank_rows(list(self.basis) + [diff], self.length, q) == len(self.basis)


def solve_linear(a: GFMatrix, b: Sequence[int]) -> AffineSolutionSet:
    """Full affine solution set of ``a x = b``; inconsistency gives an empty set."""
    if len(b) != a.n_rows:
        raise DimensionError(f"right-hand side has length {len(b)}, matrix has {a.n_rows} rows")
    for x in b:
        a.field.check(x)
    particular, basis = _solve_rows(a.data, b, a.n_cols, a.q)
    return AffineSolutionSet(a.field, a.n_cols, particular, tuple(basis))
