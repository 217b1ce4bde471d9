"""Linear index coding: problem files, the incomplete matrix, code extraction
and decodability checks.

Rows of the matrix are messages and columns are receivers. A receiver's
column holds 1 at its wanted message, ERASED at its side information and 0
elsewhere. For block length n > 1 every message is split into n symbols and
every receiver into n sub-receivers, which is exactly the n-fold blow-up of
the pattern matrix. Codes and decoders always live in that symbol-level
space (|X|*n messages, |R|*n receivers).
"""

from __future__ import annotations

import random
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from .gf import FieldSpec, GFMatrix, Vector, _solve_rows, rank_rows, rref
from .masked import ERASED, MaskedMatrix, blow_up


class ProblemFormatError(ValueError):
    def __init__(self, message: str, line: int | None = None) -> None:
        self.line = line
        super().__init__(f"line {line}: {message}" if line is not None else message)


class ProblemSemanticError(ValueError):
    pass


class CodeValidityError(ValueError):
    pass


@dataclass(frozen=True)
class Receiver:
    label: str
    wants: int
    has: frozenset[int]


@dataclass(frozen=True)
class IndexCodingProblem:
    """Messages are numbered 1..message_count."""

    message_count: int
    receivers: tuple[Receiver, ...]
    field: FieldSpec = FieldSpec(2)
    block_length: int = 1

    def __post_init__(self) -> None:
        if self.message_count < 1:
            raise ProblemSemanticError("need at least one message")
        if self.block_length < 1:
            raise ProblemSemanticError("block length must be at least 1")
        for r in self.receivers:
            for i in (r.wants, *r.has):
                if not 1 <= i <= self.message_count:
                    raise ProblemSemanticError(f"receiver {r.label}: message {i} outside 1..{self.message_count}")
            if r.wants in r.has:
                raise ProblemSemanticError(f"receiver {r.label} wants message {r.wants} it already has")

    def with_settings(self, field: FieldSpec | None = None, block_length: int | None = None) -> IndexCodingProblem:
        return IndexCodingProblem(
            self.message_count,
            self.receivers,
            self.field if field is None else field,
            self.block_length if block_length is None else block_length,
        )

    def symbol_receivers(self) -> list[tuple[int, frozenset[int]]]:
        """(wanted symbol, side-information symbols), 0-based, for every sub-receiver."""
        n = self.block_length
        out = []
        for r in self.receivers:
            side = frozenset(h * n + t for h in (x - 1 for x in r.has) for t in range(n))
            for s in range(n):
                out.append(((r.wants - 1) * n + s, side))
        return out

    def symbol_labels(self) -> list[str]:
        n = self.block_length
        return [r.label if n == 1 else f"{r.label}[{s + 1}]" for r in self.receivers for s in range(n)]

    @property
    def symbol_count(self) -> int:
        return self.message_count * self.block_length


_KEYS = ("field", "block", "messages", "receiver")


def parse_problem(text: str) -> IndexCodingProblem:
    """Parse the line-oriented problem format.

    ``field`` and ``block`` default to 2 and 1; ``messages`` is required.
    A receiver line with several wanted messages becomes one receiver per
    wanted message, all sharing the same side information.
    """
    settings: dict[str, int] = {}
    raw: list[tuple[int, str, list[int], list[int]]] = []
    seen: set[str] = set()
    for lineno, line in enumerate(text.splitlines(), start=1):
        s = line.strip()
        if not s or s.startswith("#"):
            continue
        toks = s.split()
        key = toks[0]
        if key not in _KEYS:
            raise ProblemFormatError(f"unknown key {key!r}", lineno)
        if key != "receiver":
            if len(toks) != 2 or not re.fullmatch(r"[0-9]+", toks[1]):
                raise ProblemFormatError(f"expected '{key} <integer>'", lineno)
            if key in settings:
                raise ProblemFormatError(f"duplicate '{key}' line", lineno)
            settings[key] = int(toks[1])
            continue
        try:
            w = toks.index("wants")
            h = toks.index("has")
        except ValueError:
            raise ProblemFormatError("expected 'receiver <j> wants <i>... has <i>...'", lineno) from None
        if w != 2 or h < 4 or len(toks) < 4:
            raise ProblemFormatError("expected 'receiver <j> wants <i>... has <i>...'", lineno)
        nums = toks[1:2] + toks[3:h] + toks[h + 1 :]
        if not all(re.fullmatch(r"[0-9]+", t) for t in nums):
            raise ProblemFormatError("receiver fields must be integers", lineno)
        label = toks[1]
        if label in seen:
            raise ProblemSemanticError(f"line {lineno}: receiver {label} declared twice")
        seen.add(label)
        wants, has = [int(t) for t in toks[3:h]], [int(t) for t in toks[h + 1 :]]
        for i in wants:
            if i in has:
                raise ProblemSemanticError(f"line {lineno}: receiver {label} wants message {i} it already has")
        raw.append((lineno, label, wants, has))

    if "messages" not in settings:
        raise ProblemFormatError("missing 'messages' line")
    try:
        field = FieldSpec(settings.get("field", 2))
    except ValueError as e:
        raise ProblemSemanticError(str(e)) from None
    count = settings["messages"]
    receivers = []
    for lineno, label, wants, has in raw:
        if len(set(has)) != len(has):
            raise ProblemSemanticError(f"line {lineno}: repeated side-information index")
        for i in [*wants, *has]:
            if not 1 <= i <= count:
                raise ProblemSemanticError(f"line {lineno}: message {i} outside 1..{count}")
        if len(wants) == 1:
            receivers.append(Receiver(label, wants[0], frozenset(has)))
        else:
            receivers.extend(Receiver(f"{label}.{k}", i, frozenset(has)) for k, i in enumerate(wants, start=1))
    if not receivers:
        raise ProblemSemanticError("problem has no receivers")
    return IndexCodingProblem(count, tuple(receivers), field, settings.get("block", 1))


def render_problem(p: IndexCodingProblem) -> str:
    lines = [f"field {p.field.q}", f"block {p.block_length}", f"messages {p.message_count}"]
    for r in p.receivers:
        has = " ".join(str(i) for i in sorted(r.has))
        lines.append(f"receiver {r.label} wants {r.wants} has {has}".rstrip())
    return "\n".join(lines) + "\n"


def pattern_matrix(p: IndexCodingProblem) -> MaskedMatrix:
    """The scalar 0/1/X pattern, one row per message and one column per receiver."""
    rows = []
    for i in range(1, p.message_count + 1):
        rows.append(tuple(1 if r.wants == i else ERASED if i in r.has else 0 for r in p.receivers))
    return MaskedMatrix(p.field, tuple(rows), len(p.receivers))


def build_matrix(p: IndexCodingProblem) -> MaskedMatrix:
    m = pattern_matrix(p)
    return blow_up(m, p.block_length) if p.block_length > 1 else m


def lift(completed: GFMatrix, n: int) -> GFMatrix:
    """Block-diagonal lift: each entry c becomes c times the n x n identity."""
    a, b = completed.shape
    d = completed.data
    rows = tuple(tuple(d[i // n][j // n] if i % n == j % n else 0 for j in range(b * n)) for i in range(a * n))
    return GFMatrix(completed.field, rows, b * n)


@dataclass(frozen=True)
class Decoder:
    """Receiver output = transmission_coeffs . y - side_info_coeffs . x."""

    wants: int
    transmission_coeffs: Vector
    side_info_coeffs: tuple[tuple[int, int], ...]


@dataclass(frozen=True)
class IndexCode:
    field: FieldSpec
    block_length: int
    transmissions: tuple[Vector, ...]
    decoders: tuple[Decoder | None, ...]

    @property
    def length(self) -> int:
        return len(self.transmissions)

    @property
    def rate(self) -> Fraction:
        return Fraction(self.block_length, self.length)

    def encode(self, x: Sequence[int]) -> Vector:
        q = self.field.q
        return tuple(sum(c * v for c, v in zip(t, x)) % q for t in self.transmissions)


def _decoder_for(transmissions: Sequence[Vector], wants: int, side: frozenset[int], symbols: int, q: int) -> Decoder | None:
    # Find alpha with sum_t alpha_t T_t equal to e_wants outside the side information.
    l = len(transmissions)
    free_rows = [i for i in range(symbols) if i not in side]
    lhs = [[transmissions[t][i] for t in range(l)] for i in free_rows]
    rhs = [int(i == wants) for i in free_rows]
    alpha, _ = _solve_rows(lhs, rhs, l, q)
    if alpha is None:
        return None
    combo = [sum(alpha[t] * transmissions[t][i] for t in range(l)) % q for i in range(symbols)]
    side_terms = tuple((i, combo[i]) for i in sorted(side) if combo[i])
    return Decoder(wants, alpha, side_terms)


def code_from_transmissions(transmissions: Iterable[Sequence[int]], p: IndexCodingProblem) -> IndexCode:
    """Attach a decoder (where one exists) for every symbol-level receiver."""
    q = p.field.q
    ts = tuple(tuple(t) for t in transmissions)
    for t in ts:
        if len(t) != p.symbol_count:
            raise CodeValidityError(f"transmission has {len(t)} coefficients, expected {p.symbol_count}")
        for c in t:
            p.field.check(c)
    decs = tuple(_decoder_for(ts, w, side, p.symbol_count, q) for w, side in p.symbol_receivers())
    return IndexCode(p.field, p.block_length, ts, decs)


def extract_code(completed: GFMatrix, p: IndexCodingProblem) -> IndexCode:
    """Turn a completion into a code: independent columns are transmitted.

    Each receiver decodes with the coefficients expressing its own column in
    terms of the transmitted ones.
    """
    mask = build_matrix(p)
    if not mask.agrees_with(completed):
        raise CodeValidityError("completed matrix disagrees with the problem's pattern")
    _, pivots = rref(completed)
    q = p.field.q
    cols = [completed.column(j - 1) for j in pivots]
    l = len(cols)
    basis_rows = [[cols[t][i] for t in range(l)] for i in range(completed.n_rows)]
    decoders = []
    for j, (w, side) in enumerate(p.symbol_receivers()):
        alpha, _ = _solve_rows(basis_rows, completed.column(j), l, q)
        if alpha is None:
            raise AssertionError("column outside the span of the pivot columns")
        col = completed.column(j)
        side_terms = tuple((i, col[i]) for i in sorted(side) if col[i])
        decoders.append(Decoder(w, alpha, side_terms))
    return IndexCode(p.field, p.block_length, tuple(cols), tuple(decoders))


@dataclass(frozen=True)
class VerificationReport:
    valid: bool
    independent: bool
    failing_receivers: tuple[str, ...]
    trials: int
    decode_failures: int

    def as_dict(self) -> dict:
        return {
            "valid": self.valid,
            "independent": self.independent,
            "failing_receivers": list(self.failing_receivers),
            "trials": self.trials,
            "decode_failures": self.decode_failures,
        }


def verify_code(code: IndexCode, p: IndexCodingProblem, trials: int = 100, seed: int = 0) -> VerificationReport:
    """Check every receiver algebraically, then by random simulation.

    Failing receivers are reported by label; for n > 1 the label carries the
    symbol, e.g. ``3[2]``.
    """
    if code.field != p.field or code.block_length != p.block_length:
        raise CodeValidityError("code and problem disagree on field or block length")
    q = p.field.q
    S = p.symbol_count
    if any(len(t) != S for t in code.transmissions):
        raise CodeValidityError(f"transmissions must have {S} coefficients")
    recv = p.symbol_receivers()
    if len(code.decoders) != len(recv):
        raise CodeValidityError("one decoder per receiver is required")
    l = code.length
    labels = p.symbol_labels()
    failing = []
    for j, ((w, side), dec) in zip(labels, zip(recv, code.decoders)):
        if dec is None or dec.wants != w or len(dec.transmission_coeffs) != l:
            failing.append(j)
            continue
        combo = [sum(a * t[i] for a, t in zip(dec.transmission_coeffs, code.transmissions)) % q for i in range(S)]
        for i, c in dec.side_info_coeffs:
            if i not in side:
                break
            combo[i] = (combo[i] - c) % q
        else:
            if combo == [int(i == w) for i in range(S)]:
                continue
        failing.append(j)

    independent = rank_rows(code.transmissions, S, q) == l
    rng = random.Random(seed)
    failures = 0
    for _ in range(trials):
        x = [rng.randrange(q) for _ in range(S)]
        y = code.encode(x)
        for (w, _side), dec in zip(recv, code.decoders):
            if dec is None:
                failures += 1
                continue
            got = sum(a * v for a, v in zip(dec.transmission_coeffs, y)) - sum(c * x[i] for i, c in dec.side_info_coeffs)
            if got % q != x[w]:
                failures += 1
    return VerificationReport(not failing and failures == 0, independent, tuple(failing), trials, failures)


def format_transmission(t: Sequence[int], n: int = 1) -> str:
    """Render coefficients as a sum of message symbols, e.g. ``x1 + x2 + x5``."""
    terms = []
    for i, c in enumerate(t):
        if not c:
            continue
        name = f"x{i + 1}" if n == 1 else f"x{i // n + 1}[{i % n + 1}]"
        terms.append(name if c == 1 else f"{c}*{name}")
    return " + ".join(terms) if terms else "0"


def parse_code(text: str, field: FieldSpec) -> list[Vector]:
    """One transmission per line, coefficients separated by whitespace."""
    out = []
    width = None
    for lineno, line in enumerate(text.splitlines(), start=1):
        s = line.strip()
        if not s or s.startswith("#"):
            continue
        toks = s.split()
        if not all(re.fullmatch(r"[0-9]+", t) for t in toks):
            raise ProblemFormatError("coefficients must be non-negative integers", lineno)
        row = tuple(int(t) for t in toks)
        for c in row:
            if c >= field.q:
                raise ProblemFormatError(f"coefficient {c} is not in GF({field.q})", lineno)
        if width is not None and len(row) != width:
            raise ProblemFormatError(f"transmission has {len(row)} coefficients, expected {width}", lineno)
        width = len(row)
        out.append(row)
    return out
