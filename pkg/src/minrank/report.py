"""Report dictionaries for the CLI and their text rendering.

Text output is rendered from the same dictionary as the JSON output, so both
modes always carry identical values. Timing lives only under keys listed in
``TIMING_KEYS``.
"""

from __future__ import annotations

import json
import math
from typing import Any

from .indexcoding import IndexCode, IndexCodingProblem, VerificationReport, format_transmission
from .masked import ERASED, MaskedMatrix, SubmatrixIndex
from .oracle import OracleResult
from .pipeline import SolveOutcome
from .tree import CompletionResult

SCHEMA_VERSION = 1
TIMING_KEYS = frozenset({"wall_ms", "avg_runtime_ms"})


def threshold_label(t: float) -> str:
    return "inf" if t == math.inf else str(int(t))


def _masked_rows(m: MaskedMatrix) -> list[str]:
    return [" ".join("X" if x is ERASED else str(x) for x in row) for row in m.data]


def _sub(sub: SubmatrixIndex | None) -> dict | None:
    if sub is None:
        return None
    return {"rows": list(sub.rows), "cols": list(sub.cols), "rank": sub.rank}


def _stats(result: CompletionResult, seed: int) -> dict:
    d = result.stats.as_dict()
    d["wall_ms"] = round(d["wall_ms"], 3)
    d["seed"] = seed
    return d


def completion_report(source: str, m: MaskedMatrix, result: CompletionResult, seed: int, threshold: float) -> dict:
    return {
        "schema": SCHEMA_VERSION,
        "command": "complete",
        "input": source,
        "field": m.q,
        "shape": [m.n_rows, m.n_cols],
        "erasures": m.erasure_count,
        "prune_threshold": threshold_label(threshold),
        "initial_submatrix": _sub(result.initial_sub),
        "achieved_rank": result.achieved_rank,
        "completed": result.completed.tolist(),
        "stats": _stats(result, seed),
    }


def _code_fields(code: IndexCode, p: IndexCodingProblem) -> dict:
    n = p.block_length
    labels = p.symbol_labels()
    decoders = []
    for label, dec in zip(labels, code.decoders):
        if dec is None:
            decoders.append({"receiver": label, "decodable": False})
            continue
        decoders.append(
            {
                "receiver": label,
                "wants": dec.wants + 1,
                "transmission_coeffs": list(dec.transmission_coeffs),
                "side_info": [[i + 1, c] for i, c in dec.side_info_coeffs],
            }
        )
    return {
        "transmissions": [
            {"coefficients": list(t), "expression": format_transmission(t, n)} for t in code.transmissions
        ],
        "decoders": decoders,
    }


def verification_fields(v: VerificationReport) -> dict:
    return v.as_dict()


def solve_report(source: str, out: SolveOutcome, seed: int, threshold: float) -> dict:
    p = out.problem
    r = out.result
    return {
        "schema": SCHEMA_VERSION,
        "command": "solve",
        "input": source,
        "field": p.field.q,
        "block": p.block_length,
        "messages": p.message_count,
        "receivers": len(p.receivers),
        "prune_threshold": threshold_label(threshold),
        "matrix": _masked_rows(out.matrix),
        "initial_submatrix": _sub(r.initial_sub),
        "achieved_rank": r.achieved_rank,
        "length": out.code.length,
        "rate": str(out.rate),
        "lift_rank": out.lift_rank,
        "result_source": r.source,
        **_code_fields(out.code, p),
        "completed": r.completed.tolist(),
        "verification": verification_fields(out.verification),
        "stats": _stats(r, seed),
    }


def oracle_report(source: str, m: MaskedMatrix, res: OracleResult) -> dict:
    return {
        "schema": SCHEMA_VERSION,
        "command": "oracle",
        "input": source,
        "field": m.q,
        "shape": [m.n_rows, m.n_cols],
        "erasures": m.erasure_count,
        "min_rank": res.min_rank,
        "optimum_count": res.optimum_count,
        "enumerated": res.enumerated,
        "witness": res.witness.tolist(),
    }


def verify_report(problem_src: str, code_src: str, code: IndexCode, p: IndexCodingProblem, v: VerificationReport) -> dict:
    return {
        "schema": SCHEMA_VERSION,
        "command": "verify",
        "problem": problem_src,
        "code": code_src,
        "field": p.field.q,
        "block": p.block_length,
        "length": code.length,
        **_code_fields(code, p),
        "verification": verification_fields(v),
    }


def strip_timing(obj: Any) -> Any:
    """Copy of a report without timing fields (for reproducibility checks)."""
    if isinstance(obj, dict):
        return {k: strip_timing(v) for k, v in obj.items() if k not in TIMING_KEYS}
    if isinstance(obj, list):
        return [strip_timing(v) for v in obj]
    return obj


def to_json(report: dict) -> str:
    return json.dumps(report, indent=2, sort_keys=True) + "\n"


def _scalar(v: Any) -> str:
    if v is None:
        return "-"
    if isinstance(v, bool):
        return "yes" if v else "no"
    if isinstance(v, list):
        if not v:
            return "(none)"
        return " ".join(f"[{_scalar(x)}]" if isinstance(x, list) else _scalar(x) for x in v)
    if isinstance(v, dict):
        return ", ".join(f"{k}=[{_scalar(x)}]" if isinstance(x, list) else f"{k}={_scalar(x)}" for k, x in v.items())
    return str(v)


def to_text(report: dict, indent: int = 0) -> str:
    pad = "  " * indent
    lines = []
    for k, v in report.items():
        if isinstance(v, dict) and any(isinstance(x, (list, dict)) for x in v.values()):
            lines.append(f"{pad}{k}:")
            lines.append(to_text(v, indent + 1).rstrip("\n"))
        elif isinstance(v, list) and v and (k == "matrix" or all(isinstance(x, (list, dict)) for x in v)):
            lines.append(f"{pad}{k}:")
            for x in v:
                lines.append(f"{pad}  {_scalar(x)}")
        else:
            lines.append(f"{pad}{k}: {_scalar(v)}")
    return "\n".join(lines) + "\n"


def benchmark_report(rows, summary: list[dict], size: int, density: float, seeds, loose_ok: bool | None) -> dict:
    return {
        "schema": SCHEMA_VERSION,
        "command": "benchmark",
        "size": size,
        "density": density,
        "seeds": list(seeds),
        "summary": summary,
        "instances": [
            {
                "instance": r.instance,
                "seed": r.seed,
                "threshold": threshold_label(r.threshold),
                "initial_rank": r.initial_rank,
                "achieved_rank": r.achieved_rank,
                "sound": r.sound,
                "branches": r.branches,
                "pruned": r.pruned,
                "wall_ms": round(r.wall_ms, 3),
            }
            for r in rows
        ],
        "unpruned_never_worse": loose_ok,
    }


def benchmark_table(report: dict) -> str:
    """Tabular summary: one line per pruning threshold."""
    head = f"{'Size':<8}{'Erasure':<9}{'Initial rank':<24}{'Threshold':<11}{'Tests':<7}{'Achieved rank':<22}{'Avg. runtime (ms)':>18}"
    lines = [head, "-" * len(head)]
    for s in report["summary"]:
        init = ", ".join(f"{v} times {k}" for k, v in s["initial_rank"].items())
        ach = ", ".join(f"{v} times {k}" for k, v in s["achieved_rank"].items())
        lines.append(
            f"{s['size']:<8}{s['erasure']:<9}{init:<24}{s['threshold']:<11}{s['tests']:<7}{ach:<22}{s['avg_runtime_ms']:>18.3f}"
        )
    return "\n".join(lines) + "\n"
