"""Deterministic serialization of reports, solutions, and comparisons.

Outputs must be byte-identical across runs on the same inputs: dictionaries
are built in a fixed field order and floats are printed with 17 significant
digits, enough to round-trip IEEE doubles exactly.
"""

from __future__ import annotations

import json
import math

from .model import grid_to_doc, vector_to_doc
from .oracle import MatchReport, SweepResult
from .resolvent import ResolventSolution
from .spectrum import SpectrumEntry, SpectrumReport


def format_float(x: float) -> str:
    if not math.isfinite(x):
        raise ValueError(f"cannot serialize non-finite float {x!r}")
    return format(float(x), ".17g")


def json_dumps(obj) -> str:
    """JSON with deterministic float formatting; ends with a newline."""
    parts: list[str] = []
    _write_json(obj, parts)
    return "".join(parts) + "\n"


def _write_json(obj, parts: list[str]) -> None:
    if obj is None:
        parts.append("null")
    elif obj is True:
        parts.append("true")
    elif obj is False:
        parts.append("false")
    elif isinstance(obj, int):
        parts.append(str(obj))
    elif isinstance(obj, float):
        parts.append(format_float(obj))
    elif isinstance(obj, str):
        parts.append(json.dumps(obj))
    elif isinstance(obj, dict):
        parts.append("{")
        for i, (key, value) in enumerate(obj.items()):
            if i:
                parts.append(", ")
            parts.append(json.dumps(str(key)))
            parts.append(": ")
            _write_json(value, parts)
        parts.append("}")
    elif isinstance(obj, (list, tuple)):
        parts.append("[")
        for i, value in enumerate(obj):
            if i:
                parts.append(", ")
            _write_json(value, parts)
        parts.append("]")
    else:
        raise TypeError(f"cannot serialize object of type {type(obj).__name__}")


def entry_to_dict(entry: SpectrumEntry) -> dict:
    return {
        "lambda": entry.lam,
        "mu": [entry.mu.real, entry.mu.imag],
        "theta": entry.theta,
        "branch_n": entry.branch_n,
        "mode_j": entry.mode_j,
        "eigvec": vector_to_doc(entry.eigvec),
        "ode_residual": entry.ode_residual,
        "bc_residual": entry.bc_residual,
    }


def report_to_dict(report: SpectrumReport) -> dict:
    return {
        "window": [report.window[0], report.window[1]],
        "entries": [entry_to_dict(e) for e in report.entries],
        "classification": report.classification,
        "probes": [{"lambda_i": p.lambda_i, "ratio": p.ratio} for p in report.probes],
    }


def report_to_csv(report: SpectrumReport) -> str:
    lines = ["lambda,theta,branch_n,mode_j,ode_residual,bc_residual"]
    for e in report.entries:
        lines.append(",".join([
            format_float(e.lam), format_float(e.theta), str(e.branch_n),
            str(e.mode_j), format_float(e.ode_residual), format_float(e.bc_residual),
        ]))
    return "\n".join(lines) + "\n"


def solution_to_dict(sol: ResolventSolution) -> dict:
    def vec_or_none(v):
        return vector_to_doc(v) if v is not None else None

    def part_or_none(g):
        return grid_to_doc(g) if g is not None else None

    return {
        "lambda": [sol.lam.real, sol.lam.imag],
        "u1": part_or_none(sol.u.u1),
        "u2": part_or_none(sol.u.u2),
        "u3": part_or_none(sol.u.u3),
        "f1star": vec_or_none(sol.f1star),
        "f2star": vec_or_none(sol.f2star),
        "f3star": vec_or_none(sol.f3star),
        "residual_ode": sol.residual_ode,
        "residual_bc": sol.residual_bc,
    }


def match_to_dict(match: MatchReport, sweep: SweepResult, window, tol: float) -> dict:
    return {
        "window": [window[0], window[1]],
        "tol": tol,
        "matched": len(match.pairs),
        "max_matched_distance": match.max_matched_distance,
        "unmatched_main": list(match.unmatched_main),
        "unmatched_oracle": list(match.unmatched_oracle),
        "oracle_roots": list(sweep.roots),
        "warnings": list(sweep.warnings),
        "pass": match.all_matched,
    }
