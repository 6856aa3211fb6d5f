"""Plain-dict operations shared by the CLI and the HTTP service.

Every function takes JSON-shaped input, runs the corresponding library
operation, and returns a JSON-shaped dict, so the two front ends stay thin
and cannot drift apart.
"""

from __future__ import annotations

import numpy as np

from . import reporting
from .boundary_triplet import construct_witness, green_defect, outer_gamma
from .errors import ValidationError
from .model import (ProblemDefinition, TripleFunction, grid_from_doc,
                    problem_from_dict, problem_to_dict, sampled, INNER,
                    OUTER_LEFT, OUTER_RIGHT)
from .oracle import SweepConfig, compare_spectra, det_sweep_eigenvalues
from .pde_example import ExampleSpec, build_example_problem
from .resolvent import apply_resolvent, resolvent_norm_probe
from .spectrum import ProbeResult, assemble_report


def _probes(problem: ProblemDefinition, lambda_is) -> list[ProbeResult]:
    e1 = np.zeros(problem.dim, dtype=complex)
    e1[0] = 1.0
    out = []
    for lambda_i in lambda_is:
        ratio = resolvent_norm_probe(problem, float(lambda_i), 0.0, e1)
        out.append(ProbeResult(lambda_i=float(lambda_i), ratio=ratio))
    return out


def spectrum_report(problem_doc: dict, window, norm_probe=()) -> dict:
    problem = problem_from_dict(problem_doc)
    report = assemble_report(problem, window, probes=_probes(problem, norm_probe))
    return reporting.report_to_dict(report)


def resolvent_solution(problem_doc: dict, lam: complex, f_docs: list[dict]) -> dict:
    problem = problem_from_dict(problem_doc)
    parts: dict[str, object] = {OUTER_LEFT: None, INNER: None, OUTER_RIGHT: None}
    for doc in f_docs:
        grid = grid_from_doc(doc, problem)
        if parts[grid.interval_id] is not None:
            raise ValidationError(f"duplicate sample file for interval {grid.interval_id!r}")
        parts[grid.interval_id] = grid
    if all(v is None for v in parts.values()):
        raise ValidationError("resolvent needs at least one function sample document")
    f = TripleFunction(u1=parts[OUTER_LEFT], u2=parts[INNER], u3=parts[OUTER_RIGHT])
    sol = apply_resolvent(problem, lam, f)
    return reporting.solution_to_dict(sol)


def verify_boundary_triplets(problem_doc: dict, pairs: int = 100,
                             seed: int = 20260810) -> dict:
    """Witness round trips plus Green-identity defects on random test pairs."""
    problem = problem_from_dict(problem_doc)
    rng = np.random.default_rng(seed)
    d = problem.dim

    def unit_vec():
        # Defects are 2-homogeneous in the data, so thresholds assume unit scale.
        v = rng.standard_normal(d) + 1j * rng.standard_normal(d)
        return v / np.sqrt(np.sum(np.abs(v) ** 2))

    round_trip_max = 0.0
    witness_defect_max = 0.0
    for _ in range(int(pairs)):
        f = rng.standard_normal(d) + 1j * rng.standard_normal(d)
        g = rng.standard_normal(d) + 1j * rng.standard_normal(d)
        w = construct_witness(f, g, problem)
        bv = outer_gamma(w)
        round_trip_max = max(round_trip_max,
                             float(np.max(np.abs(bv.gamma1 - f))),
                             float(np.max(np.abs(bv.gamma2 - g))))
    for _ in range(5):
        wu = construct_witness(unit_vec(), unit_vec(), problem)
        wv = construct_witness(unit_vec(), unit_vec(), problem)
        witness_defect_max = max(witness_defect_max,
                                 green_defect(wu, wv, problem, "outer"))

    green_outer_max = 0.0
    green_inner_max = 0.0
    iv = problem.intervals
    mid = 0.5 * (iv.a2 + iv.b2)
    width = max(iv.delta, 1.0)

    def outer_pair():
        rates = 1.0 + rng.uniform(0.0, 0.25, size=2)
        waves = rng.uniform(-1.0, 1.0, size=2)
        c1 = unit_vec()
        c3 = unit_vec()
        return TripleFunction(
            u1=sampled(problem, OUTER_LEFT,
                       lambda t: np.exp((rates[0] + 1j * waves[0]) * (t - iv.a1)) * c1),
            u3=sampled(problem, OUTER_RIGHT,
                       lambda t: np.exp(-(rates[1] - 1j * waves[1]) * (t - iv.a3)) * c3))

    def inner_part():
        wave = float(rng.uniform(-1.0, 1.0))
        c2 = unit_vec()
        return TripleFunction(
            u2=sampled(problem, INNER,
                       lambda t: np.exp(-((t - mid) / width) ** 2 + 1j * wave * t) * c2))

    for _ in range(5):
        green_outer_max = max(green_outer_max,
                              green_defect(outer_pair(), outer_pair(), problem, "outer"))
        green_inner_max = max(green_inner_max,
                              green_defect(inner_part(), inner_part(), problem, "inner"))

    thresholds = {"round_trip": 1e-12, "green_outer": 1e-5, "green_inner": 1e-6}
    passed = (round_trip_max <= thresholds["round_trip"]
              and witness_defect_max <= thresholds["green_outer"]
              and green_outer_max <= thresholds["green_outer"]
              and green_inner_max <= thresholds["green_inner"])
    return {
        "pairs": int(pairs),
        "seed": int(seed),
        "round_trip_max": round_trip_max,
        "green_outer_witness_max": witness_defect_max,
        "green_outer_max": green_outer_max,
        "green_inner_max": green_inner_max,
        "thresholds": thresholds,
        "pass": passed,
    }


def oracle_compare(problem_doc: dict, window, tol: float | None = None,
                   samples: int = 4001, rk4_steps: int = 2048,
                   refine_tol: float = 1e-9) -> dict:
    problem = problem_from_dict(problem_doc)
    if tol is None:
        tol = problem.tolerances.quadrature_rtol
    cfg = SweepConfig(window=(float(window[0]), float(window[1])),
                      samples=int(samples), rk4_steps=int(rk4_steps),
                      refine_tol=float(refine_tol))
    sweep = det_sweep_eigenvalues(problem, cfg)
    report = assemble_report(problem, cfg.window)
    match = compare_spectra(report, sweep.roots, float(tol))
    return reporting.match_to_dict(match, sweep, cfg.window, float(tol))


def example_pde_report(modes: int, psi: float, phi: float, window,
                       norm_probe=()) -> dict:
    spec = ExampleSpec(modes=int(modes), psi=float(psi), phi=float(phi))
    problem = build_example_problem(spec)
    report = assemble_report(problem, window, probes=_probes(problem, norm_probe))
    out = reporting.report_to_dict(report)
    out["problem"] = problem_to_dict(problem)
    return out
