"""FastAPI service wrapping the operation layer.

Validation failures (bad documents, precondition violations) map to 400;
numerical failures (non-convergence, singular solves, lambda in the point
spectrum) map to 422.
"""

from __future__ import annotations

from fastapi import FastAPI, HTTPException

from .. import api
from ..errors import MultipointError, ValidationError
from .schemas import (ExamplePdeRequest, OracleCompareRequest,
                      ResolventRequest, SpectrumRequest, VerifyRequest)

app = FastAPI(
    title="multipoint operator service",
    description=("Point spectra, resolvents, and verification suites for "
                 "selfadjoint boundary couplings of i d/dt + A on three intervals."),
    version="0.1.0",
)


def _guard(fn, *args, **kwargs):
    try:
        return fn(*args, **kwargs)
    except ValidationError as exc:
        raise HTTPException(status_code=400, detail=str(exc)) from exc
    except MultipointError as exc:
        raise HTTPException(status_code=422, detail=str(exc)) from exc


@app.get("/health")
def health() -> dict:
    return {"status": "ok"}


@app.post("/spectrum")
def spectrum(req: SpectrumRequest) -> dict:
    return _guard(api.spectrum_report, req.problem.as_document(),
                  tuple(req.window), req.norm_probe)


@app.post("/resolvent")
def resolvent(req: ResolventRequest) -> dict:
    lam = complex(req.lam[0], req.lam[1])
    f_docs = [f.model_dump() for f in req.f]
    return _guard(api.resolvent_solution, req.problem.as_document(), lam, f_docs)


@app.post("/verify")
def verify(req: VerifyRequest) -> dict:
    return _guard(api.verify_boundary_triplets, req.problem.as_document(),
                  pairs=req.pairs, seed=req.seed)


@app.post("/oracle-compare")
def oracle_compare(req: OracleCompareRequest) -> dict:
    return _guard(api.oracle_compare, req.problem.as_document(),
                  tuple(req.window), tol=req.tol, samples=req.samples,
                  rk4_steps=req.rk4_steps, refine_tol=req.refine_tol)


@app.post("/example-pde")
def example_pde(req: ExamplePdeRequest) -> dict:
    return _guard(api.example_pde_report, req.modes, req.psi, req.phi,
                  tuple(req.window), req.norm_probe)
