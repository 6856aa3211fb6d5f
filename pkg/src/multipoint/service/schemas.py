"""Pydantic request models for the HTTP service.

These validate the shape of incoming documents; the deep numerical
invariants (Hermitian coefficients, unitary couplings, grid consistency)
are enforced by the core loaders the handlers call.  Complex numbers are
two-element [re, im] arrays throughout.
"""

from __future__ import annotations

from typing import Literal, Optional

from pydantic import BaseModel, ConfigDict, Field

ComplexPair = list[float]
ComplexMatrixDoc = list[list[ComplexPair]]


class ToleranceDoc(BaseModel):
    model_config = ConfigDict(extra="forbid")

    eig_tol: Optional[float] = None
    unitary_tol: Optional[float] = None
    residual_tol: Optional[float] = None
    quadrature_rtol: Optional[float] = None

    def as_overrides(self) -> dict:
        return {k: v for k, v in self.model_dump().items() if v is not None}


class ProblemDoc(BaseModel):
    model_config = ConfigDict(extra="forbid")

    dim: int
    a1: float
    a2: float
    b2: float
    a3: float
    T: float
    n_outer: int
    n_inner: int
    A1: ComplexMatrixDoc
    A2: ComplexMatrixDoc
    A3: ComplexMatrixDoc
    W1: ComplexMatrixDoc
    W2: ComplexMatrixDoc
    tolerances: Optional[ToleranceDoc] = None

    def as_document(self) -> dict:
        doc = self.model_dump(exclude_none=True)
        if self.tolerances is not None:
            doc["tolerances"] = self.tolerances.as_overrides()
        return doc


class FunctionDoc(BaseModel):
    model_config = ConfigDict(extra="forbid")

    interval: Literal["outer_left", "inner", "outer_right"]
    samples: list[list[ComplexPair]]


class SpectrumRequest(BaseModel):
    model_config = ConfigDict(extra="forbid")

    problem: ProblemDoc
    window: list[float] = Field(min_length=2, max_length=2)
    norm_probe: list[float] = Field(default_factory=list)


class ResolventRequest(BaseModel):
    model_config = ConfigDict(extra="forbid")

    problem: ProblemDoc
    lam: list[float] = Field(min_length=2, max_length=2,
                             description="lambda as [re, im]")
    f: list[FunctionDoc]


class VerifyRequest(BaseModel):
    model_config = ConfigDict(extra="forbid")

    problem: ProblemDoc
    pairs: int = 100
    seed: int = 20260810


class OracleCompareRequest(BaseModel):
    model_config = ConfigDict(extra="forbid")

    problem: ProblemDoc
    window: list[float] = Field(min_length=2, max_length=2)
    tol: Optional[float] = None
    samples: int = 4001
    rk4_steps: int = 2048
    refine_tol: float = 1e-9


class ExamplePdeRequest(BaseModel):
    model_config = ConfigDict(extra="forbid")

    modes: int
    psi: float = 0.0
    phi: float = 0.0
    window: list[float] = Field(min_length=2, max_length=2)
    norm_probe: list[float] = Field(default_factory=list)
