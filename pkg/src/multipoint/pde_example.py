"""Mode-truncated problem for the sign-flipping Schrodinger-type model PDE.

i u_t + sgn(t) u_xx = f for |t| > 1 and i u_t - u_xx = f for |t| < 1/2 on
x in [0, 1] with reflecting (Neumann) walls decouples over the Neumann modes
cos(n pi x) of -d^2/dx^2, whose eigenvalues are (n pi)^2.  Keeping the first
``modes`` modes turns the PDE into that many decoupled scalar problems, which
stack into one diagonal problem: A1 = A2 = diag((n pi)^2), A3 = -diag((n pi)^2),
with phase couplings W2 = e^{i psi} I across the inner interval and
W1 = e^{i phi} I between the half lines.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ValidationError
from .model import IntervalConfig, ProblemDefinition, make_problem


@dataclass(frozen=True)
class ExampleSpec:
    """Mode count and coupling phases of the generated example problem."""

    modes: int
    psi: float = 0.0
    phi: float = 0.0

    def __post_init__(self):
        if not (isinstance(self.modes, int) and self.modes >= 1):
            raise ValidationError(f"modes must be a positive integer, got {self.modes!r}")
        for name, value in (("psi", self.psi), ("phi", self.phi)):
            if not (0.0 <= value < 2.0 * math.pi):
                raise ValidationError(f"{name} must lie in [0, 2*pi), got {value!r}")


def build_example_problem(spec: ExampleSpec, T: float = 40.0,
                          n_outer: int = 801, n_inner: int = 801) -> ProblemDefinition:
    d = spec.modes
    laplace = np.array([(n * math.pi) ** 2 for n in range(d)])
    diag = np.diag(laplace).astype(complex)
    eye = np.eye(d, dtype=complex)
    return make_problem(
        dim=d,
        intervals=IntervalConfig(a1=-1.0, a2=-0.5, b2=0.5, a3=1.0,
                                 T=T, n_outer=n_outer, n_inner=n_inner),
        A1=diag, A2=diag, A3=-diag,
        W1=np.exp(1j * spec.phi) * eye,
        W2=np.exp(1j * spec.psi) * eye)
