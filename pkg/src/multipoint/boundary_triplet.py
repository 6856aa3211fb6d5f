"""Boundary-value maps, the Green-identity defect, and surjectivity witnesses.

Two pairs of boundary maps are implemented: the outer pair reads the values
u1(a1) and u3(a3) of the two half-line components, the inner pair reads
u2(a2) and u2(b2).  Both compress the boundary data to (sum)/(i sqrt 2) and
(difference)/sqrt 2.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ValidationError
from .model import (ProblemDefinition, TripleFunction, INNER, OUTER_LEFT,
                    OUTER_RIGHT, hdot, l2_inner_product, make_grid)
from .oracle import apply_expression

_SQRT2 = math.sqrt(2.0)


@dataclass(frozen=True)
class BoundaryValues:
    """Images under the boundary maps; pairs that do not apply are None."""

    gamma1: np.ndarray | None = None
    gamma2: np.ndarray | None = None
    Gamma1: np.ndarray | None = None
    Gamma2: np.ndarray | None = None


def _outer_endpoints(u: TripleFunction) -> tuple[np.ndarray, np.ndarray]:
    if u.u1 is None or u.u3 is None:
        raise ValidationError("outer boundary maps need the outer_left and outer_right parts")
    return u.u1.samples[-1], u.u3.samples[0]


def outer_gamma(u: TripleFunction) -> BoundaryValues:
    """Boundary pair of the two half-line components.

    gamma1 = (u1(a1) + u3(a3)) / (i sqrt 2), gamma2 = (u1(a1) - u3(a3)) / sqrt 2,
    with the endpoint values read from the exact endpoint grid nodes.
    """
    u1a, u3a = _outer_endpoints(u)
    return BoundaryValues(
        gamma1=(u1a + u3a) / (1j * _SQRT2),
        gamma2=(u1a - u3a) / _SQRT2)


def inner_gamma(u: TripleFunction) -> BoundaryValues:
    """Boundary pair of the finite-interval component, reading u2(a2) and u2(b2)."""
    if u.u2 is None:
        raise ValidationError("inner boundary maps need the inner part")
    ua = u.u2.samples[0]
    ub = u.u2.samples[-1]
    return BoundaryValues(
        Gamma1=(ua + ub) / (1j * _SQRT2),
        Gamma2=(ua - ub) / _SQRT2)


def construct_witness(f, g, problem: ProblemDefinition) -> TripleFunction:
    """A function whose outer boundary pair is exactly (f, g).

    u1(t) = e^{t - a1} (i f + g)/sqrt 2 on the truncated left half line,
    u2 = 0, and u3(t) = e^{a3 - t} (i f - g)/sqrt 2 on the right half line;
    the exponential profiles decay away from the boundary so the witness is
    square integrable.
    """
    f = np.asarray(f, dtype=complex)
    g = np.asarray(g, dtype=complex)
    if f.shape != (problem.dim,) or g.shape != (problem.dim,):
        raise ValidationError(
            f"witness data must be vectors of length {problem.dim}")
    c1 = (1j * f + g) / _SQRT2
    c3 = (1j * f - g) / _SQRT2
    g1 = make_grid(OUTER_LEFT, problem)
    g2 = make_grid(INNER, problem)
    g3 = make_grid(OUTER_RIGHT, problem)
    a1 = problem.intervals.a1
    a3 = problem.intervals.a3
    u1 = np.exp(g1.times() - a1)[:, None] * c1[None, :]
    u3 = np.exp(a3 - g3.times())[:, None] * c3[None, :]
    return TripleFunction(u1=g1.with_samples(u1), u2=g2, u3=g3.with_samples(u3))


def _restrict(u: TripleFunction, which: str) -> TripleFunction:
    if which == "outer":
        return TripleFunction(u1=u.u1, u3=u.u3)
    return TripleFunction(u2=u.u2)


def green_defect(u: TripleFunction, v: TripleFunction,
                 problem: ProblemDefinition, which: str) -> float:
    """Defect of the Green (Lagrange) identity for the selected boundary pair.

    Computes |<Lu, v> - <u, Lv> - B(u, v)| where L applies i d/dt + A_k on
    the selected intervals (derivatives by high-order finite differences) and
    B is the sesquilinear boundary form of the corresponding pair.  For the
    inner pair B(u, v) = (Gamma1 u, Gamma2 v) - (Gamma2 u, Gamma1 v).  The
    outer pair as defined above satisfies the identity with the reversed
    orientation, B(u, v) = (gamma2 u, gamma1 v) - (gamma1 u, gamma2 v); only
    that orientation makes both sides agree, as direct evaluation on the
    witness functions shows.
    """
    if which not in ("outer", "inner"):
        raise ValidationError(f"which must be 'outer' or 'inner', got {which!r}")
    ur = _restrict(u, which)
    vr = _restrict(v, which)

    def apply_l(w: TripleFunction) -> TripleFunction:
        if which == "outer":
            return TripleFunction(
                u1=apply_expression(problem, OUTER_LEFT, w.u1, 0.0, order=6),
                u3=apply_expression(problem, OUTER_RIGHT, w.u3, 0.0, order=6))
        return TripleFunction(
            u2=apply_expression(problem, INNER, w.u2, 0.0, order=6))

    lhs = l2_inner_product(apply_l(ur), vr) - l2_inner_product(ur, apply_l(vr))
    if which == "outer":
        bu = outer_gamma(u)
        bv = outer_gamma(v)
        boundary = hdot(bu.gamma2, bv.gamma1) - hdot(bu.gamma1, bv.gamma2)
    else:
        bu = inner_gamma(u)
        bv = inner_gamma(v)
        boundary = hdot(bu.Gamma1, bv.Gamma2) - hdot(bu.Gamma2, bv.Gamma1)
    return abs(lhs - boundary)


def outer_coupling_residuals(u: TripleFunction, problem: ProblemDefinition
                             ) -> tuple[float, float]:
    """Residuals of the boundary coupling in endpoint and boundary-map form.

    Returns (||u3(a3) - W1 u1(a1)||, ||(I - W1) i gamma1 - (I + W1) gamma2||);
    both vanish together, which checks that the coupling is expressible
    through the boundary pair alone.
    """
    u1a, u3a = _outer_endpoints(u)
    direct = float(np.sqrt(np.sum(np.abs(u3a - problem.W1 @ u1a) ** 2)))
    bv = outer_gamma(u)
    eye = np.eye(problem.dim, dtype=complex)
    through_maps = (eye - problem.W1) @ (1j * bv.gamma1) - (eye + problem.W1) @ bv.gamma2
    mapped = float(np.sqrt(np.sum(np.abs(through_maps) ** 2)))
    return direct, mapped
