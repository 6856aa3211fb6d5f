"""Resolvent application for both components and the norm lower-bound probe.

For Im lambda != 0 the coupled operator has a bounded inverse given by
explicit exponential-kernel integrals.  Off the real axis the integration
direction is chosen so every kernel decays: integrals run from +infinity
down for Im lambda > 0 and from -infinity up for Im lambda < 0, and the
boundary coupling u3(a3) = W1 u1(a1) fixes the remaining free vector.

Convolution integrals are evaluated in the eigenbasis of the coefficient:
the data is transformed once by V*, each of the d scalar channels does a
cumulative pass with a stable one-step exponential recurrence, and the
result is transformed back, O(n d^2) total.  Within one step the integrand
(kernel times data) is sampled at four nodes and integrated as the exact
integral of its cubic interpolant, which keeps node-wise fourth order and,
because the kernel phase is sampled rather than expanded, cancels the probe
phases to rounding.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import _stencils
from .errors import (ConvergenceError, PointSpectrumError,
                     SingularMatrixError, ValidationError)
from .linalg import HermEig, herm_eig, solve_linear
from .model import (GridFunction, ProblemDefinition, TripleFunction, INNER,
                    OUTER_LEFT, OUTER_RIGHT, grid_l2_norm, make_grid,
                    require_problem_grid, with_truncation)
from .oracle import apply_expression, max_norm


@dataclass(frozen=True)
class ResolventSolution:
    """Solution triple with the boundary vectors and residuals attached."""

    u: TripleFunction
    lam: complex
    f1star: np.ndarray | None = None
    f2star: np.ndarray | None = None
    f3star: np.ndarray | None = None
    residual_ode: float = 0.0
    residual_bc: float = 0.0


def _channel_coords(eig: HermEig, samples: np.ndarray) -> np.ndarray:
    return samples @ eig.vectors.conj()


def _from_channels(eig: HermEig, coords: np.ndarray) -> np.ndarray:
    return coords @ eig.vectors.T


def _propagate(eig: HermEig, lam: complex, tau: np.ndarray,
               vec: np.ndarray) -> np.ndarray:
    """Samples of e^{i (A - lambda) tau_k} vec, rows indexed by tau."""
    phases = np.exp(1j * np.outer(tau, eig.eigenvalues - lam))
    coeffs = eig.vectors.conj().T @ vec
    return (phases * coeffs[None, :]) @ eig.vectors.T


_STEP_RULES = (
    (_stencils.QUAD4_OFFSETS_FIRST, _stencils.QUAD4_FIRST),
    (_stencils.QUAD4_OFFSETS_INTERIOR, _stencils.QUAD4_INTERIOR),
    (_stencils.QUAD4_OFFSETS_LAST, _stencils.QUAD4_LAST),
)


def _step_integrals(g: np.ndarray, kernel_at_offset, h: float) -> np.ndarray:
    """J[k] ~= int_0^h kernel(sigma) g(t_k + sigma) d sigma for k = 0..n-2.

    ``kernel_at_offset(delta)`` returns the per-channel kernel factor at
    sigma = delta*h; the product kernel*g is interpolated cubically through
    four stencil nodes and the interpolant integrated exactly.
    """
    n, d = g.shape
    j = np.zeros((n - 1, d), dtype=complex)
    first, interior, last = _STEP_RULES
    # interior steps k = 1 .. n-3 in one vectorized pass per stencil node
    offs, weights = interior
    for delta, w in zip(offs, weights):
        j[1:n - 2] += (h * w) * kernel_at_offset(delta)[None, :] * g[1 + delta:n - 2 + delta]
    offs, weights = first
    for delta, w in zip(offs, weights):
        j[0] += (h * w) * kernel_at_offset(delta) * g[delta]
    offs, weights = last
    for delta, w in zip(offs, weights):
        j[n - 2] += (h * w) * kernel_at_offset(delta) * g[n - 2 + delta]
    return j


def _convolve_forward(eig: HermEig, lam: complex, grid: GridFunction) -> np.ndarray:
    """C_k = int_{t0}^{t_k} e^{i (A - lambda)(t_k - s)} f(s) ds on the grid of f."""
    h = grid.h
    omega = eig.eigenvalues - lam
    g = _channel_coords(eig, grid.samples)
    step = np.exp(1j * omega * h)

    def kernel(delta: int) -> np.ndarray:
        # forward kernel e^{i omega (h - sigma)} at sigma = delta * h
        return np.exp(1j * omega * (h - delta * h))

    j = _step_integrals(g, kernel, h)
    c = np.zeros_like(g)
    for k in range(grid.n - 1):
        c[k + 1] = step * c[k] + j[k]
    return _from_channels(eig, c)


def _convolve_backward(eig: HermEig, lam: complex, grid: GridFunction) -> np.ndarray:
    """D_k = int_{t_k}^{t1} e^{i (A - lambda)(t_k - s)} f(s) ds on the grid of f."""
    h = grid.h
    omega = eig.eigenvalues - lam
    g = _channel_coords(eig, grid.samples)
    step = np.exp(-1j * omega * h)

    def kernel(delta: int) -> np.ndarray:
        # backward kernel e^{-i omega sigma} at sigma = delta * h
        return np.exp(-1j * omega * (delta * h))

    j = _step_integrals(g, kernel, h)
    d_ = np.zeros_like(g)
    for k in range(grid.n - 2, -1, -1):
        d_[k] = j[k] + step * d_[k + 1]
    return _from_channels(eig, d_)


def _vec_norm(v: np.ndarray) -> float:
    return float(np.sqrt(np.sum(np.abs(v) ** 2)))


def _ode_residual(problem: ProblemDefinition, interval_id: str,
                  u: GridFunction, lam: complex, f: GridFunction) -> float:
    residual = apply_expression(problem, interval_id, u, lam, order=6)
    return max_norm(residual.with_samples(residual.samples - f.samples))


def resolvent_outer(problem: ProblemDefinition, lam: complex,
                    f1: GridFunction, f3: GridFunction) -> ResolventSolution:
    """Solve (i d/dt + A_k - lambda) u_k = f_k on the half lines with the coupling.

    Im lambda > 0: u3 is the decaying integral from +infinity, the coupling
    then determines f1star = W1* u3(a3) and u1 adds the half-line convolution
    of f1.  Im lambda < 0 runs the mirror construction from -infinity and
    determines f3star = W1 u1(a1).  The coupling holds by construction; the
    reported residuals measure quadrature and differencing error only.
    """
    lam = complex(lam)
    if lam.imag == 0.0:
        raise ValidationError(
            "resolvent_outer needs Im lambda != 0: the outer component has no "
            "bounded resolvent on the real axis")
    require_problem_grid(f1, problem)
    require_problem_grid(f3, problem)
    if f1.interval_id != OUTER_LEFT or f3.interval_id != OUTER_RIGHT:
        raise ValidationError("f1 must live on outer_left and f3 on outer_right")
    eig1 = herm_eig(problem.A1)
    eig3 = herm_eig(problem.A3)
    grid1 = make_grid(OUTER_LEFT, problem)
    grid3 = make_grid(OUTER_RIGHT, problem)
    a1 = problem.intervals.a1
    a3 = problem.intervals.a3
    f1star = None
    f3star = None
    if lam.imag > 0:
        u3_samples = 1j * _convolve_backward(eig3, lam, f3)
        f1star = problem.W1.conj().T @ u3_samples[0]
        hom1 = _propagate(eig1, lam, grid1.times() - a1, f1star)
        u1_samples = hom1 + 1j * _convolve_backward(eig1, lam, f1)
    else:
        u1_samples = -1j * _convolve_forward(eig1, lam, f1)
        f3star = problem.W1 @ u1_samples[-1]
        hom3 = _propagate(eig3, lam, grid3.times() - a3, f3star)
        u3_samples = hom3 - 1j * _convolve_forward(eig3, lam, f3)
    u1 = grid1.with_samples(u1_samples)
    u3 = grid3.with_samples(u3_samples)
    residual_ode = max(_ode_residual(problem, OUTER_LEFT, u1, lam, f1),
                       _ode_residual(problem, OUTER_RIGHT, u3, lam, f3))
    residual_bc = _vec_norm(u3_samples[0] - problem.W1 @ u1_samples[-1])
    return ResolventSolution(
        u=TripleFunction(u1=u1, u3=u3), lam=lam,
        f1star=f1star, f3star=f3star,
        residual_ode=residual_ode, residual_bc=residual_bc)


def resolvent_inner(problem: ProblemDefinition, lam: complex,
                    f2: GridFunction) -> ResolventSolution:
    """Solve (i d/dt + A2 - lambda) u2 = f2 on [a2, b2] with u2(b2) = W2 u2(a2).

    Variation of constants: the particular solution is
    u_p(t) = -i int_{a2}^t e^{i (A2 - lambda)(t - s)} f2(s) ds and the free
    vector solves (W2 - e^{i (A2 - lambda)(b2 - a2)}) f2star = u_p(b2) - W2 u_p(a2).
    A singular solve means lambda sits in the point spectrum; the raised
    error carries the nearest spectrum entry.
    """
    lam = complex(lam)
    require_problem_grid(f2, problem)
    if f2.interval_id != INNER:
        raise ValidationError("f2 must live on the inner interval")
    eig2 = herm_eig(problem.A2)
    grid2 = make_grid(INNER, problem)
    a2 = problem.intervals.a2
    delta = problem.intervals.delta
    up = grid2.with_samples(-1j * _convolve_forward(eig2, lam, f2))
    prop = (eig2.vectors * np.exp(1j * (eig2.eigenvalues - lam) * delta)[None, :]) \
        @ eig2.vectors.conj().T
    m2 = problem.W2 - prop
    rhs = up.samples[-1] - problem.W2 @ up.samples[0]
    try:
        f2star = solve_linear(m2, rhs)
    except SingularMatrixError as exc:
        nearest = _nearest_entry(problem, lam.real)
        raise PointSpectrumError(
            f"lambda = {lam} lies in the point spectrum of the inner component "
            f"(boundary solve singular); nearest eigenvalue "
            f"{nearest.lam if nearest else 'unknown'}",
            lam=lam.real, nearest=nearest) from exc
    hom = _propagate(eig2, lam, grid2.times() - a2, f2star)
    u2 = grid2.with_samples(hom + up.samples)
    residual_ode = _ode_residual(problem, INNER, u2, lam, f2)
    residual_bc = _vec_norm(u2.samples[-1] - problem.W2 @ u2.samples[0])
    # relative gate: large solutions near the spectrum are legitimate, a
    # coupling residual out of proportion to them is not
    bc_scale = 1.0 + _vec_norm(u2.samples[-1]) + _vec_norm(u2.samples[0])
    if residual_bc > problem.tolerances.residual_tol * bc_scale:
        raise ConvergenceError(
            f"inner coupling residual {residual_bc:.3e} exceeds "
            f"{problem.tolerances.residual_tol:.1e} relative to the solution",
            residual=residual_bc)
    return ResolventSolution(
        u=TripleFunction(u2=u2), lam=lam, f2star=f2star,
        residual_ode=residual_ode, residual_bc=residual_bc)


def _nearest_entry(problem: ProblemDefinition, lam_r: float):
    from .spectrum import point_spectrum  # deferred to avoid an import cycle

    margin = 1.5 * 2.0 * math.pi / problem.intervals.delta
    report = point_spectrum(problem, (lam_r - margin, lam_r + margin))
    if not report.entries:
        return None
    return min(report.entries, key=lambda e: abs(e.lam - lam_r))


def apply_resolvent(problem: ProblemDefinition, lam: complex,
                    f: TripleFunction) -> ResolventSolution:
    """Direct-sum resolvent: outer on (f1, f3), inner on f2, residuals combined.

    Requires Im lambda != 0; for real lambda the coupled operator has no
    bounded resolvent even where the inner solve alone would succeed.
    Missing parts of f are treated as zero.
    """
    lam = complex(lam)
    if lam.imag == 0.0:
        raise ValidationError("apply_resolvent needs Im lambda != 0")
    f1 = f.u1 if f.u1 is not None else make_grid(OUTER_LEFT, problem)
    f2 = f.u2 if f.u2 is not None else make_grid(INNER, problem)
    f3 = f.u3 if f.u3 is not None else make_grid(OUTER_RIGHT, problem)
    outer = resolvent_outer(problem, lam, f1, f3)
    inner = resolvent_inner(problem, lam, f2)
    return ResolventSolution(
        u=TripleFunction(u1=outer.u.u1, u2=inner.u.u2, u3=outer.u.u3),
        lam=lam,
        f1star=outer.f1star, f2star=inner.f2star, f3star=outer.f3star,
        residual_ode=max(outer.residual_ode, inner.residual_ode),
        residual_bc=max(outer.residual_bc, inner.residual_bc))


def resolvent_norm_probe(problem: ProblemDefinition, lambda_i: float,
                         lambda_r: float, f3vec) -> float:
    """Ratio ||(R_lambda f*)_3|| / ||f*|| for the phase-matched probe input.

    The probe is f*(t) = (0, 0, e^{i (A3 - conj(lambda)) t} f3vec) with
    lambda = lambda_r + i lambda_i; the conjugate in the exponent makes the
    probe decay and lets the kernel and probe phases cancel, so the
    right-half-line component of the resolvent output has exactly half the
    norm growth rate: the ratio equals 1/(2 lambda_i) up to quadrature error
    and is independent of lambda_r.  The norm in the numerator is taken over
    the right half line, the component the lower bound certifies.

    The truncation length is raised to 40 / min(1, lambda_i) when the
    problem's own T is shorter, following the decay-rate rule, so slowly
    decaying probes are still resolved.
    """
    if not lambda_i > 0:
        raise ValidationError("probe needs lambda_i > 0")
    f3vec = np.asarray(f3vec, dtype=complex)
    if f3vec.shape != (problem.dim,) or not np.any(np.abs(f3vec) > 0):
        raise ValidationError(f"probe vector must be a nonzero length-{problem.dim} vector")
    lam = complex(lambda_r, lambda_i)
    t_needed = 40.0 / min(1.0, lambda_i)
    prob = problem if problem.intervals.T >= t_needed else with_truncation(problem, t_needed)
    eig3 = herm_eig(prob.A3)
    grid3 = make_grid(OUTER_RIGHT, prob)
    probe_samples = _propagate(eig3, lam.conjugate(), grid3.times(), f3vec)
    f3 = grid3.with_samples(probe_samples)
    f1 = make_grid(OUTER_LEFT, prob)
    sol = resolvent_outer(prob, lam, f1, f3)
    denom = grid_l2_norm(f3)
    if denom == 0.0:
        raise ValidationError("probe has zero norm on the truncated interval")
    return grid_l2_norm(sol.u.u3) / denom
