"""Independent ground-truth paths: RK4 propagation and determinant sweeps.

The eigenvalue sweep never touches an eigendecomposition or the spectral
matrix exponential; it integrates the fundamental matrix with classical RK4
and locates zeros of |det(W2 - Phi_lambda)|.  Shared code with the main path
is limited to complex arithmetic, the matrix container, and LU.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import _stencils
from .errors import ValidationError
from .linalg import check_hermitian, det
from .model import GridFunction, ProblemDefinition, INNER, OUTER_LEFT, OUTER_RIGHT


@dataclass(frozen=True)
class SweepConfig:
    """Determinant-sweep controls: sampling density and refinement width."""

    window: tuple[float, float]
    samples: int = 2001
    rk4_steps: int = 1024
    refine_tol: float = 1e-8

    def __post_init__(self):
        lo, hi = self.window
        if not (math.isfinite(lo) and math.isfinite(hi) and lo < hi):
            raise ValidationError(f"sweep window must satisfy lo < hi, got {self.window}")
        if self.samples < 16:
            raise ValidationError("sweep needs at least 16 samples")
        if self.rk4_steps < 64:
            raise ValidationError("sweep needs at least 64 RK4 steps")
        if not self.refine_tol > 0:
            raise ValidationError("refine_tol must be positive")


@dataclass(frozen=True)
class SweepResult:
    roots: list[float]
    warnings: list[str] = field(default_factory=list)


@dataclass(frozen=True)
class MatchReport:
    """Greedy nearest-neighbour matching of two eigenvalue lists."""

    pairs: list[tuple[float, float]]
    unmatched_main: list[float]
    unmatched_oracle: list[float]
    max_matched_distance: float

    @property
    def all_matched(self) -> bool:
        return not self.unmatched_main and not self.unmatched_oracle


def rk4_fundamental(a2, lam, delta: float, steps: int) -> np.ndarray:
    """Phi(delta) for Phi' = i (A2 - lambda) Phi, Phi(0) = I, by classical RK4.

    For a constant-coefficient linear system the RK4 update is the fixed
    degree-4 stability polynomial of the step matrix, so the n-step result is
    that polynomial raised to the n-th power; binary powering evaluates it
    with the same truncation error as the step-by-step loop.  ``lam`` may be
    a scalar or a 1-D array; an array yields a stacked (m, d, d) result.
    """
    a2 = check_hermitian(a2, name="A2")
    if steps < 1:
        raise ValidationError("steps must be at least 1")
    if not delta > 0:
        raise ValidationError("delta must be positive")
    lam_arr = np.asarray(lam, dtype=complex)
    scalar = lam_arr.ndim == 0
    lam_arr = np.atleast_1d(lam_arr)
    d = a2.shape[0]
    eye = np.eye(d, dtype=complex)
    h = delta / steps
    b = 1j * h * (a2[None, :, :] - lam_arr[:, None, None] * eye[None, :, :])
    b2 = b @ b
    b3 = b2 @ b
    b4 = b2 @ b2
    p = eye[None, :, :] + b + b2 / 2.0 + b3 / 6.0 + b4 / 24.0
    phi = _matrix_power(p, steps)
    return phi[0] if scalar else phi


def _matrix_power(p: np.ndarray, n: int) -> np.ndarray:
    result = None
    base = p
    while n:
        if n & 1:
            result = base if result is None else result @ base
        n >>= 1
        if n:
            base = base @ base
    return result


def _batched_abs_det(mats: np.ndarray) -> np.ndarray:
    """|det| of a stack of matrices by LU with partial pivoting, vectorized."""
    a = mats.astype(complex, copy=True)
    m, d, _ = a.shape
    out = np.ones(m, dtype=complex)
    idx = np.arange(m)
    for k in range(d):
        j = np.argmax(np.abs(a[:, k:, k]), axis=1) + k
        swapped = j != k
        rows_j = a[idx, j, :].copy()
        rows_k = a[:, k, :].copy()
        a[idx, j, :] = rows_k
        a[:, k, :] = rows_j
        out[swapped] = -out[swapped]
        piv = a[:, k, k].copy()
        out *= piv
        safe = np.where(piv == 0, 1.0, piv)
        if k + 1 < d:
            factors = a[:, k + 1:, k] / safe[:, None]
            a[:, k + 1:, k + 1:] -= factors[:, :, None] * a[:, k, None, k + 1:]
    return np.abs(out)


def det_sweep_eigenvalues(problem: ProblemDefinition, cfg: SweepConfig) -> SweepResult:
    """Eigenvalues of the inner component located without eigendecomposition.

    Samples g(lambda) = |det(W2 - Phi_lambda(b2 - a2))| on the window,
    brackets every local minimum below 0.1 * median(g), and refines each
    bracket by golden-section search to refine_tol.  Two genuine roots inside
    one sample cell cannot be separated; the result carries a warning when
    refined roots crowd the sampling resolution and the caller should
    increase ``samples``.
    """
    delta = problem.intervals.delta
    w2 = problem.W2
    lo, hi = cfg.window
    cell = (hi - lo) / (cfg.samples - 1)
    # Sample a few cells beyond the window so a root just outside refines to
    # its true (out-of-window) position instead of piling up on the boundary.
    pad = 8
    n_samples = cfg.samples + 2 * pad
    xs = np.linspace(lo - pad * cell, hi + pad * cell, n_samples)
    phis = rk4_fundamental(problem.A2, xs, delta, cfg.rk4_steps)
    gs = _batched_abs_det(w2[None, :, :] - phis)

    threshold = 0.1 * float(np.median(gs))

    def g_single(lam: float) -> float:
        phi = rk4_fundamental(problem.A2, lam, delta, cfg.rk4_steps)
        return abs(det(w2 - phi))

    roots: list[float] = []
    for i in range(n_samples):
        if gs[i] >= threshold:
            continue
        left_ok = i == 0 or gs[i] <= gs[i - 1]
        right_ok = i == n_samples - 1 or gs[i] < gs[i + 1]
        if not (left_ok and right_ok):
            continue
        a = xs[max(i - 1, 0)]
        b = xs[min(i + 1, n_samples - 1)]
        roots.append(_golden_min(g_single, a, b, cfg.refine_tol))

    roots.sort()
    merged: list[float] = []
    for r in roots:
        if r < lo or r > hi:
            continue
        if merged and abs(r - merged[-1]) <= max(cfg.refine_tol, 1e-12):
            continue
        merged.append(r)
    warnings = []
    for r1, r2 in zip(merged, merged[1:]):
        if r2 - r1 < 4.0 * cell:
            warnings.append(
                f"roots {r1:.9g} and {r2:.9g} are within {4 * cell:.3g} of the "
                f"sampling resolution; increase samples to rule out unresolved clusters")
    return SweepResult(roots=merged, warnings=warnings)


def _golden_min(fn, a: float, b: float, tol: float) -> float:
    invphi = (math.sqrt(5.0) - 1.0) / 2.0
    c = b - invphi * (b - a)
    d_ = a + invphi * (b - a)
    fc = fn(c)
    fd = fn(d_)
    while b - a > tol:
        if fc < fd:
            b, d_, fd = d_, c, fc
            c = b - invphi * (b - a)
            fc = fn(c)
        else:
            a, c, fc = c, d_, fd
            d_ = a + invphi * (b - a)
            fd = fn(d_)
    return 0.5 * (a + b)


def differentiate(samples: np.ndarray, h: float, order: int = 2) -> np.ndarray:
    """First derivative of columnwise samples on a uniform grid.

    order=2 uses centered differences with one-sided ends; order=6 uses
    7-point stencils shifted inward near the edges.  Stencil weights are
    exact rationals.
    """
    n = samples.shape[0]
    if order == 2:
        if n < 3:
            raise ValidationError("order-2 differentiation needs at least 3 samples")
        out = np.empty_like(samples)
        out[1:-1] = (samples[2:] - samples[:-2]) / 2.0
        wl, wr = _stencils.FD2_LEFT, _stencils.FD2_RIGHT
        out[0] = wl[0] * samples[0] + wl[1] * samples[1] + wl[2] * samples[2]
        out[-1] = wr[0] * samples[-3] + wr[1] * samples[-2] + wr[2] * samples[-1]
        return out / h
    if order == 6:
        if n < 7:
            raise ValidationError("order-6 differentiation needs at least 7 samples")
        out = np.zeros_like(samples)
        w = _stencils.FD6_INTERIOR
        for m, wm in enumerate(w):
            if wm != 0.0:
                out[3:n - 3] += wm * samples[m:n - 6 + m]
        for i in range(3):
            wl = _stencils.FD6_LEFT[i]
            out[i] = sum(wl[m] * samples[m] for m in range(7))
            wr = _stencils.FD6_RIGHT[i]
            out[n - 1 - i] = sum(wr[m] * samples[n - 7 + m] for m in range(7))
        return out / h
    raise ValidationError(f"unsupported differentiation order {order}")


def _coefficient(problem: ProblemDefinition, interval_id: str) -> np.ndarray:
    if interval_id == OUTER_LEFT:
        return problem.A1
    if interval_id == INNER:
        return problem.A2
    if interval_id == OUTER_RIGHT:
        return problem.A3
    raise ValidationError(f"unknown interval id {interval_id!r}")


def apply_expression(problem: ProblemDefinition, interval_id: str,
                     u: GridFunction, lam: complex, *, order: int = 2) -> GridFunction:
    """Finite-difference evaluation of i u' + A u - lambda u on the grid of u."""
    if u.n < 3:
        raise ValidationError("apply_expression needs at least 3 grid points")
    a = _coefficient(problem, interval_id)
    if a.shape[0] != u.dim:
        raise ValidationError(
            f"dimension mismatch: coefficient is {a.shape[0]}, samples are {u.dim}")
    du = differentiate(u.samples, u.h, order=order)
    residual = 1j * du + u.samples @ a.T - lam * u.samples
    return u.with_samples(residual)


def max_norm(g: GridFunction) -> float:
    """Largest pointwise C^d norm over the grid."""
    return float(np.max(np.sqrt(np.sum(np.abs(g.samples) ** 2, axis=1))))


def compare_spectra(main_lambdas, oracle_roots, tol: float) -> MatchReport:
    """Set-level comparison of eigenvalue lists at the given tolerance.

    Both sides are deduplicated within tol first (the main path reports
    coincident eigenvalues once per eigenvector, the sweep sees one zero),
    then matched greedily in sorted order.
    """
    if hasattr(main_lambdas, "entries"):
        main_lambdas = [entry.lam for entry in main_lambdas.entries]
    main = _dedupe(sorted(float(x) for x in main_lambdas), tol)
    oracle = _dedupe(sorted(float(x) for x in oracle_roots), tol)
    pairs: list[tuple[float, float]] = []
    unmatched_main: list[float] = []
    unmatched_oracle: list[float] = []
    i = j = 0
    max_dist = 0.0
    while i < len(main) and j < len(oracle):
        dist = abs(main[i] - oracle[j])
        if dist <= tol:
            pairs.append((main[i], oracle[j]))
            max_dist = max(max_dist, dist)
            i += 1
            j += 1
        elif main[i] < oracle[j]:
            unmatched_main.append(main[i])
            i += 1
        else:
            unmatched_oracle.append(oracle[j])
            j += 1
    unmatched_main.extend(main[i:])
    unmatched_oracle.extend(oracle[j:])
    return MatchReport(pairs=pairs, unmatched_main=unmatched_main,
                       unmatched_oracle=unmatched_oracle,
                       max_matched_distance=max_dist)


def _dedupe(sorted_values: list[float], tol: float) -> list[float]:
    out: list[float] = []
    for x in sorted_values:
        if out and abs(x - out[-1]) <= tol:
            continue
        out.append(x)
    return out
