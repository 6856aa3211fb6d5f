"""Self-contained dense complex linear algebra.

Everything the rest of the package needs from a matrix library lives here:
a cyclic Jacobi eigensolver for complex Hermitian matrices, a unitary
eigendecomposition built on it through the Cayley transform, two independent
matrix exponential routes (spectral and Pade scaling-and-squaring), and LU
based solves and determinants.  The kernels are written for the package's
operating range, dense matrices of dimension up to a few dozen, and favour
unconditional robustness over asymptotic speed.

All functions are pure: inputs are never mutated and results are fresh
arrays, so values can be shared freely between threads.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from .errors import ConvergenceError, SingularMatrixError, ValidationError

# Validation thresholds.  The Hermitian check is relative to the entry scale,
# the unitary check is the absolute defect of U*U from the identity.
HERMITIAN_RTOL = 1e-12
UNITARY_TOL = 1e-10
# Jacobi stops when the off-diagonal Frobenius mass drops below this fraction
# of the full Frobenius norm.
JACOBI_SWEEP_TOL = 1e-13
JACOBI_MAX_SWEEPS = 100
# solve_linear treats a pivot below PIVOT_RTOL * max|M| as singular.
PIVOT_RTOL = 1e-13

_PADE13_B = (
    64764752532480000.0, 32382376266240000.0, 7771770303897600.0,
    1187353796428800.0, 129060195264000.0, 10559470521600.0,
    670442572800.0, 33522128640.0, 1323241920.0, 40840800.0,
    960960.0, 16380.0, 182.0, 1.0,
)
_PADE13_THETA = 5.371920351148152


def as_complex_matrix(m, square: bool = True) -> np.ndarray:
    a = np.asarray(m, dtype=complex)
    if a.ndim != 2:
        raise ValidationError(f"expected a matrix, got array of ndim {a.ndim}")
    if square and a.shape[0] != a.shape[1]:
        raise ValidationError(f"expected a square matrix, got shape {a.shape}")
    if a.size and not np.all(np.isfinite(a.view(float))):
        raise ValidationError("matrix contains non-finite entries")
    return a


def max_abs(m: np.ndarray) -> float:
    return float(np.max(np.abs(m))) if np.asarray(m).size else 0.0


def fro_norm(m: np.ndarray) -> float:
    return float(np.sqrt(np.sum(np.abs(m) ** 2)))


def hermiticity_defect(a: np.ndarray) -> float:
    return max_abs(a - a.conj().T)


def unitarity_defect(u: np.ndarray) -> float:
    eye = np.eye(u.shape[0], dtype=complex)
    return max_abs(u.conj().T @ u - eye)


def check_hermitian(a: np.ndarray, name: str = "matrix") -> np.ndarray:
    a = as_complex_matrix(a)
    defect = hermiticity_defect(a)
    bound = HERMITIAN_RTOL * (1.0 + max_abs(a))
    if defect > bound:
        raise ValidationError(
            f"{name} is not Hermitian: max |M - M*| = {defect:.6g} "
            f"(allowed {bound:.6g})",
            residual=defect,
        )
    return a


def check_unitary(u: np.ndarray, name: str = "matrix",
                  tol: float = UNITARY_TOL) -> np.ndarray:
    u = as_complex_matrix(u)
    defect = unitarity_defect(u)
    if defect > tol:
        raise ValidationError(
            f"{name} is not unitary: max |U*U - I| = {defect:.6g} "
            f"(allowed {tol:.6g})",
            residual=defect,
        )
    return u


def principal_angle(z: complex) -> float:
    """Argument of z wrapped to [0, 2*pi); values within 1e-14 of 2*pi wrap to 0."""
    theta = math.atan2(z.imag, z.real)
    if theta < 0.0:
        theta += 2.0 * math.pi
    if theta >= 2.0 * math.pi - 1e-14:
        theta = 0.0
    return theta


@dataclass(frozen=True)
class HermEig:
    """Eigenvalues (real, ascending) and orthonormal column eigenvectors."""

    eigenvalues: np.ndarray
    vectors: np.ndarray


@dataclass(frozen=True)
class UnitaryEig:
    """Unit-modulus eigenvalues sorted by principal argument, column eigenvectors."""

    eigenvalues: np.ndarray
    vectors: np.ndarray


def _phase_normalize_columns(v: np.ndarray) -> np.ndarray:
    """Make the first non-negligible component of every column real positive."""
    out = v.copy()
    d = out.shape[1]
    for j in range(d):
        col = out[:, j]
        idx = np.nonzero(np.abs(col) > 1e-10)[0]
        if idx.size:
            pivot = col[idx[0]]
            out[:, j] = col * (pivot.conjugate() / abs(pivot))
    return out


def _vector_key(col: np.ndarray):
    return tuple((x.real, x.imag) for x in col)


def herm_eig(a, *, max_sweeps: int = JACOBI_MAX_SWEEPS) -> HermEig:
    """Eigendecomposition of a complex Hermitian matrix by cyclic Jacobi.

    Sweeps over all (p, q) pairs with complex Givens rotations until the
    off-diagonal Frobenius mass is below JACOBI_SWEEP_TOL times the Frobenius
    norm of the input.  Eigenvalues come back ascending; exact ties are
    ordered by the phase-normalized eigenvector entries.
    """
    a = check_hermitian(a)
    d = a.shape[0]
    work = a.astype(complex, copy=True)
    vecs = np.eye(d, dtype=complex)
    norm_f = fro_norm(work)
    if norm_f == 0.0 or d == 1:
        return _finish_herm(work, vecs)

    target = JACOBI_SWEEP_TOL * norm_f
    off = _offdiag_norm(work)
    sweeps = 0
    while off > target:
        if sweeps >= max_sweeps:
            raise ConvergenceError(
                f"Jacobi sweep limit {max_sweeps} reached, off-diagonal norm "
                f"{off:.3e} above target {target:.3e}",
                residual=off,
            )
        for p in range(d - 1):
            for q in range(p + 1, d):
                _jacobi_rotate(work, vecs, p, q)
        off = _offdiag_norm(work)
        sweeps += 1
    return _finish_herm(work, vecs)


def _offdiag_norm(a: np.ndarray) -> float:
    # Summed directly over the off-diagonal entries; subtracting the diagonal
    # mass from the total would leave a sqrt(eps)*norm cancellation floor.
    off = a.copy()
    np.fill_diagonal(off, 0.0)
    return math.sqrt(float(np.sum(np.abs(off) ** 2)))


def _jacobi_rotate(work: np.ndarray, vecs: np.ndarray, p: int, q: int) -> None:
    apq = work[p, q]
    absq = abs(apq)
    if absq < 1e-300:
        return
    app = work[p, p].real
    aqq = work[q, q].real
    phase = apq / absq
    tau = (aqq - app) / (2.0 * absq)
    if abs(tau) > 1e150:
        t = 1.0 / (2.0 * tau)  # asymptotic small root, avoids tau*tau overflow
    else:
        sign = 1.0 if tau >= 0.0 else -1.0
        t = sign / (abs(tau) + math.sqrt(1.0 + tau * tau))
    c = 1.0 / math.sqrt(1.0 + t * t)
    s = (t * c) * phase

    cp = work[:, p].copy()
    cq = work[:, q].copy()
    work[:, p] = c * cp - np.conj(s) * cq
    work[:, q] = s * cp + c * cq
    rp = work[p, :].copy()
    rq = work[q, :].copy()
    work[p, :] = c * rp - s * rq
    work[q, :] = np.conj(s) * rp + c * rq
    # Pin the algebraically exact values to avoid roundoff drift.
    work[p, q] = 0.0
    work[q, p] = 0.0
    work[p, p] = app - t * absq
    work[q, q] = aqq + t * absq

    vp = vecs[:, p].copy()
    vq = vecs[:, q].copy()
    vecs[:, p] = c * vp - np.conj(s) * vq
    vecs[:, q] = s * vp + c * vq


def _finish_herm(work: np.ndarray, vecs: np.ndarray) -> HermEig:
    eigenvalues = np.diagonal(work).real.copy()
    vecs = _phase_normalize_columns(vecs)
    order = sorted(range(work.shape[0]),
                   key=lambda j: (eigenvalues[j], _vector_key(vecs[:, j])))
    return HermEig(eigenvalues=eigenvalues[order], vectors=vecs[:, order])


def unitary_eig(u) -> UnitaryEig:
    """Eigendecomposition of a unitary matrix via the Cayley transform.

    H = i (I - U)(I + U)^{-1} is Hermitian whenever I + U is invertible, so
    one hardened Hermitian solver covers the unitary case too.  When the
    spectrum of U crowds -1 the matrix is pre-rotated by a deterministic
    phase sequence e^{i 2 pi k / (d+1)}, k = 0..d, and the phase is divided
    back out of the eigenvalues; at least one candidate keeps the spectrum
    clear of -1.  Candidates are scored by |det(I + e^{i phi} U)|^(1/d) and
    the first comfortably nonsingular one wins, which keeps the selection
    deterministic and accuracy-safe.
    """
    u = check_unitary(u)
    d = u.shape[0]
    eye = np.eye(d, dtype=complex)
    best_phi = 0.0
    best_score = -1.0
    chosen = None
    for k in range(d + 1):
        phi = 2.0 * math.pi * k / (d + 1)
        rotated = cmath.exp(1j * phi) * u
        dv = abs(det(eye + rotated))
        score = dv ** (1.0 / d) if dv > 0.0 else 0.0
        if score > best_score:
            best_score = score
            best_phi = phi
        if score >= 0.1:
            chosen = phi
            break
    if chosen is None:
        if best_score <= 1e-9:
            raise ConvergenceError(
                "no pre-rotation keeps I + U invertible", residual=best_score)
        chosen = best_phi
    return _unitary_eig_with_phase(u, chosen)


def _unitary_eig_with_phase(u: np.ndarray, phi: float) -> UnitaryEig:
    d = u.shape[0]
    eye = np.eye(d, dtype=complex)
    rotated = cmath.exp(1j * phi) * u
    x = solve_linear(eye + rotated, eye - rotated)
    h = 1j * x
    h = 0.5 * (h + h.conj().T)
    he = herm_eig(h)
    mu = (1.0 + 1j * he.eigenvalues) / (1.0 - 1j * he.eigenvalues)
    mu = mu * cmath.exp(-1j * phi)
    mu = mu / np.abs(mu)
    vecs = he.vectors.copy()
    norms = np.sqrt(np.sum(np.abs(vecs) ** 2, axis=0))
    vecs = vecs / norms[None, :]
    order = sorted(range(d),
                   key=lambda j: (principal_angle(complex(mu[j])),
                                  _vector_key(vecs[:, j])))
    return UnitaryEig(eigenvalues=mu[order], vectors=vecs[:, order])


def expm_i_hermitian(a, t: float) -> np.ndarray:
    """exp(i * A * t) for Hermitian A, evaluated as V diag(e^{i w t}) V*."""
    he = herm_eig(a)
    phases = np.exp(1j * he.eigenvalues * t)
    return (he.vectors * phases[None, :]) @ he.vectors.conj().T


def expm_scaling_squaring(m) -> np.ndarray:
    """General matrix exponential by Pade-13 scaling and squaring.

    Independent of the spectral route: only LU solves, no eigendecomposition.
    """
    m = as_complex_matrix(m)
    d = m.shape[0]
    eye = np.eye(d, dtype=complex)
    norm1 = float(np.max(np.sum(np.abs(m), axis=0))) if d else 0.0
    squarings = 0
    if norm1 > _PADE13_THETA:
        squarings = int(math.ceil(math.log2(norm1 / _PADE13_THETA)))
    a = m / (2.0 ** squarings)
    b = _PADE13_B
    a2 = a @ a
    a4 = a2 @ a2
    a6 = a4 @ a2
    u = a @ (a6 @ (b[13] * a6 + b[11] * a4 + b[9] * a2)
             + b[7] * a6 + b[5] * a4 + b[3] * a2 + b[1] * eye)
    v = (a6 @ (b[12] * a6 + b[10] * a4 + b[8] * a2)
         + b[6] * a6 + b[4] * a4 + b[2] * a2 + b[0] * eye)
    r = solve_linear(v - u, v + u)
    for _ in range(squarings):
        r = r @ r
    return r


def _lu_factor(m: np.ndarray):
    """LU with partial pivoting.  Returns (lu, perm, sign); never raises."""
    a = m.astype(complex, copy=True)
    n = a.shape[0]
    perm = np.arange(n)
    sign = 1.0
    for k in range(n):
        j = int(np.argmax(np.abs(a[k:, k]))) + k
        if j != k:
            a[[k, j], :] = a[[j, k], :]
            perm[[k, j]] = perm[[j, k]]
            sign = -sign
        pivot = a[k, k]
        if pivot == 0.0:
            continue
        a[k + 1:, k] /= pivot
        if k + 1 < n:
            a[k + 1:, k + 1:] -= np.outer(a[k + 1:, k], a[k, k + 1:])
    return a, perm, sign


def solve_linear(m, b) -> np.ndarray:
    """Solve M x = b by LU with partial pivoting.

    ``b`` may be a vector or a matrix of stacked right-hand sides.  A pivot
    below PIVOT_RTOL * max|M| raises SingularMatrixError; for the resolvent
    caller that signals lambda in or near the point spectrum.
    """
    m = as_complex_matrix(m)
    rhs = np.asarray(b, dtype=complex)
    vector = rhs.ndim == 1
    if vector:
        rhs = rhs[:, None]
    if rhs.shape[0] != m.shape[0]:
        raise ValidationError(
            f"dimension mismatch: matrix is {m.shape[0]}x{m.shape[1]}, "
            f"rhs has {rhs.shape[0]} rows")
    threshold = PIVOT_RTOL * max_abs(m)
    lu, perm, _ = _lu_factor(m)
    n = m.shape[0]
    for k in range(n):
        if abs(lu[k, k]) <= threshold:
            raise SingularMatrixError(
                f"singular matrix: pivot {abs(lu[k, k]):.3e} at column {k} "
                f"below threshold {threshold:.3e}",
                pivot=abs(lu[k, k]))
    x = rhs[perm, :].copy()
    for k in range(n):
        x[k + 1:, :] -= np.outer(lu[k + 1:, k], x[k, :])
    for k in range(n - 1, -1, -1):
        x[k, :] -= lu[k, :][k + 1:] @ x[k + 1:, :]
        x[k, :] /= lu[k, k]
    return x[:, 0] if vector else x


def det(m) -> complex:
    """Determinant as the signed product of LU pivots.  Zero is a valid result."""
    m = as_complex_matrix(m)
    lu, _, sign = _lu_factor(m)
    out = complex(sign)
    for k in range(m.shape[0]):
        out *= complex(lu[k, k])
        if out == 0.0:
            return 0.0
    return out
