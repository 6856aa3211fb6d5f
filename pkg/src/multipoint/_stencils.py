"""Exact Lagrange stencil weights for differentiation and step quadrature.

Weights are generated once at import time with Fraction arithmetic, so they
are exact rationals converted to float, not the output of a numerically
solved Vandermonde system.
"""

from __future__ import annotations

from fractions import Fraction

import numpy as np


def _poly_mul(a: list[Fraction], b: list[Fraction]) -> list[Fraction]:
    out = [Fraction(0)] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        for j, bj in enumerate(b):
            out[i + j] += ai * bj
    return out


def _lagrange_coeffs(offsets: tuple[int, ...], j: int) -> list[Fraction]:
    """Coefficients of the j-th Lagrange basis polynomial on integer offsets."""
    coeffs = [Fraction(1)]
    denom = Fraction(1)
    for m, om in enumerate(offsets):
        if m == j:
            continue
        coeffs = _poly_mul(coeffs, [Fraction(-om), Fraction(1)])
        denom *= Fraction(offsets[j] - om)
    return [c / denom for c in coeffs]


def derivative_weights(offsets: tuple[int, ...], at: int = 0) -> np.ndarray:
    """Weights w with f'(x0 + at*h) ~= sum_j w[j] f(x0 + offsets[j]*h) / h."""
    out = []
    for j in range(len(offsets)):
        coeffs = _lagrange_coeffs(offsets, j)
        val = Fraction(0)
        for k in range(1, len(coeffs)):
            val += coeffs[k] * k * Fraction(at) ** (k - 1)
        out.append(val)
    return np.array([float(w) for w in out])


def integral_weights(offsets: tuple[int, ...], a: int = 0, b: int = 1) -> np.ndarray:
    """Weights w with int_{x0+a h}^{x0+b h} f ~= h * sum_j w[j] f(x0 + offsets[j]*h)."""
    out = []
    for j in range(len(offsets)):
        coeffs = _lagrange_coeffs(offsets, j)
        val = Fraction(0)
        for k, c in enumerate(coeffs):
            val += c * (Fraction(b) ** (k + 1) - Fraction(a) ** (k + 1)) / (k + 1)
        out.append(val)
    return np.array([float(w) for w in out])


# First-derivative stencils, second order.
FD2_INTERIOR = derivative_weights((-1, 0, 1))
FD2_LEFT = derivative_weights((0, 1, 2))
FD2_RIGHT = derivative_weights((-2, -1, 0))

# First-derivative stencils, sixth order.  Edge stencils shift the 7-point
# window inward; index i holds the stencil evaluated at node i from the edge.
FD6_INTERIOR = derivative_weights((-3, -2, -1, 0, 1, 2, 3))
FD6_LEFT = [derivative_weights(tuple(range(-i, 7 - i))) for i in range(3)]
FD6_RIGHT = [derivative_weights(tuple(range(-6 + i, i + 1))) for i in range(3)]

# Cubic step-quadrature weights over one grid step [0, h].
QUAD4_FIRST = integral_weights((0, 1, 2, 3))
QUAD4_INTERIOR = integral_weights((-1, 0, 1, 2))
QUAD4_LAST = integral_weights((-2, -1, 0, 1))
QUAD4_OFFSETS_FIRST = (0, 1, 2, 3)
QUAD4_OFFSETS_INTERIOR = (-1, 0, 1, 2)
QUAD4_OFFSETS_LAST = (-2, -1, 0, 1)
