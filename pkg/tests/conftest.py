"""Shared generators for the test suite.

Random inputs are always drawn from seeded generators so every run is
reproducible; matrices are scaled through the Frobenius norm, which bounds
the spectral norm from above.
"""

from __future__ import annotations

import numpy as np

from multipoint.linalg import expm_i_hermitian, fro_norm
from multipoint.model import IntervalConfig, ProblemDefinition, make_problem


def rand_hermitian(rng: np.random.Generator, d: int, scale: float = 1.0) -> np.ndarray:
    x = rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))
    h = 0.5 * (x + x.conj().T)
    nf = fro_norm(h)
    return h * (scale / nf) if nf > 0 else h


def rand_unitary(rng: np.random.Generator, d: int) -> np.ndarray:
    return expm_i_hermitian(rand_hermitian(rng, d, 2.0), 1.0)


def unit_vector(rng: np.random.Generator, d: int) -> np.ndarray:
    v = rng.standard_normal(d) + 1j * rng.standard_normal(d)
    return v / np.sqrt(np.sum(np.abs(v) ** 2))


def trivial_problem(d: int = 1, delta: float = 1.0, **kwargs) -> ProblemDefinition:
    """All-zero coefficients, identity couplings, geometry (-1, 0, delta, delta+1)."""
    iv = IntervalConfig(a1=-1.0, a2=0.0, b2=delta, a3=delta + 1.0, **kwargs)
    zero = np.zeros((d, d))
    eye = np.eye(d)
    return make_problem(d, iv, zero, zero, zero, eye, eye)


def random_problem(rng: np.random.Generator, d: int, delta: float,
                   a2_scale: float = 5.0, outer_scale: float = 0.0,
                   n_inner: int = 801, n_outer: int = 801,
                   T: float = 40.0) -> ProblemDefinition:
    iv = IntervalConfig(a1=-2.0, a2=0.0, b2=delta, a3=delta + 1.5,
                        T=T, n_outer=n_outer, n_inner=n_inner)
    if outer_scale > 0:
        a1 = rand_hermitian(rng, d, float(rng.uniform(0.2, outer_scale)))
        a3 = rand_hermitian(rng, d, float(rng.uniform(0.2, outer_scale)))
        w1 = rand_unitary(rng, d)
    else:
        a1 = np.zeros((d, d))
        a3 = np.zeros((d, d))
        w1 = np.eye(d)
    a2 = rand_hermitian(rng, d, float(rng.uniform(0.5, a2_scale)))
    w2 = rand_unitary(rng, d)
    return make_problem(d, iv, a1, a2, a3, w1, w2)
