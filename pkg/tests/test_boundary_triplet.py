import math

import numpy as np
import pytest

from conftest import trivial_problem, unit_vector
from multipoint.boundary_triplet import (construct_witness, green_defect,
                                         inner_gamma, outer_gamma,
                                         outer_coupling_residuals)
from multipoint.errors import ValidationError
from multipoint.model import (IntervalConfig, INNER, OUTER_LEFT, OUTER_RIGHT,
                              TripleFunction, make_problem, sampled, zero_triple)

SQRT2 = math.sqrt(2.0)


def _problem_with_coefficients(d=2):
    iv = IntervalConfig(a1=-1.0, a2=0.0, b2=1.0, a3=2.0)
    rng = np.random.default_rng(99)
    x = rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))
    a = 0.5 * (x + x.conj().T)
    return make_problem(d, iv, a, a, a, np.eye(d), np.eye(d))


def test_outer_gamma_zero_boundary():
    p = trivial_problem()
    bv = outer_gamma(zero_triple(p))
    assert np.all(bv.gamma1 == 0) and np.all(bv.gamma2 == 0)


def test_outer_gamma_direct_substitution():
    p = trivial_problem()
    u = TripleFunction(
        u1=sampled(p, OUTER_LEFT, lambda t: 1j * SQRT2 * np.exp(t - p.intervals.a1)),
        u3=sampled(p, OUTER_RIGHT, lambda t: 0.0))
    bv = outer_gamma(u)
    assert abs(bv.gamma1[0] - 1.0) < 1e-14
    assert abs(bv.gamma2[0] - 1j) < 1e-14


def test_outer_gamma_missing_part():
    p = trivial_problem()
    u = TripleFunction(u2=zero_triple(p).u2)
    with pytest.raises(ValidationError):
        outer_gamma(u)


def test_inner_gamma_direct_substitution():
    p = trivial_problem()
    same = TripleFunction(u2=sampled(p, INNER, lambda t: 1.0))
    bv = inner_gamma(same)
    assert abs(bv.Gamma1[0] - (-1j * SQRT2)) < 1e-14
    assert abs(bv.Gamma2[0]) < 1e-14
    flip = TripleFunction(u2=sampled(p, INNER, lambda t: 1.0 - 2.0 * t))
    bv = inner_gamma(flip)
    assert abs(bv.Gamma1[0]) < 1e-14
    assert abs(bv.Gamma2[0] - SQRT2) < 1e-14


def test_witness_zero_data():
    p = trivial_problem()
    w = construct_witness(np.zeros(1), np.zeros(1), p)
    for part in w.parts():
        assert np.all(part.samples == 0)


def test_witness_endpoint_values():
    p = trivial_problem()
    w = construct_witness(np.array([1.0 + 0j]), np.array([0.0 + 0j]), p)
    assert abs(w.u1.samples[-1, 0] - 1j / SQRT2) < 1e-15
    assert abs(w.u3.samples[0, 0] - 1j / SQRT2) < 1e-15


def test_witness_round_trip_hundred_draws():
    p = trivial_problem(d=2)
    rng = np.random.default_rng(17)
    worst = 0.0
    for _ in range(100):
        f = rng.standard_normal(2) + 1j * rng.standard_normal(2)
        g = rng.standard_normal(2) + 1j * rng.standard_normal(2)
        bv = outer_gamma(construct_witness(f, g, p))
        worst = max(worst, float(np.max(np.abs(bv.gamma1 - f))),
                    float(np.max(np.abs(bv.gamma2 - g))))
    assert worst <= 1e-12


def test_green_defect_zero_boundary_pairs():
    p = _problem_with_coefficients()
    rng = np.random.default_rng(21)

    def decaying():
        c1 = unit_vector(rng, 2)
        c3 = unit_vector(rng, 2)
        c2 = unit_vector(rng, 2)
        return TripleFunction(
            u1=sampled(p, OUTER_LEFT, lambda t: np.exp(1.2 * (t + 1)) * (t + 1) * c1),
            u2=sampled(p, INNER, lambda t: np.exp(-((t - 0.5) * 4) ** 2) * c2),
            u3=sampled(p, OUTER_RIGHT, lambda t: np.exp(-1.1 * (t - 2)) * (t - 2) * c3))

    u, v = decaying(), decaying()
    assert green_defect(u, v, p, "outer") <= 1e-6
    assert green_defect(u, v, p, "inner") <= 1e-6


def test_green_defect_witness_pairs():
    p = trivial_problem(d=2)
    rng = np.random.default_rng(29)
    for _ in range(5):
        u = construct_witness(unit_vector(rng, 2), unit_vector(rng, 2), p)
        v = construct_witness(unit_vector(rng, 2), unit_vector(rng, 2), p)
        assert green_defect(u, u, p, "outer") <= 1e-5
        assert green_defect(u, v, p, "outer") <= 1e-5


def test_green_defect_witness_quadrature_limited():
    # the defect is dominated by Simpson error on the outer grids: refining
    # the grid by 2x brings it below 1e-6
    p = trivial_problem(d=2, n_outer=1601)
    rng = np.random.default_rng(29)
    u = construct_witness(unit_vector(rng, 2), unit_vector(rng, 2), p)
    v = construct_witness(unit_vector(rng, 2), unit_vector(rng, 2), p)
    assert green_defect(u, u, p, "outer") <= 1e-6
    assert green_defect(u, v, p, "outer") <= 1e-6


def test_green_defect_smooth_decaying_pairs():
    p = _problem_with_coefficients()
    rng = np.random.default_rng(31)

    def outer_pair():
        r = 1.0 + rng.uniform(0, 0.25, size=2)
        w = rng.uniform(-1, 1, size=2)
        c1, c3 = unit_vector(rng, 2), unit_vector(rng, 2)
        return TripleFunction(
            u1=sampled(p, OUTER_LEFT, lambda t: np.exp((r[0] + 1j * w[0]) * (t + 1)) * c1),
            u3=sampled(p, OUTER_RIGHT, lambda t: np.exp(-(r[1] - 1j * w[1]) * (t - 2)) * c3))

    def inner_part():
        w = float(rng.uniform(-1, 1))
        c = unit_vector(rng, 2)
        return TripleFunction(
            u2=sampled(p, INNER, lambda t: np.exp(-(t - 0.5) ** 2 + 1j * w * t) * c))

    for _ in range(5):
        assert green_defect(outer_pair(), outer_pair(), p, "outer") <= 1e-5
        assert green_defect(inner_part(), inner_part(), p, "inner") <= 1e-6


def test_coupling_condition_through_boundary_maps():
    iv = IntervalConfig(a1=-1.0, a2=0.0, b2=1.0, a3=2.0)
    rng = np.random.default_rng(37)
    x = rng.standard_normal((2, 2)) + 1j * rng.standard_normal((2, 2))
    h = 0.5 * (x + x.conj().T)
    from multipoint.linalg import expm_i_hermitian
    w1 = expm_i_hermitian(h, 1.0)
    p = make_problem(2, iv, np.zeros((2, 2)), np.zeros((2, 2)), np.zeros((2, 2)),
                     w1, np.eye(2))

    # build u with u3(a3) = W1 u1(a1) exactly, then break it
    c = unit_vector(rng, 2)
    coupled = TripleFunction(
        u1=sampled(p, OUTER_LEFT, lambda t: np.exp(t + 1) * c),
        u3=sampled(p, OUTER_RIGHT, lambda t: np.exp(-(t - 2)) * (w1 @ c)))
    direct, mapped = outer_coupling_residuals(coupled, p)
    assert direct <= 1e-14 and mapped <= 1e-13
    assert mapped == pytest.approx(SQRT2 * direct, abs=1e-13)

    broken = TripleFunction(
        u1=coupled.u1,
        u3=sampled(p, OUTER_RIGHT, lambda t: np.exp(-(t - 2)) * (w1 @ c + 0.1 * c)))
    direct, mapped = outer_coupling_residuals(broken, p)
    assert direct > 1e-3 and mapped > 1e-3
    assert mapped == pytest.approx(SQRT2 * direct, rel=1e-10)
