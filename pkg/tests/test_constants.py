import math

import numpy as np
import pytest
from scipy import integrate as sci

from hlslab import regression
from hlslab.constants import (
    ExtremalParams,
    c_e1,
    c_e2,
    el_residual,
    extremal_exponent,
    extremal_family,
    halfspace_pullback,
    subcritical_constant,
    transport_boundary_function,
    transport_bulk_function,
    xi_alpha,
)
from hlslab.errors import ExponentError, NonnegativityRequired
from hlslab.exponents import Exponents
from hlslab.fields import random_positive_field
from hlslab.geometry import ball_center
from hlslab.halfspace import halfspace_bump
from hlslab.kernels import Kind
from hlslab.operators import default_ball_rule, extension_ratio, lp_functional, optimal_partner, quotient
from hlslab.quadrature import Grading, GridFunction, ball_rule, sphere_area, sphere_rule
from hlslab.solver import sweep_path

REV_C = Exponents.critical(3, 4.0, Kind.REVERSED)
POI_C = Exponents.critical(3, 2.0, Kind.POISSON)
REV_S = Exponents(3, 4.0, 0.7, 0.8, Kind.REVERSED)


def closed_phi(r):
    return 4 * math.pi + 4 * math.pi / 3 * r * r


def radial_oracle(p, t):
    tc = t / (t - 1)
    inner, _ = sci.quad(lambda r: closed_phi(r) ** tc * r * r, 0, 1, epsabs=0, epsrel=1e-13)
    return (4 * math.pi) ** (-1 / p) * (4 * math.pi * inner) ** (1 / tc)


# constants -------------------------------------------------------------------

def test_xi_example():
    res = xi_alpha(REV_S)
    assert res.value == pytest.approx(radial_oracle(0.7, 0.8), rel=1e-12)
    assert res.value == pytest.approx(regression.XI_3_4_P07_T08, rel=1e-12)
    assert 0 <= res.error_estimate <= 1e-12 * res.value


def test_c_e1_example():
    assert c_e1(3, 4.0).value == pytest.approx(radial_oracle(4 / 5, 6 / 7), rel=1e-12)
    assert c_e1(3, 4.0).value == pytest.approx(regression.C_E1_3_4, rel=1e-12)
    assert c_e1(4, 5.0).value == pytest.approx(regression.C_E1_4_5, rel=1e-12)


def test_c_e2_regression():
    assert c_e2(3, 2.0).value == pytest.approx(regression.C_E2_3_2_CLOSED, rel=1e-12)
    assert c_e2(4, 3.0).value == pytest.approx(regression.C_E2_4_3, rel=1e-12)


def test_constant_guards():
    with pytest.raises(ExponentError):
        c_e1(3, 3.0)
    with pytest.raises(ExponentError):
        c_e2(3, 3.0)
    with pytest.raises(ExponentError):
        xi_alpha(Exponents(3, 4.0, 0.9, 0.8, Kind.REVERSED))
    with pytest.raises(ExponentError):
        xi_alpha(REV_C)


def test_xi_sweep_towards_c_e1():
    ce1 = c_e1(3, 4.0).value
    eps = [1e-1, 1e-2, 1e-3, 1e-4]
    gaps = [ce1 - xi_alpha(Exponents(3, 4.0, 0.8 - x, 6 / 7 - x, Kind.REVERSED)).value for x in eps]
    assert all(g > 0 for g in gaps)
    assert all(b < a for a, b in zip(gaps, gaps[1:]))
    assert gaps[-1] < 1e-3


def test_gap_to_c_e1_decreases_along_sweep_path():
    ce1 = c_e1(3, 4.0).value
    gaps = np.array([ce1 - xi_alpha(sweep_path(3, 4.0, Kind.REVERSED, k)).value for k in range(1, 13)])
    assert np.all(gaps > 0)
    assert np.all(np.diff(gaps) < 0)


def test_c_e1_saturated_by_constants():
    ball = default_ball_rule(3, 6)
    f = GridFunction.constant(ball.sphere)
    g = optimal_partner(f, REV_C, ball)
    assert quotient(f, g.scaled(1 / lp_functional(g, REV_C.t)), REV_C) == pytest.approx(c_e1(3, 4.0).value, rel=1e-6)


def test_c_e2_against_constant_quotient():
    ball = default_ball_rule(3, 6, Kind.POISSON)
    f = GridFunction.constant(ball.sphere)
    assert extension_ratio(f, POI_C, ball) == pytest.approx(c_e2(3, 2.0).value, rel=1e-8)
    # Psi is constant when alpha = 2, so g = 1 is already optimal
    assert quotient(f, GridFunction.constant(ball), POI_C) == pytest.approx(c_e2(3, 2.0).value, rel=1e-12)
    assert quotient(f, random_positive_field(ball, 3), POI_C) < c_e2(3, 2.0).value


def test_c_e2_n4_full_dimension():
    # unreduced nested quadrature: 4-ball nodes against a 3-sphere rule
    n, a = 4, 3.0
    p, t = 2 * (n - 1) / (n + a - 4), 2 * n / (n + a)
    tc = t / (t - 1)
    ball = ball_rule(n, 1, Grading(layers=4))
    sph = sphere_rule(n, 4)
    x = ball.nodes
    r2 = np.sum((x - ball_center(n)) ** 2, axis=1)
    psi = np.empty(len(x))
    for lo in range(0, len(x), 256):
        d = np.linalg.norm(x[lo : lo + 256, None, :] - sph.nodes[None], axis=-1)
        psi[lo : lo + 256] = (1 - r2[lo : lo + 256]) * (d ** -(n - a + 2) @ sph.weights)
    full = sphere_area(n) ** (-1 / p) * np.sum(ball.weights * psi**tc) ** (1 / tc)
    assert full == pytest.approx(c_e2(4, 3.0).value, rel=1e-4)


def test_subcritical_poisson_constant():
    e = Exponents(3, 2.0, 5.0, 1.25, Kind.POISSON)
    ball = default_ball_rule(3, 6, Kind.POISSON)
    val = subcritical_constant(e).value
    assert val == pytest.approx(extension_ratio(GridFunction.constant(ball.sphere), e, ball), rel=1e-8)


# extremal family -------------------------------------------------------------

def test_extremal_family_examples():
    f = extremal_family(REV_C, ExtremalParams(1.0, (0.0, 0.0), 1.0))
    assert f(np.array([0.0, 0.0])) == pytest.approx(1.0)
    assert f(np.array([1.0, 0.0, 0.0])) == pytest.approx(2 ** -2.5)
    assert extremal_exponent(REV_C) == 2.5
    g = extremal_family(POI_C, ExtremalParams(1.0, (0.0, 0.0), 1.0))
    assert extremal_exponent(POI_C) == 0.5
    assert g(np.zeros(2)) == pytest.approx(1.0)


def test_extremal_family_large_d_limit():
    y = np.random.default_rng(0).uniform(-3, 3, (20, 2))
    for d in (1e2, 1e4):
        f = extremal_family(REV_C, ExtremalParams(d ** 5, (0.0, 0.0), d))
        np.testing.assert_allclose(f(y), 1.0, atol=50 / d**2)


def test_extremal_family_guards():
    with pytest.raises(ExponentError):
        extremal_family(REV_S, ExtremalParams())
    with pytest.raises(ValueError):
        ExtremalParams(c=0.0)
    with pytest.raises(ValueError):
        ExtremalParams(d=-1.0)


# transport -------------------------------------------------------------------

def test_transport_preserves_lp_norm():
    f = extremal_family(REV_C, ExtremalParams(1.0, (0.0, 0.0), 1.0))
    F = transport_boundary_function(f, REV_C, 8)
    # int_{R^2} (|y|^2 + 1)^(-5/2 * 4/5) dy = pi
    assert lp_functional(F, 0.8) == pytest.approx(math.pi ** 1.25, rel=1e-6)


def test_transport_bulk_preserves_lt_norm():
    e = REV_C
    g = halfspace_bump(3, (0.0, 0.0), 1.0, 3.5)
    G = transport_bulk_function(g, e, 8)
    # radial oracle: int_{x_3 > 0} (|x'|^2 + (x_3 + 1)^2)^(-3.5 t) dx
    t = e.t

    def inner(x3):
        return sci.quad(lambda r: 2 * math.pi * r * (r * r + (x3 + 1) ** 2) ** (-3.5 * t), 0, math.inf,
                        epsabs=0, epsrel=1e-12)[0]

    val, _ = sci.quad(inner, 0, math.inf, epsabs=0, epsrel=1e-11)
    assert lp_functional(G, t) == pytest.approx(val ** (1 / t), rel=1e-6)


def test_transport_round_trip():
    rule = sphere_rule(3, 4)
    const = lambda z: np.full(np.shape(z)[0], 2.5)
    back = transport_boundary_function(halfspace_pullback(const, REV_C), REV_C, rule)
    np.testing.assert_allclose(back.values, 2.5, rtol=1e-8)
    zero = transport_boundary_function(lambda y: np.zeros(np.shape(y)[0]), REV_C, rule)
    assert np.all(zero.values == 0)
    with pytest.raises(ValueError):
        halfspace_pullback(const, REV_C, role="edge")


# Euler-Lagrange residual -----------------------------------------------------------

def test_el_residual_constants_subcritical():
    rule = sphere_rule(3, 6)
    res, mu = el_residual(GridFunction.constant(rule), REV_S)
    assert res <= 1e-6 and mu > 0
    res, _ = el_residual(GridFunction.constant(rule), Exponents(3, 2.0, 5.0, 1.25, Kind.POISSON))
    assert res <= 1e-6


def test_el_residual_transported_family():
    F = transport_boundary_function(extremal_family(REV_C, ExtremalParams()), REV_C, 6)
    res, _ = el_residual(F, REV_C)
    assert res <= 1e-4


def test_el_residual_non_solution():
    rule = sphere_rule(3, 6)
    f = GridFunction(rule, 1 + 0.5 * (rule.nodes - ball_center(3))[:, 0])
    res, _ = el_residual(f, REV_S)
    assert res >= 1e-2


def test_el_residual_rejects_zeros():
    rule = sphere_rule(3, 3)
    v = np.ones(rule.size)
    v[0] = 0.0
    with pytest.raises(NonnegativityRequired):
        el_residual(GridFunction(rule, v), REV_S)


def test_regression_lookup():
    assert regression.lookup("ce1", 3, 4) == regression.C_E1_3_4
    assert regression.lookup("xi", 3, 4, 0.7, 0.8) == regression.XI_3_4_P07_T08
    assert regression.lookup("ce2", 5, 3) is None
