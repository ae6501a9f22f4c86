import math

import numpy as np
import pytest
from scipy import integrate as sci

from hlslab.constants import ExtremalParams, extremal_family
from hlslab.errors import (
    ExponentError,
    NegativeValueUnderFractionalPower,
    NonnegativityRequired,
    TailTruncationWarning,
    ZeroDenominator,
)
from hlslab.exponents import Exponents
from hlslab.fields import random_positive_field
from hlslab.geometry import ball_center
from hlslab.kernels import Kind, phi_radial, psi_radial
from hlslab.operators import (
    adjoint_extension,
    boundary_trace_Q,
    default_ball_rule,
    extend_ball,
    extend_halfspace,
    extension_ratio,
    h_versus_h1,
    lp_functional,
    optimal_partner,
    pairing,
    poisson_pointwise_bound,
    quotient,
    quotient_poisson,
    quotient_reversed,
    young_chain_forward,
    young_chain_reversed,
)
from hlslab.quadrature import GridFunction, integrate, sphere_rule

REV_C = Exponents.critical(3, 4.0, Kind.REVERSED)
POI_C = Exponents.critical(3, 2.0, Kind.POISSON)
REV_S = Exponents(3, 4.0, 0.7, 0.8, Kind.REVERSED)
POI_S = Exponents(3, 2.0, 5.0, 1.25, Kind.POISSON)


def radius(rule):
    return np.linalg.norm(rule.nodes - ball_center(rule.n), axis=1)


def ones(level, kind):
    ball = default_ball_rule(3, level, kind)
    return GridFunction.constant(ball.sphere), GridFunction.constant(ball), ball


def random_points(rng, count, n=3):
    u = rng.standard_normal((count, n))
    u /= np.linalg.norm(u, axis=1, keepdims=True)
    x = ball_center(n) + rng.uniform(0, 1, (count, 1)) ** (1 / n) * u
    v = rng.standard_normal((count, n))
    v /= np.linalg.norm(v, axis=1, keepdims=True)
    return x, ball_center(n) + v


# extension ---------------------------------------------------------------------

@pytest.mark.parametrize("backend", ["spectral", "direct"])
def test_extend_constant_reversed(backend):
    f, _, ball = ones(4, Kind.REVERSED)
    ext = extend_ball(f, REV_C, ball, backend)
    np.testing.assert_allclose(ext.values, phi_radial(3, 4.0, radius(ball)), rtol=1e-8)


@pytest.mark.parametrize("backend", ["spectral", "direct"])
def test_extend_constant_poisson(backend):
    f, _, ball = ones(4, Kind.POISSON)
    ext = extend_ball(f, POI_C, ball, backend)
    np.testing.assert_allclose(ext.values, psi_radial(3, 2.0, radius(ball)), rtol=1e-8)


def test_extend_zero():
    f, _, ball = ones(3, Kind.REVERSED)
    assert np.all(extend_ball(f.scaled(0.0), REV_C, ball).values == 0)


def test_extend_linearity():
    ball = default_ball_rule(3, 4)
    f1 = random_positive_field(ball.sphere, 1)
    f2 = random_positive_field(ball.sphere, 2)
    total = extend_ball(f1.with_values(f1.values + f2.values), REV_C, ball).values
    parts = extend_ball(f1, REV_C, ball).values + extend_ball(f2, REV_C, ball).values
    np.testing.assert_allclose(total, parts, rtol=1e-13)


def test_extend_positive_and_checked():
    ball = default_ball_rule(3, 3)
    f = random_positive_field(ball.sphere, 3)
    assert np.all(extend_ball(f, REV_C, ball).values > 0)
    with pytest.raises(NonnegativityRequired):
        extend_ball(f.scaled(-1.0), REV_C, ball)
    with pytest.raises(ValueError):
        extend_ball(f, REV_C, default_ball_rule(3, 4))


def test_backends_agree_reversed():
    ball = default_ball_rule(3, 5)
    f = random_positive_field(ball.sphere, 4)
    a = extend_ball(f, REV_C, ball, "spectral").values
    b = extend_ball(f, REV_C, ball, "direct").values
    assert np.max(np.abs(a - b) / a) < 1e-5


def test_backends_converge_poisson_pairing():
    # the direct sum approaches the spectral value as the level grows
    vals = []
    for level in (4, 5, 6):
        ball = default_ball_rule(3, level, Kind.POISSON)
        f = random_positive_field(ball.sphere, 4)
        g = random_positive_field(ball, 5)
        vals.append((pairing(f, g, POI_C, "spectral"), pairing(f, g, POI_C, "direct")))
    spectral = [v[0] for v in vals]
    gaps = [abs(v[1] - v[0]) / v[0] for v in vals]
    assert abs(spectral[2] - spectral[1]) <= 1e-10 * spectral[2]
    assert gaps[0] < 1e-4
    assert gaps[2] < gaps[1] < gaps[0]


def test_direct_backend_n4():
    ball = default_ball_rule(4, 3)
    e = Exponents.critical(4, 5.0, Kind.REVERSED)
    ext = extend_ball(GridFunction.constant(ball.sphere), e, ball)
    np.testing.assert_allclose(ext.values, phi_radial(4, 5.0, radius(ball)), rtol=1e-8)


# adjoint -------------------------------------------------------------------------

@pytest.mark.parametrize("backend", ["spectral", "direct"])
def test_adjointness(backend):
    rng = np.random.default_rng(0)
    ball = default_ball_rule(3, 4, Kind.POISSON)
    for _ in range(100 if backend == "spectral" else 10):
        seeds = rng.integers(0, 2**31, 2)
        f = random_positive_field(ball.sphere, int(seeds[0]))
        g = random_positive_field(ball, int(seeds[1]))
        lhs = integrate(GridFunction(ball, g.values * extend_ball(f, POI_C, ball, backend).values))
        rhs = integrate(GridFunction(ball.sphere, f.values * boundary_trace_Q(g, POI_C, backend).values))
        assert lhs == pytest.approx(rhs, rel=1e-6)


def test_trace_constants():
    f, g, ball = ones(6, Kind.POISSON)
    val = integrate(GridFunction(ball.sphere, f.values * boundary_trace_Q(g, POI_C).values))
    oracle = 4 * math.pi * 4 * math.pi / 3
    assert val == pytest.approx(oracle, rel=1e-8)
    assert np.all(boundary_trace_Q(g.scaled(0.0), POI_C).values == 0)
    with pytest.raises(ExponentError):
        boundary_trace_Q(g, REV_C)


def test_adjoint_extension_reversed_constant():
    _, g, ball = ones(5, Kind.REVERSED)
    vals = adjoint_extension(g, REV_C).values
    oracle, _ = sci.quad(lambda r: 4 * math.pi * r * r * (4 * math.pi + 4 * math.pi / 3 * r * r) / (4 * math.pi),
                         0, 1)
    # by symmetry the adjoint of 1 is the constant (1/|S|) int_B Phi
    np.testing.assert_allclose(vals, oracle, rtol=1e-10)


# norms ---------------------------------------------------------------------------

def test_lp_examples():
    rule = sphere_rule(3, 3)
    for p in (0.7, 2.0, -4.0):
        assert lp_functional(GridFunction.constant(rule, 3.0), p) == pytest.approx(3.0 * (4 * math.pi) ** (1 / p))
    ball = default_ball_rule(3, 3)
    assert lp_functional(GridFunction.constant(ball), 2.0) == pytest.approx(math.sqrt(4 * math.pi / 3))
    f = random_positive_field(rule, 5)
    assert lp_functional(f.scaled(2.5), 0.7) == pytest.approx(2.5 * lp_functional(f, 0.7), rel=1e-13)


def test_lp_negative_values():
    rule = sphere_rule(3, 1)
    with pytest.raises(NegativeValueUnderFractionalPower):
        lp_functional(GridFunction.constant(rule, -1.0), 0.5)
    assert lp_functional(GridFunction.constant(rule, -1.0), 2.0) == pytest.approx(math.sqrt(4 * math.pi))
    with pytest.raises(ValueError):
        lp_functional(GridFunction.constant(rule), 0.0)


# quotients -----------------------------------------------------------------------

def test_quotient_reversed_constants():
    f, g, _ = ones(5, Kind.REVERSED)
    int_phi, _ = sci.quad(lambda r: 4 * math.pi * r * r * (4 * math.pi + 4 * math.pi / 3 * r * r), 0, 1)
    oracle = int_phi / ((4 * math.pi) ** (5 / 4) * (4 * math.pi / 3) ** (7 / 6))
    assert quotient_reversed(f, g, REV_C) == pytest.approx(oracle, rel=1e-10)


def test_quotient_poisson_constants():
    f, g, _ = ones(5, Kind.POISSON)
    oracle = 4 * math.pi * 4 * math.pi / 3 / ((4 * math.pi) ** (1 / 4) * (4 * math.pi / 3) ** (5 / 6))
    assert quotient_poisson(f, g, POI_C) == pytest.approx(oracle, rel=1e-8)


@pytest.mark.parametrize("e", [REV_C, POI_C, REV_S])
def test_quotient_scale_invariance(e):
    ball = default_ball_rule(3, 4, e.kind)
    f = random_positive_field(ball.sphere, 6)
    g = random_positive_field(ball, 7)
    q = quotient(f, g, e)
    assert quotient(f.scaled(3.7), g.scaled(0.02), e) == pytest.approx(q, rel=1e-12)


def test_quotient_errors():
    f, g, _ = ones(3, Kind.REVERSED)
    fp, gp, _ = ones(3, Kind.POISSON)
    with pytest.raises(ZeroDenominator):
        quotient(fp.scaled(0.0), gp, POI_C)
    with pytest.raises(ExponentError):
        quotient_poisson(f, g, REV_C)
    with pytest.raises(ExponentError):
        quotient(f, g, Exponents(3, 4.0, 0.9, 0.9, Kind.REVERSED))


def test_optimal_partner_attains_extension_ratio():
    ball = default_ball_rule(3, 5)
    f = GridFunction.constant(ball.sphere)
    g = optimal_partner(f, REV_C, ball)
    q = quotient(f, g.scaled(1 / lp_functional(g, REV_C.t)), REV_C)
    assert q == pytest.approx(extension_ratio(f, REV_C, ball), rel=1e-6)
    # any other partner gives a larger reversed quotient
    other = random_positive_field(ball, 8)
    assert quotient(f, other, REV_C) > q


def test_pairing_approaches_raw_double_sum():
    # the raw double sum is a slowly converging independent oracle
    errs = []
    for level in (2, 4, 6):
        ball = default_ball_rule(3, level)
        f = random_positive_field(ball.sphere, 9)
        g = random_positive_field(ball, 10)
        d = np.linalg.norm(ball.nodes[:, None, :] - ball.sphere.nodes[None, :, :], axis=-1)
        raw = np.sum((ball.weights * g.values)[:, None] * d * (ball.sphere.weights * f.values)[None, :])
        errs.append(abs(pairing(f, g, REV_C) / raw - 1))
    assert errs[2] < errs[1] < errs[0] < 1e-3
    assert errs[2] < 1e-5


# half-space extension --------------------------------------------------------------

def test_extend_halfspace_pullback_vs_direct():
    f = extremal_family(REV_C, ExtremalParams(1.0, (0.0, 0.0), 1.0))
    x = np.array([[0.0, 0.0, 0.5], [0.3, -0.2, 1.0], [1.0, 1.0, 2.0], [-2.0, 0.5, 0.2]])
    pull = extend_halfspace(f, REV_C, level=10)(x)
    with pytest.warns(TailTruncationWarning):
        direct = extend_halfspace(f, REV_C, method="direct", level=6, R=1e3)(x)
    np.testing.assert_allclose(pull, direct, rtol=1e-3)


def test_extend_halfspace_zero():
    ev = extend_halfspace(lambda y: np.zeros(np.shape(y)[0]), REV_C, level=4)
    assert np.all(ev(np.array([[0.0, 0.0, 1.0], [1.0, 2.0, 0.3]])) == 0)
    with pytest.raises(ValueError):
        ev(np.array([[0.0, 0.0, 0.0]]))


def test_extend_halfspace_poisson_decreasing():
    f = extremal_family(POI_C, ExtremalParams(1.0, (0.0, 0.0), 1.0))
    xn = np.linspace(1.0, 10.0, 40)
    x = np.column_stack([np.zeros_like(xn), np.zeros_like(xn), xn])
    vals = extend_halfspace(f, POI_C, level=10)(x)
    assert np.all(np.diff(vals) < 0)
    with pytest.warns(TailTruncationWarning):
        direct = extend_halfspace(f, POI_C, method="direct", level=6)(x[::10])
    np.testing.assert_allclose(vals[::10], direct, rtol=1e-3)


# Young chains -------------------------------------------------------------------------

def test_young_reversed_constants():
    f, g, _ = ones(4, Kind.REVERSED)
    rep = young_chain_reversed(f, g, REV_S)
    assert rep.links["holder_outer"] > 0 and rep.links["holder_inner"] > 0
    assert not rep.flags
    with pytest.raises(ExponentError):
        young_chain_reversed(f, g, REV_C)
    with pytest.raises(ValueError):
        young_chain_reversed(f, g, REV_S, a=1.5)


def test_young_forward_constants():
    f, g, _ = ones(4, Kind.POISSON)
    rep = young_chain_forward(f, g, POI_S)
    assert rep.links["kernel_bound"] >= 0
    assert rep.links["holder_outer"] >= 0 and rep.links["holder_inner"] >= 0
    assert rep.a == pytest.approx(1 / 4)


def test_young_forward_zero_f():
    _, g, ball = ones(3, Kind.POISSON)
    rep = young_chain_forward(GridFunction.constant(ball.sphere, 0.0), g, POI_S)
    assert rep.I == 0 and rep.kernel_pairing == 0
    assert rep.holds()
    assert "I is zero" in rep.flags


def test_h_dominates_h1_reversed():
    x, y = random_points(np.random.default_rng(11), 10_000)
    assert np.all(h_versus_h1(x, y, REV_S) >= 0)


def test_poisson_pointwise_bound():
    x, y = random_points(np.random.default_rng(12), 10_000)
    assert np.all(poisson_pointwise_bound(x, y, 2.0) >= 0)
    assert np.all(poisson_pointwise_bound(x, y, 2.5) >= 0)
