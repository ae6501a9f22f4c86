import math

import numpy as np
import pytest

from hlslab.errors import BoundarySingularity, ExponentError, SingularEvaluation
from hlslab.geometry import ball_center
from hlslab.kernels import (
    KernelSpec,
    Kind,
    ZonalKernel,
    check_k2_derivative_identity,
    funk_hecke,
    k1,
    k2,
    phi_radial,
    psi_radial,
    zonal_radial,
)
from hlslab.quadrature import sphere_rule

REV = KernelSpec(Kind.REVERSED, 3, 4.0)
POI = KernelSpec(Kind.POISSON, 3, 2.0)


def closed_phi(r):
    return 4 * math.pi + 4 * math.pi / 3 * np.asarray(r) ** 2


def test_k1_examples():
    assert k1(REV, [0, 0, 0], [0, 0, 2]) == pytest.approx(2.0)
    assert k1(REV, [1, 2, 3], [1, 2, 3]) == 0.0
    assert k1(KernelSpec(Kind.REVERSED, 3, 5.0), [0, 0, 0], [0, 3, 0]) == pytest.approx(9.0)


def test_k2_examples():
    assert k2(POI, [0, 0, 1], [0, 0, 0]) == pytest.approx(1.0)
    assert k2(POI, [0, 0, 2], [0, 0, 0]) == pytest.approx(0.25)
    assert k2(KernelSpec(Kind.POISSON, 4, 3.0), [0, 0, 0, 1], [0, 0, 0, 0]) == pytest.approx(1.0)


def test_k2_singular():
    with pytest.raises(SingularEvaluation):
        k2(POI, [0, 0, 1e-14], [0, 0, 0])
    with pytest.raises(ValueError):
        k2(POI, [0, 0, -1], [0, 0, 0])


@pytest.mark.parametrize("kind, n, alpha", [
    (Kind.REVERSED, 3, 3.0), (Kind.REVERSED, 4, 2.0),
    (Kind.POISSON, 3, 3.0), (Kind.POISSON, 3, 1.5), (Kind.POISSON, 2, 1.5),
])
def test_spec_guards(kind, n, alpha):
    with pytest.raises(ExponentError):
        KernelSpec(kind, n, alpha)


def test_derivative_identity_examples():
    assert check_k2_derivative_identity(POI, [0, 0, 1], [0, 0, 0], 1e-5) <= 1e-8
    near = check_k2_derivative_identity(POI, [0, 0, 1e-4], [0, 0, 0], 1e-5)
    assert math.isfinite(near)


def test_derivative_identity_second_order():
    x, y = [0, 0, 1], [0, 0, 0]
    e3 = check_k2_derivative_identity(POI, x, y, 1e-3)
    e4 = check_k2_derivative_identity(POI, x, y, 1e-4)
    e5 = check_k2_derivative_identity(POI, x, y, 1e-5)
    assert e3 / e4 == pytest.approx(100, rel=0.01)
    assert 5e3 <= e3 / e5 <= 2e4


def test_derivative_identity_random_pairs():
    rng = np.random.default_rng(0)
    for _ in range(100):
        x = rng.uniform(-2, 2, 3)
        x[-1] = rng.uniform(0.05, 2.0)
        y = np.append(rng.uniform(-2, 2, 2), 0.0)
        if np.linalg.norm(x - y) < 0.1:
            continue
        assert check_k2_derivative_identity(POI, x, y, 1e-5) <= 1e-6


def test_phi_examples():
    assert phi_radial(3, 4.0, 0.0) == pytest.approx(4 * math.pi, rel=1e-13)
    assert phi_radial(3, 4.0, 0.5) == pytest.approx(13 * math.pi / 3, rel=1e-13)
    assert phi_radial(3, 4.0, 1.0) == pytest.approx(16 * math.pi / 3, rel=1e-13)


def test_phi_closed_form_grid():
    r = np.linspace(0, 1, 100)
    np.testing.assert_allclose(phi_radial(3, 4.0, r), closed_phi(r), rtol=1e-10)


@pytest.mark.parametrize("n, alpha", [(3, 4.0), (3, 5.5), (4, 5.0)])
def test_phi_monotone(n, alpha):
    vals = phi_radial(n, alpha, np.linspace(0, 1, 100))
    assert np.all(np.diff(vals) > 0)


def test_phi_matches_full_sphere_quadrature():
    rng = np.random.default_rng(1)
    rule = sphere_rule(3, 64)
    for _ in range(100):
        u = rng.standard_normal(3)
        u /= np.linalg.norm(u)
        r = rng.uniform() ** (1 / 3)
        xi = ball_center(3) + r * u
        full = np.sum(rule.weights * np.linalg.norm(rule.nodes - xi, axis=1))
        assert full == pytest.approx(float(phi_radial(3, 4.0, r)), rel=1e-7)


def test_psi_harmonic_case():
    r = np.array([0.0, 0.3, 0.9, 0.999])
    np.testing.assert_allclose(psi_radial(3, 2.0, r), 4 * math.pi, rtol=1e-10)


def test_psi_matches_full_quadrature_n4():
    rule = sphere_rule(4, 20)
    xi = ball_center(4) + 0.5 * np.array([0.6, 0.0, 0.8, 0.0])
    d = np.linalg.norm(rule.nodes - xi, axis=1)
    full = np.sum(rule.weights * 0.75 * d ** -(4 - 3 + 2))
    assert full == pytest.approx(float(psi_radial(4, 3.0, 0.5)), rel=1e-8)


def test_psi_boundary():
    with pytest.raises(BoundarySingularity):
        psi_radial(3, 2.0, 1.0)
    with pytest.raises(ValueError):
        phi_radial(3, 4.0, 1.5)


def test_funk_hecke_degree_zero():
    kern = ZonalKernel.reversed(3, 4.0)
    radii = np.array([0.1, 0.5, 0.95])
    table = funk_hecke(kern, radii, 4)
    np.testing.assert_allclose(table[:, 0], zonal_radial(kern, radii), rtol=1e-12)
    np.testing.assert_allclose(table[:, 0], closed_phi(radii), rtol=1e-12)
