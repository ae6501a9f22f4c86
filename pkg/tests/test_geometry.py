import numpy as np
import pytest
from scipy import integrate

from hlslab import geometry
from hlslab.errors import SingularPoint, UnsupportedDimension


def random_ball_points(rng, count, n):
    v = rng.standard_normal((count, n))
    v /= np.linalg.norm(v, axis=1, keepdims=True)
    r = rng.uniform(0, 1, (count, 1)) ** (1 / n)
    x = geometry.ball_center(n) + r * v
    keep = np.linalg.norm(x - geometry.pole(n), axis=1) > 1e-6
    return x[keep]


def test_marked_points():
    np.testing.assert_array_equal(geometry.pole(3), [0, 0, -2])
    np.testing.assert_array_equal(geometry.ball_center(4), [0, 0, 0, -1])


@pytest.mark.parametrize("n", [1, 7])
def test_dimension_range(n):
    with pytest.raises(UnsupportedDimension):
        geometry.check_dimension(n)


def test_conformal_examples():
    np.testing.assert_allclose(geometry.conformal_to_halfspace([0, 0, -1]), [0, 0, 2])
    np.testing.assert_allclose(geometry.conformal_to_halfspace([0, 0, 0]), [0, 0, 0])
    np.testing.assert_allclose(geometry.conformal_to_ball([0, 0, 2]), [0, 0, -1])
    with pytest.raises(SingularPoint):
        geometry.conformal_to_halfspace([0, 0, -2])


def test_far_point_maps_near_pole():
    y = np.array([1e6, 0, 0])
    x = geometry.conformal_to_ball(y)
    assert np.linalg.norm(x - geometry.pole(3)) < 1e-5


def test_non_finite_rejected():
    with pytest.raises(ValueError):
        geometry.conformal_map([np.nan, 0, 0])


@pytest.mark.parametrize("n", [3, 4, 5])
def test_round_trip(n):
    rng = np.random.default_rng(n)
    x = random_ball_points(rng, 1000, n)
    back = geometry.conformal_to_ball(geometry.conformal_to_halfspace(x))
    assert np.max(np.linalg.norm(back - x, axis=1)) <= 1e-10
    assert np.all(geometry.in_halfspace(geometry.conformal_to_halfspace(x)))


def test_sphere_to_boundary():
    rng = np.random.default_rng(0)
    u = rng.standard_normal((1000, 3))
    u /= np.linalg.norm(u, axis=1, keepdims=True)
    zeta = geometry.ball_center(3) + u
    zeta = zeta[np.linalg.norm(zeta - geometry.pole(3), axis=1) > 1e-6]
    y = geometry.conformal_to_halfspace(zeta)
    assert np.max(np.abs(y[:, -1])) <= 1e-10


def test_factor_reciprocity():
    rng = np.random.default_rng(1)
    x = random_ball_points(rng, 200, 3)
    lam = geometry.conformal_factor(x)
    lam_image = geometry.conformal_factor(geometry.conformal_map(x))
    np.testing.assert_allclose(lam * lam_image, 1.0, rtol=1e-12)


def test_jacobian_examples():
    assert geometry.jacobian_weight([0, 0, 0], "boundary") == pytest.approx(1.0)
    assert geometry.jacobian_weight([0, 0, -1], "bulk") == pytest.approx(64.0)
    with pytest.raises(ValueError):
        geometry.jacobian_weight([0, 0, 0], "edge")


def test_boundary_weight_integrates_to_sphere_area():
    # radial integral over the hyperplane R^2 of (2/|y - x^o|)^4
    def integrand(r):
        return 2 * np.pi * r * geometry.jacobian_weight([r, 0, 0], "boundary")

    val, _ = integrate.quad(integrand, 0, np.inf, epsabs=0, epsrel=1e-12)
    assert val == pytest.approx(4 * np.pi, rel=1e-10)


def test_reflect():
    np.testing.assert_array_equal(geometry.reflect([1, 0, 0], 0.0), [-1, 0, 0])
    np.testing.assert_array_equal(geometry.reflect([0.3, 5, 2], 0.3), [0.3, 5, 2])
    rng = np.random.default_rng(2)
    x = rng.standard_normal((100, 3))
    np.testing.assert_allclose(geometry.reflect(geometry.reflect(x, 0.7), 0.7), x, atol=1e-14)
    assert np.all(geometry.reflect(x, 0.7)[:, -1] == x[:, -1])


def test_sphere_inversion_examples():
    y0 = np.array([0.5, -0.25, 0.0])
    z = y0 + np.array([0.0, 0.6, 0.8]) * 2.0
    np.testing.assert_allclose(geometry.sphere_inversion(z, y0, 2.0), z, atol=1e-14)
    far = y0 + np.array([0.0, 0.6, 0.8]) * 4.0
    np.testing.assert_allclose(geometry.sphere_inversion(far, y0, 2.0),
                               y0 + np.array([0.0, 0.6, 0.8]) * 1.0, atol=1e-14)
    with pytest.raises(SingularPoint):
        geometry.sphere_inversion(y0, y0, 1.0)


def test_sphere_inversion_properties():
    rng = np.random.default_rng(3)
    for _ in range(1000):
        y0 = geometry.boundary_point(rng.uniform(-3, 3, 2), 3)
        lam = rng.uniform(0.1, 3.0)
        z = rng.uniform(-3, 3, 3)
        z[-1] = abs(z[-1])
        if np.linalg.norm(z - y0) < 1e-3:
            continue
        w = geometry.sphere_inversion(z, y0, lam)
        assert w[-1] >= 0
        back = geometry.sphere_inversion(w, y0, lam)
        assert np.linalg.norm(back - z) <= 1e-12 * max(1.0, np.linalg.norm(z))
        u = (z - y0) / np.linalg.norm(z - y0)
        on = geometry.sphere_inversion(y0 + lam * u, y0, lam)
        assert np.linalg.norm(on - (y0 + lam * u)) <= 1e-12 * max(1.0, lam)


def test_predicates_and_projection():
    assert geometry.in_ball([0, 0, -1])
    assert geometry.on_sphere([0, 0, 0])
    assert geometry.on_boundary([3, 4, 0])
    assert not geometry.in_halfspace([0, 0, 0])
    np.testing.assert_allclose(geometry.radial_projection([0, 0.5, -1]), [0, 1, -1])
    np.testing.assert_allclose(geometry.boundary_point([1.0, 2.0], 3), [1, 2, 0])
