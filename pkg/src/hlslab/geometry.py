"""Points and maps of the ball/half-space picture.

The unit ball ``B`` is centred at ``z^o = (0, ..., 0, -1)`` so that its
boundary sphere touches the hyperplane ``{x_n = 0}`` at the origin.  The
inversion of radius 2 about ``x^o = (0, ..., 0, -2)`` exchanges the ball with
the upper half-space and the sphere with the boundary hyperplane.

All functions accept a single point of shape ``(n,)`` or a stack of points of
shape ``(..., n)`` and are vectorised over the leading axes.
"""

from __future__ import annotations

import numpy as np

from .errors import SingularPoint, UnsupportedDimension

#: Distance to a pole below which a point is treated as the pole itself.
POLE_TOL = 1e-12

MIN_DIM = 2
MAX_DIM = 6


def check_dimension(n: int) -> int:
    """Return ``n`` as an int or raise :class:`UnsupportedDimension`."""
    if int(n) != n or not MIN_DIM <= n <= MAX_DIM:
        raise UnsupportedDimension(f"dimension n={n} outside {MIN_DIM}..{MAX_DIM}")
    return int(n)


def pole(n: int) -> np.ndarray:
    """The inversion centre ``x^o = (0, ..., 0, -2)``."""
    x = np.zeros(n)
    x[-1] = -2.0
    return x


def ball_center(n: int) -> np.ndarray:
    """The ball centre ``z^o = (0, ..., 0, -1)``."""
    z = np.zeros(n)
    z[-1] = -1.0
    return z


def _as_points(x) -> np.ndarray:
    x = np.asarray(x, dtype=float)
    if x.ndim == 0:
        raise ValueError("points need at least one axis")
    if not np.all(np.isfinite(x)):
        raise ValueError("point coordinates must be finite")
    return x


def _pole_distance(x: np.ndarray) -> np.ndarray:
    d = np.linalg.norm(x - pole(x.shape[-1]), axis=-1)
    if np.any(d < POLE_TOL):
        raise SingularPoint("point coincides with the inversion pole x^o")
    return d


def conformal_map(x) -> np.ndarray:
    """Apply ``x -> 4 (x - x^o) / |x - x^o|^2 + x^o``.

    The map is an involution, so the same function takes the ball to the
    half-space and back.

    Raises
    ------
    SingularPoint
        If a point is within :data:`POLE_TOL` of ``x^o``.
    """
    x = _as_points(x)
    xo = pole(x.shape[-1])
    d = _pole_distance(x)
    return 4.0 * (x - xo) / (d * d)[..., None] + xo


def conformal_to_halfspace(x) -> np.ndarray:
    """Map closed-ball points to the closed upper half-space."""
    return conformal_map(x)


def conformal_to_ball(y) -> np.ndarray:
    """Map closed half-space points back to the closed ball."""
    return conformal_map(y)


def conformal_factor(x) -> np.ndarray:
    """Return ``2 / |x - x^o|``, the local stretching of the map at ``x``."""
    x = _as_points(x)
    return 2.0 / _pole_distance(x)


def jacobian_weight(x, role: str = "bulk") -> np.ndarray:
    """Measure-change factor of the conformal map at ``x``.

    Parameters
    ----------
    x : array_like, shape (..., n)
        Points (on either side of the map).
    role : {'bulk', 'boundary'}
        ``'bulk'`` gives the volume factor ``(2/|x-x^o|)^(2n)``; ``'boundary'``
        gives the surface factor ``(2/|x-x^o|)^(2(n-1))``.

    Returns
    -------
    ndarray
        Positive weights, one per point.
    """
    x = _as_points(x)
    n = x.shape[-1]
    lam = conformal_factor(x)
    if role == "bulk":
        return lam ** (2 * n)
    if role == "boundary":
        return lam ** (2 * (n - 1))
    raise ValueError(f"unknown role {role!r}")


def reflect(x, lam: float, axis: int = 0) -> np.ndarray:
    """Reflect across the hyperplane ``x_axis = lam``."""
    x = np.array(x, dtype=float, copy=True)
    x[..., axis] = 2.0 * lam - x[..., axis]
    return x


def sphere_inversion(z, y0, lam: float) -> np.ndarray:
    """Inversion ``z -> lam^2 (z - y0)/|z - y0|^2 + y0`` in the sphere ``|z-y0| = lam``.

    Parameters
    ----------
    z : array_like, shape (..., n)
    y0 : array_like, shape (n,) or (n-1,)
        Centre on the boundary hyperplane.  An ``(n-1)``-vector is padded
        with ``x_n = 0``.
    lam : float
        Radius, must be positive.
    """
    z = _as_points(z)
    y0 = boundary_point(y0, z.shape[-1])
    if lam <= 0:
        raise ValueError("inversion radius must be positive")
    dz = z - y0
    d2 = np.sum(dz * dz, axis=-1)
    if np.any(np.sqrt(d2) < POLE_TOL):
        raise SingularPoint("point coincides with the inversion centre")
    return lam * lam * dz / d2[..., None] + y0


def boundary_point(y, n: int | None = None) -> np.ndarray:
    """Promote an ``(n-1)``-vector to a point of ``{x_n = 0}``."""
    y = np.asarray(y, dtype=float)
    if n is None or y.shape[-1] == n:
        return y
    if y.shape[-1] != n - 1:
        raise ValueError(f"expected {n - 1} or {n} coordinates, got {y.shape[-1]}")
    return np.concatenate([y, np.zeros(y.shape[:-1] + (1,))], axis=-1)


def radial_projection(x) -> np.ndarray:
    """Project ball points radially onto the sphere, ``x* = z^o + (x-z^o)/|x-z^o|``.

    The centre itself is sent to the top point (the origin).
    """
    x = _as_points(x)
    zo = ball_center(x.shape[-1])
    v = x - zo
    r = np.linalg.norm(v, axis=-1, keepdims=True)
    top = np.zeros_like(v)
    top[..., -1] = 1.0
    u = np.where(r > 0, v / np.where(r > 0, r, 1.0), top)
    return zo + u


# membership predicates -------------------------------------------------------

def in_ball(x, tol: float = 0.0) -> np.ndarray:
    x = _as_points(x)
    return np.linalg.norm(x - ball_center(x.shape[-1]), axis=-1) < 1.0 + tol


def on_sphere(x, tol: float = 1e-10) -> np.ndarray:
    x = _as_points(x)
    return np.abs(np.linalg.norm(x - ball_center(x.shape[-1]), axis=-1) - 1.0) <= tol


def in_halfspace(x) -> np.ndarray:
    x = _as_points(x)
    return x[..., -1] > 0


def on_boundary(x, tol: float = 1e-10) -> np.ndarray:
    x = _as_points(x)
    return np.abs(x[..., -1]) <= tol
