"""Direct quadrature on the boundary hyperplane and the upper half-space.

These rules are the cross-check path: the headline computations move
half-space problems to the ball, whereas everything here integrates over the
unbounded domains directly, in polar coordinates about a chosen centre,
truncated at radius ``R`` (default ``1e3``).  Truncation emits a
:class:`~hlslab.errors.TailTruncationWarning`.

Radial panels are ``[0, s/4], [s/4, s/2], [s/2, s], [s, 2s], ...`` up to ``R``,
so the rules resolve features at scale ``s`` around the centre and decay
algebraically outwards.
"""

from __future__ import annotations

import warnings

import numpy as np
from scipy.special import roots_jacobi, roots_legendre

from .errors import TailTruncationWarning
from .exponents import Exponents
from .kernels import Kind
from .quadrature import Domain, DomainKind, QuadratureRule, unit_sphere_product

DEFAULT_R = 1e3


def _radial_panels(scale: float, R: float, q: int):
    edges = [0.0, 0.25 * scale, 0.5 * scale]
    t = scale
    while t < R:
        edges.append(t)
        t *= 2.0
    edges.append(R)
    edges = np.asarray(edges)
    x, w = roots_legendre(q)
    a = edges[:-1, None]
    b = edges[1:, None]
    return (0.5 * (b - a) * x + 0.5 * (a + b)).ravel(), (0.5 * (b - a) * w).ravel()


def _hyperplane_directions(n: int, level: int):
    """Unit directions in ``R^(n-1)`` (a circle for ``n = 3``)."""
    dirs, w, _ = unit_sphere_product(n - 1, 4 * level, 8 * level)
    return dirs, w


def _hemisphere_directions(n: int, level: int):
    """Unit directions in the upper hemisphere of ``S^(n-1)`` (``omega_n > 0``)."""
    m = 4 * level
    beta = 0.5 * (n - 3)
    if beta == 0:
        u, wu = roots_legendre(m)
    else:
        u, wu = roots_jacobi(m, beta, 0.0)
    # x = cos(theta_1) in (0, 1); weight (1 - x^2)^beta = (1-x)^beta (1+x)^beta
    x = 0.5 * (u + 1.0)
    wx = wu * 0.5 ** (beta + 1.0) * (1.0 + x) ** beta
    sub, wsub = _hyperplane_directions(n, level)
    sin = np.sqrt(1.0 - x * x)
    dirs = np.concatenate(
        [(sin[:, None, None] * sub[None, :, :]), np.broadcast_to(x[:, None, None], (m, sub.shape[0], 1))],
        axis=-1,
    ).reshape(-1, n)
    return dirs, np.outer(wx, wsub).ravel()


def boundary_rule(n: int, level: int, center=None, scale: float = 1.0, R: float = DEFAULT_R,
                  warn: bool = True) -> QuadratureRule:
    """Polar rule on the disc ``|y - center| < R`` of the hyperplane ``{x_n = 0}``."""
    if warn:
        warnings.warn(f"boundary integral truncated at R={R:g}", TailTruncationWarning, stacklevel=2)
    c = np.zeros(n - 1) if center is None else np.asarray(center, dtype=float)[: n - 1]
    rho, wr = _radial_panels(scale, R, 4 + 2 * level)
    dirs, wd = _hyperplane_directions(n, level)
    pts = c + (rho[:, None, None] * dirs[None, :, :]).reshape(-1, n - 1)
    nodes = np.concatenate([pts, np.zeros((pts.shape[0], 1))], axis=1)
    w = np.outer(wr * rho ** (n - 2), wd).ravel()
    keep = w > 0
    return QuadratureRule(domain=Domain(DomainKind.BOUNDARY, n), nodes=nodes[keep], weights=w[keep], level=level)


def halfspace_rule(n: int, level: int, center=None, scale: float = 1.0, R: float = DEFAULT_R,
                   warn: bool = True) -> QuadratureRule:
    """Polar rule on the half-ball ``|x - center| < R, x_n > 0`` about a boundary point."""
    if warn:
        warnings.warn(f"half-space integral truncated at R={R:g}", TailTruncationWarning, stacklevel=2)
    c = np.zeros(n)
    if center is not None:
        c[: n - 1] = np.asarray(center, dtype=float)[: n - 1]
    rho, wr = _radial_panels(scale, R, 4 + 2 * level)
    dirs, wd = _hemisphere_directions(n, level)
    nodes = c + (rho[:, None, None] * dirs[None, :, :]).reshape(-1, n)
    w = np.outer(wr * rho ** (n - 1), wd).ravel()
    keep = w > 0
    return QuadratureRule(domain=Domain(DomainKind.HALFSPACE, n), nodes=nodes[keep], weights=w[keep], level=level)


def _kernel_values(e: Exponents, x, y):
    d2 = np.sum((x - y) ** 2, axis=-1)
    if e.kind is Kind.REVERSED:
        return d2 ** (0.5 * (e.alpha - e.n))
    return x[..., -1] * d2 ** (-0.5 * (e.n - e.alpha + 2))


def direct_extension(f, e: Exponents, points, level: int = 4, R: float = DEFAULT_R) -> np.ndarray:
    """Evaluate the half-space extension of ``f`` by truncated boundary quadrature.

    The boundary rule is re-centred under every target point with radial
    scale equal to the target height, which resolves the Poisson-type kernel
    near the boundary.
    """
    warnings.warn(f"direct half-space extension truncated at R={R:g}", TailTruncationWarning, stacklevel=2)
    x = np.atleast_2d(np.asarray(points, dtype=float))
    n = e.n
    dirs, wd = _hyperplane_directions(n, level)
    out = np.empty(x.shape[0])
    for i, xi in enumerate(x):
        s = min(max(xi[-1], 1e-6), 1.0)
        rho, wr = _radial_panels(s, R, 4 + 2 * level)
        pts = xi[: n - 1] + (rho[:, None, None] * dirs[None, :, :]).reshape(-1, n - 1)
        y = np.concatenate([pts, np.zeros((pts.shape[0], 1))], axis=1)
        w = np.outer(wr * rho ** (n - 2), wd).ravel()
        out[i] = np.sum(w * np.asarray(f(y)) * _kernel_values(e, xi, y))
    return out


def direct_lp(fn, rule: QuadratureRule, p: float) -> float:
    """``(int fn^p)^(1/p)`` over a (truncated) direct rule."""
    v = np.asarray(fn(rule.nodes), dtype=float)
    return float(np.sum(rule.weights * v**p)) ** (1.0 / p)


def _cutoff(u):
    """Smooth step: 1 for ``u <= 0``, 0 for ``u >= 1``, C-infinity in between."""
    u = np.asarray(u, dtype=float)
    a = np.where(u < 1, np.exp(-1.0 / np.maximum(1.0 - u, 1e-300)), 0.0)
    b = np.where(u > 0, np.exp(-1.0 / np.maximum(u, 1e-300)), 0.0)
    return np.where(u <= 0, 1.0, np.where(u >= 1, 0.0, a / np.maximum(a + b, 1e-300)))


def direct_adjoint(g, e: Exponents, points, level: int = 3, R: float = DEFAULT_R, g_center=None,
                   g_scale: float = 1.0) -> np.ndarray:
    """``int_{R^n_+} g(x) k(x, y) dx`` at boundary points ``y`` by direct quadrature.

    The integral is split with a smooth cutoff ``chi(|x - y| / rho0)``.  The
    near part uses polar coordinates about ``y``, where both kernels times
    the volume element are smooth; the far part uses one global polar rule
    centred at ``g_center``.  The cutoff radius grows with the distance from
    ``y`` to ``g_center`` so that the global rule always resolves it.
    """
    n = e.n
    y = np.atleast_2d(np.asarray(points, dtype=float))
    q = 4 + 2 * level
    x, w = roots_legendre(q)
    edges = np.linspace(0.0, 1.0, 5)
    a, b = edges[:-1, None], edges[1:, None]
    rho = (0.5 * (b - a) * x + 0.5 * (a + b)).ravel()
    wr = (0.5 * (b - a) * w).ravel()
    dirs, wd = _hemisphere_directions(n, level)
    local = (rho[:, None, None] * dirs[None, :, :]).reshape(-1, n)
    # kernel times rho^(n-1) in polar coordinates about a boundary point
    power = e.alpha - 1.0
    if e.kind is Kind.REVERSED:
        ang = np.ones(dirs.shape[0])
    else:
        power = e.alpha - 2.0
        ang = dirs[:, -1]
    wloc = np.outer(wr * rho**power * _cutoff(rho), wd * ang).ravel()
    c = np.zeros(n - 1) if g_center is None else np.asarray(g_center, dtype=float)[: n - 1]
    glob = halfspace_rule(n, level, g_center, g_scale, R, warn=False)
    gv = np.asarray(g(glob.nodes), dtype=float) * glob.weights
    rho0 = np.maximum(g_scale, 0.5 * np.linalg.norm(y[:, : n - 1] - c, axis=-1))
    out = np.empty(y.shape[0])
    for lo in range(0, y.shape[0], 64):
        r0 = rho0[lo : lo + 64, None, None]
        gl = np.asarray(g(y[lo : lo + 64, None, :] + r0 * local[None]), dtype=float)
        out[lo : lo + 64] = r0[:, 0, 0] ** (power + 1.0) * (gl @ wloc)
    sq = np.sum(glob.nodes**2, axis=-1)
    for lo in range(0, y.shape[0], 256):
        yc = y[lo : lo + 256]
        d2 = np.maximum(np.sum(yc**2, axis=-1)[:, None] + sq[None, :] - 2.0 * yc @ glob.nodes.T, 0.0)
        if e.kind is Kind.REVERSED:
            k = d2 ** (0.5 * (e.alpha - e.n))
        else:
            k = glob.nodes[:, -1] * d2 ** (-0.5 * (e.n - e.alpha + 2))
        r0 = rho0[lo : lo + 256, None]
        inside = d2 < r0**2
        rows, cols = np.nonzero(inside)
        k[rows, cols] *= 1.0 - _cutoff(np.sqrt(d2[rows, cols]) / r0[rows, 0])
        out[lo : lo + 256] += k @ gv
    return out


def direct_pairing(f, g, e: Exponents, level: int = 3, R: float = DEFAULT_R, f_center=None,
                   f_scale: float = 1.0, g_center=None, g_scale: float = 1.0) -> float:
    """``int int g(x) k(x, y) f(y) dy dx`` over ``R^n_+ x R^(n-1)`` by direct quadrature.

    The outer integral runs over a boundary rule centred at ``f_center``; the
    inner half-space integral is :func:`direct_adjoint`.
    """
    outer = boundary_rule(e.n, level, f_center, f_scale, R, warn=False)
    fv = np.asarray(f(outer.nodes), dtype=float)
    inner = direct_adjoint(g, e, outer.nodes, level, R, g_center, g_scale)
    warnings.warn(f"direct half-space pairing truncated at R={R:g}", TailTruncationWarning, stacklevel=2)
    return float(np.sum(outer.weights * fv * inner))


def direct_quotient(f, g, e: Exponents, level: int = 3, R: float = DEFAULT_R, f_center=None,
                    f_scale: float = 1.0, g_center=None, g_scale: float = 1.0) -> float:
    """Half-space quotient ``D(f, g) / (||f||_p ||g||_t)`` by direct quadrature."""
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", TailTruncationWarning)
        d = direct_pairing(f, g, e, level, R, f_center, f_scale, g_center, g_scale)
        nf = direct_lp(f, boundary_rule(e.n, 2 * level, f_center, f_scale, R, warn=False), e.p)
        ng = direct_lp(g, halfspace_rule(e.n, 2 * level, g_center, g_scale, R, warn=False), e.t)
    warnings.warn(f"direct half-space quotient truncated at R={R:g}", TailTruncationWarning, stacklevel=2)
    return d / (nf * ng)


def halfspace_bump(n: int, center, depth: float, power: float, c: float = 1.0):
    """``x -> c (|x' - a|^2 + (x_n + b)^2)^(-power)``: a smooth decaying half-space function."""
    a = np.asarray(center, dtype=float)[: n - 1]

    def g(x):
        x = np.asarray(x, dtype=float)
        return c * (np.sum((x[..., : n - 1] - a) ** 2, axis=-1) + (x[..., -1] + depth) ** 2) ** (-power)

    return g
