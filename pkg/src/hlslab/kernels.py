"""The two HLS kernels and radial reductions of their sphere integrals.

For a kernel that depends only on ``r = |xi - z^o|`` and on the cosine ``u``
of the angle between ``xi - z^o`` and ``zeta - z^o`` (a *zonal* kernel), the
surface integral over the sphere collapses to a 1-D integral in that angle,

    int_{S^(n-1)} k(r, u) dzeta = |S^(n-2)| int_0^pi k(r, cos t) sin(t)^(n-2) dt,

and, more generally, the Funk-Hecke formula gives the eigenvalue of the
integral operator on spherical harmonics of degree ``l``.  Those 1-D integrals
are evaluated with composite Gauss-Legendre panels that are refined
geometrically towards ``t = 0`` where the kernel peaks for ``r`` near 1.
"""

from __future__ import annotations

import enum
import functools
from dataclasses import dataclass

import numpy as np
from scipy.special import roots_legendre

from .errors import BoundarySingularity, ExponentError, SingularEvaluation
from .geometry import POLE_TOL, check_dimension
from .quadrature import sphere_area

#: Psi is evaluated no closer to the sphere than this.
PSI_R_MAX = 1.0 - 1e-8


class Kind(str, enum.Enum):
    REVERSED = "reversed"
    POISSON = "poisson"


@dataclass(frozen=True)
class KernelSpec:
    """Kernel family and parameters.

    ``REVERSED`` is ``|x-y|^(alpha-n)`` with ``alpha > n``; ``POISSON`` is
    ``x_n / |x-y|^(n+2-alpha)`` with ``n >= 3`` and ``2 <= alpha < n``.
    """

    kind: Kind
    n: int
    alpha: float

    def __post_init__(self):
        object.__setattr__(self, "kind", Kind(self.kind))
        check_dimension(self.n)
        n, a = self.n, self.alpha
        if self.kind is Kind.REVERSED and not a > n:
            raise ExponentError(f"reversed kernel needs alpha > n (got alpha={a}, n={n})")
        if self.kind is Kind.POISSON and not (n >= 3 and 2 <= a < n):
            raise ExponentError(f"Poisson-type kernel needs n >= 3, 2 <= alpha < n (got alpha={a}, n={n})")


def _dist(x, y) -> np.ndarray:
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    return np.linalg.norm(x - y, axis=-1)


def k1(spec: KernelSpec, x, y) -> np.ndarray:
    """Reversed kernel ``|x - y|^(alpha - n)``; it vanishes on the diagonal."""
    if spec.kind is not Kind.REVERSED:
        raise ExponentError("k1 needs a reversed kernel spec")
    return _dist(x, y) ** (spec.alpha - spec.n)


def k2(spec: KernelSpec, x, y) -> np.ndarray:
    """Poisson-type kernel ``x_n / |x - y|^(n + 2 - alpha)`` for ``x_n > 0``."""
    if spec.kind is not Kind.POISSON:
        raise ExponentError("k2 needs a Poisson-type kernel spec")
    x = np.asarray(x, dtype=float)
    if np.any(x[..., -1] <= 0):
        raise ValueError("k2 needs x in the open upper half-space")
    d = _dist(x, y)
    if np.any(d < POLE_TOL):
        raise SingularEvaluation("k2 evaluated at coincident points")
    return x[..., -1] / d ** (spec.n + 2 - spec.alpha)


def check_k2_derivative_identity(spec: KernelSpec, x, y, h: float = 1e-5) -> float:
    """Relative error of ``K2 = -1/(n-alpha) dK1/dx_n`` by centred differences.

    Here ``K1 = |x - y|^(alpha - n)`` is taken with the same ``alpha < n``.
    """
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if _dist(x, y) < 10 * h * (1 - 1e-12):
        raise ValueError("need |x - y| >= 10 h")
    s = spec.alpha - spec.n
    e = np.zeros_like(x)
    e[-1] = h
    deriv = (_dist(x + e, y) ** s - _dist(x - e, y) ** s) / (2 * h)
    kv = float(k2(spec, x, y))
    return float(abs(kv + deriv / (spec.n - spec.alpha)) / kv)


# zonal kernels -----------------------------------------------------------------

@dataclass(frozen=True)
class ZonalKernel:
    """``scale * (1 - r^2)^b * |xi - zeta|^power`` for ``|xi - z^o| = r``, zeta on the sphere.

    ``b`` is 1 when ``boundary_factor`` is set and 0 otherwise.
    """

    n: int
    power: float
    boundary_factor: bool = False
    scale: float = 1.0

    @classmethod
    def reversed(cls, n: int, alpha: float) -> "ZonalKernel":
        return cls(n, alpha - n)

    @classmethod
    def poisson(cls, n: int, alpha: float) -> "ZonalKernel":
        return cls(n, -(n - alpha + 2), boundary_factor=True)

    @classmethod
    def for_spec(cls, spec: KernelSpec) -> "ZonalKernel":
        if spec.kind is Kind.REVERSED:
            return cls.reversed(spec.n, spec.alpha)
        return cls.poisson(spec.n, spec.alpha)

    def radial_factor(self, r):
        r = np.asarray(r, dtype=float)
        f = self.scale * np.ones_like(r)
        if self.boundary_factor:
            f = f * (1.0 - r * r)
        return f

    def of_distance(self, r, d):
        """Kernel value from radius ``r`` of xi and distance ``d = |xi - zeta|``."""
        return self.radial_factor(r) * np.asarray(d, dtype=float) ** self.power

    def __call__(self, r, u):
        r = np.asarray(r, dtype=float)
        d2 = np.maximum((1.0 - r) ** 2 + 2.0 * r * (1.0 - np.asarray(u, dtype=float)), 0.0)
        return self.radial_factor(r) * d2 ** (0.5 * self.power)

    def at_angle(self, r, t):
        """Kernel at polar angle ``t``; avoids cancellation when ``r`` is near 1."""
        r = np.asarray(r, dtype=float)
        d2 = (1.0 - r) ** 2 + 4.0 * r * np.sin(0.5 * np.asarray(t, dtype=float)) ** 2
        return self.radial_factor(r) * d2 ** (0.5 * self.power)


def gegenbauer_table(n: int, u, lmax: int) -> np.ndarray:
    """Gegenbauer polynomials for ``S^(n-1)`` normalised to 1 at ``u = 1``.

    Returns an array of shape ``u.shape + (lmax + 1,)``; for ``n = 3`` these are
    the Legendre polynomials and for ``n = 2`` the Chebyshev polynomials.
    """
    u = np.asarray(u, dtype=float)
    lam = 0.5 * (n - 2)
    out = np.empty(u.shape + (lmax + 1,))
    out[..., 0] = 1.0
    if lmax >= 1:
        out[..., 1] = u
    for l in range(1, lmax):
        out[..., l + 1] = (2 * (l + lam) * u * out[..., l] - l * out[..., l - 1]) / (l + 2 * lam)
    return out


@functools.lru_cache(maxsize=8)
def _gl(q: int):
    return roots_legendre(q)


def angle_panels(r: float, lmax: int = 0, q: int = 24, breaks=()):
    """Composite rule on ``[0, pi]`` resolving the kernel peak at ``t = 0``.

    Panels shrink geometrically down to ``~0.05 |1 - r|`` and are never wider
    than ``12 / lmax`` so that oscillating polynomial weights are resolved.
    ``breaks`` adds panel edges, e.g. at kinks of the integrand.
    """
    eps = abs(1.0 - r)
    lo = max(0.05 * eps, 1e-14)
    brk = [0.0]
    t = lo
    while t < 0.5:
        brk.append(t)
        t *= 2.0
    width = min(0.5, 12.0 / max(lmax, 1))
    t = 0.5
    while t < np.pi:
        brk.append(t)
        t += width
    brk.append(np.pi)
    brk.extend(b for b in breaks if 0 < b < np.pi)
    brk = np.unique(np.asarray(brk))
    x, w = _gl(q)
    a = brk[:-1, None]
    b = brk[1:, None]
    return (0.5 * (b - a) * x + 0.5 * (a + b)).ravel(), (0.5 * (b - a) * w).ravel()


def funk_hecke(kernel: ZonalKernel, radii, lmax: int) -> np.ndarray:
    """Eigenvalues of the zonal operator on degree-``l`` harmonics.

    Returns ``lam[i, l] = |S^(n-2)| int_0^pi k(r_i, cos t) G_l(cos t) sin(t)^(n-2) dt``
    where ``G_l`` is the normalised Gegenbauer polynomial of
    :func:`gegenbauer_table`.  Column 0 is the plain sphere integral.
    """
    n = kernel.n
    radii = np.atleast_1d(np.asarray(radii, dtype=float))
    area = sphere_area(n - 1)
    out = np.empty((radii.size, lmax + 1))
    for i, r in enumerate(radii):
        t, w = angle_panels(r, lmax)
        u = np.cos(t)
        vals = kernel.at_angle(r, t) * w * np.sin(t) ** (n - 2) * area
        out[i] = vals @ gegenbauer_table(n, u, lmax)
    return out


def zonal_radial(kernel: ZonalKernel, r):
    """Sphere integral ``int_{partial B} k(xi, zeta) dzeta`` as a function of ``r``."""
    r_arr = np.asarray(r, dtype=float)
    vals = funk_hecke(kernel, r_arr.ravel(), 0)[:, 0]
    return vals.reshape(r_arr.shape) if r_arr.ndim else float(vals[0])


def sphere_profile_integral(fn, n: int, breaks=(), q: int = 24) -> float:
    """``int_{S^(n-1)} F(t) dsigma`` for ``F`` depending on the polar angle ``t`` only.

    ``fn`` is vectorised over ``t``; it may have an integrable singularity at
    ``t = 0``.
    """
    t, w = angle_panels(1.0, 0, q, breaks)
    return float(sphere_area(n - 1) * np.sum(fn(t) * w * np.sin(t) ** (n - 2)))


def _check_r(r, closed: bool):
    r = np.asarray(r, dtype=float)
    if np.any(r < 0) or np.any(r > 1):
        raise ValueError("r must lie in [0, 1]")
    if not closed and np.any(r >= 1):
        raise BoundarySingularity("Psi is singular on the sphere r = 1")
    return r


def phi_radial(n: int, alpha: float, r):
    """``Phi(r) = int_{partial B} |xi - zeta|^(alpha - n) dzeta`` for ``alpha > n``."""
    KernelSpec(Kind.REVERSED, n, alpha)
    return zonal_radial(ZonalKernel.reversed(n, alpha), _check_r(r, True))


def psi_radial(n: int, alpha: float, r):
    """``Psi(r) = int_{partial B} (1 - r^2) |xi - zeta|^-(n - alpha + 2) dzeta``.

    Defined for ``0 <= r < 1``; radii beyond ``1 - 1e-8`` are evaluated at
    ``1 - 1e-8``.

    Raises
    ------
    BoundarySingularity
        If ``r >= 1``.
    """
    KernelSpec(Kind.POISSON, n, alpha)
    r = np.minimum(_check_r(r, False), PSI_R_MAX)
    return zonal_radial(ZonalKernel.poisson(n, alpha), r)


def radial_function(kind: Kind, n: int, alpha: float):
    """Return ``Phi`` or ``Psi`` as a one-argument callable of ``r``."""
    if Kind(kind) is Kind.REVERSED:
        return functools.partial(phi_radial, n, alpha)
    return functools.partial(psi_radial, n, alpha)
