"""Sharp constants, extremal families, Euler-Lagrange residuals and transport.

Every constant here has the same shape.  With ``R(r)`` the sphere integral of
the kernel at distance ``r = |xi - z^o|`` from the centre (``Phi`` or
``Psi``),

    value = |S^(n-1)|^(-1/p) (|S^(n-1)| int_0^1 R(r)^(t') r^(n-1) dr)^(1/t'),

which is the quotient ``||ext 1||_(t') / ||1||_p`` at constant boundary data.
The 1-D integral is refined on a radial rule graded towards ``r = 1``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from . import geometry
from .errors import ExponentError, NonFiniteValue, NonnegativityRequired
from .exponents import Exponents, Regime
from .kernels import Kind, radial_function
from .operators import adjoint_extension, default_ball_rule, extend_ball
from .quadrature import (
    BallRule,
    GridFunction,
    RefineResult,
    SphereRule,
    graded_radial_rule,
    positive_power,
    refine_until,
    sphere_area,
    sphere_rule,
)

__all__ = [
    "ExtremalParams",
    "ConstantResult",
    "subcritical_constant",
    "xi_alpha",
    "c_e1",
    "c_e2",
    "extremal_exponent",
    "extremal_family",
    "transport_boundary_function",
    "transport_bulk_function",
    "halfspace_pullback",
    "el_rhs",
    "el_residual",
]

#: relative tolerance and maximum level of the radial refinement
RADIAL_TOL = 1e-13
RADIAL_MAX_LEVEL = 8


@dataclass(frozen=True)
class ExtremalParams:
    """Parameters ``c``, ``y0bar`` and ``d`` of ``c (|y - y0bar|^2 + d^2)^(-beta)``."""

    c: float = 1.0
    y0bar: tuple = ()
    d: float = 1.0

    def __post_init__(self):
        if not self.c > 0:
            raise ValueError(f"c must be positive, got {self.c}")
        if not self.d > 0:
            raise ValueError(f"d must be positive, got {self.d}")
        object.__setattr__(self, "y0bar", tuple(float(v) for v in np.atleast_1d(self.y0bar)))


@dataclass(frozen=True)
class ConstantResult:
    value: float
    error_estimate: float
    quadrature_level: int
    exponents: Exponents

    def __float__(self):
        return self.value


def _radial_value(e: Exponents, level: int) -> float:
    n = e.n
    radial = radial_function(e.kind, n, e.alpha)
    r, wr = graded_radial_rule(n, level)
    area = sphere_area(n)
    inner = area * float(np.sum(wr * np.asarray(radial(r)) ** e.t_conj))
    return area ** (-1.0 / e.p) * inner ** (1.0 / e.t_conj)


def subcritical_constant(e: Exponents, rel_tol: float = RADIAL_TOL,
                         max_level: int = RADIAL_MAX_LEVEL) -> ConstantResult:
    """Quotient at constant boundary data, by the 1-D radial reduction.

    For reversed exponents this is ``xi_alpha``; for Poisson-type exponents
    it is the subcritical maximum.  At critical exponents it gives ``C_e1``
    or ``C_e2``.

    Raises
    ------
    ExponentError
        If the exponents are not admissible.
    NoConvergence
        If the radial refinement does not settle by ``max_level``.
    """
    e.require_valid()
    res: RefineResult = refine_until(lambda L: _radial_value(e, L), rel_tol, max_level)
    return ConstantResult(res.value, res.error_estimate, res.level, e)


def xi_alpha(e: Exponents, **kw) -> ConstantResult:
    """Subcritical reversed constant ``xi_alpha(p, t)``.

    Examples
    --------
    >>> from hlslab.exponents import Exponents
    >>> round(xi_alpha(Exponents(3, 4.0, 0.7, 0.8, "reversed")).value, 10)
    0.2795551272
    """
    if e.regime is not Regime.REVERSED_SUBCRITICAL:
        raise ExponentError(f"xi_alpha needs reversed subcritical exponents, got {e.regime.value}")
    return subcritical_constant(e, **kw)


def c_e1(n: int, alpha: float, **kw) -> ConstantResult:
    """Sharp constant of the reversed inequality on the half-space (``alpha > n``)."""
    if not alpha > n:
        raise ExponentError(f"C_e1 needs alpha > n, got n={n}, alpha={alpha}")
    return subcritical_constant(Exponents.critical(n, alpha, Kind.REVERSED), **kw)


def c_e2(n: int, alpha: float, **kw) -> ConstantResult:
    """Sharp constant of the Poisson-type inequality on the ball (``n >= 3``, ``2 <= alpha < n``).

    On the half-space the sharp constant is half this value.
    """
    if not (n >= 3 and 2 <= alpha < n):
        raise ExponentError(f"C_e2 needs n >= 3 and 2 <= alpha < n, got n={n}, alpha={alpha}")
    return subcritical_constant(Exponents.critical(n, alpha, Kind.POISSON), **kw)


# extremal family and transport --------------------------------------------------

def extremal_exponent(e: Exponents) -> float:
    """``beta = (n + alpha - 2)/2`` (reversed) or ``(n + alpha - 4)/2`` (Poisson-type)."""
    shift = 2 if e.kind is Kind.REVERSED else 4
    return 0.5 * (e.n + e.alpha - shift)


def extremal_family(e: Exponents, params: ExtremalParams) -> Callable:
    """Boundary bubble ``y -> c (|y - y0bar|^2 + d^2)^(-beta)``.

    The returned callable accepts points with ``n`` coordinates (last ignored)
    or ``n - 1`` coordinates.
    """
    if not e.is_critical:
        raise ExponentError("the extremal family belongs to the critical exponents")
    n = e.n
    y0 = np.zeros(n - 1)
    given = np.asarray(params.y0bar, dtype=float)[: n - 1]
    y0[: given.size] = given
    beta = extremal_exponent(e)
    c, d2 = params.c, params.d**2

    def f(y):
        y = np.asarray(y, dtype=float)[..., : n - 1]
        return c * (np.sum((y - y0) ** 2, axis=-1) + d2) ** (-beta)

    return f


def _pulled(fn: Callable, x: np.ndarray, power: float) -> np.ndarray:
    vals = np.asarray(fn(geometry.conformal_map(x)), dtype=float)
    if not np.all(np.isfinite(vals)):
        raise NonFiniteValue("transported function has non-finite samples")
    return vals * geometry.conformal_factor(x) ** power


def transport_boundary_function(f: Callable, e: Exponents, rule: SphereRule | int = 6) -> GridFunction:
    """Move boundary data on the hyperplane to the sphere, preserving ``L^p`` norms.

    ``F(zeta) = f(T zeta) (2/|zeta - x^o|)^(2(n-1)/p)``.

    Parameters
    ----------
    f : callable
        Function of hyperplane points.
    e : Exponents
        Supplies ``n`` and ``p``.
    rule : SphereRule or int
        Target rule, or a level for :func:`~hlslab.quadrature.sphere_rule`.
    """
    if not isinstance(rule, SphereRule):
        rule = sphere_rule(e.n, rule)
    return GridFunction(rule, _pulled(f, rule.nodes, 2.0 * (e.n - 1) / e.p))


def transport_bulk_function(g: Callable, e: Exponents, ball: BallRule | int = 6) -> GridFunction:
    """Move half-space data to the ball, preserving ``L^t`` norms.

    ``G(xi) = g(T xi) (2/|xi - x^o|)^(2n/t)``.
    """
    if not isinstance(ball, BallRule):
        ball = default_ball_rule(e.n, ball, e.kind)
    return GridFunction(ball, _pulled(g, ball.nodes, 2.0 * e.n / e.t))


def halfspace_pullback(F: Callable, e: Exponents, role: str = "boundary") -> Callable:
    """Inverse of the transports: sphere or ball data as a half-space function.

    Because the conformal map is an involution and ``lambda(T x) lambda(x) = 1``,
    the inverse uses the same weight as the forward transport.
    """
    if role == "boundary":
        power = 2.0 * (e.n - 1) / e.p
    elif role == "bulk":
        power = 2.0 * e.n / e.t
    else:
        raise ValueError(f"role must be 'boundary' or 'bulk', got {role!r}")
    return lambda x: _pulled(F, np.atleast_2d(np.asarray(x, dtype=float)), power)


# Euler-Lagrange residual --------------------------------------------------------

def el_rhs(f: GridFunction, e: Exponents, ball: BallRule | None = None,
           backend: str = "auto") -> GridFunction:
    """Right-hand side ``ext*((ext f)^(t'-1))`` of the Euler-Lagrange equation."""
    ext = extend_ball(f, e, ball, backend)
    inner = ext.with_values(positive_power(ext.values, e.t_conj - 1.0, what="extension"))
    return adjoint_extension(inner, e, backend)


def el_residual(f: GridFunction, e: Exponents, ball: BallRule | None = None,
                backend: str = "auto") -> tuple[float, float]:
    """Relative residual of ``f^(p-1) = mu ext*((ext f)^(t'-1))`` with the best ``mu``.

    The multiplier minimises the weighted ``L^2`` misfit on the sphere rule;
    the returned residual is that misfit divided by ``||f^(p-1)||_2``.

    Raises
    ------
    NonnegativityRequired
        If ``f`` has zero or negative samples (negative powers are undefined).
    NonFiniteValue
        If either side is not finite.
    """
    e.require_valid()
    if not np.all(f.values > 0):
        raise NonnegativityRequired("the Euler-Lagrange residual needs strictly positive f")
    lhs = f.values ** (e.p - 1.0)
    rhs = el_rhs(f, e, ball, backend).values
    if not (np.all(np.isfinite(lhs)) and np.all(np.isfinite(rhs))):
        raise NonFiniteValue("Euler-Lagrange sides are not finite")
    w = f.rule.weights
    rr = float(np.sum(w * rhs * rhs))
    if rr == 0:
        raise NonFiniteValue("Euler-Lagrange right-hand side vanishes")
    mu = float(np.sum(w * lhs * rhs)) / rr
    res = math.sqrt(float(np.sum(w * (lhs - mu * rhs) ** 2)) / float(np.sum(w * lhs * lhs)))
    return res, mu
