"""Product quadrature rules on the sphere and ball, and grid functions.

Rules are built once per ``(n, level, grading)`` and cached; their arrays are
read-only so a rule can be shared freely.  The sphere rule uses
Gauss-Gegenbauer nodes in the cosine of every polar angle (Gauss-Legendre
when ``n = 3``) and a uniform grid in the azimuth, so it integrates spherical
polynomials of degree below ``2 * n_polar`` exactly.
"""

from __future__ import annotations

import enum
import functools
import math
import warnings
from dataclasses import dataclass, field
from typing import Callable, NamedTuple

import numpy as np
from scipy.special import gamma, roots_jacobi, roots_legendre

from .errors import (
    ClampWarning,
    NegativeValueUnderFractionalPower,
    NoConvergence,
    NonFiniteValue,
    NonnegativityRequired,
)
from .geometry import ball_center, check_dimension


class DomainKind(str, enum.Enum):
    SPHERE = "SphereBn"
    BALL = "BallBn"
    BOUNDARY = "BoundaryHalfSpace"
    HALFSPACE = "HalfSpace"


def sphere_area(n: int) -> float:
    """Surface area ``|S^(n-1)|`` of the unit sphere in ``R^n`` (``n >= 1``)."""
    return 2.0 * math.pi ** (n / 2) / gamma(n / 2)


def ball_volume(n: int) -> float:
    """Volume ``omega_n = |S^(n-1)| / n`` of the unit ball in ``R^n``."""
    return sphere_area(n) / n


@dataclass(frozen=True)
class Domain:
    kind: DomainKind
    dim: int

    def __post_init__(self):
        object.__setattr__(self, "kind", DomainKind(self.kind))

    @property
    def compact(self) -> bool:
        return self.kind in (DomainKind.SPHERE, DomainKind.BALL)

    def measure(self) -> float:
        """Total measure of a compact domain (``inf`` otherwise)."""
        if self.kind is DomainKind.SPHERE:
            return sphere_area(self.dim)
        if self.kind is DomainKind.BALL:
            return ball_volume(self.dim)
        return math.inf


@dataclass(frozen=True)
class Grading:
    """Geometric grading of the radial rule towards the sphere ``r = 1``.

    Parameters
    ----------
    ratio : float
        Panel ``k`` covers ``[1 - ratio**k, 1 - ratio**(k+1)]``.
    layers : int
        Number of graded panels added on top of the base panel
        ``[0, 1 - ratio]``; the last panel reaches ``r = 1``.
    nodes_per_layer : int, optional
        Gauss-Legendre nodes per graded panel, default ``2 * level + 2``.
    """

    ratio: float = 0.5
    layers: int = 8
    nodes_per_layer: int | None = None

    def __post_init__(self):
        if not 0.0 < self.ratio < 1.0:
            raise ValueError("grading ratio must lie in (0, 1)")
        if self.layers < 1:
            raise ValueError("grading needs at least one layer")


DEFAULT_GRADING = Grading()


def _frozen(a) -> np.ndarray:
    a = np.ascontiguousarray(a, dtype=float)
    a.setflags(write=False)
    return a


@dataclass(frozen=True, eq=False, kw_only=True)
class QuadratureRule:
    """Nodes and positive weights on one of the four domains."""

    domain: Domain
    nodes: np.ndarray
    weights: np.ndarray
    level: int
    grading: Grading | None = None

    def __post_init__(self):
        nodes = _frozen(self.nodes)
        weights = _frozen(self.weights)
        if nodes.ndim != 2 or nodes.shape[1] != self.domain.dim:
            raise ValueError("nodes must have shape (N, n)")
        if weights.shape != (nodes.shape[0],):
            raise ValueError("one weight per node is required")
        if np.any(weights <= 0):
            raise ValueError("quadrature weights must be positive")
        object.__setattr__(self, "nodes", nodes)
        object.__setattr__(self, "weights", weights)

    @property
    def n(self) -> int:
        return self.domain.dim

    @property
    def size(self) -> int:
        return self.weights.size

    def __len__(self):
        return self.size


@dataclass(frozen=True, eq=False, kw_only=True)
class SphereRule(QuadratureRule):
    """Product rule on the sphere ``|x - z^o| = 1``.

    Nodes are stored in C order over ``shape = (n_polar,)*(n-2) + (n_azimuth,)``.
    The first polar angle is measured from the top point (the origin), i.e.
    ``directions[:, -1]`` equals the cosine of that angle.
    """

    directions: np.ndarray
    polar_nodes: tuple
    polar_weights: tuple
    n_azimuth: int

    def __post_init__(self):
        super().__post_init__()
        object.__setattr__(self, "directions", _frozen(self.directions))

    @property
    def shape(self) -> tuple:
        return tuple(len(x) for x in self.polar_nodes) + (self.n_azimuth,)

    @property
    def n_polar(self) -> int:
        return len(self.polar_nodes[0]) if self.polar_nodes else 0


@dataclass(frozen=True, eq=False, kw_only=True)
class BallRule(QuadratureRule):
    """Radial-times-sphere product rule; nodes are ordered radius-major."""

    sphere: SphereRule
    radii: np.ndarray
    radial_weights: np.ndarray

    def __post_init__(self):
        super().__post_init__()
        object.__setattr__(self, "radii", _frozen(self.radii))
        object.__setattr__(self, "radial_weights", _frozen(self.radial_weights))

    @property
    def shape(self) -> tuple:
        return (self.radii.size, self.sphere.size)


@dataclass(frozen=True, eq=False)
class GridFunction:
    """Samples of a real function at the nodes of a quadrature rule.

    ``nonnegative`` is detected from the data when left as ``None``;
    passing ``True`` for data with negative entries raises.
    """

    rule: QuadratureRule
    values: np.ndarray
    nonnegative: bool | None = field(default=None)

    def __post_init__(self):
        v = np.array(self.values, dtype=float).reshape(-1)
        if v.size != self.rule.size:
            raise ValueError(f"expected {self.rule.size} values, got {v.size}")
        v.setflags(write=False)
        object.__setattr__(self, "values", v)
        finite = np.all(np.isfinite(v))
        is_nonneg = bool(finite and np.all(v >= 0))
        if self.nonnegative is None:
            object.__setattr__(self, "nonnegative", is_nonneg)
        elif self.nonnegative and not is_nonneg:
            raise NonnegativityRequired("values violate the nonnegativity flag")

    @classmethod
    def from_callable(cls, rule: QuadratureRule, fn: Callable) -> "GridFunction":
        """Sample ``fn(nodes)`` (vectorised over an ``(N, n)`` array)."""
        return cls(rule, np.asarray(fn(rule.nodes), dtype=float))

    @classmethod
    def constant(cls, rule: QuadratureRule, c: float = 1.0) -> "GridFunction":
        return cls(rule, np.full(rule.size, float(c)))

    def with_values(self, values) -> "GridFunction":
        return GridFunction(self.rule, values)

    def scaled(self, c: float) -> "GridFunction":
        return GridFunction(self.rule, c * self.values)

    def require_nonnegative(self, what: str = "this operation"):
        if not self.nonnegative:
            raise NonnegativityRequired(f"{what} needs a nonnegative function")
        return self

    @property
    def grid(self) -> np.ndarray:
        """Values reshaped to the structured shape of the rule."""
        return self.values.reshape(self.rule.shape)


# rule construction ------------------------------------------------------------

def _polar_rule(n_nodes: int, power: float):
    """Nodes/weights in x = cos(theta) for the weight (1 - x^2)^power on [-1, 1]."""
    if power == 0:
        x, w = roots_legendre(n_nodes)
    else:
        x, w = roots_jacobi(n_nodes, power, power)
    return x, w


def unit_sphere_product(n: int, n_polar: int, n_azimuth: int):
    """Product rule on the unit sphere ``S^(n-1)`` centred at the origin.

    Returns
    -------
    directions : ndarray, shape (N, n)
    weights : ndarray, shape (N,)
    polar : list of (nodes, weights)
        One entry per polar angle, nodes in ``cos(theta_j)``.
    """
    phi = 2.0 * np.pi * np.arange(n_azimuth) / n_azimuth
    w_phi = np.full(n_azimuth, 2.0 * np.pi / n_azimuth)
    polar = [_polar_rule(n_polar, 0.5 * (n - 3 - j)) for j in range(n - 2)]
    axes = [x for x, _ in polar] + [phi]
    grids = np.meshgrid(*axes, indexing="ij")
    wgrids = np.meshgrid(*([w for _, w in polar] + [w_phi]), indexing="ij")
    weights = np.prod(np.stack([g.ravel() for g in wgrids]), axis=0)
    dirs = np.empty((weights.size, n))
    sin_prod = np.ones(weights.size)
    for j in range(n - 2):
        x = grids[j].ravel()
        dirs[:, n - 1 - j] = sin_prod * x
        sin_prod = sin_prod * np.sqrt(np.clip(1.0 - x * x, 0.0, None))
    ph = grids[-1].ravel()
    dirs[:, 0] = sin_prod * np.cos(ph)
    dirs[:, 1] = sin_prod * np.sin(ph)
    return dirs, weights, polar


def counts_for_level(level: int) -> tuple[int, int]:
    """Polar and azimuthal node counts at a refinement level."""
    return 4 * level, 8 * level


def _check_level(level: int) -> int:
    if int(level) != level or level < 1:
        raise ValueError(f"level must be a positive integer, got {level}")
    return int(level)


@functools.lru_cache(maxsize=64)
def sphere_rule(n: int, level: int) -> SphereRule:
    """Product rule on the sphere ``partial B^n`` at a refinement level.

    ``level`` gives ``4*level`` nodes per polar angle and ``8*level`` azimuthal
    nodes.  Supported for ``2 <= n <= 6`` (``n = 2`` is the circle).
    """
    n = check_dimension(n)
    level = _check_level(level)
    n_polar, n_az = counts_for_level(level)
    dirs, w, polar = unit_sphere_product(n, n_polar, n_az)
    return SphereRule(
        domain=Domain(DomainKind.SPHERE, n),
        nodes=dirs + ball_center(n),
        weights=w,
        level=level,
        directions=dirs,
        polar_nodes=tuple(_frozen(x) for x, _ in polar),
        polar_weights=tuple(_frozen(v) for _, v in polar),
        n_azimuth=n_az,
    )


def _jacobi_radial(m: int, n: int, a: float = 0.0, b: float = 1.0):
    """Gauss rule for int_a^b f(r) r^(n-1) dr with a = 0 exact in the weight."""
    x, w = roots_jacobi(m, 0.0, n - 1.0)
    r = 0.5 * (x + 1.0)
    w = w / 2.0**n
    return a + (b - a) * r, w * (b - a) ** n


def radial_rule(n: int, level: int, grading: Grading | None = None):
    """Radial nodes in (0, 1) and weights for ``int_0^1 f(r) r^(n-1) dr``."""
    m = 4 * level
    if grading is None:
        return _jacobi_radial(m, n)
    q = grading.nodes_per_layer or 2 * level + 2
    edge = 1.0 - grading.ratio
    r0, w0 = _jacobi_radial(m, n, 0.0, edge)
    xs, ws = roots_legendre(q)
    rs, wts = [r0], [w0]
    for k in range(1, grading.layers + 1):
        a = 1.0 - grading.ratio**k
        b = 1.0 - grading.ratio ** (k + 1) if k < grading.layers else 1.0
        r = 0.5 * (b - a) * xs + 0.5 * (a + b)
        rs.append(r)
        wts.append(0.5 * (b - a) * ws * r ** (n - 1))
    return np.concatenate(rs), np.concatenate(wts)


@functools.lru_cache(maxsize=64)
def ball_rule(n: int, level: int, grading: Grading | None = None) -> BallRule:
    """Product rule on the ball ``B^n`` (radial rule times :func:`sphere_rule`).

    Parameters
    ----------
    n, level : int
        Dimension and refinement level (``4*level`` Gauss-Jacobi radial nodes
        for the weight ``r^(n-1)``).
    grading : Grading, optional
        Adds geometrically graded panels towards ``r = 1``.
    """
    sph = sphere_rule(n, level)
    r, wr = radial_rule(n, _check_level(level), grading)
    nodes = (r[:, None, None] * sph.directions[None, :, :]).reshape(-1, n) + ball_center(n)
    return BallRule(
        domain=Domain(DomainKind.BALL, n),
        nodes=nodes,
        weights=np.outer(wr, sph.weights).ravel(),
        level=sph.level,
        grading=grading,
        sphere=sph,
        radii=r,
        radial_weights=wr,
    )


def graded_radial_rule(n: int, level: int):
    """1-D rule for ``int_0^1 F(r) r^(n-1) dr`` with panels graded towards ``r = 1``.

    Intended for integrands with an integrable singularity or a boundary
    layer at ``r = 1``; ``10 * level`` halving panels are used.
    """
    q = 8 + 4 * level
    layers = 10 * level
    edges = [0.0, 0.5] + [1.0 - 0.5**k for k in range(2, layers + 1)] + [1.0]
    edges = np.asarray(edges)
    x, w = roots_legendre(q)
    a = edges[:-1, None]
    b = edges[1:, None]
    r = (0.5 * (b - a) * x + 0.5 * (a + b)).ravel()
    wr = (0.5 * (b - a) * w).ravel() * r ** (n - 1)
    return r, wr


def radial_integral(fn: Callable, n: int, level: int = 4) -> float:
    """``|S^(n-1)| int_0^1 fn(r) r^(n-1) dr``, the ball integral of a radial function."""
    r, wr = graded_radial_rule(n, level)
    return float(sphere_area(n) * np.sum(wr * np.asarray(fn(r), dtype=float)))


# integration -----------------------------------------------------------------

def integrate(f: GridFunction) -> float:
    """Quadrature sum ``sum(weights * values)``.

    numpy's pairwise summation keeps the reduction order fixed, so results are
    reproducible bit for bit.
    """
    v = f.values
    if not np.all(np.isfinite(v)):
        raise NonFiniteValue("grid function has non-finite samples")
    s = float(np.sum(f.rule.weights * v))
    if not math.isfinite(s):
        raise NonFiniteValue("quadrature sum overflowed")
    return s


def positive_power(values: np.ndarray, p: float, *, what: str = "values") -> np.ndarray:
    """Raise nonnegative samples to a fractional or negative power.

    Zeros are clamped to ``1e-300`` (with a :class:`ClampWarning`) whenever
    ``p < 1``, because the result later enters negative powers.
    """
    v = np.asarray(values, dtype=float)
    if np.any(v < 0):
        raise NegativeValueUnderFractionalPower(f"{what} has negative entries")
    if p < 1 and np.any(v == 0):
        warnings.warn(f"{what}: zero samples clamped to 1e-300", ClampWarning, stacklevel=3)
        v = np.maximum(v, 1e-300)
    return v**p


class RefineResult(NamedTuple):
    value: float
    error_estimate: float
    level: int


def refine_until(
    functional: Callable[[int], float],
    rel_tol: float,
    max_level: int,
    start_level: int = 1,
) -> RefineResult:
    """Evaluate ``functional(level)`` at increasing levels until it settles.

    Stops at the first level ``L`` with ``|v_L - v_(L-1)| <= rel_tol*|v_L|``.

    Raises
    ------
    NonFiniteValue
        If the functional returns NaN or infinity.
    NoConvergence
        If ``max_level`` is reached; the payload carries the best value.
    """
    if rel_tol <= 0:
        raise ValueError("rel_tol must be positive")
    prev = None
    est = math.inf
    for level in range(start_level, max_level + 1):
        v = float(functional(level))
        if not math.isfinite(v):
            raise NonFiniteValue(f"functional returned {v} at level {level}")
        if prev is not None:
            est = abs(v - prev)
            if est <= rel_tol * abs(v):
                return RefineResult(v, est, level)
        prev = v
    raise NoConvergence(
        f"no convergence to rel_tol={rel_tol} by level {max_level}",
        value=prev,
        error_estimate=est,
        level=max_level,
    )
