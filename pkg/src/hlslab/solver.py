"""Subcritical extremal problem: fixed-point solver, symmetry and the critical limit.

At subcritical exponents the extremal boundary function is constant.  The
solver checks this from a random start by iterating the Euler-Lagrange map

    f  <-  normalize( ext*((ext f)^(t'-1))^(1/(p-1)) ),

damped and renormalised to ``||f||_p = 1``.  The sweep follows a geometric
path of subcritical exponents towards the critical pair and extrapolates the
constants, which should reach ``C_e1`` or ``C_e2``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import geometry
from .constants import ConstantResult, c_e1, c_e2, el_residual, el_rhs, subcritical_constant
from .errors import ExponentError, NoConvergence, PositivityLoss
from .exponents import Exponents, critical_p, critical_t, validate_exponents
from .fields import random_positive_field
from .kernels import Kind
from .operators import default_ball_rule, extension_ratio, lp_functional
from .quadrature import GridFunction, SphereRule, integrate, sphere_area, sphere_rule

__all__ = [
    "SolveConfig",
    "SolveResult",
    "solve_subcritical",
    "symmetry_deficit",
    "SweepRecord",
    "SweepResult",
    "sweep_path",
    "sweep_to_critical",
    "richardson",
    "ms_kernel",
    "ms_kernel_positivity",
]

POSITIVITY_FLOOR = 1e-300
MAX_FLOOR_HITS = 10


@dataclass(frozen=True)
class SolveConfig:
    """Iteration settings.

    Parameters
    ----------
    damping : float
        Weight of the new iterate, in ``(0, 1]``.
    tol : float
        Stop when the relative sup-norm change falls below this.
    max_iters : int
    init : {'constant', 'random'}
    seed : int
        Seed of the random initial field.
    b2_cap : float, optional
        ``L^2`` cap to monitor (never enforced).
    """

    damping: float = 0.5
    tol: float = 1e-11
    max_iters: int = 500
    init: str = "constant"
    seed: int = 0
    b2_cap: float | None = None

    def __post_init__(self):
        if not 0 < self.damping <= 1:
            raise ValueError(f"damping must lie in (0, 1], got {self.damping}")
        if not self.tol > 0:
            raise ValueError("tol must be positive")
        if int(self.max_iters) != self.max_iters or self.max_iters < 1:
            raise ValueError("max_iters must be a positive integer")
        if self.init not in ("constant", "random"):
            raise ValueError(f"init must be 'constant' or 'random', got {self.init!r}")


@dataclass(frozen=True)
class SolveResult:
    """Outcome of :func:`solve_subcritical`.

    ``ratio_history`` holds ``||ext f||_(t') / ||f||_p`` at every iterate and
    ``change_history`` the relative sup-norm updates.  ``b2_bounds`` gives the
    ``L^2`` cap bound for both readings of its exponent sign, keyed by
    ``'minus'`` (``|S|^(1/2 - 1/p)``) and ``'plus'`` (``|S|^(1/p - 1/2)``).
    """

    f: GridFunction
    xi_estimate: float
    el_residual: float
    iterations: int
    symmetry_deficit: float
    l2_value: float
    constancy_deviation: float
    ratio_history: tuple = ()
    change_history: tuple = ()
    b2_bounds: dict = field(default_factory=dict)
    b2_violation: bool | None = None


def _normalize(v: np.ndarray, rule, p: float) -> np.ndarray:
    # divide by the max first so tiny iterates do not underflow in |v|^p
    w = v / np.max(np.abs(v))
    return w / lp_functional(GridFunction(rule, w), p)


def _initial(e: Exponents, sph: SphereRule, cfg: SolveConfig) -> np.ndarray:
    if cfg.init == "constant":
        v = np.ones(sph.size)
    else:
        v = random_positive_field(sph, cfg.seed).values
    return _normalize(v, sph, e.p)


def solve_subcritical(e: Exponents, cfg: SolveConfig = SolveConfig(), level: int = 6,
                      backend: str = "auto", callback=None) -> SolveResult:
    """Iterate the subcritical Euler-Lagrange map to a fixed point.

    Parameters
    ----------
    e : Exponents
        Subcritical reversed or Poisson-type exponents.
    cfg : SolveConfig
    level : int
        Sphere/ball rule level.
    backend : {'auto', 'spectral', 'direct'}
    callback : callable, optional
        Called as ``callback(iteration, f)`` after every update.

    Raises
    ------
    ExponentError
        If the exponents are invalid or critical.
    NoConvergence
        After ``cfg.max_iters`` iterations; ``value`` is the last iterate.
    PositivityLoss
        If the update hits the positivity floor on more than ten
        consecutive iterations.
    """
    report = validate_exponents(e)
    if not report.ok:
        raise ExponentError("; ".join(report.violations))
    if e.is_critical:
        raise ExponentError("the fixed-point solver needs subcritical exponents")
    sph = sphere_rule(e.n, level)
    ball = default_ball_rule(e.n, level, e.kind)
    f = GridFunction(sph, _initial(e, sph, cfg))
    ratios = [extension_ratio(f, e, ball, backend)]
    changes = []
    floor_hits = 0
    converged = False
    it = 0
    for it in range(1, cfg.max_iters + 1):
        rhs = el_rhs(f, e, ball, backend).values
        new = rhs ** (1.0 / (e.p - 1.0))
        if np.any(~(new > POSITIVITY_FLOOR)):
            floor_hits += 1
            if floor_hits > MAX_FLOOR_HITS:
                raise PositivityLoss("iterate kept hitting the positivity floor", iterate=f, iteration=it)
            new = np.where(new > POSITIVITY_FLOOR, new, POSITIVITY_FLOOR)
        else:
            floor_hits = 0
        new = _normalize(new, sph, e.p)
        mixed = _normalize((1.0 - cfg.damping) * f.values + cfg.damping * new, sph, e.p)
        change = float(np.max(np.abs(mixed - f.values)) / np.max(np.abs(mixed)))
        f = GridFunction(sph, mixed)
        changes.append(change)
        ratios.append(extension_ratio(f, e, ball, backend))
        if callback is not None:
            callback(it, f)
        if change <= cfg.tol:
            converged = True
            break
    if not converged:
        raise NoConvergence(
            f"fixed point not reached in {cfg.max_iters} iterations",
            value=f, error_estimate=changes[-1] if changes else None, level=it,
        )
    res, _ = el_residual(f, e, ball, backend)
    l2 = math.sqrt(integrate(f.with_values(f.values**2)))
    area = sphere_area(e.n)
    bounds = {"minus": area ** (0.5 - 1.0 / e.p), "plus": area ** (1.0 / e.p - 0.5)}
    mean = float(np.mean(f.values))
    return SolveResult(
        f=f,
        xi_estimate=ratios[-1],
        el_residual=res,
        iterations=it,
        symmetry_deficit=symmetry_deficit(f),
        l2_value=l2,
        constancy_deviation=float(np.max(np.abs(f.values - mean)) / mean),
        ratio_history=tuple(ratios),
        change_history=tuple(changes),
        b2_bounds=bounds,
        b2_violation=None if cfg.b2_cap is None else bool(l2 > cfg.b2_cap),
    )


# symmetry -------------------------------------------------------------------------

def _grid_maps(sph: SphereRule, rotations: int, seed: int):
    """Index permutations of tangential reflections and azimuthal rotations."""
    shape = sph.shape
    idx = np.arange(sph.size).reshape(shape)
    naz = shape[-1]
    b = np.arange(naz)
    maps = [
        idx[..., (naz // 2 - b) % naz],  # omega_1 -> -omega_1
        idx[..., (-b) % naz],            # omega_2 -> -omega_2
    ]
    for axis in range(1, len(shape) - 1):  # inner polar angles: omega_j -> -omega_j
        maps.append(np.flip(idx, axis=axis))
    rng = np.random.default_rng(seed)
    for s in rng.integers(1, naz, size=rotations):
        maps.append(np.roll(idx, -int(s), axis=-1))
    return [m.reshape(-1) for m in maps]


def symmetry_deficit(f: GridFunction, rotations: int = 8, seed: int = 0) -> float:
    """``max |f(zeta) - f(sigma zeta)| / max |f|`` over tangential symmetries ``sigma``.

    The symmetries are the reflections of the coordinates orthogonal to the
    axis through the centre and the top point, plus ``rotations`` random
    rotations about that axis.  All of them permute the product grid exactly
    (the azimuthal count is even and the polar nodes are symmetric).
    """
    sph = f.rule
    if not isinstance(sph, SphereRule):
        raise TypeError("symmetry_deficit needs a function on a sphere rule")
    scale = float(np.max(np.abs(f.values)))
    if scale == 0:
        raise ValueError("symmetry_deficit needs a nonzero function")
    v = f.values
    return max(float(np.max(np.abs(v - v[m]))) for m in _grid_maps(sph, rotations, seed)) / scale


# sweep to the critical exponents -------------------------------------------------

@dataclass(frozen=True)
class SweepRecord:
    p: float
    t: float
    xi: float
    level: int


@dataclass(frozen=True)
class SweepResult:
    """Sweep records, the extrapolated limit and the critical constant."""

    records: tuple
    limit: float
    limit_error_estimate: float
    critical: ConstantResult
    first_k: int

    @property
    def gap(self) -> float:
        return abs(self.limit - self.critical.value)

    @property
    def successive_gaps(self) -> np.ndarray:
        xi = np.array([r.xi for r in self.records])
        return np.abs(np.diff(xi))


def sweep_path(n: int, alpha: float, kind, k: int) -> Exponents:
    """Exponents ``p_c (1 -/+ 2^-k)``, ``t_c (1 -/+ 2^-k)`` (minus for reversed)."""
    kind = Kind(kind)
    sign = -1.0 if kind is Kind.REVERSED else 1.0
    s = 1.0 + sign * 2.0**-k
    return Exponents(n, alpha, critical_p(n, alpha, kind) * s, critical_t(n, alpha) * s, kind)


def richardson(values, ratio: float = 2.0, order: int | None = None):
    """Richardson extrapolation of a sequence whose error shrinks by ``ratio``.

    Returns the highest-order diagonal entry and the difference to the
    previous order as an error estimate.
    """
    v = np.asarray(values, dtype=float)
    m = v.size if order is None else min(v.size, order + 1)
    table = [v[-m:]]
    for j in range(1, m):
        prev = table[-1]
        c = ratio**j
        table.append((c * prev[1:] - prev[:-1]) / (c - 1.0))
    best = float(table[-1][-1])
    est = abs(best - float(table[-2][-1])) if m > 1 else math.inf
    return best, est


def sweep_to_critical(n: int, alpha: float, kind, steps: int = 10, order: int = 4,
                      max_k: int = 60) -> SweepResult:
    """Follow the geometric path to the critical exponents and extrapolate.

    The path starts at the first ``k >= 1`` whose exponents are admissible
    (for the Poisson-type path small ``k`` can violate ``1/p + 1/t >= 1``)
    and takes ``steps`` points ``k, k+1, ...``.  Each constant comes from the
    radial reduction, which is the constant-function quotient.

    Raises
    ------
    ValueError
        If ``steps < 3``.
    ExponentError
        If no admissible start is found.
    """
    if int(steps) != steps or steps < 3:
        raise ValueError(f"the sweep needs at least 3 steps, got {steps}")
    kind = Kind(kind)
    crit = c_e1(n, alpha) if kind is Kind.REVERSED else c_e2(n, alpha)
    k0 = next((k for k in range(1, max_k) if validate_exponents(sweep_path(n, alpha, kind, k)).ok), None)
    if k0 is None:
        raise ExponentError("no admissible subcritical exponents on the sweep path")
    records = []
    for k in range(k0, k0 + steps):
        e = sweep_path(n, alpha, kind, k)
        c = subcritical_constant(e)
        records.append(SweepRecord(e.p, e.t, c.value, c.quadrature_level))
    limit, est = richardson([r.xi for r in records], 2.0, order)
    return SweepResult(tuple(records), limit, est, crit, k0)


# moving-spheres kernel ----------------------------------------------------------

def ms_kernel(xi, eta, y0, lam: float, alpha: float, n: int | None = None) -> np.ndarray:
    """Kernel of the moving-spheres comparison for the Poisson-type system.

    ``xi_n/|xi - eta|^m - (lam/|xi - y0|)^m xi_n/|xi^(y0,lam) - eta|^m`` with
    ``m = n - alpha + 2`` and ``xi^(y0,lam)`` the inversion of ``xi``.
    """
    xi = np.atleast_2d(np.asarray(xi, dtype=float))
    n = xi.shape[-1] if n is None else n
    eta = geometry.boundary_point(np.atleast_2d(np.asarray(eta, dtype=float)), n)
    y0 = geometry.boundary_point(y0, n)
    m = n - alpha + 2.0
    xin = xi[..., -1]
    first = xin / np.linalg.norm(xi - eta, axis=-1) ** m
    ref = geometry.sphere_inversion(xi, y0, lam)
    scale = (lam / np.linalg.norm(xi - y0, axis=-1)) ** m
    return first - scale * xin / np.linalg.norm(ref - eta, axis=-1) ** m


def _outside_points(rng, count: int, dim: int, y0, lam: float, upper: bool):
    d = rng.standard_normal((count, dim))
    if upper:
        d[:, -1] = np.abs(d[:, -1])
    d /= np.linalg.norm(d, axis=1, keepdims=True)
    r = lam * (1.0 + np.exp(rng.uniform(np.log(1e-3), np.log(1e2), count)))
    return y0[:dim] + r[:, None] * d


def ms_kernel_positivity(y0, lam: float, samples: int = 10_000, alpha: float = 2.0, n: int = 3,
                         seed: int = 0) -> float:
    """Minimum of :func:`ms_kernel` over random ``xi``, ``eta`` outside the ``lam``-ball.

    ``xi`` is drawn from the upper half-space and ``eta`` from the boundary,
    both with ``|. - y0| = lam (1 + s)`` and ``s`` log-uniform in
    ``[1e-3, 1e2]``.
    """
    if not lam > 0:
        raise ValueError("lam must be positive")
    rng = np.random.default_rng(seed)
    c = geometry.boundary_point(y0, n)
    xi = _outside_points(rng, samples, n, c, lam, upper=True)
    eta = _outside_points(rng, samples, n - 1, c, lam, upper=False)
    return float(np.min(ms_kernel(xi, eta, c, lam, alpha, n)))
