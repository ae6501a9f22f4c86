"""Randomised verification suites shared by the command line and the tests.

Each suite returns a :class:`SuiteResult` with one :class:`Check` per sample
or property, so callers can report the worst case and fail on any violation.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field

import numpy as np

from . import geometry
from .constants import (
    ExtremalParams,
    c_e1,
    c_e2,
    extremal_family,
    transport_boundary_function,
    transport_bulk_function,
)
from .errors import TailTruncationWarning
from .exponents import Exponents, critical_p, critical_t
from .fields import random_positive_field
from .halfspace import direct_quotient, halfspace_bump
from .kernels import Kind, KernelSpec, check_k2_derivative_identity
from .operators import default_ball_rule, quotient, young_chain_forward, young_chain_reversed
from .solver import ms_kernel, ms_kernel_positivity

__all__ = [
    "Check",
    "SuiteResult",
    "random_pair",
    "inequality_sampling",
    "k2_identity_sampling",
    "default_young_exponents",
    "young_sampling",
    "conformal_pair",
    "conformal_sampling",
    "kernel_positivity",
]


@dataclass
class Check:
    name: str
    passed: bool
    value: float
    bound: float | None = None
    detail: dict = field(default_factory=dict)


@dataclass
class SuiteResult:
    suite: str
    checks: list
    summary: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    @property
    def failures(self) -> list:
        return [c for c in self.checks if not c.passed]


def random_pair(e: Exponents, level: int, rng: np.random.Generator):
    """Random positive ``(f, g)`` on the sphere and ball rules of a level."""
    ball = default_ball_rule(e.n, level, e.kind)
    amp_f, amp_g = rng.uniform(0.2, 2.0, 2)
    seeds = rng.integers(0, 2**31, 2)
    f = random_positive_field(ball.sphere, int(seeds[0]), amplitude=float(amp_f))
    g = random_positive_field(ball, int(seeds[1]), amplitude=float(amp_g))
    return f, g


def inequality_sampling(n: int, alpha: float, kind, samples: int = 1000, seed: int = 0,
                        level: int = 4, rel_tol: float = 1e-4) -> SuiteResult:
    """Critical quotients of random pairs against the sharp constant.

    Reversed: every quotient ``>= C_e1 (1 - rel_tol)``.  Poisson-type:
    every quotient ``<= C_e2 (1 + rel_tol)`` (ball normalisation).
    """
    kind = Kind(kind)
    e = Exponents.critical(n, alpha, kind)
    const = (c_e1(n, alpha) if kind is Kind.REVERSED else c_e2(n, alpha)).value
    rng = np.random.default_rng(seed)
    checks = []
    for i in range(samples):
        f, g = random_pair(e, level, rng)
        q = quotient(f, g, e)
        if kind is Kind.REVERSED:
            bound = const * (1 - rel_tol)
            ok = q >= bound
        else:
            bound = const * (1 + rel_tol)
            ok = q <= bound
        checks.append(Check(f"sample {i}", bool(ok), q, bound))
    qs = np.array([c.value for c in checks])
    extreme = float(qs.min() if kind is Kind.REVERSED else qs.max())
    return SuiteResult(f"{kind.value}-inequality", checks,
                       dict(constant=const, extreme_quotient=extreme, extreme_ratio=extreme / const))


def k2_identity_sampling(samples: int = 100, n: int = 3, alpha: float = 2.0, seed: int = 0,
                         h: float = 1e-5, rel_tol: float = 1e-6) -> SuiteResult:
    """``K2 = -(1/(n-alpha)) d/dx_n K1`` by centred differences at random pairs."""
    spec = KernelSpec(Kind.POISSON, n, alpha)
    rng = np.random.default_rng(seed)
    checks = []
    while len(checks) < samples:
        x = rng.uniform(-2, 2, n)
        x[-1] = rng.uniform(0.05, 2.0)
        y = np.append(rng.uniform(-2, 2, n - 1), 0.0)
        if np.linalg.norm(x - y) < 0.1:
            continue
        err = check_k2_derivative_identity(spec, x, y, h)
        checks.append(Check(f"pair {len(checks)}", err <= rel_tol, err, rel_tol))
    return SuiteResult("k2-identity", checks, dict(max_error=max(c.value for c in checks)))


def default_young_exponents(n: int, alpha: float, kind) -> Exponents:
    """Subcritical exponents for the Young chains when none are given.

    Reversed: ``0.9`` times the critical pair.  Poisson-type: ``p = 1.25 p_c``
    and ``t`` halfway between ``t_c`` and ``p/(p-1)``.
    """
    kind = Kind(kind)
    pc, tc = critical_p(n, alpha, kind), critical_t(n, alpha)
    if kind is Kind.REVERSED:
        return Exponents(n, alpha, 0.9 * pc, 0.9 * tc, kind)
    p = 1.25 * pc
    return Exponents(n, alpha, p, 0.5 * (tc + p / (p - 1)), kind)


def young_sampling(e: Exponents, samples: int = 50, seed: int = 0, level: int = 4,
                   links=("holder_outer", "holder_inner")) -> SuiteResult:
    """Young chains at random pairs; the listed links must have nonnegative slack.

    All links (including the kernel comparison and the ``h1`` bound) are
    reported in ``detail``.
    """
    rng = np.random.default_rng(seed)
    chain = young_chain_reversed if e.kind is Kind.REVERSED else young_chain_forward
    checks = []
    worst: dict = {}
    for i in range(samples):
        f, g = random_pair(e, level, rng)
        rep = chain(f, g, e)
        slacks = rep.links
        for k, v in slacks.items():
            worst[k] = min(worst.get(k, math.inf), v)
        value = min(slacks[k] for k in links)
        checks.append(Check(f"pair {i}", value >= 0 and not rep.flags, value, 0.0, dict(slacks)))
    return SuiteResult(f"young-{e.kind.value}", checks, dict(min_slack=worst, p=e.p, t=e.t))


#: direct half-space level per kernel; the Poisson-type kernel needs one more
CONFORMAL_HALF_LEVEL = {Kind.REVERSED: 3, Kind.POISSON: 5}


def conformal_pair(e: Exponents, rng: np.random.Generator, half_level: int | None = None,
                   ball_level: int = 10):
    """Half-space quotient by direct quadrature against the transported ball quotient.

    ``f`` is an extremal-family bubble and ``g`` a half-space bump decaying
    like ``|x|^-(n+alpha)``, both with random centre and scale, so the
    transported functions are smooth on the closed sphere and ball.

    Returns
    -------
    q_half, q_ball, factor
        ``factor`` is 1 (reversed) or 2 (Poisson-type), and
        ``factor * q_half`` should equal ``q_ball``.
    """
    n = e.n
    if half_level is None:
        half_level = CONFORMAL_HALF_LEVEL[e.kind]
    c = float(rng.uniform(0.5, 2.0))
    ybar = rng.uniform(-1.0, 1.0, n - 1)
    ybar *= min(1.0, 1.0 / max(np.linalg.norm(ybar), 1e-300))
    d = float(rng.uniform(0.5, 2.0))
    a = rng.uniform(-1.0, 1.0, n - 1)
    b = float(rng.uniform(0.5, 2.0))
    f = extremal_family(e, ExtremalParams(c, tuple(ybar), d))
    g = halfspace_bump(n, a, b, 0.5 * (n + e.alpha), float(rng.uniform(0.5, 2.0)))
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", TailTruncationWarning)
        q_half = direct_quotient(f, g, e, level=half_level, f_center=ybar, f_scale=d,
                                 g_center=a, g_scale=b)
    ball = default_ball_rule(n, ball_level, e.kind)
    F = transport_boundary_function(f, e, ball.sphere)
    G = transport_bulk_function(g, e, ball)
    q_ball = quotient(F, G, e)
    factor = 1.0 if e.kind is Kind.REVERSED else 2.0
    return q_half, q_ball, factor


def conformal_sampling(e: Exponents, samples: int = 20, seed: int = 0, half_level: int | None = None,
                       ball_level: int = 10, rel_tol: float = 1e-5) -> SuiteResult:
    """Relative agreement of :func:`conformal_pair` quotients over random pairs."""
    rng = np.random.default_rng(seed)
    checks = []
    for i in range(samples):
        qh, qb, factor = conformal_pair(e, rng, half_level, ball_level)
        rel = abs(factor * qh - qb) / qb
        checks.append(Check(f"pair {i}", rel <= rel_tol, rel, rel_tol,
                            dict(halfspace=qh, ball=qb, factor=factor)))
    return SuiteResult(f"conformal-{e.kind.value}", checks, dict(max_rel=max(c.value for c in checks)))


def kernel_positivity(y0=(0.0, 0.0), lam: float = 1.0, samples: int = 10_000, alpha: float = 2.0,
                      n: int = 3, seed: int = 0, sphere_tol: float = 1e-10) -> SuiteResult:
    """Moving-spheres kernel: positive off the sphere, zero on it."""
    m = ms_kernel_positivity(y0, lam, samples, alpha, n, seed)
    rng = np.random.default_rng(seed + 1)
    c = geometry.boundary_point(y0, n)
    u = rng.standard_normal((samples, n))
    u[:, -1] = np.abs(u[:, -1])
    u /= np.linalg.norm(u, axis=1, keepdims=True)
    on_sphere = c + lam * u
    v = rng.standard_normal((samples, n - 1))
    v /= np.linalg.norm(v, axis=1, keepdims=True)
    eta = c[: n - 1] + lam * rng.uniform(1.0, 3.0, (samples, 1)) * v
    zero = float(np.max(np.abs(ms_kernel(on_sphere, eta, c, lam, alpha, n))))
    checks = [
        Check("minimum off the sphere", m > 0, m, 0.0),
        Check("zero on the sphere", zero <= sphere_tol, zero, sphere_tol),
    ]
    return SuiteResult("kernel-positivity", checks, dict(minimum=m, sphere_max=zero))
