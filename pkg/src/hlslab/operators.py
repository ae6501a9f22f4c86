"""Extension operators between the sphere and the ball, norms and quotients.

Two integral operators carry boundary data ``f`` on ``partial B`` into the
ball,

    E f(x) = int |x - y|^(alpha - n) f(y) dy                  (reversed, alpha > n)
    P f(x) = int (1 - |x - z^o|^2) |x - y|^-(n-alpha+2) f(y) dy   (Poisson-type)

and their adjoints bring ball data back to the sphere (``Q`` is the adjoint of
``P``).  Both kernels are zonal, so on the ``n = 3`` grid they are applied
through the harmonic transform with Funk-Hecke multipliers (``'spectral'``
backend).  The ``'direct'`` backend sums the kernel over the sphere nodes with
the singular part subtracted and restored from the exact radial integral; it
works in every dimension and serves as an independent check of the spectral
path.  Both backends are exact discrete adjoint pairs.
"""

from __future__ import annotations

import functools
import math
from dataclasses import dataclass, field

import numpy as np

from . import geometry
from ._parallel import ordered_map
from .errors import ExponentError, NonFiniteValue, ZeroDenominator
from .exponents import Exponents, Regime, validate_exponents
from .halfspace import direct_extension
from .harmonics import SphericalTransform
from .kernels import Kind, ZonalKernel, funk_hecke, sphere_profile_integral, zonal_radial
from .quadrature import (
    DEFAULT_GRADING,
    BallRule,
    DomainKind,
    GridFunction,
    SphereRule,
    ball_rule,
    graded_radial_rule,
    integrate,
    positive_power,
    sphere_rule,
)

__all__ = [
    "ZonalOperator",
    "zonal_operator",
    "kernel_for",
    "default_ball_rule",
    "extend_ball",
    "adjoint_extension",
    "boundary_trace_Q",
    "pairing",
    "lp_functional",
    "quotient_reversed",
    "quotient_poisson",
    "quotient",
    "optimal_partner",
    "extension_ratio",
    "extend_halfspace",
    "ChainReport",
    "young_chain_reversed",
    "young_chain_forward",
    "young_kernels",
]


# operator backends ------------------------------------------------------------

class ZonalOperator:
    """A zonal kernel acting from ``ball.sphere`` samples to ``ball`` samples.

    Array arguments may carry leading batch axes.  Sphere data has trailing
    shape ``(N,)``; ball data has trailing shape ``(M * N,)`` in the
    radius-major node order of :class:`~hlslab.quadrature.BallRule`.
    """

    backend = "abstract"

    def __init__(self, kernel: ZonalKernel, ball: BallRule):
        if kernel.n != ball.n:
            raise ValueError("kernel and rule dimensions differ")
        self.kernel = kernel
        self.ball = ball
        self.sphere = ball.sphere
        self.m, self.N = ball.shape

    def extend(self, f):
        raise NotImplementedError

    def adjoint(self, g):
        raise NotImplementedError

    def evaluate(self, f, points):
        raise NotImplementedError

    def _check(self, v, size):
        v = np.asarray(v, dtype=float)
        if v.shape[-1] != size:
            raise ValueError(f"expected trailing size {size}, got {v.shape[-1]}")
        return v


class SpectralOperator(ZonalOperator):
    """Funk-Hecke application on the three-dimensional product grid."""

    backend = "spectral"

    def __init__(self, kernel: ZonalKernel, ball: BallRule):
        super().__init__(kernel, ball)
        self.sht = SphericalTransform(ball.sphere)
        self.lmax = self.sht.lmax
        self.mult = funk_hecke(kernel, ball.radii, self.lmax)

    def extend(self, f):
        f = self._check(f, self.N)
        coeffs = self.sht.analysis(f)
        scaled = [self.mult[:, m:] * c[..., None, :] for m, c in enumerate(coeffs)]
        out = self.sht.synthesis(scaled)
        return out.reshape(f.shape[:-1] + (self.m * self.N,))

    def adjoint(self, g):
        g = self._check(g, self.m * self.N)
        layers = g.reshape(g.shape[:-1] + (self.m, self.N))
        coeffs = self.sht.analysis(layers)
        wr = self.ball.radial_weights
        summed = [np.einsum("i,il,...il->...l", wr, self.mult[:, m:], c) for m, c in enumerate(coeffs)]
        return self.sht.synthesis(summed)

    def evaluate(self, f, points):
        f = self._check(f, self.N)
        pts = np.atleast_2d(np.asarray(points, dtype=float))
        v = pts - geometry.ball_center(3)
        r = np.linalg.norm(v, axis=-1)
        if np.any(r >= 1.0):
            raise ValueError("evaluation points must lie in the open ball")
        dirs = np.where(r[:, None] > 0, v / np.where(r > 0, r, 1.0)[:, None], [0.0, 0.0, 1.0])
        mult = funk_hecke(self.kernel, r, self.lmax)
        return self.sht.evaluate(self.sht.analysis(f), dirs, mult)


class DirectOperator(ZonalOperator):
    """Node sums with singularity subtraction; any dimension.

    ``E f(x_ia) = sum_k w_k K_i(a, k) (f_k - f_a) + f_a R(r_i)`` where ``R`` is
    the exact sphere integral of the kernel at radius ``r_i``.
    """

    backend = "direct"

    def __init__(self, kernel: ZonalKernel, ball: BallRule):
        super().__init__(kernel, ball)
        self.R = np.atleast_1d(zonal_radial(kernel, ball.radii))
        self._gram = None

    @property
    def gram(self):
        if self._gram is None:
            d = self.sphere.directions
            self._gram = np.clip(d @ d.T, -1.0, 1.0)
        return self._gram

    def _layer(self, i):
        r = self.ball.radii[i]
        d2 = (1.0 - r) ** 2 + 2.0 * r * (1.0 - self.gram)
        k = self.kernel.radial_factor(r) * d2 ** (0.5 * self.kernel.power)
        return k, k @ self.sphere.weights

    def extend(self, f):
        f = self._check(f, self.N)
        w = self.sphere.weights

        def layer(i):
            k, s = self._layer(i)
            return (f * w) @ k.T - f * s + f * self.R[i]

        out = np.stack(ordered_map(layer, range(self.m)), axis=-2)
        return out.reshape(f.shape[:-1] + (self.m * self.N,))

    def adjoint(self, g):
        g = self._check(g, self.m * self.N)
        layers = g.reshape(g.shape[:-1] + (self.m, self.N))
        w = self.sphere.weights
        wr = self.ball.radial_weights

        def layer(i):
            k, s = self._layer(i)
            gi = layers[..., i, :]
            return wr[i] * ((gi * w) @ k + gi * (self.R[i] - s))

        return np.sum(np.stack(ordered_map(layer, range(self.m))), axis=0)

    def evaluate(self, f, points):
        f = self._check(f, self.N)
        pts = np.atleast_2d(np.asarray(points, dtype=float))
        zo = geometry.ball_center(self.kernel.n)
        r = np.linalg.norm(pts - zo, axis=-1)
        d = np.linalg.norm(pts[:, None, :] - self.sphere.nodes[None, :, :], axis=-1)
        k = self.kernel.of_distance(r[:, None], d)
        return k @ (self.sphere.weights * f)


@functools.lru_cache(maxsize=16)
def zonal_operator(kernel: ZonalKernel, ball: BallRule, backend: str = "auto") -> ZonalOperator:
    """Build (and cache) the operator of ``kernel`` on ``ball``.

    ``backend='auto'`` picks the spectral backend for ``n = 3`` and the direct
    one otherwise.
    """
    if backend == "auto":
        backend = "spectral" if ball.n == 3 else "direct"
    if backend == "spectral":
        return SpectralOperator(kernel, ball)
    if backend == "direct":
        return DirectOperator(kernel, ball)
    raise ValueError(f"unknown backend {backend!r}")


def kernel_for(e: Exponents) -> ZonalKernel:
    """Ball kernel of the inequality that ``e`` belongs to."""
    if e.kind is Kind.REVERSED:
        return ZonalKernel.reversed(e.n, e.alpha)
    return ZonalKernel.poisson(e.n, e.alpha)


def default_ball_rule(n: int, level: int, kind: Kind = Kind.REVERSED) -> BallRule:
    """Ball rule used by the operators: graded for the Poisson-type kernel."""
    grading = DEFAULT_GRADING if Kind(kind) is Kind.POISSON else None
    return ball_rule(n, level, grading)


def _require_valid(e: Exponents, kind: Kind | None = None) -> Exponents:
    report = validate_exponents(e)
    if not report.ok:
        raise ExponentError("; ".join(report.violations))
    if kind is not None and e.kind is not Kind(kind):
        raise ExponentError(f"expected {Kind(kind).value} exponents, got {e.kind.value}")
    return e


def _sphere_fn(f: GridFunction) -> SphereRule:
    if f.rule.domain.kind is not DomainKind.SPHERE:
        raise ValueError("expected a grid function on the sphere")
    return f.rule


def _ball_fn(g: GridFunction) -> BallRule:
    if not isinstance(g.rule, BallRule):
        raise ValueError("expected a grid function on the ball")
    return g.rule


def _operator(e: Exponents, ball: BallRule, backend: str = "auto") -> ZonalOperator:
    return zonal_operator(kernel_for(e), ball, backend)


def _finite(values, what):
    if not np.all(np.isfinite(values)):
        raise NonFiniteValue(f"{what} produced non-finite values")
    return values


# extension and adjoint ----------------------------------------------------------

def extend_ball(f: GridFunction, e: Exponents, ball: BallRule | None = None,
                backend: str = "auto") -> GridFunction:
    """Apply ``E`` (reversed) or ``P`` (Poisson-type) to sphere data ``f``.

    Parameters
    ----------
    f : GridFunction
        Nonnegative samples on a sphere rule.
    e : Exponents
        Selects the kernel; only ``n`` and ``alpha`` matter here.
    ball : BallRule, optional
        Target rule; it must be built on ``f.rule``.  Defaults to
        :func:`default_ball_rule` at the level of ``f``.
    backend : {'auto', 'spectral', 'direct'}

    Returns
    -------
    GridFunction
        Values at the ball nodes.
    """
    sph = _sphere_fn(f)
    f.require_nonnegative("extend_ball")
    if ball is None:
        ball = default_ball_rule(sph.n, sph.level, e.kind)
    if ball.sphere is not sph:
        raise ValueError("ball rule is not built on the sphere rule of f")
    values = _operator(e, ball, backend).extend(f.values)
    return GridFunction(ball, _finite(values, "extension"))


def adjoint_extension(g: GridFunction, e: Exponents, backend: str = "auto") -> GridFunction:
    """Adjoint of :func:`extend_ball`: ``int_B k(x, y) g(x) dx`` for ``y`` on the sphere."""
    ball = _ball_fn(g)
    values = _operator(e, ball, backend).adjoint(g.values)
    return GridFunction(ball.sphere, _finite(values, "adjoint extension"))


def boundary_trace_Q(g: GridFunction, e: Exponents, backend: str = "auto") -> GridFunction:
    """``Q g(y) = int_B (1 - |x-z^o|^2) |x - y|^-(n-alpha+2) g(x) dx``, the adjoint of ``P``."""
    if e.kind is not Kind.POISSON:
        raise ExponentError("boundary_trace_Q needs Poisson-type exponents")
    g.require_nonnegative("boundary_trace_Q")
    return adjoint_extension(g, e, backend)


def pairing(f: GridFunction, g: GridFunction, e: Exponents, backend: str = "auto") -> float:
    """Double integral ``D(f, g) = int_B g (ext f)``."""
    ball = _ball_fn(g)
    ext = extend_ball(f, e, ball, backend)
    return integrate(GridFunction(ball, g.values * ext.values))


# norms and quotients ------------------------------------------------------------

def lp_functional(f: GridFunction, p: float) -> float:
    """``(int |f|^p)^(1/p)`` by quadrature.

    For ``p < 1`` (including negative ``p``) the samples must be nonnegative;
    zero samples are clamped to ``1e-300`` with a warning.

    Raises
    ------
    NegativeValueUnderFractionalPower
        Negative samples with ``p < 1``.
    """
    if p == 0:
        raise ValueError("p must be nonzero")
    v = f.values
    powered = positive_power(v, p, what="lp_functional") if p < 1 else np.abs(v) ** p
    with np.errstate(over="ignore", divide="ignore"):
        s = float(np.sum(f.rule.weights * powered))
        return s ** (1.0 / p) if s > 0 or p > 0 else math.inf


def _quotient(f, g, e, kind, backend):
    _require_valid(e, kind)
    f.require_nonnegative("quotient")
    g.require_nonnegative("quotient")
    nf = lp_functional(f, e.p)
    ng = lp_functional(g, e.t)
    if nf == 0 or ng == 0:
        raise ZeroDenominator("f or g vanishes identically")
    return pairing(f, g, e, backend) / (nf * ng)


def quotient_reversed(f: GridFunction, g: GridFunction, e: Exponents, backend: str = "auto") -> float:
    """``D(f, g) / (||f||_p ||g||_t)`` for the reversed kernel; bounded below by the sharp constant."""
    return _quotient(f, g, e, Kind.REVERSED, backend)


def quotient_poisson(f: GridFunction, g: GridFunction, e: Exponents, backend: str = "auto") -> float:
    """``D(f, g) / (||f||_p ||g||_t)`` for the Poisson-type kernel; bounded above by the sharp constant."""
    return _quotient(f, g, e, Kind.POISSON, backend)


def quotient(f: GridFunction, g: GridFunction, e: Exponents, backend: str = "auto") -> float:
    """Dispatch to :func:`quotient_reversed` or :func:`quotient_poisson`."""
    return _quotient(f, g, e, e.kind, backend)


def optimal_partner(f: GridFunction, e: Exponents, ball: BallRule | None = None,
                    backend: str = "auto") -> GridFunction:
    """``g = (ext f)^(t' - 1)``, the ball function that makes Hölder sharp for ``f``."""
    ext = extend_ball(f, e, ball, backend)
    return ext.with_values(positive_power(ext.values, e.t_conj - 1.0, what="extension"))


def extension_ratio(f: GridFunction, e: Exponents, ball: BallRule | None = None,
                    backend: str = "auto") -> float:
    """``||ext f||_(t') / ||f||_p``; equals the quotient at the optimal partner."""
    ext = extend_ball(f, e, ball, backend)
    return lp_functional(ext, e.t_conj) / lp_functional(f, e.p)


# half-space extension -----------------------------------------------------------

def _transport_weight_power(e: Exponents) -> float:
    return e.n + e.alpha - (2 if e.kind is Kind.REVERSED else 4)


def extend_halfspace(f, e: Exponents, level: int = 8, method: str = "pullback", **direct_kw):
    """Half-space extension of boundary data ``f``.

    Parameters
    ----------
    f : callable
        Vectorised function of boundary points ``(..., n)`` (last coordinate 0).
    e : Exponents
        Selects the kernel ``|x-y|^(alpha-n)`` or ``x_n |x-y|^-(n-alpha+2)``.
    level : int
        Sphere rule level for the pullback.
    method : {'pullback', 'direct'}
        ``'pullback'`` moves the problem to the ball through the conformal map
        and evaluates the ball operator; ``'direct'`` integrates over a
        truncated hyperplane (cross-check only, warns).

    Returns
    -------
    callable
        Evaluator taking half-space points ``(P, n)``.
    """
    n = e.n
    if method == "direct":
        return lambda x: direct_extension(f, e, x, **direct_kw)
    if method != "pullback":
        raise ValueError(f"unknown method {method!r}")
    sph = sphere_rule(n, level)
    ball = default_ball_rule(n, level, e.kind)
    op = _operator(e, ball)
    zeta = sph.nodes
    w = _transport_weight_power(e)
    values = np.asarray(f(geometry.conformal_map(zeta)), dtype=float)
    F = values * geometry.conformal_factor(zeta) ** w
    half = 1.0 if e.kind is Kind.REVERSED else 0.5

    def evaluate(x):
        x = np.atleast_2d(np.asarray(x, dtype=float))
        if np.any(x[:, -1] <= 0):
            raise ValueError("evaluation points must lie in the open half-space")
        xi = geometry.conformal_map(x)
        lam = geometry.conformal_factor(xi)
        return half * lam ** (e.alpha - n) * op.evaluate(F, xi)

    return evaluate


# Young-inequality chains ----------------------------------------------------------

def young_kernels(e: Exponents):
    """Kernels ``h`` and ``h1`` used with the Young-type inequalities.

    Returns
    -------
    h : ZonalKernel
        ``|x-y|^(alpha-n)`` (reversed) or ``4 |x-y|^-(n-alpha+1)`` (Poisson-type).
    h1 : callable
        ``h1(d)`` as a function of ``d = |z - y|`` for ``z, y`` on the sphere:
        1 for ``d > sqrt(2)``, else ``(d/2)^s`` with the exponent of ``h``.
    """
    n, a = e.n, e.alpha
    if e.kind is Kind.REVERSED:
        h = ZonalKernel(n, a - n)
    else:
        h = ZonalKernel(n, -(n - a + 1), scale=4.0)
    s = h.power

    def h1(d):
        d = np.asarray(d, dtype=float)
        with np.errstate(divide="ignore"):
            return np.where(d > math.sqrt(2.0), 1.0, (0.5 * d) ** s)

    return h, h1


def _power_kernel(h: ZonalKernel, k: float) -> ZonalKernel:
    return ZonalKernel(h.n, h.power * k, scale=h.scale**k)


def _safe_pow(x: float, p: float) -> float:
    with np.errstate(divide="ignore", over="ignore", invalid="ignore"):
        return float(np.float64(x) ** p)


@dataclass
class ChainReport:
    """Terms of the Young-type chain ``I  ?  g3 * M  ?  g3 * g1 * g2  ?  RHS``.

    ``?`` is ``>=`` for the reversed chain and ``<=`` for the forward one.
    ``rhs`` carries the factors ``||h(., x^o)||^a ||h1(0, .)||^(1-a)`` that the
    chain actually produces; ``rhs_unit_powers`` uses the two norms to the
    first power.
    """

    orientation: str
    a: float
    q: float
    q_conj: float
    I: float
    gamma3: float
    middle: float
    gamma1: float
    gamma2: float
    product: float
    rhs: float
    rhs_unit_powers: float
    kernel_pairing: float | None = None
    flags: list = field(default_factory=list)

    @property
    def links(self) -> dict:
        """Signed slacks (nonnegative when the chain holds), relative to ``|I|``."""
        vals = [self.I, self.gamma3 * self.middle, self.product, self.rhs]
        if self.kernel_pairing is not None:
            vals = [self.kernel_pairing] + vals
        names = ["kernel_bound"] if self.kernel_pairing is not None else []
        names += ["holder_outer", "holder_inner", "h1_bound"]
        sign = 1.0 if self.orientation == ">=" else -1.0
        scale = abs(self.I) if self.I not in (0.0,) and math.isfinite(self.I) else 1.0
        out = {}
        for name, hi, lo in zip(names, vals[:-1], vals[1:]):
            if math.isinf(hi) and math.isinf(lo) and hi == lo:
                out[name] = 0.0
            else:
                out[name] = sign * (hi - lo) / scale
        return out

    def holds(self, rel_tol: float = 1e-12) -> bool:
        return all(v >= -rel_tol for v in self.links.values() if not math.isnan(v))


def _chain(f: GridFunction, g: GridFunction, e: Exponents, a: float, orientation: str,
           backend: str = "auto") -> ChainReport:
    ball = _ball_fn(g)
    if ball.sphere is not f.rule:
        raise ValueError("g must live on a ball rule built over the sphere rule of f")
    n, p, t = e.n, e.p, e.t
    pc, tc = e.p_conj, e.t_conj
    inv_q = 2.0 - 1.0 / p - 1.0 / t
    q = math.inf if inv_q == 0 else 1.0 / inv_q
    qc = math.inf if abs(inv_q - 1.0) < 1e-14 else q / (q - 1.0)
    h, h1 = young_kernels(e)
    flags = []
    fv, gv = f.values, g.values
    with np.errstate(divide="ignore", over="ignore", invalid="ignore"):
        I = pairing_kernel(fv, gv, h, ball, backend)
        int_fp = float(np.sum(f.rule.weights * fv**p))
        int_gt = float(np.sum(ball.weights * gv**t))
        nf, ng = _safe_pow(int_fp, 1 / p), _safe_pow(int_gt, 1 / t)
        gamma3 = 1.0 if math.isinf(qc) else _safe_pow(int_gt * int_fp, 1 / qc)
        # middle factor ||g1 g2||_q
        if math.isinf(qc):
            middle = I
        else:
            hq = _power_kernel(h, q)
            middle = _safe_pow(pairing_kernel(fv ** (q * p / tc), gv ** (q * t / pc), hq, ball, backend), 1 / q)
        # ||g1||_p' = (int g^t Phi_s(r))^(1/p') with s from h^((1-a) p')
        k1 = _power_kernel(h, (1 - a) * pc)
        phi1 = np.atleast_1d(zonal_radial(k1, ball.radii))
        g1_int = float(np.sum(ball.weights * gv**t * np.repeat(phi1, ball.sphere.size)))
        gamma1 = _safe_pow(g1_int, 1 / pc)
        # ||g2||_t' = (int f^p)^(1/t') * (int_B h(x, x^o)^(a t') dx)^(1/t')
        k2 = _power_kernel(h, a * tc)
        rr, wr = graded_radial_rule(n, 4)
        nh_int = float(np.sum(wr * zonal_radial(k2, rr)))
        gamma2 = _safe_pow(int_fp * nh_int, 1 / tc)
        product = gamma3 * gamma1 * gamma2
        h1_int = sphere_profile_integral(lambda th: h1(2 * np.sin(0.5 * th)) ** ((1 - a) * pc), n,
                                         breaks=(0.5 * math.pi,))
        rhs = nf * ng * _safe_pow(nh_int, 1 / tc) * _safe_pow(h1_int, 1 / pc)
        rhs_unit = nf * ng * _safe_pow(nh_int, 1 / (a * tc)) * _safe_pow(h1_int, 1 / ((1 - a) * pc))
    for name, val in dict(I=I, gamma3=gamma3, middle=middle, gamma1=gamma1, gamma2=gamma2).items():
        if val == 0.0:
            flags.append(f"{name} is zero")
        elif math.isinf(val):
            flags.append(f"{name} is infinite")
        elif math.isnan(val):
            flags.append(f"{name} is undefined (0 * inf)")
    return ChainReport(orientation, a, q, qc, I, gamma3, middle, gamma1, gamma2, product, rhs,
                       rhs_unit, flags=flags)


def pairing_kernel(fv, gv, kernel: ZonalKernel, ball: BallRule, backend: str = "auto") -> float:
    """``int_B g(x) int_S k(x, y) f(y) dy dx`` for raw sample arrays."""
    ext = zonal_operator(kernel, ball, backend).extend(fv)
    return float(np.sum(ball.weights * gv * ext))


def young_chain_reversed(f: GridFunction, g: GridFunction, e: Exponents, a: float = 0.5,
                         backend: str = "auto") -> ChainReport:
    """Reversed Young chain with ``h = |x-y|^(alpha-n)`` at subcritical reversed exponents.

    The report holds ``I = int int g f h``, the Hölder factors and the lower
    bound; every link should be ``>=``.  Zero or infinite factors are flagged
    rather than raised.
    """
    _require_valid(e, Kind.REVERSED)
    if e.regime is not Regime.REVERSED_SUBCRITICAL:
        raise ExponentError("the reversed Young chain needs subcritical exponents")
    if not 0 < a < 1:
        raise ValueError("a must lie in (0, 1)")
    return _chain(f, g, e, a, ">=", backend)


def young_chain_forward(f: GridFunction, g: GridFunction, e: Exponents, a: float | None = None,
                        backend: str = "auto") -> ChainReport:
    """Forward Young chain for the Poisson-type kernel.

    Uses ``h = 4 |x-y|^-(n-alpha+1)`` and ``a = (n-alpha)/(2(n-alpha+1))``
    by default; the report additionally carries the Poisson-type pairing,
    which is bounded by ``I`` through the pointwise estimate
    ``(1 - |x-z^o|^2) |x-y|^-(n-alpha+2) <= 4 |x-y|^-(n-alpha+1)``.
    """
    _require_valid(e, Kind.POISSON)
    if a is None:
        a = (e.n - e.alpha) / (2.0 * (e.n - e.alpha + 1.0))
    if not 0 < a < 1:
        raise ValueError("a must lie in (0, 1)")
    rep = _chain(f, g, e, a, "<=", backend)
    rep.kernel_pairing = pairing_kernel(f.values, g.values, kernel_for(e), g.rule, backend)
    return rep


def poisson_pointwise_bound(x, y, alpha: float) -> np.ndarray:
    """``4|x-y|^-(n-alpha+1) - (1-|x-z^o|^2)|x-y|^-(n-alpha+2)``; nonnegative on ``B x partial B``."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    n = x.shape[-1]
    d = np.linalg.norm(x - y, axis=-1)
    rho2 = np.sum((x - geometry.ball_center(n)) ** 2, axis=-1)
    return 4.0 * d ** (-(n - alpha + 1)) - (1.0 - rho2) * d ** (-(n - alpha + 2))


def h_versus_h1(x, y, e: Exponents) -> np.ndarray:
    """``h(x, y) - h1(x*, y)`` at sample pairs (``x`` in the ball, ``y`` on the sphere)."""
    h, h1 = young_kernels(e)
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    d = np.linalg.norm(x - y, axis=-1)
    dstar = np.linalg.norm(geometry.radial_projection(x) - y, axis=-1)
    return h.scale * d**h.power - h1(dstar)
