"""Exponent bookkeeping for the reversed and Poisson-type inequalities."""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

from .errors import ExponentError
from .geometry import check_dimension
from .kernels import Kind, KernelSpec

#: Relative tolerance for "this exponent is the critical one".
CRITICAL_TOL = 1e-12


class Regime(str, enum.Enum):
    REVERSED_SUBCRITICAL = "ReversedSubcritical"
    REVERSED_CRITICAL = "ReversedCritical"
    POISSON_SUBCRITICAL = "PoissonSubcritical"
    POISSON_CRITICAL = "PoissonCritical"

    @property
    def kind(self) -> Kind:
        return Kind.REVERSED if self.name.startswith("REVERSED") else Kind.POISSON

    @property
    def critical(self) -> bool:
        return self.name.endswith("_CRITICAL")


def critical_p(n: int, alpha: float, kind: Kind) -> float:
    """Critical sphere exponent: ``2(n-1)/(n+alpha-2)`` (reversed) or ``2(n-1)/(n+alpha-4)`` (Poisson)."""
    shift = 2 if Kind(kind) is Kind.REVERSED else 4
    return 2.0 * (n - 1) / (n + alpha - shift)


def critical_t(n: int, alpha: float) -> float:
    """Critical ball exponent ``2n/(n+alpha)`` (both kinds)."""
    return 2.0 * n / (n + alpha)


def conjugate(p: float) -> float:
    """Hölder conjugate ``p/(p-1)``; infinite for ``p = 1``."""
    return math.inf if p == 1 else p / (p - 1.0)


def _close(a: float, b: float) -> bool:
    return abs(a - b) <= CRITICAL_TOL * max(1.0, abs(b))


@dataclass(frozen=True)
class Exponents:
    """Dimension, order and Lebesgue exponents, with derived quantities.

    Parameters
    ----------
    n : int
    alpha : float
    p : float
        Exponent on the sphere / boundary hyperplane.
    t : float
        Exponent on the ball / half-space.
    kind : Kind
        Which inequality the exponents refer to.

    Notes
    -----
    Derived fields: ``p_conj``, ``t_conj``, ``kappa = t' - 1``,
    ``theta = 1/(p-1)``, ``s1``, ``s2`` (regime dependent), ``s1_primed``,
    ``s2_primed`` and ``regime``.  Construction does not validate the
    exponents; use :func:`validate_exponents` or :meth:`require_valid`.
    """

    n: int
    alpha: float
    p: float
    t: float
    kind: Kind
    p_conj: float = field(init=False)
    t_conj: float = field(init=False)
    kappa: float = field(init=False)
    theta: float = field(init=False)
    s1: float = field(init=False)
    s2: float = field(init=False)
    s1_primed: float = field(init=False)
    s2_primed: float = field(init=False)
    regime: Regime = field(init=False)

    def __post_init__(self):
        kind = Kind(self.kind)
        n, a, p, t = self.n, float(self.alpha), float(self.p), float(self.t)
        object.__setattr__(self, "kind", kind)
        object.__setattr__(self, "alpha", a)
        object.__setattr__(self, "p", p)
        object.__setattr__(self, "t", t)
        if p == 0 or t == 0:
            raise ExponentError("exponents must be nonzero")
        pc, tc = conjugate(p), conjugate(t)
        theta = math.inf if p == 1 else 1.0 / (p - 1.0)
        if kind is Kind.REVERSED:
            s1 = math.nan if p == 1 else n + a - 2 - (n - a) / (p - 1)
            s2 = (a - n) * tc + 2 * n
        else:
            s1 = n + a - 4 - 2 * (n - 1) / p
            s2 = n + a - 2 * n / t
        crit = _close(p, critical_p(n, a, kind)) and _close(t, critical_t(n, a))
        if kind is Kind.REVERSED:
            regime = Regime.REVERSED_CRITICAL if crit else Regime.REVERSED_SUBCRITICAL
        else:
            regime = Regime.POISSON_CRITICAL if crit else Regime.POISSON_SUBCRITICAL
        for name, value in dict(
            p_conj=pc, t_conj=tc, kappa=tc - 1, theta=theta, s1=s1, s2=s2,
            s1_primed=n + a - 2 - 2 * (n - 1) / p, s2_primed=n + a - 2 * n / t,
            regime=regime,
        ).items():
            object.__setattr__(self, name, value)

    @classmethod
    def critical(cls, n: int, alpha: float, kind: Kind) -> "Exponents":
        """The conformally invariant exponent pair."""
        return cls(n, alpha, critical_p(n, alpha, kind), critical_t(n, alpha), kind)

    @property
    def spec(self) -> KernelSpec:
        return KernelSpec(self.kind, self.n, self.alpha)

    @property
    def is_critical(self) -> bool:
        return self.regime.critical

    def require_valid(self) -> "Exponents":
        """Return ``self`` or raise :class:`ExponentError` listing the violations."""
        report = validate_exponents(self)
        if not report.ok:
            raise ExponentError("; ".join(report.violations))
        return self


@dataclass
class ExponentReport:
    """Outcome of :func:`validate_exponents`."""

    ok: bool
    regime: Regime | None
    violations: list[str]
    notes: list[str]
    general_region: bool | None = None

    def __bool__(self):
        return self.ok


def validate_exponents(e: Exponents) -> ExponentReport:
    """Check that ``e`` lies in the admissible region of its inequality.

    Never raises; violations are collected as strings.  For the reversed
    inequality the report also records whether the extended region
    ``1 - (n-1)/(n-alpha) (1 - 1/p) < n/(n-alpha) (1 - 1/t)`` holds.

    Poisson exponents with ``1/p + 1/t = 1`` exactly are accepted with a note:
    the forward Young inequality still applies there (``q' = inf``), while the
    existence argument for maximisers assumes the strict inequality.
    """
    v: list[str] = []
    notes: list[str] = []
    n, a, p, t = e.n, e.alpha, e.p, e.t
    try:
        e.spec
    except ExponentError as exc:
        return ExponentReport(False, None, [str(exc)], notes)
    pc, tc = critical_p(n, a, e.kind), critical_t(n, a)
    general = None
    if e.kind is Kind.REVERSED:
        if not 0 < p <= pc * (1 + CRITICAL_TOL):
            v.append(f"need 0 < p <= {pc:.12g}, got p={p}")
        if not 0 < t <= tc * (1 + CRITICAL_TOL):
            v.append(f"need 0 < t <= {tc:.12g}, got t={t}")
        if not e.is_critical and not v:
            if _close(p, pc) or _close(t, tc):
                notes.append("one exponent is critical, the other subcritical")
            if not (e.p_conj < 0 and e.t_conj < 0 and e.kappa < 0 and e.theta < 0):
                v.append("conjugate exponents must be negative")
            if not (e.s1 > 0 and e.s2 > 0):
                v.append(f"s1={e.s1:.6g}, s2={e.s2:.6g} must be positive")
        if 0 < p < 1 and 0 < t < 1:
            lhs = 1 - (n - 1) / (n - a) * (1 - 1 / p)
            rhs = n / (n - a) * (1 - 1 / t)
            general = bool(lhs < rhs)
    else:
        if not p >= pc * (1 - CRITICAL_TOL):
            v.append(f"need p >= {pc:.12g}, got p={p}")
        if not t >= tc * (1 - CRITICAL_TOL):
            v.append(f"need t >= {tc:.12g}, got t={t}")
        s = 1 / p + 1 / t
        if s < 1 - CRITICAL_TOL:
            v.append(f"need 1/p + 1/t >= 1, got {s:.12g}")
        elif abs(s - 1) <= CRITICAL_TOL:
            notes.append("1/p + 1/t = 1: boundary case of the subcritical region")
        if not e.is_critical and not v:
            if _close(p, pc) or _close(t, tc):
                notes.append("one exponent is critical, the other subcritical")
            if not (e.kappa > 0 and e.theta > 0):
                v.append("kappa and theta must be positive")
            if not (e.s1 > 0 and e.s2 > 0) and not (_close(p, pc) or _close(t, tc)):
                v.append(f"s1={e.s1:.6g}, s2={e.s2:.6g} must be positive")
    return ExponentReport(not v, e.regime if not v else None, v, notes, general)


def make_exponents(n: int, alpha: float, kind, p: float | None = None, t: float | None = None) -> Exponents:
    """Build exponents, defaulting to the critical pair when ``p``/``t`` are omitted."""
    check_dimension(n)
    kind = Kind(kind)
    if p is None and t is None:
        return Exponents.critical(n, alpha, kind)
    if p is None or t is None:
        raise ExponentError("give both p and t, or neither for the critical pair")
    return Exponents(n, alpha, p, t, kind)
