"""Random positive test functions and closed-form bubble profiles."""

from __future__ import annotations

import numpy as np

from .geometry import ball_center
from .quadrature import BallRule, DomainKind, GridFunction, QuadratureRule


def _unit_vectors(rng: np.random.Generator, k: int, n: int) -> np.ndarray:
    v = rng.standard_normal((k, n))
    return v / np.linalg.norm(v, axis=1, keepdims=True)


def random_positive_field(rule: QuadratureRule, seed: int | np.random.Generator = 0,
                          n_bumps: int = 6, amplitude: float = 1.0) -> GridFunction:
    """Log-normal style positive field ``exp(sum_k c_k bump_k)`` on a sphere or ball rule.

    Sphere bumps are von Mises-Fisher profiles ``exp(kappa (omega.v - 1))``;
    ball bumps are Gaussians centred at random interior points.  The field is
    strictly positive and smooth, so quadrature converges spectrally.

    Parameters
    ----------
    rule : QuadratureRule
        A sphere or ball rule.
    seed : int or Generator
        Seed for :func:`numpy.random.default_rng`.
    n_bumps : int
    amplitude : float
        Standard deviation of the coefficients ``c_k``.
    """
    rng = np.random.default_rng(seed)
    n = rule.n
    x = rule.nodes - ball_center(n)
    c = amplitude * rng.standard_normal(n_bumps)
    if rule.domain.kind is DomainKind.SPHERE:
        v = _unit_vectors(rng, n_bumps, n)
        kappa = rng.uniform(0.5, 4.0, n_bumps)
        log = np.sum(c * np.exp(kappa * (x @ v.T - 1.0)), axis=1)
    elif isinstance(rule, BallRule):
        centres = _unit_vectors(rng, n_bumps, n) * rng.uniform(0.0, 1.0, (n_bumps, 1))
        width = rng.uniform(0.3, 1.0, n_bumps)
        d2 = np.sum((x[:, None, :] - centres[None, :, :]) ** 2, axis=-1)
        log = np.sum(c * np.exp(-0.5 * d2 / width**2), axis=1)
    else:
        raise ValueError("random fields are defined on sphere and ball rules")
    return GridFunction(rule, np.exp(log))


def bubble(n: int, y0bar, d: float, beta: float, c: float = 1.0):
    """Boundary profile ``y -> c (|y - y0bar|^2 + d^2)^(-beta)``.

    ``y`` may be given with ``n`` coordinates (last one ignored) or ``n - 1``.
    """
    y0 = np.asarray(y0bar, dtype=float)[: n - 1]

    def f(y):
        y = np.asarray(y, dtype=float)[..., : n - 1]
        return c * (np.sum((y - y0) ** 2, axis=-1) + d * d) ** (-beta)

    return f
