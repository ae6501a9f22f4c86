"""Spherical-harmonic transform on the ``n = 3`` product grid.

With ``N`` Gauss-Legendre nodes in ``cos(theta)`` and ``2N`` equispaced
azimuths, the analysis/synthesis pair below is exact for band-limited data of
degree ``L = N - 1``.  A zonal integral operator acts on the coefficients by
its Funk-Hecke multipliers, which is how :mod:`hlslab.operators` applies the
extension operators on the ball in three dimensions.
"""

from __future__ import annotations

import numpy as np

from .quadrature import SphereRule


def normalized_legendre(x, lmax: int) -> list[np.ndarray]:
    """Orthonormal associated Legendre functions on ``[-1, 1]``.

    Returns a list indexed by ``m = 0..lmax``; entry ``m`` has shape
    ``(len(x), lmax - m + 1)`` with column ``j`` holding degree ``l = m + j``,
    normalised so that ``int_{-1}^{1} P_l^m(x)^2 dx = 1``.
    """
    x = np.asarray(x, dtype=float)
    s = np.sqrt(np.clip(1.0 - x * x, 0.0, None))
    out = []
    pmm = np.full_like(x, np.sqrt(0.5))
    for m in range(lmax + 1):
        if m > 0:
            pmm = -np.sqrt((2 * m + 1) / (2 * m)) * s * pmm
        tab = np.empty(x.shape + (lmax - m + 1,))
        tab[..., 0] = pmm
        if lmax > m:
            tab[..., 1] = np.sqrt(2 * m + 3) * x * pmm
        for l in range(m + 2, lmax + 1):
            a = np.sqrt((4 * l * l - 1) / (l * l - m * m))
            b = np.sqrt(((l - 1) ** 2 - m * m) / (4 * (l - 1) ** 2 - 1))
            tab[..., l - m] = a * (x * tab[..., l - m - 1] - b * tab[..., l - m - 2])
        out.append(tab)
    return out


class SphericalTransform:
    """Analysis and synthesis on a three-dimensional :class:`SphereRule`.

    Coefficients are stored as a list over the order ``m = 0..L`` of complex
    arrays of shape ``(..., L - m + 1)``; real data only needs ``m >= 0``.
    """

    def __init__(self, rule: SphereRule):
        if rule.n != 3:
            raise ValueError("the harmonic transform is implemented for n = 3 only")
        self.rule = rule
        self.x = np.asarray(rule.polar_nodes[0])
        self.wx = np.asarray(rule.polar_weights[0])
        self.n_polar = self.x.size
        self.n_azimuth = rule.n_azimuth
        self.lmax = self.n_polar - 1
        if self.n_azimuth < 2 * self.lmax + 1:
            raise ValueError("azimuthal grid too coarse for the polar degree")
        self.plm = normalized_legendre(self.x, self.lmax)

    def analysis(self, values) -> list[np.ndarray]:
        """Coefficients of grid samples with shape ``(..., N)``."""
        v = np.asarray(values, dtype=float)
        lead = v.shape[:-1]
        g = np.fft.rfft(v.reshape(lead + (self.n_polar, self.n_azimuth)), axis=-1)
        g = g / self.n_azimuth * self.wx[:, None]
        return [np.einsum("...a,al->...l", g[..., m], self.plm[m]) for m in range(self.lmax + 1)]

    def synthesis(self, coeffs: list[np.ndarray]) -> np.ndarray:
        """Grid samples (flattened, shape ``(..., N)``) from coefficients."""
        lead = coeffs[0].shape[:-1]
        spec = np.zeros(lead + (self.n_polar, self.n_azimuth // 2 + 1), dtype=complex)
        for m, c in enumerate(coeffs):
            spec[..., m] = np.einsum("...l,al->...a", c, self.plm[m])
        out = np.fft.irfft(spec * self.n_azimuth, n=self.n_azimuth, axis=-1)
        return out.reshape(lead + (-1,))

    def evaluate(self, coeffs: list[np.ndarray], directions, multipliers=None) -> np.ndarray:
        """Evaluate the expansion at arbitrary unit directions.

        Parameters
        ----------
        coeffs : list of ndarray
            Coefficients without leading axes.
        directions : ndarray, shape (P, 3)
            Unit vectors relative to the sphere centre.
        multipliers : ndarray, shape (P, L + 1), optional
            Per-point degree multipliers applied before summation.
        """
        d = np.atleast_2d(np.asarray(directions, dtype=float))
        x = np.clip(d[:, 2], -1.0, 1.0)
        phi = np.arctan2(d[:, 1], d[:, 0])
        plm = normalized_legendre(x, self.lmax)
        total = np.zeros(d.shape[0])
        for m, c in enumerate(coeffs):
            cl = c[None, :] if multipliers is None else multipliers[:, m:] * c[None, :]
            part = np.sum(cl * plm[m], axis=-1)
            term = np.real(part * np.exp(1j * m * phi))
            total += term if m == 0 else 2.0 * term
        return total
