"""Recompute the frozen regression constants with scipy's adaptive quadrature.

The constants share one formula,

    |S^(n-1)|^(-1/p) (|S^(n-1)| int_0^1 R(r)^(t') r^(n-1) dr)^(1/t'),

with ``R`` the sphere integral of the kernel.  For ``n = 3`` the reversed
``R`` has the closed form ``4 pi + (4 pi / 3) r^2`` when ``alpha = 4`` and the
Poisson-type ``R`` equals ``4 pi`` when ``alpha = 2``; otherwise ``R`` is a
nested adaptive integral over the polar angle.  Nothing from hlslab is
imported, so the values are an independent check of the library's radial
pipeline.

Run ``python scripts/compute_oracles.py`` and compare with
``hlslab.regression``.
"""

from math import cos, gamma, pi, sin

from scipy.integrate import quad

TOL = dict(epsabs=0.0, epsrel=1e-13, limit=200)


def area(n):
    return 2 * pi ** (n / 2) / gamma(n / 2)


def sphere_integral(kernel, n, r):
    """|S^(n-2)| int_0^pi kernel(r, theta) sin(theta)^(n-2) dtheta."""
    val = quad(lambda th: kernel(r, th) * sin(th) ** (n - 2), 0, pi, points=[1e-3, 1e-2, 0.1], **TOL)[0]
    return area(n - 1) * val


def reversed_R(n, alpha):
    if n == 3 and alpha == 4:
        return lambda r: 4 * pi + 4 * pi / 3 * r * r
    return lambda r: sphere_integral(lambda r, th: (1 + r * r - 2 * r * cos(th)) ** ((alpha - n) / 2), n, r)


def poisson_R(n, alpha):
    if alpha == 2:
        return lambda r: area(n)
    m = n - alpha + 2

    def R(r):
        # (1 - r^2) |xi - zeta|^-m with |xi - zeta|^2 = (1-r)^2 + 4 r sin^2(th/2)
        return sphere_integral(lambda r, th: (1 - r * r) * ((1 - r) ** 2 + 4 * r * sin(th / 2) ** 2) ** (-m / 2), n, r)

    return R


def constant(n, p, t, R):
    tc = t / (t - 1)
    inner = area(n) * quad(lambda r: R(r) ** tc * r ** (n - 1), 0, 1, **TOL)[0]
    return area(n) ** (-1 / p) * inner ** (1 / tc)


def main():
    out = {
        "C_E1_3_4": constant(3, 4 / 5, 6 / 7, reversed_R(3, 4)),
        "C_E1_4_5": constant(4, 6 / 7, 8 / 9, reversed_R(4, 5)),
        "XI_3_4_P07_T08": constant(3, 0.7, 0.8, reversed_R(3, 4)),
        "C_E2_3_2": constant(3, 4.0, 6 / 5, poisson_R(3, 2)),
        "C_E2_4_3": constant(4, 2.0, 8 / 7, poisson_R(4, 3)),
    }
    for k, v in out.items():
        print(f"{k} = {v!r}")


if __name__ == "__main__":
    main()
