"""Sharp constants from the radial reduction, checked against the ball quotient."""

import numpy as np

from hlslab.constants import c_e1, c_e2, xi_alpha
from hlslab.exponents import Exponents
from hlslab.kernels import Kind, phi_radial
from hlslab.operators import default_ball_rule, extension_ratio
from hlslab.quadrature import GridFunction

# Phi(r) for n = 3, alpha = 4 is a quadratic in r
r = np.linspace(0, 1, 5)
print("Phi(r)          ", phi_radial(3, 4.0, r))
print("4pi + 4pi r^2/3 ", 4 * np.pi + 4 * np.pi / 3 * r**2)

# the sharp constants, with a quadrature error estimate
for res in (c_e1(3, 4.0), c_e2(3, 2.0), c_e1(4, 5.0)):
    e = res.exponents
    print(f"{e.kind.value:9s} n={e.n} alpha={e.alpha}: {res.value:.15f} (+- {res.error_estimate:.1e})")

# a constant f is extremal, so its extension ratio reproduces the constant
for kind, alpha in ((Kind.REVERSED, 4.0), (Kind.POISSON, 2.0)):
    e = Exponents.critical(3, alpha, kind)
    ball = default_ball_rule(3, 6, kind)
    print(kind.value, "ratio of f = 1:", extension_ratio(GridFunction.constant(ball.sphere), e, ball))

# subcritical values climb towards C_e1 as (p, t) approach (4/5, 6/7)
ce1 = c_e1(3, 4.0).value
for eps in (1e-1, 1e-2, 1e-3):
    xi = xi_alpha(Exponents(3, 4.0, 0.8 - eps, 6 / 7 - eps, Kind.REVERSED)).value
    print(f"eps={eps:g}: xi={xi:.10f}  gap={ce1 - xi:.2e}")
