"""Half-space bubbles carried to the ball, and the moving-spheres kernel."""

import numpy as np

from hlslab.checks import conformal_pair
from hlslab.constants import ExtremalParams, c_e1, extremal_family, transport_boundary_function
from hlslab.exponents import Exponents
from hlslab.geometry import conformal_map, on_sphere
from hlslab.kernels import Kind
from hlslab.operators import default_ball_rule, extension_ratio
from hlslab.solver import ms_kernel_positivity

# the map is an involution taking the boundary plane to the sphere
y = np.array([[0.3, -1.2, 0.0], [0.0, 0.0, 0.0], [5.0, 2.0, 0.0]])
print("images on the sphere", on_sphere(conformal_map(y)))
print("round trip", conformal_map(conformal_map(y)))

# every member of the bubble family attains C_e1 after transport
e = Exponents.critical(3, 4.0, Kind.REVERSED)
ball = default_ball_rule(3, 10)
for d in (0.25, 1.0, 4.0):
    F = transport_boundary_function(extremal_family(e, ExtremalParams(1.0, (0.5, 0.0), d)), e, ball.sphere)
    print(f"d={d}: ratio/C_e1 - 1 = {extension_ratio(F, e, ball) / c_e1(3, 4.0).value - 1:.1e}")

# one random pair computed twice: directly on the half-space and on the ball
qh, qb, factor = conformal_pair(e, np.random.default_rng(0))
print("half-space", qh, "ball", qb, "factor", factor)

print("moving-spheres kernel minimum", ms_kernel_positivity((0.0, 0.0), 1.0, 10_000, alpha=2.0, n=3))
