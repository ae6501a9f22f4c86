"""The subcritical fixed-point iteration flattens a random start to a constant."""

from hlslab.constants import xi_alpha
from hlslab.exponents import Exponents
from hlslab.kernels import Kind
from hlslab.solver import SolveConfig, solve_subcritical, sweep_to_critical

e = Exponents(3, 4.0, 0.7, 0.8, Kind.REVERSED)
res = solve_subcritical(e, SolveConfig(init="random", seed=1), level=6)
print("iterations       ", res.iterations)
print("constancy        ", res.constancy_deviation)
print("symmetry deficit ", res.symmetry_deficit)
print("EL residual      ", res.el_residual)
print("xi estimate      ", res.xi_estimate, "vs", xi_alpha(e).value)

# the first few quotients along the iteration; the reversed quotient never drops below xi
print("quotients        ", [round(q, 8) for q in res.ratio_history[:6]])

# geometric sweep to the critical pair plus Richardson extrapolation
sw = sweep_to_critical(3, 4.0, Kind.REVERSED, steps=10)
for rec in sw.records:
    print(f"p={rec.p:.6f} t={rec.t:.6f} xi={rec.xi:.12f} level={rec.level}")
print("extrapolated", sw.limit, "critical", sw.critical.value, "gap", sw.gap)
