"""Numerical verification of sharp Hardy-Littlewood-Sobolev type inequalities.

Two inequalities on the upper half-space are covered: the reversed one
(``alpha > n``, kernel ``|x - y|^(alpha - n)``) and the Poisson-type one
(``2 <= alpha < n``, kernel ``x_n |x - y|^-(n - alpha + 2)``).  Both are moved
to the unit ball through a conformal map, where sharp constants reduce to
1-D radial integrals and the extension operators act diagonally on
spherical harmonics.

Modules
-------
geometry      conformal map, inversions, reflections
quadrature    sphere, ball and radial rules; grid functions
kernels       kernels, Funk-Hecke multipliers, radial reductions
exponents     exponent validation and derived quantities
operators     extension operators, quotients, Young chains
halfspace     direct quadrature on the half-space (cross-check path)
constants     sharp constants, extremal family, transport, EL residuals
solver        fixed-point solver, symmetry deficit, critical sweep
checks        randomised verification suites
cli           ``hlslab`` command
"""

__version__ = "0.1.0"
