"""Frozen reference values.

Produced by ``scripts/compute_oracles.py`` (scipy adaptive quadrature, closed
forms of the sphere integrals where they exist); independent of the library's
own quadrature.  Key format: ``<NAME>_<n>_<alpha>[_P<p>_T<t>]``.
"""

import math

#: sharp reversed constant, n = 3, alpha = 4
C_E1_3_4 = 0.4920885818683439
#: sharp reversed constant, n = 4, alpha = 5
C_E1_4_5 = 0.604240637010292
#: subcritical reversed constant, n = 3, alpha = 4, p = 0.7, t = 0.8
XI_3_4_P07_T08 = 0.27955512717535475
#: sharp Poisson-type constant on the ball, n = 3, alpha = 2
C_E2_3_2 = 8.47400728261068
#: the same in closed form, (4 pi)^(3/4) (4 pi / 3)^(1/6)
C_E2_3_2_CLOSED = (4 * math.pi) ** 0.75 * (4 * math.pi / 3) ** (1 / 6)
#: sharp Poisson-type constant on the ball, n = 4, alpha = 3
C_E2_4_3 = 3.6948514223468307

REGRESSION = {
    ("ce1", 3, 4.0): C_E1_3_4,
    ("ce1", 4, 5.0): C_E1_4_5,
    ("ce2", 3, 2.0): C_E2_3_2,
    ("ce2", 4, 3.0): C_E2_4_3,
    ("xi", 3, 4.0, 0.7, 0.8): XI_3_4_P07_T08,
}


def lookup(kind: str, n: int, alpha: float, p: float | None = None, t: float | None = None):
    """Frozen value for a CLI constant request, or ``None``."""
    key = (kind, n, float(alpha)) if p is None else (kind, n, float(alpha), float(p), float(t))
    return REGRESSION.get(key)
