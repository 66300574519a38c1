"""
No decay without curvature
==========================

x^3 + y^3 is a sum of cubes along e1 and e2, so modulating the functions
by exactly those cubes cancels the oscillation and nothing decays.
"""

from fractions import Fraction

from oscdecay import BivariatePolynomial, DirectionSystem
from oscdecay import decay

x, y = BivariatePolynomial.x(), BivariatePolynomial.y()
dirs = DirectionSystem([(1, 0), (0, 1), (1, 1)])
lams = decay.lambda_grid(1e2, 1e3, 4)

recs = decay.no_decay_records(dirs, x**3 + y**3, lams, width=Fraction(1, 10))
for r in recs:
    print(f"{r.lam:9.1f} {r.abs_value:.6e} panels={r.panels}")
print("slope", decay.fit_loglog(recs).slope)
