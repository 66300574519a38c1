"""
How fast does it decay?
=======================

With extremizers 1[0, lam^(-1/n)] the form decays like lam^(-2/n), and after
dividing by the norms what is left is lam^(-1/2^(n-1)).
"""

from fractions import Fraction

from oscdecay import BivariatePolynomial, DirectionSystem
from oscdecay import decay

x, y = BivariatePolynomial.x(), BivariatePolynomial.y()
cases = [
    (x**2 * y, [(1, 0), (0, 1), (1, 1)], None),
    (x**3 * y, [(1, 0), (0, 1), (1, 1), (1, -1)], Fraction(1, 100)),
]
for phase, dirs, eps in cases:
    dirs = DirectionSystem(dirs)
    profile = decay.exponent_profile(dirs.n, eps)
    records = decay.run_sweep(phase, dirs, decay.lambda_grid(), profile=profile)
    for col in ("abs_value", "ratio"):
        fit = decay.fit_loglog(records, col, drop=2)
        print(f"n={dirs.n} {col:9s} slope {fit.slope:+.4f}")
    print("expected", -2 / dirs.n, -float(decay.theoretical_decay(dirs.n)))
print(decay.records_to_csv(records))
