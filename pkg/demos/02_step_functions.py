"""
Step functions and the tau identities
=====================================

Integrating the twisted product over all shifts gives back the fourth power
of the L^2 norm, and for nonnegative functions the largest twisted norm sits
at shift zero.
"""

import numpy as np

from oscdecay.testfunctions import (extremizer, lp_norm, random_piecewise,
                                    tau_energy_integral, tau_sup_norm)

rng = np.random.default_rng(1)
f = random_piecewise(rng, pieces=4)
print(f)

b = 2
print("energy integral:", tau_energy_integral(f, b))
print("||f||_2^4 / |b|:", lp_norm(f, 2) ** 4 / b)

g = f.abs_pow(1)
print("sup over tau   :", tau_sup_norm(g, b, 3))
print("||g||_6^2      :", lp_norm(g, 6) ** 2)

# extremizer norms shrink like lam^(-1/(n p))
for lam in (1e2, 1e4, 1e6):
    print(lam, lp_norm(extremizer(lam, 3), 2), lam ** (-1 / 6))
