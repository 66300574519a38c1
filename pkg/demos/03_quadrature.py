"""
Evaluating the form
===================

The adaptive engine splits the plane along the jump lines of the step
functions and refines until neighbouring levels agree.  A plain midpoint
grid gives an independent (slow) check.
"""

import time

from oscdecay import BivariatePolynomial, DirectionSystem, IntegrandSpec
from oscdecay.quadrature import brute_force_oracle, evaluate_lambda_n, trivial_bound
from oscdecay.testfunctions import extremizer, indicator

x, y = BivariatePolynomial.x(), BivariatePolynomial.y()
dirs = DirectionSystem([(1, 0), (0, 1), (1, 1)])

spec = IntegrandSpec(x**2 * y, 100, dirs, [extremizer(100, 3)] * 3)
t0 = time.perf_counter()
res = evaluate_lambda_n(spec, rtol=1e-8)
print(res, f"{time.perf_counter() - t0:.3f}s")

t0 = time.perf_counter()
print("oracle:", brute_force_oracle(spec, N=2048), f"{time.perf_counter() - t0:.3f}s")

# wide functions at larger lambda need many more panels
wide = IntegrandSpec(x**2 * y, 30, dirs, [indicator(-1, 1)] * 3)
res = evaluate_lambda_n(wide, rtol=1e-6)
print(res.value, res.panels_used, "trivial bound", trivial_bound(wide))
