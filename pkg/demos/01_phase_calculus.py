"""
Degenerate or not?
==================

The operator D_n kills exactly the phases that split into one-variable
pieces along the given directions.  Here we check a few phases by hand.
"""

from fractions import Fraction

from oscdecay import BivariatePolynomial, DirectionSystem
from oscdecay.phase import (RegionBox, apply_dn, certified_lower_bound,
                            degenerate_decomposition, recompose)

x, y = BivariatePolynomial.x(), BivariatePolynomial.y()
dirs = DirectionSystem([(1, 0), (0, 1), (1, 1)])

# x^2 y leaves a nonzero constant behind
print("D_3(x^2 y) =", apply_dn(x**2 * y, dirs))

# xy does not: it is a combination of squares of x, y and x + y
parts = degenerate_decomposition(x * y, dirs)
for s, d in zip(parts, dirs):
    print(f"  {s}   at t = {d.b}x + {d.c}y")
print("re-expands to xy:", recompose(parts, dirs) == x * y)

# a rigorous lower bound for |D_3 S| over the cutoff box
box = RegionBox.around((0, 0), 2)
print("certified |D_3 S| >=", certified_lower_bound(apply_dn(x**2 * y, dirs), box, 16))

# a non-constant D_n needs a grid; the bound only grows as the grid refines
p = 3 + x * y * Fraction(1, 2)
for grid in (4, 8, 16, 32):
    print(grid, float(certified_lower_bound(p, box, grid)))
