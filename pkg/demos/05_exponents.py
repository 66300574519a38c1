"""
Exponent bookkeeping
====================

The admissible Lebesgue exponents always have the same reciprocal sum,
which is what makes the extremizer computation come out to 2^(1-n).
"""

from fractions import Fraction

from oscdecay import decay

for n in range(4, 8):
    prof = decay.exponent_profile(n, Fraction(1, 100))
    print(n, [str(p) for p in prof.exponents], prof.holder_sum, decay.holder_sum_target(n))

print("eps -> 0 for n=4:", [str(p) for p in decay.limiting_profile(4).exponents])

for n in range(3, 9):
    print(n, Fraction(-2, n) + decay.extremizer_norm_exponent(n), -decay.theoretical_decay(n))
