"""Shared generators for randomized tests."""

from fractions import Fraction

import numpy as np

from oscdecay.phase import DirectionSystem
from oscdecay.polynomial import BivariatePolynomial
from oscdecay.quadrature import IntegrandSpec
from oscdecay.testfunctions import PiecewiseConstant1D

AXES = [(1, 0), (0, 1), (1, 1), (1, -1)]


def random_phase(rng, degree_max=4, terms=4) -> BivariatePolynomial:
    out = {}
    while not out:
        for _ in range(terms):
            d = int(rng.integers(1, degree_max + 1))
            i = int(rng.integers(0, d + 1))
            c = int(rng.integers(-5, 6))
            if c:
                out[(i, d - i)] = c
    return BivariatePolynomial(out)


def random_step_around_origin(rng, w: float) -> PiecewiseConstant1D:
    """1-3 pieces covering a neighbourhood of 0, so all supports overlap."""
    lo = -float(rng.uniform(0.2, 1.0)) * w
    hi = float(rng.uniform(0.2, 1.0)) * w
    pieces = int(rng.integers(1, 4))
    inner = sorted(rng.uniform(lo, hi, size=pieces - 1))
    bps = [lo, *inner, hi]
    vals = rng.uniform(0.5, 1.5, size=pieces) * np.exp(1j * rng.uniform(0, 2 * np.pi, size=pieces))
    return PiecewiseConstant1D(bps, vals)


def random_spec(rng, n: int) -> IntegrandSpec:
    """Low-lambda spec whose oscillation a 2048^2 midpoint grid still resolves.

    The phase is rescaled so that ``lam * |S|`` stays of order a few radians
    on the support, whatever lambda in [1, 1e3] is drawn.
    """
    order = rng.permutation(4)
    dirs = [AXES[k] for k in order[:n]]
    lam = float(10 ** rng.uniform(0, 3))
    w = float(rng.uniform(0.4, 1.0))
    raw = random_phase(rng)
    size = sum(abs(float(c)) * w ** (i + j) for (i, j), c in raw.terms.items())
    target = float(rng.uniform(0.5, 3.0))
    scale = Fraction(target / (lam * size)).limit_denominator(10**9)
    phase = raw * scale
    fs = [random_step_around_origin(rng, w) for _ in range(n)]
    return IntegrandSpec(phase, lam, DirectionSystem(dirs), fs)
