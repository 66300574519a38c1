import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy import integrate

from helpers import random_spec
from oscdecay.phase import DirectionSystem
from oscdecay.polynomial import BivariatePolynomial as P
from oscdecay.quadrature import (
    BudgetExceeded,
    CutoffSpec,
    IntegrandSpec,
    InvalidSpec,
    brute_force_oracle,
    cell_decomposition,
    evaluate_lambda_n,
    standard_bump,
    trivial_bound,
)
from oscdecay.testfunctions import PiecewiseConstant1D, extremizer, indicator

x, y = P.x(), P.y()
E3 = DirectionSystem([(1, 0), (0, 1), (1, 1)])
WIDE = indicator(-10, 10)


def bump_mass(radius):
    inner = integrate.quad(lambda r: math.exp(1 - 1 / (1 - r * r)) * r, 0, 1, epsabs=0, epsrel=1e-13)[0]
    return 2 * math.pi * radius**2 * inner


def test_standard_bump_values():
    assert standard_bump((0, 0)) == pytest.approx(1.0)
    assert standard_bump((2, 0)) == 0.0
    assert standard_bump((1, 0)) == pytest.approx(math.exp(1 - 1 / 0.75))
    with pytest.raises(InvalidSpec):
        CutoffSpec(radius=0)


def test_zero_phase_full_support_is_bump_mass():
    spec = IntegrandSpec(P(), 1, E3, [WIDE] * 3)
    res = evaluate_lambda_n(spec, rtol=1e-9)
    assert res.converged
    assert res.value.real == pytest.approx(bump_mass(2.0), rel=1e-8)
    assert abs(res.value.imag) < 1e-14


def test_zero_function_gives_zero():
    spec = IntegrandSpec(x**2 * y, 100, E3, [WIDE, PiecewiseConstant1D.zero(), WIDE])
    res = evaluate_lambda_n(spec)
    assert res.value == 0 and res.converged and res.panels_used == 0


def test_disjoint_supports_give_zero():
    # x in [5, 6] lies outside the cutoff disk
    spec = IntegrandSpec(x**2 * y, 10, E3, [indicator(5, 6), WIDE, WIDE])
    assert evaluate_lambda_n(spec).value == 0


def test_spec_validation():
    with pytest.raises(InvalidSpec):
        IntegrandSpec(x, 0.5, E3, [WIDE] * 3)
    with pytest.raises(InvalidSpec):
        IntegrandSpec(x, 2, E3, [WIDE] * 2)
    with pytest.raises(InvalidSpec):
        IntegrandSpec(x, 2, [(1, 0), (2, 0), (0, 1)], [WIDE] * 3)
    spec = IntegrandSpec(x, 2, E3, [WIDE] * 3)
    with pytest.raises(InvalidSpec):
        evaluate_lambda_n(spec, rtol=0)


def test_budget_exhaustion():
    spec = IntegrandSpec(x**2 * y, 1e4, E3, [WIDE] * 3)
    res = evaluate_lambda_n(spec, rtol=1e-10, panel_budget=200)
    assert not res.converged
    with pytest.raises(BudgetExceeded) as info:
        evaluate_lambda_n(spec, rtol=1e-10, panel_budget=200, strict=True)
    assert info.value.result.converged is False


def test_cell_decomposition_covers_support():
    spec = IntegrandSpec(x * y, 1, E3, [indicator(0, 1), indicator(0, 1), indicator(-1, 3)])
    cells = cell_decomposition(spec)
    area = 0.0
    for poly, weight in cells:
        xs, ys = poly[:, 0], poly[:, 1]
        area += abs(weight) * 0.5 * abs(np.dot(xs, np.roll(ys, -1)) - np.dot(ys, np.roll(xs, -1)))
    # unit square, all x + y in [0, 2] are inside [-1, 3)
    assert area == pytest.approx(1.0, rel=1e-12)


def test_extremizer_matches_oracle():
    spec = IntegrandSpec(x**2 * y, 100, E3, [extremizer(100, 3)] * 3)
    a = evaluate_lambda_n(spec, rtol=1e-7).value
    b = brute_force_oracle(spec, N=2048)
    assert abs(a - b) <= 1e-4 * abs(a)


def test_oracle_converges_second_order():
    rng = np.random.default_rng(3)
    spec = random_spec(rng, 3)
    ref = evaluate_lambda_n(spec, rtol=1e-9).value
    e1 = abs(brute_force_oracle(spec, N=256) - ref)
    e2 = abs(brute_force_oracle(spec, N=512) - ref)
    assert e2 < e1 / 2.5


# -- properties -------------------------------------------------------------

seeds = st.integers(0, 10**6)


@settings(max_examples=15, deadline=None)
@given(seeds, st.sampled_from([3, 4]))
def test_trivial_bound(seed, n):
    spec = random_spec(np.random.default_rng(seed), n)
    res = evaluate_lambda_n(spec, rtol=1e-6)
    assert abs(res.value) <= trivial_bound(spec) * (1 + 1e-9)


@settings(max_examples=10, deadline=None)
@given(seeds, st.complex_numbers(min_magnitude=0.1, max_magnitude=5, allow_nan=False, allow_infinity=False))
def test_linearity_in_each_function(seed, alpha):
    rng = np.random.default_rng(seed)
    spec = random_spec(rng, 3)
    j = int(rng.integers(0, 3))
    g = spec.functions[j]
    h = PiecewiseConstant1D([float(b) for b in g.breakpoints], [v * 0.5j for v in g.values])
    fs = list(spec.functions)
    base = evaluate_lambda_n(spec, rtol=1e-9).value
    fs[j] = h
    other = evaluate_lambda_n(spec.replace(functions=fs), rtol=1e-9).value
    fs[j] = PiecewiseConstant1D(g.breakpoints, [alpha * v + 0.5j * v for v in g.values])
    combo = evaluate_lambda_n(spec.replace(functions=fs), rtol=1e-9).value
    expected = alpha * base + other
    assert abs(combo - expected) <= 1e-6 * (abs(alpha * base) + abs(other))


@settings(max_examples=10, deadline=None)
@given(seeds, st.sampled_from([3, 4]))
def test_conjugation_symmetry(seed, n):
    spec = random_spec(np.random.default_rng(seed), n)
    a = evaluate_lambda_n(spec, rtol=1e-8).value
    flipped = spec.replace(phase=spec.phase * -1, functions=[f.conj() for f in spec.functions])
    b = evaluate_lambda_n(flipped, rtol=1e-8).value
    assert abs(a - b.conjugate()) <= 1e-6 * abs(a) + 1e-14


def test_zero_phase_unit_indicators_match_oracle():
    spec = IntegrandSpec(P(), 1, E3, [indicator(0, 1)] * 3)
    a = evaluate_lambda_n(spec, rtol=1e-8).value
    b = brute_force_oracle(spec, N=2048)
    assert abs(a - b) <= 1e-6 * abs(a)
    assert brute_force_oracle(spec.replace(functions=[PiecewiseConstant1D.zero()] * 3), N=16) == 0
