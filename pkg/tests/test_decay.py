import csv
import io
import json
import math
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oscdecay import decay
from oscdecay.decay import SweepRecord
from oscdecay.phase import DirectionSystem
from oscdecay.polynomial import BivariatePolynomial as P

x, y = P.x(), P.y()
E3 = DirectionSystem([(1, 0), (0, 1), (1, 1)])


def synthetic(values, lams=None, converged=True):
    lams = lams or [10.0**k for k in range(1, len(values) + 1)]
    return [SweepRecord(l, complex(v), abs(v), 1.0, abs(v), 0.0, 1, converged) for l, v in zip(lams, values)]


def test_theoretical_decay():
    assert decay.theoretical_decay(3) == Fraction(1, 4)
    assert decay.theoretical_decay(4) == Fraction(1, 8)
    with pytest.raises(ValueError):
        decay.theoretical_decay(2)


@pytest.mark.parametrize("n", range(3, 13))
def test_bookkeeping_identity_exact(n):
    lhs = Fraction(-2, n) + Fraction(2**n - n, n * 2 ** (n - 1))
    assert lhs == -decay.theoretical_decay(n)
    assert decay.extremizer_norm_exponent(n) == Fraction(2**n - n, n * 2 ** (n - 1))


def test_n3_default_profile():
    prof = decay.exponent_profile(3)
    assert prof.exponents == (2, Fraction(41, 20), Fraction(164, 43))
    assert prof.holder_sum == Fraction(5, 4)


def test_n3_triple_validation():
    assert decay.exponent_profile(3, triple=(2, 2.5, 1 / 0.35)).n == 3
    with pytest.raises(ValueError):
        decay.exponent_profile(3, triple=(3, 3, Fraction(12, 7)))
    with pytest.raises(ValueError):
        decay.exponent_profile(3, triple=(2, 2, 2))
    with pytest.raises(ValueError):
        decay.exponent_profile(3, triple=(1.5, 4, 4))


def test_limiting_profiles():
    assert decay.limiting_profile(4).exponents == (2, 2, Fraction(8, 3), 8)
    assert decay.limiting_profile(5).exponents == (2, 2, Fraction(16, 7), Fraction(16, 3), 16)


def test_eps_range():
    for bad in (0, 1, Fraction(3, 2)):
        with pytest.raises(ValueError):
            decay.exponent_profile(5, bad)
    with pytest.raises(ValueError):
        decay.exponent_profile(5)


@settings(max_examples=200, deadline=None)
@given(st.integers(4, 12), st.fractions(min_value=Fraction(1, 10**6), max_value=Fraction(999, 1000), max_denominator=10**6))
def test_holder_sum_exact_for_all_eps(n, eps):
    prof = decay.exponent_profile(n, eps)
    assert prof.holder_sum == decay.holder_sum_target(n)
    assert all(p >= 2 for p in prof.exponents)


def test_lambda_grid():
    g = decay.lambda_grid()
    assert len(g) == 12 and g[0] == pytest.approx(100) and g[-1] == pytest.approx(1e5)
    with pytest.raises(ValueError):
        decay.lambda_grid(10, 1, 3)
    with pytest.raises(ValueError):
        decay.lambda_grid(points=0)


def test_fit_exact_power_law():
    lams = [10.0, 30.0, 100.0, 300.0, 1000.0]
    fit = decay.fit_loglog(synthetic([7 * l**-0.25 for l in lams], lams))
    assert fit.slope == pytest.approx(-0.25, abs=1e-12)
    assert fit.r_squared == pytest.approx(1.0)


def test_fit_constant():
    assert decay.fit_loglog(synthetic([2.0] * 4)).slope == pytest.approx(0, abs=1e-12)


def test_fit_drops_and_skips():
    recs = synthetic([1.0, 1.0, 1.0, 1.0]) + synthetic([5.0], [1e9], converged=False)
    assert decay.fit_loglog(recs).points_used == 4
    with pytest.raises(decay.InsufficientData):
        decay.fit_loglog(recs, drop=2)
    with pytest.raises(ValueError):
        decay.fit_loglog(recs, "panels")


def test_fit_order_independent():
    lams = [10.0, 20.0, 40.0, 80.0]
    recs = synthetic([l**-0.5 for l in lams], lams)
    assert decay.fit_loglog(recs) == decay.fit_loglog(recs[::-1])


def test_csv_and_plot_output():
    recs = synthetic([1.0, 0.5, 0.25])
    rows = list(csv.reader(io.StringIO(decay.records_to_csv(recs))))
    assert rows[0] == [
        "lambda", "value_re", "value_im", "abs_value", "norm_product", "ratio", "error_estimate", "panels", "converged",
    ]
    assert len(rows) == 4 and rows[1][-1] == "true"
    fit = decay.fit_loglog(recs)
    text = decay.plot_data(recs, fit)
    blocks = [b for b in text.split("\n\n\n")]
    assert len(blocks) == 2
    report = decay.fit_report(fit, -0.3, 0.05, "ratio")
    assert {"slope", "stderr_slope", "r2", "expected_slope", "tolerance", "pass"} <= set(report)
    assert json.loads(decay.dumps_json(report))["pass"] is True
    assert decay.fit_report(fit, None, 0.05, "ratio")["pass"] is None


def test_sweep_n3_short_run():
    prof = decay.exponent_profile(3)
    recs = decay.run_sweep(x**2 * y, E3, [1e2, 1e3, 1e4], profile=prof)
    assert [r.lam for r in recs] == [1e2, 1e3, 1e4]
    assert all(r.converged for r in recs)
    assert decay.is_nonincreasing(recs)
    # norm product follows the closed form to 12 digits
    for r in recs:
        expected = r.lam ** -float(decay.extremizer_norm_exponent(3))
        assert r.norm_product == pytest.approx(expected, rel=1e-12)


def test_sweep_threads_match_serial():
    lams = [1e2, 3e2, 1e3, 3e3]
    a = decay.run_sweep(x**2 * y, E3, lams)
    b = decay.run_sweep(x**2 * y, E3, lams[::-1], workers=4)
    assert a == b


def test_ratio_slope_bookkeeping():
    recs = decay.run_sweep(x**2 * y, E3, decay.lambda_grid(1e2, 1e4, 5))
    fa = decay.fit_loglog(recs, "abs_value")
    fr = decay.fit_loglog(recs, "ratio")
    assert fr.slope - fa.slope == pytest.approx(float(decay.extremizer_norm_exponent(3)), abs=1e-9)


def test_sweep_argument_errors():
    with pytest.raises(ValueError):
        decay.run_sweep(x**2 * y, E3, [])
    with pytest.raises(ValueError):
        decay.run_sweep(x**2 * y, E3, [10], profile=decay.exponent_profile(4, Fraction(1, 10)))
    with pytest.raises(ValueError):
        decay.run_sweep(x**2 * y, E3, [10], family="gaussian")


def test_no_decay_zero_phase_exact():
    recs = decay.no_decay_records(E3, P(), [1e2, 1e3, 1e4])
    assert len({r.abs_value for r in recs}) == 1
    assert decay.fit_loglog(recs).slope == pytest.approx(0, abs=1e-12)


def test_no_decay_rejects_nondegenerate():
    with pytest.raises(decay.DecompositionUnavailable):
        decay.no_decay_demo(E3, x**2 * y, [1e2, 1e3, 1e4])


def test_no_decay_short_run_flat():
    fit = decay.no_decay_demo(E3, x**3 + y**3, [1e2, 3e2, 1e3])
    assert abs(fit.slope) < 0.02
    assert math.isfinite(fit.intercept)
