from fractions import Fraction

import numpy as np
import pytest

from oscdecay.polynomial import BivariatePolynomial as P
from oscdecay.polynomial import Polynomial1D

x, y = P.x(), P.y()


def test_zero_coefficients_dropped():
    p = P({(1, 0): 2, (0, 1): 0, (2, 2): Fraction(0)})
    assert p.terms == {(1, 0): Fraction(2)}
    assert (x - x).is_zero()
    assert (x - x).degree == float("-inf")


def test_degree_and_homogeneous_part():
    s = x**2 * y + x**4
    assert s.degree == 4
    assert s.homogeneous_part(3) == x**2 * y
    assert s.homogeneous_part(4) == x**4
    assert (x**2 * y).homogeneous_part(2).is_zero()


@pytest.mark.parametrize(
    "p, axis, expected",
    [
        (x**2 * y, "x", 2 * x * y),
        (P.constant(5), "y", P()),
        (x**2 * y**2, "y", 2 * x**2 * y),
    ],
)
def test_partial_derivative(p, axis, expected):
    assert p.derivative(axis) == expected


def test_derivative_bad_axis():
    with pytest.raises(ValueError):
        x.derivative("z")


def test_text_roundtrip():
    s = x**3 * Fraction(-2, 7) + 5 * x * y + 1
    text = s.to_text()
    assert "3 0 -2/7" in text
    assert P.from_text(text) == s


def test_from_text_rejects_garbage():
    with pytest.raises(ValueError):
        P.from_text("1 2")


def test_exact_and_float_evaluation_agree():
    s = x**2 * y - Fraction(1, 3) * y**3 + 2
    assert s.evaluate_exact(Fraction(1, 2), 3) == Fraction(3, 4) - 9 + 2
    xs = np.linspace(-1, 1, 7)
    np.testing.assert_allclose(s(xs, 0.5), [float(s.evaluate_exact(Fraction(v), Fraction(1, 2))) for v in xs])


def test_str():
    assert str(x**2 * y - 2 * y + Fraction(1, 2)) == "x^2*y - 2*y + 1/2"
    assert str(P()) == "0"


def test_compose_linear_binomial():
    sq = Polynomial1D([0, 0, 1])
    assert sq.compose_linear(1, 1) == x**2 + 2 * x * y + y**2
    assert Polynomial1D([1, 2]).compose_linear(3, -1) == 1 + 6 * x - 2 * y


def test_polynomial1d_basics():
    p = Polynomial1D([1, 0, 3, 0])
    assert p.degree == 2
    assert p.derivative() == Polynomial1D([0, 6])
    assert p.evaluate_exact(2) == 13
    assert p(2.0) == pytest.approx(13.0)
    assert str(Polynomial1D([0, 0, Fraction(-1, 2)])) == "-1/2*t^2"


def test_gradient_bound_dominates_samples():
    s = x**3 * y - 4 * x * y**2 + y
    gx, gy = s.gradient_bound(1.5, 0.5)
    xs, ys = np.meshgrid(np.linspace(-1.5, 1.5, 41), np.linspace(-0.5, 0.5, 41))
    assert np.abs(s.derivative("x")(xs, ys)).max() <= gx
    assert np.abs(s.derivative("y")(xs, ys)).max() <= gy
