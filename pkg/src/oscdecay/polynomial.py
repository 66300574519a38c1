"""Exact-coefficient polynomials in one and two variables.

Coefficients are stored as :class:`fractions.Fraction`.  Float inputs are
converted exactly (``Fraction(0.1)`` is the binary value, not 1/10), so pass
strings or integers when you mean decimal rationals.
"""

from __future__ import annotations

from fractions import Fraction
from math import comb
from typing import Iterable, Mapping

import numpy as np


def as_fraction(value) -> Fraction:
    if isinstance(value, Fraction):
        return value
    if isinstance(value, str):
        return Fraction(value.strip())
    return Fraction(value)


def _fmt_coeff(c: Fraction) -> str:
    return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"


class BivariatePolynomial:
    """Sum of ``c_ij * x**i * y**j`` with exact rational ``c_ij``.

    Instances are immutable and hashable.  Zero coefficients are never
    stored; the zero polynomial has an empty term map and degree ``-inf``.
    """

    __slots__ = ("_terms", "_hash")

    def __init__(self, terms: Mapping[tuple[int, int], object] | None = None):
        clean: dict[tuple[int, int], Fraction] = {}
        for (i, j), c in (terms or {}).items():
            if i < 0 or j < 0:
                raise ValueError(f"negative exponent in term ({i}, {j})")
            c = as_fraction(c)
            if c:
                key = (int(i), int(j))
                clean[key] = clean.get(key, Fraction(0)) + c
                if not clean[key]:
                    del clean[key]
        self._terms = dict(sorted(clean.items()))
        self._hash = None

    # constructors -------------------------------------------------------
    @classmethod
    def constant(cls, c) -> "BivariatePolynomial":
        return cls({(0, 0): c})

    @classmethod
    def x(cls) -> "BivariatePolynomial":
        return cls({(1, 0): 1})

    @classmethod
    def y(cls) -> "BivariatePolynomial":
        return cls({(0, 1): 1})

    @classmethod
    def monomial(cls, i: int, j: int, c=1) -> "BivariatePolynomial":
        return cls({(i, j): c})

    @classmethod
    def linear_form(cls, b, c) -> "BivariatePolynomial":
        """The polynomial ``b*x + c*y``."""
        return cls({(1, 0): b, (0, 1): c})

    # basic properties ---------------------------------------------------
    @property
    def terms(self) -> dict[tuple[int, int], Fraction]:
        return dict(self._terms)

    @property
    def degree(self) -> float:
        if not self._terms:
            return float("-inf")
        return max(i + j for i, j in self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def is_constant(self) -> bool:
        return all(k == (0, 0) for k in self._terms)

    def coefficient(self, i: int, j: int) -> Fraction:
        return self._terms.get((i, j), Fraction(0))

    def constant_value(self) -> Fraction:
        if not self.is_constant():
            raise ValueError("polynomial is not constant")
        return self.coefficient(0, 0)

    # algebra ------------------------------------------------------------
    def _coerce(self, other) -> "BivariatePolynomial":
        if isinstance(other, BivariatePolynomial):
            return other
        return BivariatePolynomial.constant(as_fraction(other))

    def __add__(self, other):
        other = self._coerce(other)
        out = dict(self._terms)
        for k, c in other._terms.items():
            out[k] = out.get(k, Fraction(0)) + c
        return BivariatePolynomial(out)

    __radd__ = __add__

    def __neg__(self):
        return BivariatePolynomial({k: -c for k, c in self._terms.items()})

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        other = self._coerce(other)
        out: dict[tuple[int, int], Fraction] = {}
        for (i1, j1), c1 in self._terms.items():
            for (i2, j2), c2 in other._terms.items():
                k = (i1 + i2, j1 + j2)
                out[k] = out.get(k, Fraction(0)) + c1 * c2
        return BivariatePolynomial(out)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if k < 0:
            raise ValueError("negative power")
        result = BivariatePolynomial.constant(1)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def __eq__(self, other):
        if isinstance(other, BivariatePolynomial):
            return self._terms == other._terms
        try:
            return self._terms == BivariatePolynomial.constant(as_fraction(other))._terms
        except (TypeError, ValueError):
            return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(tuple(self._terms.items()))
        return self._hash

    # calculus -----------------------------------------------------------
    def derivative(self, axis: str) -> "BivariatePolynomial":
        if axis == "x":
            return BivariatePolynomial(
                {(i - 1, j): c * i for (i, j), c in self._terms.items() if i > 0}
            )
        if axis == "y":
            return BivariatePolynomial(
                {(i, j - 1): c * j for (i, j), c in self._terms.items() if j > 0}
            )
        raise ValueError(f"axis must be 'x' or 'y', got {axis!r}")

    def homogeneous_part(self, d: int) -> "BivariatePolynomial":
        if d < 0:
            raise ValueError("degree must be nonnegative")
        return BivariatePolynomial({k: c for k, c in self._terms.items() if sum(k) == d})

    # evaluation ---------------------------------------------------------
    def evaluate_exact(self, x, y) -> Fraction:
        x, y = as_fraction(x), as_fraction(y)
        return sum((c * x**i * y**j for (i, j), c in self._terms.items()), Fraction(0))

    def __call__(self, x, y):
        """Float evaluation; broadcasts over numpy arrays."""
        x = np.asarray(x, dtype=float)
        y = np.asarray(y, dtype=float)
        out = np.zeros(np.broadcast(x, y).shape)
        for (i, j), c in self._terms.items():
            term = float(c)
            if i:
                term = term * x**i
            if j:
                term = term * y**j
            out = out + term
        return out

    def gradient_bound(self, xmax, ymax):
        """Upper bounds for ``|d/dx p|`` and ``|d/dy p|`` on ``|x|<=xmax, |y|<=ymax``.

        Works elementwise on arrays of box half-widths.
        """
        xmax = np.asarray(xmax, dtype=float)
        ymax = np.asarray(ymax, dtype=float)
        gx = np.zeros(np.broadcast(xmax, ymax).shape)
        gy = np.zeros_like(gx)
        for (i, j), c in self._terms.items():
            a = abs(float(c))
            if i:
                gx = gx + a * i * xmax ** (i - 1) * ymax**j
            if j:
                gy = gy + a * j * xmax**i * ymax ** (j - 1)
        return gx, gy

    # text ---------------------------------------------------------------
    def __repr__(self):
        return f"BivariatePolynomial({str(self)!r})"

    def __str__(self):
        if not self._terms:
            return "0"
        parts = []
        for (i, j), c in sorted(self._terms.items(), key=lambda kv: (-sum(kv[0]), -kv[0][0])):
            mono = ""
            if i:
                mono += "x" if i == 1 else f"x^{i}"
            if j:
                mono += ("*" if mono else "") + ("y" if j == 1 else f"y^{j}")
            mag = abs(c)
            if mono:
                text = mono if mag == 1 else f"{_fmt_coeff(mag)}*{mono}"
            else:
                text = _fmt_coeff(mag)
            parts.append(("-" if c < 0 else "+", text))
        first_sign, first = parts[0]
        out = ("-" if first_sign == "-" else "") + first
        for sign, text in parts[1:]:
            out += f" {sign} {text}"
        return out

    def to_text(self) -> str:
        """Serialize as ``i j num/den`` triples, one per line."""
        return "".join(f"{i} {j} {c.numerator}/{c.denominator}\n" for (i, j), c in self._terms.items())

    @classmethod
    def from_text(cls, text: str | Iterable[str]) -> "BivariatePolynomial":
        lines = text.splitlines() if isinstance(text, str) else list(text)
        terms: dict[tuple[int, int], Fraction] = {}
        for lineno, raw in enumerate(lines, 1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            fields = line.split()
            if len(fields) != 3:
                raise ValueError(f"line {lineno}: expected 'i j coefficient', got {raw!r}")
            i, j = int(fields[0]), int(fields[1])
            terms[(i, j)] = terms.get((i, j), Fraction(0)) + as_fraction(fields[2])
        return cls(terms)


class Polynomial1D:
    """Univariate polynomial ``sum_k coeffs[k] * t**k`` with rational coefficients."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable[object] = ()):
        cs = [as_fraction(c) for c in coeffs]
        while cs and not cs[-1]:
            cs.pop()
        self.coeffs: tuple[Fraction, ...] = tuple(cs)

    @property
    def degree(self) -> float:
        return len(self.coeffs) - 1 if self.coeffs else float("-inf")

    def is_zero(self) -> bool:
        return not self.coeffs

    def derivative(self) -> "Polynomial1D":
        return Polynomial1D(k * c for k, c in enumerate(self.coeffs) if k > 0)

    def evaluate_exact(self, t) -> Fraction:
        t = as_fraction(t)
        acc = Fraction(0)
        for c in reversed(self.coeffs):
            acc = acc * t + c
        return acc

    def __call__(self, t):
        t = np.asarray(t, dtype=float)
        acc = np.zeros_like(t)
        for c in reversed(self.coeffs):
            acc = acc * t + float(c)
        return acc

    def abs_bound(self, radius: float) -> float:
        """Upper bound of ``|p(t)|`` for ``|t| <= radius``."""
        return sum(abs(float(c)) * radius**k for k, c in enumerate(self.coeffs))

    def compose_linear(self, b, c) -> BivariatePolynomial:
        """Return ``p(b*x + c*y)`` as a bivariate polynomial."""
        b, c = as_fraction(b), as_fraction(c)
        terms: dict[tuple[int, int], Fraction] = {}
        for d, coef in enumerate(self.coeffs):
            for k in range(d + 1):
                key = (k, d - k)
                terms[key] = terms.get(key, Fraction(0)) + coef * comb(d, k) * b**k * c ** (d - k)
        return BivariatePolynomial(terms)

    def __eq__(self, other):
        if isinstance(other, Polynomial1D):
            return self.coeffs == other.coeffs
        return NotImplemented

    def __hash__(self):
        return hash(self.coeffs)

    def __repr__(self):
        return f"Polynomial1D({[_fmt_coeff(c) for c in self.coeffs]})"

    def __str__(self):
        if not self.coeffs:
            return "0"
        parts = []
        for k in range(len(self.coeffs) - 1, -1, -1):
            c = self.coeffs[k]
            if not c:
                continue
            mono = "" if k == 0 else ("t" if k == 1 else f"t^{k}")
            mag = abs(c)
            text = (mono if mag == 1 else f"{_fmt_coeff(mag)}*{mono}") if mono else _fmt_coeff(mag)
            parts.append(("-" if c < 0 else "+", text))
        out = ("-" if parts[0][0] == "-" else "") + parts[0][1]
        for sign, text in parts[1:]:
            out += f" {sign} {text}"
        return out
