"""Directional differential operators on polynomial phases.

For directions ``a_j = (b_j, c_j)`` the operator

    D_n = prod_j (c_j d/dx - b_j d/dy)

annihilates every function of the form ``g(b_j x + c_j y)`` for its own
factor, so ``D_n S == 0`` exactly when ``S`` splits as a sum of one-variable
functions composed with the projections.  Everything here is exact rational
arithmetic.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from math import comb, isqrt
from typing import Iterable, Sequence

from .polynomial import BivariatePolynomial, Polynomial1D, as_fraction

__all__ = [
    "Direction",
    "DirectionSystem",
    "RegionBox",
    "GeneralPositionError",
    "partial_derivative",
    "apply_dn",
    "is_simply_degenerate",
    "degenerate_decomposition",
    "recompose",
    "certified_lower_bound",
    "check_general_position",
    "homogeneous_part",
    "lipschitz_bound",
]


class GeneralPositionError(ValueError):
    """Two directions are parallel."""


@dataclass(frozen=True)
class Direction:
    """The vector ``a = (b, c)``; functions are composed with ``b*x + c*y``."""

    b: Fraction
    c: Fraction

    def __post_init__(self):
        object.__setattr__(self, "b", as_fraction(self.b))
        object.__setattr__(self, "c", as_fraction(self.c))
        if self.b == 0 and self.c == 0:
            raise ValueError("direction must be nonzero")

    def det(self, other: "Direction") -> Fraction:
        return self.b * other.c - other.b * self.c

    def __iter__(self):
        yield self.b
        yield self.c

    def as_floats(self) -> tuple[float, float]:
        return float(self.b), float(self.c)

    def to_text(self) -> str:
        return f"{self.b} {self.c}"


def _as_direction(d) -> Direction:
    return d if isinstance(d, Direction) else Direction(*d)


def check_general_position(dirs: Iterable) -> bool:
    """True iff no two directions are scalar multiples of each other."""
    ds = [_as_direction(d) for d in dirs]
    return all(u.det(v) != 0 for u, v in combinations(ds, 2))


@dataclass(frozen=True)
class DirectionSystem:
    directions: tuple[Direction, ...]

    def __init__(self, directions: Iterable):
        ds = tuple(_as_direction(d) for d in directions)
        if len(ds) < 3:
            raise ValueError(f"need at least 3 directions, got {len(ds)}")
        if not check_general_position(ds):
            raise GeneralPositionError("directions are not in general position")
        object.__setattr__(self, "directions", ds)

    @property
    def n(self) -> int:
        return len(self.directions)

    def __len__(self):
        return len(self.directions)

    def __iter__(self):
        return iter(self.directions)

    def __getitem__(self, k):
        return self.directions[k]

    def to_text(self) -> str:
        return "".join(d.to_text() + "\n" for d in self.directions)

    @classmethod
    def from_text(cls, text: str) -> "DirectionSystem":
        dirs = []
        for raw in text.splitlines():
            line = raw.split("#", 1)[0].strip()
            if line:
                b, c = line.split()
                dirs.append(Direction(b, c))
        return cls(dirs)


@dataclass(frozen=True)
class RegionBox:
    x_lo: Fraction
    x_hi: Fraction
    y_lo: Fraction
    y_hi: Fraction

    def __post_init__(self):
        for name in ("x_lo", "x_hi", "y_lo", "y_hi"):
            object.__setattr__(self, name, as_fraction(getattr(self, name)))
        if not (self.x_lo < self.x_hi and self.y_lo < self.y_hi):
            raise ValueError("empty box")

    @classmethod
    def around(cls, center=(0, 0), radius=2) -> "RegionBox":
        """Smallest box containing the closed disk of the given center and radius."""
        cx, cy = (as_fraction(v) for v in center)
        r = as_fraction(radius)
        return cls(cx - r, cx + r, cy - r, cy + r)

    @property
    def radius(self) -> Fraction:
        """Largest coordinate magnitude on the box."""
        return max(abs(self.x_lo), abs(self.x_hi), abs(self.y_lo), abs(self.y_hi))


def partial_derivative(p: BivariatePolynomial, axis: str) -> BivariatePolynomial:
    return p.derivative(axis)


def homogeneous_part(s: BivariatePolynomial, d: int) -> BivariatePolynomial:
    return s.homogeneous_part(d)


def apply_dn(s: BivariatePolynomial, dirs) -> BivariatePolynomial:
    """Apply ``prod_j (c_j d/dx - b_j d/dy)`` to ``s``."""
    out = s
    for d in dirs:
        d = _as_direction(d)
        out = d.c * out.derivative("x") - d.b * out.derivative("y")
        if out.is_zero():
            break
    return out


def is_simply_degenerate(s: BivariatePolynomial, dirs) -> bool:
    return apply_dn(s, dirs).is_zero()


def _solve_exact(a: list[list[Fraction]], rhs: list[Fraction]) -> list[Fraction] | None:
    """One solution of ``a @ z = rhs`` (free variables set to 0), or None if inconsistent."""
    rows = [list(r) + [v] for r, v in zip(a, rhs)]
    m = len(rows)
    ncols = len(a[0]) if a else 0
    pivots = []
    r = 0
    for col in range(ncols):
        piv = next((k for k in range(r, m) if rows[k][col] != 0), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        pv = rows[r][col]
        rows[r] = [v / pv for v in rows[r]]
        for k in range(m):
            if k != r and rows[k][col] != 0:
                f = rows[k][col]
                rows[k] = [vk - f * vr for vk, vr in zip(rows[k], rows[r])]
        pivots.append(col)
        r += 1
        if r == m:
            break
    if any(rows[k][-1] != 0 for k in range(r, m)):
        return None
    z = [Fraction(0)] * ncols
    for k, col in enumerate(pivots):
        z[col] = rows[k][-1]
    return z


def degenerate_decomposition(s: BivariatePolynomial, dirs) -> list[Polynomial1D] | None:
    """Write ``s(x, y) = sum_j S_j(b_j x + c_j y)`` or return None.

    Each homogeneous slice of degree ``d`` gives a linear system in the
    degree-``d`` coefficients of the ``S_j``.  When it is underdetermined the
    minimal-norm solution is taken, which makes the answer unique.
    """
    ds = [_as_direction(d) for d in dirs]
    n = len(ds)
    if s.is_zero():
        return [Polynomial1D() for _ in ds]
    deg = int(s.degree)
    coeffs = [[Fraction(0)] * (deg + 1) for _ in range(n)]
    for d in range(deg + 1):
        target = [s.coefficient(k, d - k) for k in range(d + 1)]
        if not any(target):
            continue
        # column j holds the coefficients of (b_j x + c_j y)^d
        mat = [[comb(d, k) * dj.b**k * dj.c ** (d - k) for dj in ds] for k in range(d + 1)]
        gram = [
            [sum((mat[r][j] * mat[q][j] for j in range(n)), Fraction(0)) for q in range(d + 1)]
            for r in range(d + 1)
        ]
        y = _solve_exact(gram, target)
        if y is None:
            return None
        sol = [sum((mat[r][j] * y[r] for r in range(d + 1)), Fraction(0)) for j in range(n)]
        for r in range(d + 1):
            if sum((mat[r][j] * sol[j] for j in range(n)), Fraction(0)) != target[r]:
                return None
        for j in range(n):
            coeffs[j][d] = sol[j]
    return [Polynomial1D(c) for c in coeffs]


def recompose(parts: Sequence[Polynomial1D], dirs) -> BivariatePolynomial:
    """``sum_j parts[j](b_j x + c_j y)``."""
    out = BivariatePolynomial()
    for p, d in zip(parts, dirs):
        d = _as_direction(d)
        out = out + p.compose_linear(d.b, d.c)
    return out


def lipschitz_bound(p: BivariatePolynomial, box: RegionBox) -> Fraction:
    """``sum |c_ij| (i+j) R^(i+j-1)`` with ``R`` the largest coordinate on the box."""
    rad = box.radius
    return sum(
        (abs(c) * (i + j) * rad ** (i + j - 1) for (i, j), c in p.terms.items() if i + j > 0),
        Fraction(0),
    )


def _sqrt_upper(q: Fraction) -> Fraction:
    """A rational number >= sqrt(q)."""
    num, den = q.numerator, q.denominator
    # sqrt(num/den) = sqrt(num*den)/den
    root = isqrt(num * den)
    if root * root < num * den:
        root += 1
    return Fraction(root, den)


def certified_lower_bound(p: BivariatePolynomial, box: RegionBox, grid_n: int) -> Fraction:
    """Certified ``L`` with ``|p| >= L`` everywhere on ``box``.

    ``|p|`` is evaluated exactly at the centers of a ``grid_n x grid_n`` cell
    grid; every point of the box lies within half a cell diagonal of some
    center, so subtracting Lipschitz constant times that radius is safe.
    Doubling ``grid_n`` never decreases the result.
    """
    if grid_n < 2:
        raise ValueError("grid_n must be >= 2")
    if p.is_constant():
        return abs(p.coefficient(0, 0))
    w = box.x_hi - box.x_lo
    h = box.y_hi - box.y_lo
    # scaled from the full diagonal so that r(2N) == r(N)/2 exactly
    half_diag = _sqrt_upper(w * w + h * h) / (2 * grid_n)
    lip = lipschitz_bound(p, box)
    dx, dy = w / grid_n, h / grid_n
    xs = [box.x_lo + dx * (k + Fraction(1, 2)) for k in range(grid_n)]
    ys = [box.y_lo + dy * (k + Fraction(1, 2)) for k in range(grid_n)]
    # evaluate column-wise: p(x, .) is a univariate polynomial in y
    terms = p.terms
    max_j = max(j for _, j in terms)
    best = None
    for x in xs:
        col = [Fraction(0)] * (max_j + 1)
        for (i, j), c in terms.items():
            col[j] += c * x**i
        for y in ys:
            acc = Fraction(0)
            for c in reversed(col):
                acc = acc * y + c
            v = abs(acc)
            if best is None or v < best:
                best = v
    return max(Fraction(0), best - lip * half_diag)
