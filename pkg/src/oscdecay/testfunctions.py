"""Piecewise-constant test functions and the norm identities they satisfy.

Breakpoints may be :class:`~fractions.Fraction` (exact) or float; values are
complex.  Interval lengths stay exact for rational breakpoints, so the only
rounding in the identity checks comes from ``|v|**p``.
"""

from __future__ import annotations

import math
from bisect import bisect_right
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np

from .polynomial import Polynomial1D, as_fraction

__all__ = [
    "PiecewiseConstant1D",
    "LambdaParam",
    "indicator",
    "lp_norm",
    "extremizer",
    "twisted_product",
    "overlap_correlation",
    "tau_energy_integral",
    "tau_sup_norm",
    "modulate",
    "random_piecewise",
    "identity_suite",
]


def _num(v):
    """Keep ints/Fractions exact, everything else becomes float."""
    if isinstance(v, Fraction):
        return v
    if isinstance(v, (int, np.integer)) and not isinstance(v, bool):
        return Fraction(int(v))
    return float(v)


@dataclass(frozen=True)
class LambdaParam:
    value: float

    def __post_init__(self):
        if not self.value >= 1:
            raise ValueError(f"lambda must be >= 1, got {self.value}")

    def __float__(self):
        return float(self.value)


def _lam(lam) -> float:
    return float(lam.value if isinstance(lam, LambdaParam) else LambdaParam(lam).value)


class PiecewiseConstant1D:
    """Complex step function, zero outside ``[breakpoints[0], breakpoints[-1])``.

    Stored in canonical form: equal neighbouring values are merged and
    zero-valued end intervals are trimmed, so the zero function has no
    breakpoints at all.
    """

    __slots__ = ("breakpoints", "values")

    def __init__(self, breakpoints: Iterable = (), values: Iterable = ()):
        bps = [_num(t) for t in breakpoints]
        vals = [complex(v) for v in values]
        if bps and len(vals) != len(bps) - 1:
            raise ValueError("need exactly one value per interval")
        if not bps and vals:
            raise ValueError("values given without breakpoints")
        if any(b <= a for a, b in zip(bps, bps[1:])):
            raise ValueError("breakpoints must be strictly increasing")
        # merge equal neighbours
        mb, mv = (bps[:1], [])
        for k, v in enumerate(vals):
            if mv and mv[-1] == v:
                mb[-1] = bps[k + 1]
            else:
                mv.append(v)
                mb.append(bps[k + 1])
        while mv and mv[0] == 0:
            mv.pop(0)
            mb.pop(0)
        while mv and mv[-1] == 0:
            mv.pop()
            mb.pop()
        if not mv:
            mb = []
        self.breakpoints: tuple = tuple(mb)
        self.values: tuple[complex, ...] = tuple(mv)

    @classmethod
    def zero(cls) -> "PiecewiseConstant1D":
        return cls()

    def is_zero(self) -> bool:
        return not self.values

    @property
    def lengths(self) -> list:
        return [b - a for a, b in zip(self.breakpoints, self.breakpoints[1:])]

    @property
    def support(self) -> tuple | None:
        if self.is_zero():
            return None
        return self.breakpoints[0], self.breakpoints[-1]

    def is_real(self) -> bool:
        return all(v.imag == 0 for v in self.values)

    def is_nonnegative(self) -> bool:
        return all(v.imag == 0 and v.real >= 0 for v in self.values)

    # transformations ----------------------------------------------------
    def scale(self, alpha) -> "PiecewiseConstant1D":
        alpha = complex(alpha)
        return PiecewiseConstant1D(self.breakpoints, [alpha * v for v in self.values])

    __rmul__ = scale

    def conj(self) -> "PiecewiseConstant1D":
        return PiecewiseConstant1D(self.breakpoints, [v.conjugate() for v in self.values])

    def shift(self, s) -> "PiecewiseConstant1D":
        """The function ``z -> f(z + s)``."""
        s = _num(s)
        return PiecewiseConstant1D([t - s for t in self.breakpoints], self.values)

    def abs_pow(self, p: float) -> "PiecewiseConstant1D":
        return PiecewiseConstant1D(self.breakpoints, [abs(v) ** p for v in self.values])

    def value_at(self, t) -> complex:
        """Value on the half-open interval containing ``t``."""
        if self.is_zero():
            return 0j
        k = bisect_right(self.breakpoints, t) - 1
        if 0 <= k < len(self.values):
            return self.values[k]
        return 0j

    def __call__(self, t):
        t = np.asarray(t, dtype=float)
        if self.is_zero():
            return np.zeros(t.shape, dtype=complex)
        bp = np.array([float(b) for b in self.breakpoints])
        vals = np.concatenate([[0j], np.array(self.values), [0j]])
        return vals[np.searchsorted(bp, t, side="right")]

    def __mul__(self, other):
        if not isinstance(other, PiecewiseConstant1D):
            return self.scale(other)
        if self.is_zero() or other.is_zero():
            return PiecewiseConstant1D()
        lo = max(self.breakpoints[0], other.breakpoints[0])
        hi = min(self.breakpoints[-1], other.breakpoints[-1])
        if not lo < hi:
            return PiecewiseConstant1D()
        grid = sorted({t for t in self.breakpoints + other.breakpoints if lo <= t <= hi})
        vals = [self.value_at(a) * other.value_at(a) for a in grid[:-1]]
        return PiecewiseConstant1D(grid, vals)

    def integral(self):
        return sum((v * complex(float(ln)) for v, ln in zip(self.values, self.lengths)), 0j)

    def __eq__(self, other):
        if not isinstance(other, PiecewiseConstant1D):
            return NotImplemented
        return self.breakpoints == other.breakpoints and self.values == other.values

    def __hash__(self):
        return hash((self.breakpoints, self.values))

    def __repr__(self):
        if self.is_zero():
            return "PiecewiseConstant1D(0)"
        return f"PiecewiseConstant1D(breakpoints={list(map(str, self.breakpoints))}, values={list(self.values)})"

    # serialization ------------------------------------------------------
    def to_text(self) -> str:
        """Alternating ``breakpoint`` and ``value_re value_im`` lines."""
        lines = []
        for k, t in enumerate(self.breakpoints):
            lines.append(str(t))
            if k < len(self.values):
                v = self.values[k]
                lines.append(f"{v.real!r} {v.imag!r}")
        return "".join(line + "\n" for line in lines)

    @classmethod
    def from_text(cls, text: str) -> "PiecewiseConstant1D":
        lines = [ln.split("#", 1)[0].strip() for ln in text.splitlines()]
        lines = [ln for ln in lines if ln]
        if not lines:
            return cls()
        if len(lines) % 2 == 0:
            raise ValueError("expected an odd number of lines (breakpoint first and last)")
        bps, vals = [], []
        for k, line in enumerate(lines):
            if k % 2 == 0:
                bps.append(_parse_number(line))
            else:
                re_, im_ = line.split()
                vals.append(complex(float(re_), float(im_)))
        return cls(bps, vals)


def _parse_number(text: str):
    text = text.strip()
    try:
        return Fraction(text) if ("." not in text and "e" not in text.lower()) else float(text)
    except ValueError:
        return float(text)


def indicator(a, b, value=1.0) -> PiecewiseConstant1D:
    return PiecewiseConstant1D([a, b], [value])


def lp_norm(f: PiecewiseConstant1D, p: float) -> float:
    if p < 1:
        raise ValueError("p must be >= 1")
    if f.is_zero():
        return 0.0
    if math.isinf(p):
        return max(abs(v) for v in f.values)
    total = math.fsum(abs(v) ** p * float(ln) for v, ln in zip(f.values, f.lengths))
    return total ** (1.0 / p)


def _inverse_root(lam: float, n: int):
    """``lam**(-1/n)``, exact when ``lam`` is a perfect n-th power of an integer."""
    if float(lam).is_integer():
        k = round(lam ** (1.0 / n))
        for cand in (k - 1, k, k + 1):
            if cand > 0 and cand**n == int(lam):
                return Fraction(1, cand)
    return lam ** (-1.0 / n)


def extremizer(lam, n: int) -> PiecewiseConstant1D:
    """Indicator of ``[0, lam**(-1/n)]``."""
    if n < 3:
        raise ValueError("n must be >= 3")
    return indicator(0, _inverse_root(_lam(lam), n))


def twisted_product(f: PiecewiseConstant1D, b, tau) -> PiecewiseConstant1D:
    """``z -> f(z) * conj(f(z + b*tau))``."""
    if b == 0:
        raise ValueError("b must be nonzero")
    return f * f.conj().shift(_num(b) * _num(tau))


def _correlation_at(g: PiecewiseConstant1D, s) -> float:
    return (g * g.shift(s)).integral().real


def overlap_correlation(f: PiecewiseConstant1D, p: float):
    """Knots and values of ``s -> int |f(z)|^p |f(z+s)|^p dz``.

    The function is piecewise linear in ``s`` with knots at differences of
    breakpoints, and vanishes outside the outermost knots.
    """
    g = f.abs_pow(p)
    if g.is_zero():
        return [], []
    bp = g.breakpoints
    knots = sorted({tk - tl for tk in bp for tl in bp})
    return knots, [_correlation_at(g, s) for s in knots]


def tau_energy_integral(f: PiecewiseConstant1D, b) -> float:
    """``int || twisted_product(f, b, tau) ||_2^2 dtau``, by exact piecewise-linear integration."""
    if b == 0:
        raise ValueError("b must be nonzero")
    knots, vals = overlap_correlation(f, 2.0)
    if not knots:
        return 0.0
    area = math.fsum(
        0.5 * (va + vb) * float(sb - sa) for sa, sb, va, vb in zip(knots, knots[1:], vals, vals[1:])
    )
    return area / abs(float(b))


def tau_sup_norm(f: PiecewiseConstant1D, b, p: float) -> float:
    """``sup_tau || twisted_product(f, b, tau) ||_p``.

    ``||F_tau||_p^p`` is piecewise linear in ``b*tau``, so its maximum sits at
    one of the finitely many knots; all of them are checked.
    """
    if b == 0:
        raise ValueError("b must be nonzero")
    if p < 1:
        raise ValueError("p must be >= 1")
    if f.is_zero():
        return 0.0
    if math.isinf(p):
        return max(abs(v) for v in f.values) ** 2
    # |f|^p may underflow to zero even when f does not
    _, vals = overlap_correlation(f, p)
    return max([0.0, *vals]) ** (1.0 / p)


def modulate(
    f: PiecewiseConstant1D,
    lam,
    s_j: Polynomial1D,
    samples_per_interval: int = 1,
    max_phase_step: float = 0.1,
) -> PiecewiseConstant1D:
    """Step approximation of ``t -> exp(-i*lam*s_j(t)) * f(t)``.

    Each interval is cut into equal pieces, at least ``samples_per_interval``
    and enough that ``lam * sup|s_j'| * piece_length <= max_phase_step``; the
    modulation is sampled at piece midpoints.
    """
    if samples_per_interval < 1:
        raise ValueError("samples_per_interval must be >= 1")
    lam = float(lam.value if isinstance(lam, LambdaParam) else lam)
    if s_j.is_zero() or f.is_zero():
        return f
    ds = s_j.derivative()
    bps, vals = [], []
    for a, b, v in zip(f.breakpoints, f.breakpoints[1:], f.values):
        length = b - a
        slope = ds.abs_bound(max(abs(float(a)), abs(float(b))))
        m = max(samples_per_interval, math.ceil(lam * slope * float(length) / max_phase_step))
        cuts = [a + length * Fraction(k, m) if isinstance(length, Fraction) else a + length * k / m
                for k in range(m + 1)]
        mids = np.array([float(u) + 0.5 * float(w - u) for u, w in zip(cuts, cuts[1:])])
        phase = np.exp(-1j * lam * s_j(mids))
        bps.extend(cuts[:-1])
        vals.extend(v * phase)
    bps.append(f.breakpoints[-1])
    return PiecewiseConstant1D(bps, vals)


def random_piecewise(
    rng: np.random.Generator,
    pieces: int | None = None,
    nonnegative: bool = False,
    denominator: int = 8,
    span: int = 4,
) -> PiecewiseConstant1D:
    """Random step function with rational breakpoints ``k/denominator``."""
    if pieces is None:
        pieces = int(rng.integers(1, 7))
    ticks = rng.choice(np.arange(-span * denominator, span * denominator + 1), size=pieces + 1, replace=False)
    bps = [Fraction(int(t), denominator) for t in sorted(ticks)]
    if nonnegative:
        vals = rng.uniform(0.0, 3.0, size=pieces)
    else:
        vals = rng.normal(size=pieces) + 1j * rng.normal(size=pieces)
    return PiecewiseConstant1D(bps, vals)


def _rel_dev(a: float, b: float) -> float:
    scale = max(abs(a), abs(b))
    return 0.0 if scale == 0 else abs(a - b) / scale


def random_direction_coefficient(rng: np.random.Generator) -> Fraction:
    """Nonzero rational ``k/m`` with small numerator and denominator."""
    k = 0
    while k == 0:
        k = int(rng.integers(-6, 7))
    return Fraction(k, int(rng.integers(1, 5)))


def identity_suite(
    rng: np.random.Generator,
    samples: int = 50,
    functions: Sequence[PiecewiseConstant1D] | None = None,
) -> dict[str, float]:
    """Largest relative deviation seen for each exactly computable norm identity.

    Checked on ``samples`` random step functions (or the given ``functions``)
    with random rational ``b`` and random exponents:

    * ``tau_energy``: energy integral against ``||f||_2^4 / |b|``;
    * ``tau_sup``: for ``|f|``, the sup over tau against ``||f||_{2p}^2``;
    * ``twisted_at_zero``: ``||F_0||_p`` against ``||f||_{2p}^2``;
    * ``norm_scaling``: ``||alpha f||_p`` against ``|alpha| ||f||_p``;
    * ``extremizer_norm``: ``||1[0, lam^(-1/n)]||_p`` against ``lam^(-1/(np))``.
    """
    if functions is None:
        functions = [random_piecewise(rng) for _ in range(samples)]
    dev = dict.fromkeys(
        ("tau_energy", "tau_sup", "twisted_at_zero", "norm_scaling", "extremizer_norm"), 0.0
    )
    for f in functions:
        b = random_direction_coefficient(rng)
        p = float(rng.uniform(1.0, 4.0))
        alpha = complex(rng.normal(), rng.normal())
        g = f.abs_pow(1.0)
        l2 = lp_norm(f, 2.0)
        dev["tau_energy"] = max(dev["tau_energy"], _rel_dev(tau_energy_integral(f, b), l2**4 / abs(float(b))))
        dev["tau_sup"] = max(dev["tau_sup"], _rel_dev(tau_sup_norm(g, b, p), lp_norm(g, 2 * p) ** 2))
        dev["twisted_at_zero"] = max(
            dev["twisted_at_zero"], _rel_dev(lp_norm(twisted_product(f, b, 0), p), lp_norm(f, 2 * p) ** 2)
        )
        dev["norm_scaling"] = max(dev["norm_scaling"], _rel_dev(lp_norm(f.scale(alpha), p), abs(alpha) * lp_norm(f, p)))
        lam = float(10 ** rng.uniform(0, 5))
        n = int(rng.integers(3, 9))
        dev["extremizer_norm"] = max(
            dev["extremizer_norm"], _rel_dev(lp_norm(extremizer(lam, n), p), lam ** (-1.0 / (n * p)))
        )
    return dev
