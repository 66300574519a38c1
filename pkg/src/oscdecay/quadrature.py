"""Evaluation of the n-linear oscillatory form

    Lambda_n(f) = iint exp(i*lam*S(x, y)) prod_j f_j(b_j x + c_j y) phi(x, y) dx dy

for polynomial phases ``S`` and piecewise-constant ``f_j``.

The integrand is smooth except along the lines ``b_j x + c_j y = t`` where
some ``f_j`` jumps.  :func:`evaluate_lambda_n` therefore cuts the cutoff's
bounding box into the convex cells of that line arrangement first, and only
then runs an adaptive Gauss rule on triangles, where it is smooth.
:func:`brute_force_oracle` is a plain midpoint sum used to cross-check it.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .phase import DirectionSystem
from .polynomial import BivariatePolynomial
from .testfunctions import PiecewiseConstant1D

__all__ = [
    "CutoffSpec",
    "IntegrandSpec",
    "QuadratureResult",
    "InvalidSpec",
    "BudgetExceeded",
    "standard_bump",
    "evaluate_lambda_n",
    "brute_force_oracle",
    "trivial_bound",
    "cell_decomposition",
]

GAUSS_ORDER = 8
_CHUNK = 8192


class InvalidSpec(ValueError):
    pass


class BudgetExceeded(RuntimeError):
    """Raised by ``evaluate_lambda_n(..., strict=True)``; carries the partial result."""

    def __init__(self, result: "QuadratureResult"):
        super().__init__(
            f"panel budget exhausted after {result.panels_used} panels "
            f"(error estimate {result.error_estimate:.3g})"
        )
        self.result = result


@dataclass(frozen=True)
class CutoffSpec:
    """Radial bump ``exp(1 - 1/(1 - r^2))`` on the disk of the given center and radius."""

    center: tuple[float, float] = (0.0, 0.0)
    radius: float = 2.0
    kind: str = "standard_bump"

    def __post_init__(self):
        if self.kind != "standard_bump":
            raise InvalidSpec(f"unknown cutoff kind {self.kind!r}")
        if not self.radius > 0:
            raise InvalidSpec("cutoff radius must be positive")
        object.__setattr__(self, "center", (float(self.center[0]), float(self.center[1])))
        object.__setattr__(self, "radius", float(self.radius))

    def __call__(self, x, y):
        x = np.asarray(x, dtype=float)
        y = np.asarray(y, dtype=float)
        r2 = ((x - self.center[0]) ** 2 + (y - self.center[1]) ** 2) / self.radius**2
        inside = r2 < 1.0
        safe = np.where(inside, 1.0 - r2, 1.0)
        return np.where(inside, np.exp(1.0 - 1.0 / safe), 0.0)

    def bounding_box(self) -> tuple[float, float, float, float]:
        cx, cy = self.center
        r = self.radius
        return cx - r, cx + r, cy - r, cy + r


def standard_bump(point, cutoff: CutoffSpec = CutoffSpec()) -> float:
    x, y = point
    return float(cutoff(x, y))


@dataclass(frozen=True)
class IntegrandSpec:
    phase: BivariatePolynomial
    lam: float
    dirs: DirectionSystem
    functions: tuple[PiecewiseConstant1D, ...]
    cutoff: CutoffSpec = field(default_factory=CutoffSpec)

    def __post_init__(self):
        lam = float(getattr(self.lam, "value", self.lam))
        if not lam >= 1:
            raise InvalidSpec(f"lambda must be >= 1, got {lam}")
        object.__setattr__(self, "lam", lam)
        if not isinstance(self.dirs, DirectionSystem):
            try:
                object.__setattr__(self, "dirs", DirectionSystem(self.dirs))
            except ValueError as exc:
                raise InvalidSpec(str(exc)) from exc
        fs = tuple(self.functions)
        if len(fs) != len(self.dirs):
            raise InvalidSpec(f"{len(fs)} functions for {len(self.dirs)} directions")
        object.__setattr__(self, "functions", fs)

    @property
    def n(self) -> int:
        return len(self.dirs)

    def replace(self, **changes) -> "IntegrandSpec":
        kw = dict(phase=self.phase, lam=self.lam, dirs=self.dirs, functions=self.functions, cutoff=self.cutoff)
        kw.update(changes)
        return IntegrandSpec(**kw)


@dataclass(frozen=True)
class QuadratureResult:
    value: complex
    error_estimate: float
    panels_used: int
    converged: bool


def trivial_bound(spec: IntegrandSpec) -> float:
    """``prod_j ||f_j||_inf * int |phi|``; no value of the form can exceed it."""
    sup = 1.0
    for f in spec.functions:
        sup *= max((abs(v) for v in f.values), default=0.0)
    return sup * _bump_mass(spec.cutoff.radius)


def _bump_mass(radius: float) -> float:
    # int over the disk of exp(1 - 1/(1 - r^2)), radial Gauss-Legendre
    u, w = np.polynomial.legendre.leggauss(64)
    r = 0.5 * (u + 1.0)
    vals = np.exp(1.0 - 1.0 / (1.0 - r**2)) * r
    return float(2.0 * np.pi * radius**2 * 0.5 * np.dot(w, vals))


# --------------------------------------------------------------------------
# geometry


def _clip(poly: np.ndarray, normal: np.ndarray, t: float, keep_below: bool) -> np.ndarray:
    """Intersect a convex polygon with ``normal.p <= t`` (or ``>= t``)."""
    s = poly @ normal - t
    if not keep_below:
        s = -s
    inside = s <= 0.0
    if inside.all():
        return poly
    if not inside.any():
        return poly[:0]
    out = []
    m = len(poly)
    for i in range(m):
        j = (i + 1) % m
        if inside[i]:
            out.append(poly[i])
        if inside[i] != inside[j]:
            a = s[i] / (s[i] - s[j])
            out.append(poly[i] + a * (poly[j] - poly[i]))
    return np.array(out)


def _poly_area(poly: np.ndarray) -> float:
    x, y = poly[:, 0], poly[:, 1]
    return 0.5 * abs(float(np.dot(x, np.roll(y, -1)) - np.dot(y, np.roll(x, -1))))


def cell_decomposition(spec: IntegrandSpec) -> list[tuple[np.ndarray, complex]]:
    """Convex cells of the bounding box on which every ``f_j`` is constant and nonzero."""
    x0, x1, y0, y1 = spec.cutoff.bounding_box()
    box = np.array([[x0, y0], [x1, y0], [x1, y1], [x0, y1]])
    sliver = 1e-15 * (x1 - x0) * (y1 - y0)
    cells = [(box, 1.0 + 0j)]
    for d, f in zip(spec.dirs, spec.functions):
        if f.is_zero():
            return []
        normal = np.array(d.as_floats())
        bp = np.array([float(t) for t in f.breakpoints])
        vals = f.values
        nxt = []
        for poly, w in cells:
            proj = poly @ normal
            tmin, tmax = proj.min(), proj.max()
            k0 = max(int(np.searchsorted(bp, tmin, side="right")) - 1, 0)
            k1 = min(int(np.searchsorted(bp, tmax, side="left")), len(vals))
            for k in range(k0, k1):
                if vals[k] == 0:
                    continue
                q = poly
                if bp[k] > tmin:
                    q = _clip(q, normal, bp[k], keep_below=False)
                if bp[k + 1] < tmax and len(q):
                    q = _clip(q, normal, bp[k + 1], keep_below=True)
                if len(q) >= 3 and _poly_area(q) > sliver:
                    nxt.append((q, w * vals[k]))
        cells = nxt
        if not cells:
            break
    return cells


def _triangulate(cells) -> tuple[np.ndarray, np.ndarray]:
    tris, wts = [], []
    for poly, w in cells:
        for k in range(1, len(poly) - 1):
            tris.append((poly[0], poly[k], poly[k + 1]))
            wts.append(w)
    if not tris:
        return np.zeros((0, 3, 2)), np.zeros(0, dtype=complex)
    return np.array(tris, dtype=float), np.array(wts, dtype=complex)


def _areas(tris: np.ndarray) -> np.ndarray:
    e1 = tris[:, 1] - tris[:, 0]
    e2 = tris[:, 2] - tris[:, 0]
    return 0.5 * np.abs(e1[:, 0] * e2[:, 1] - e1[:, 1] * e2[:, 0])


def _diameters(tris: np.ndarray) -> np.ndarray:
    d01 = np.linalg.norm(tris[:, 1] - tris[:, 0], axis=1)
    d12 = np.linalg.norm(tris[:, 2] - tris[:, 1], axis=1)
    d20 = np.linalg.norm(tris[:, 0] - tris[:, 2], axis=1)
    return np.maximum(np.maximum(d01, d12), d20)


def _split(tris: np.ndarray) -> np.ndarray:
    """Midpoint refinement; children of triangle k are rows 4k..4k+3."""
    p0, p1, p2 = tris[:, 0], tris[:, 1], tris[:, 2]
    m01, m12, m20 = 0.5 * (p0 + p1), 0.5 * (p1 + p2), 0.5 * (p2 + p0)
    kids = np.stack(
        [
            np.stack([p0, m01, m20], axis=1),
            np.stack([m01, p1, m12], axis=1),
            np.stack([m20, m12, p2], axis=1),
            np.stack([m01, m12, m20], axis=1),
        ],
        axis=1,
    )
    return kids.reshape(-1, 3, 2)


def _outside_disk(tris: np.ndarray, center, radius) -> np.ndarray:
    """True for triangles that do not meet the open disk."""
    c = np.asarray(center)
    p = tris - c
    dist = np.full(len(tris), np.inf)
    for i, j in ((0, 1), (1, 2), (2, 0)):
        a, b = p[:, i], p[:, j]
        ab = b - a
        t = np.clip(-np.einsum("ij,ij->i", a, ab) / np.maximum(np.einsum("ij,ij->i", ab, ab), 1e-300), 0, 1)
        closest = a + t[:, None] * ab
        dist = np.minimum(dist, np.linalg.norm(closest, axis=1))
    # origin inside the triangle
    def cross(u, v):
        return u[:, 0] * v[:, 1] - u[:, 1] * v[:, 0]

    s0 = cross(p[:, 1] - p[:, 0], -p[:, 0])
    s1 = cross(p[:, 2] - p[:, 1], -p[:, 1])
    s2 = cross(p[:, 0] - p[:, 2], -p[:, 2])
    inside = ((s0 >= 0) & (s1 >= 0) & (s2 >= 0)) | ((s0 <= 0) & (s1 <= 0) & (s2 <= 0))
    dist[inside] = 0.0
    return dist >= radius


def _oscillation_cap(tris: np.ndarray, phase: BivariatePolynomial, lam: float) -> np.ndarray:
    """Largest admissible diameter: about one phase oscillation per panel."""
    xmax = np.abs(tris[:, :, 0]).max(axis=1)
    ymax = np.abs(tris[:, :, 1]).max(axis=1)
    gx, gy = phase.gradient_bound(xmax, ymax)
    g = np.hypot(gx, gy)
    with np.errstate(divide="ignore"):
        return np.where(g > 0, 2.0 * np.pi / (lam * g), np.inf)


# --------------------------------------------------------------------------
# triangle rule


def _reference_rule(order: int = GAUSS_ORDER):
    """Collapsed tensor Gauss rule on the unit triangle (Duffy map)."""
    u, w = np.polynomial.legendre.leggauss(order)
    u = 0.5 * (u + 1.0)
    w = 0.5 * w
    uu, vv = np.meshgrid(u, u, indexing="ij")
    wu, wv = np.meshgrid(w, w, indexing="ij")
    uu, vv = uu.ravel(), vv.ravel()
    bary = np.stack([1.0 - uu, uu * (1.0 - vv), uu * vv], axis=1)
    weights = (wu * wv).ravel() * uu
    return bary, weights


_BARY, _WEIGHTS = _reference_rule()


def _rule(tris: np.ndarray, spec: IntegrandSpec) -> np.ndarray:
    """Integral of ``exp(i lam S) phi`` over each triangle (unit cell weight)."""
    out = np.empty(len(tris), dtype=complex)
    lam = spec.lam
    for s in range(0, len(tris), _CHUNK):
        t = tris[s : s + _CHUNK]
        pts = np.einsum("qk,mkd->mqd", _BARY, t)
        x, y = pts[..., 0], pts[..., 1]
        vals = spec.cutoff(x, y).astype(complex)
        if not spec.phase.is_zero():
            vals *= np.exp(1j * lam * spec.phase(x, y))
        out[s : s + _CHUNK] = 2.0 * _areas(t) * (vals @ _WEIGHTS)
    return out


def _fsum_complex(arrays) -> complex:
    re = math.fsum(float(v) for a in arrays for v in np.real(a))
    im = math.fsum(float(v) for a in arrays for v in np.imag(a))
    return complex(re, im)


def evaluate_lambda_n(
    spec: IntegrandSpec,
    rtol: float = 1e-6,
    panel_budget: int = 4_000_000,
    floor_rel: float = 1e-10,
    strict: bool = False,
) -> QuadratureResult:
    """Adaptive evaluation of the oscillatory form described by ``spec``.

    A triangle is accepted once its 8x8-point collapsed Gauss value and the
    sum over its four midpoint children agree to within its area share of
    ``rtol * max(|value|, floor)``, where ``floor = floor_rel * trivial_bound``.
    The children's sum is what gets accumulated.

    If the budget runs out the partial value is returned with
    ``converged=False``, or :class:`BudgetExceeded` is raised when ``strict``.
    """
    if not (0 < rtol <= 0.1):
        raise InvalidSpec("rtol must lie in (0, 0.1]")
    if panel_budget < 1:
        raise InvalidSpec("panel_budget must be >= 1")
    if any(f.is_zero() for f in spec.functions):
        return QuadratureResult(0j, 0.0, 0, True)

    tris, wts = _triangulate(cell_decomposition(spec))
    if len(tris):
        keep = ~_outside_disk(tris, spec.cutoff.center, spec.cutoff.radius)
        tris, wts = tris[keep], wts[keep]
    if not len(tris):
        return QuadratureResult(0j, 0.0, 0, True)

    if not spec.phase.is_zero():
        while True:
            big = _diameters(tris) > _oscillation_cap(tris, spec.phase, spec.lam)
            if not big.any():
                break
            if len(tris) + 3 * int(big.sum()) > panel_budget:
                result = QuadratureResult(complex(np.sum(_rule(tris, spec) * wts)), math.inf, len(tris), False)
                if strict:
                    raise BudgetExceeded(result)
                return result
            tris = np.concatenate([tris[~big], _split(tris[big])])
            wts = np.concatenate([wts[~big], np.repeat(wts[big], 4)])

    area = _areas(tris)
    total_area = float(area.sum())
    floor = floor_rel * float(np.sum(np.abs(wts) * area))
    q = _rule(tris, spec) * wts
    panels = len(tris)

    acc_vals: list[np.ndarray] = []
    acc_errs: list[np.ndarray] = []
    acc_sum = 0j
    tol = rtol * floor
    converged = True
    while len(tris):
        kids = _split(tris)
        qk = (_rule(kids, spec) * np.repeat(wts, 4)).reshape(-1, 4)
        panels += len(kids)
        refined = qk.sum(axis=1)
        err = np.abs(q - refined)
        est = acc_sum + complex(refined.sum())
        tol = rtol * max(abs(est), floor)
        ok = err <= tol * area / total_area
        # panels too small to split further are taken as they are
        ok |= area < 1e-13 * total_area
        if panels >= panel_budget and not ok.all():
            acc_vals.append(refined)
            acc_errs.append(err)
            converged = False
            break
        acc_vals.append(refined[ok])
        acc_errs.append(err[ok])
        acc_sum += complex(refined[ok].sum())
        bad = ~ok
        tris = kids.reshape(-1, 4, 3, 2)[bad].reshape(-1, 3, 2)
        q = qk[bad].ravel()
        wts = np.repeat(wts[bad], 4)
        area = np.repeat(area[bad] / 4.0, 4)

    value = _fsum_complex(acc_vals)
    error = math.fsum(float(e) for a in acc_errs for e in a)
    tol = rtol * max(abs(value), floor)
    converged = converged and error <= tol * (1 + 1e-9)
    result = QuadratureResult(value, error, panels, converged)
    if strict and not converged:
        raise BudgetExceeded(result)
    return result


# --------------------------------------------------------------------------
# independent check


def _window_cdf(s: np.ndarray, alpha: float, beta: float) -> np.ndarray:
    """CDF of ``U[-alpha, alpha] + U[-beta, beta]`` (the projection of a grid cell)."""
    if beta > alpha:
        alpha, beta = beta, alpha
    if beta == 0.0:
        return np.clip((s + alpha) / (2.0 * alpha), 0.0, 1.0)

    def ramp2(u):
        return 0.5 * np.maximum(u, 0.0) ** 2

    out = (
        ramp2(s + alpha + beta) - ramp2(s + alpha - beta) - ramp2(s - alpha + beta) + ramp2(s - alpha - beta)
    ) / (4.0 * alpha * beta)
    out = np.where(s >= alpha + beta, 1.0, out)
    out = np.where(s <= -(alpha + beta), 0.0, out)
    return np.clip(out, 0.0, 1.0)


def _cell_average(f: PiecewiseConstant1D, b: float, c: float, x: np.ndarray, y: np.ndarray, h: float):
    tc = b * x + c * y
    alpha, beta = abs(b) * h / 2.0, abs(c) * h / 2.0
    bp = [float(t) for t in f.breakpoints]
    cdf = [_window_cdf(t - tc, alpha, beta) for t in bp]
    out = np.zeros(tc.shape, dtype=complex)
    for k, v in enumerate(f.values):
        out += v * (cdf[k + 1] - cdf[k])
    return out


def brute_force_oracle(spec: IntegrandSpec, N: int = 2048) -> complex:
    """Midpoint sum on an ``N x N`` grid over the cutoff's bounding box.

    The step functions enter through their exact averages over each grid
    cell (a cell projects onto ``b x + c y`` as a trapezoidal window), which
    keeps the sum second-order accurate across the jump lines; phase and
    cutoff are sampled at the cell centers.
    """
    if N < 16:
        raise ValueError("N must be >= 16")
    if any(f.is_zero() for f in spec.functions):
        return 0j
    x0, x1, y0, y1 = spec.cutoff.bounding_box()
    # the box is a square, so the grid cells are too
    h = (x1 - x0) / N
    xs = x0 + h * (np.arange(N) + 0.5)
    ys = y0 + h * (np.arange(N) + 0.5)
    X, Y = np.meshgrid(xs, ys, indexing="ij")
    live = np.ones(X.shape, dtype=bool)
    for d, f in zip(spec.dirs, spec.functions):
        b, c = d.as_floats()
        lo, hi = float(f.breakpoints[0]), float(f.breakpoints[-1])
        tc = b * X + c * Y
        reach = (abs(b) + abs(c)) * h / 2.0
        live &= (tc > lo - reach) & (tc < hi + reach)
    idx = np.nonzero(live)
    x, y = X[idx], Y[idx]
    weight = np.ones(x.shape, dtype=complex)
    for d, f in zip(spec.dirs, spec.functions):
        b, c = d.as_floats()
        weight *= _cell_average(f, b, c, x, y, h)
    vals = weight * spec.cutoff(x, y)
    if not spec.phase.is_zero():
        vals = vals * np.exp(1j * spec.lam * spec.phase(x, y))
    return complex(vals.sum()) * h * h
