"""Decay-rate experiments: exponent bookkeeping, lambda sweeps and slope fits.

With the extremizers ``f_j = 1[0, lam^(-1/n)]`` and a phase whose lowest
surviving homogeneous part has degree ``n``, a change of variables gives
``|Lambda_n(f)| ~ lam^(-2/n)`` while ``prod_j ||f_j||_{p_j} = lam^(-H/n)``,
``H`` being the Hölder sum of the exponents.  The ratio therefore decays
like ``lam^(-1/2^(n-1))`` exactly when ``H = (2^n - n)/2^(n-1)``.
"""

from __future__ import annotations

import csv
import io
import json
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np
from scipy import stats

from .phase import DirectionSystem, degenerate_decomposition, is_simply_degenerate
from .polynomial import BivariatePolynomial
from .quadrature import CutoffSpec, IntegrandSpec, evaluate_lambda_n
from .testfunctions import PiecewiseConstant1D, extremizer, indicator, lp_norm, modulate

__all__ = [
    "ExponentProfile",
    "SweepRecord",
    "FitResult",
    "InsufficientData",
    "DecompositionUnavailable",
    "exponent_profile",
    "limiting_profile",
    "theoretical_decay",
    "holder_sum_target",
    "extremizer_norm_exponent",
    "lambda_grid",
    "run_sweep",
    "fit_loglog",
    "no_decay_records",
    "no_decay_demo",
    "is_nonincreasing",
    "records_to_csv",
    "fit_report",
    "plot_data",
]

CSV_COLUMNS = (
    "lambda",
    "value_re",
    "value_im",
    "abs_value",
    "norm_product",
    "ratio",
    "error_estimate",
    "panels",
    "converged",
)


class InsufficientData(ValueError):
    pass


class DecompositionUnavailable(ValueError):
    pass


# --------------------------------------------------------------------------
# exponent arithmetic


def theoretical_decay(n: int) -> Fraction:
    """Decay exponent ``2^(1-n)`` of the n-linear form (1/4 for the trilinear case)."""
    if n < 3:
        raise ValueError("n must be >= 3")
    return Fraction(1, 2 ** (n - 1))


def holder_sum_target(n: int) -> Fraction:
    if n < 3:
        raise ValueError("n must be >= 3")
    return Fraction(2**n - n, 2 ** (n - 1))


def extremizer_norm_exponent(n: int) -> Fraction:
    """``-log(prod_j ||f_j||_{p_j}) / log(lam)`` for extremizers at the scaling-critical Hölder sum."""
    return holder_sum_target(n) / n


@dataclass(frozen=True)
class ExponentProfile:
    n: int
    eps: object
    exponents: tuple

    @property
    def holder_sum(self):
        return sum(1 / p for p in self.exponents)

    def as_floats(self) -> tuple[float, ...]:
        return tuple(float(p) for p in self.exponents)


def _exact(v):
    return v if isinstance(v, (Fraction, int)) else float(v)


def _profile_entries(n: int, eps) -> list:
    a = Fraction(2 ** (n - 1))
    q = Fraction(2 ** (n - 3))
    ps = [Fraction(2), Fraction(2)]
    # middle entries 2^(n-1)/(2^k - 1) for k = n-2 down to 3
    ps += [a / (2 ** (n - j + 1) - 1) for j in range(3, n - 1)]
    ps.append(a / 3 + eps)
    ps.append(a - 9 * q * eps / (q + 3 * eps))
    return ps


def exponent_profile(n: int, eps=None, triple: Sequence | None = None) -> ExponentProfile:
    """Lebesgue exponents for which the decay bound holds.

    For ``n >= 4`` this is the family indexed by ``0 < eps < 1``.  For
    ``n = 3`` any ``(p, q, r)`` in ``[2, 4)^3`` with reciprocal sum 5/4 is
    allowed via ``triple``; otherwise ``eps`` plays the role of the small
    parameter ``delta`` in ``(2, 2 + delta, (8 + 4 delta)/(2 + 3 delta))``,
    defaulting to 0.05.

    Pass ``eps`` as a Fraction (or int/str) to get exact exponents.
    """
    if n < 3:
        raise ValueError("n must be >= 3")
    if n == 3:
        if triple is not None:
            ps = tuple(_exact(p) for p in triple)
            if len(ps) != 3 or not all(2 <= p < 4 for p in ps):
                raise ValueError("n=3 exponents must lie in [2, 4)")
            if abs(float(sum(1 / p for p in ps)) - 1.25) > 1e-12:
                raise ValueError("n=3 exponents must have reciprocal sum 5/4")
            return ExponentProfile(3, None, ps)
        delta = Fraction(1, 20) if eps is None else _to_eps(eps)
        ps = (Fraction(2), 2 + delta, (8 + 4 * delta) / (2 + 3 * delta))
        return ExponentProfile(3, delta, ps)
    if eps is None:
        raise ValueError("eps is required for n >= 4")
    eps = _to_eps(eps)
    return ExponentProfile(n, eps, tuple(_profile_entries(n, eps)))


def _to_eps(eps):
    eps = Fraction(eps) if isinstance(eps, (int, str)) else eps
    if not 0 < eps < 1:
        raise ValueError(f"eps must lie in (0, 1), got {eps}")
    return eps


def limiting_profile(n: int) -> ExponentProfile:
    """The ``eps -> 0`` endpoint of :func:`exponent_profile`, in exact arithmetic."""
    if n < 3:
        raise ValueError("n must be >= 3")
    if n == 3:
        return ExponentProfile(3, Fraction(0), (Fraction(2), Fraction(2), Fraction(4)))
    return ExponentProfile(n, Fraction(0), tuple(_profile_entries(n, Fraction(0))))


# --------------------------------------------------------------------------
# sweeps


@dataclass(frozen=True)
class SweepRecord:
    lam: float
    value: complex
    abs_value: float
    norm_product: float
    ratio: float
    error_estimate: float
    panels: int
    converged: bool

    def row(self) -> list[str]:
        return [
            repr(float(self.lam)),
            repr(self.value.real),
            repr(self.value.imag),
            repr(self.abs_value),
            repr(self.norm_product),
            repr(self.ratio),
            repr(self.error_estimate),
            str(self.panels),
            "true" if self.converged else "false",
        ]


@dataclass(frozen=True)
class FitResult:
    slope: float
    intercept: float
    r_squared: float
    stderr_slope: float
    points_used: int


def lambda_grid(lo: float = 1e2, hi: float = 1e5, points: int = 12) -> list[float]:
    if points < 1 or not 1 <= lo <= hi:
        raise ValueError("need 1 <= lo <= hi and points >= 1")
    return [float(v) for v in np.geomspace(lo, hi, points)]


def _norm_product(functions: Sequence[PiecewiseConstant1D], exponents: Sequence[float]) -> float:
    out = 1.0
    for f, p in zip(functions, exponents):
        out *= lp_norm(f, float(p))
    return out


def _record(spec: IntegrandSpec, exponents, rtol: float, panel_budget: int) -> SweepRecord:
    res = evaluate_lambda_n(spec, rtol=rtol, panel_budget=panel_budget)
    npd = _norm_product(spec.functions, exponents)
    a = abs(res.value)
    return SweepRecord(
        lam=spec.lam,
        value=res.value,
        abs_value=a,
        norm_product=npd,
        ratio=a / npd if npd > 0 else math.inf,
        error_estimate=res.error_estimate,
        panels=res.panels_used,
        converged=res.converged,
    )


def run_sweep(
    phase: BivariatePolynomial,
    dirs,
    lambdas: Iterable[float],
    family="extremizer",
    profile: ExponentProfile | None = None,
    rtol: float = 1e-6,
    cutoff: CutoffSpec | None = None,
    panel_budget: int = 4_000_000,
    workers: int = 1,
) -> list[SweepRecord]:
    """Evaluate the form along a lambda grid.

    ``family`` is ``"extremizer"`` (fresh indicators per lambda) or a fixed
    sequence of step functions.  Records come back sorted by lambda whatever
    the completion order.
    """
    dirs = dirs if isinstance(dirs, DirectionSystem) else DirectionSystem(dirs)
    n = len(dirs)
    lams = sorted(float(v) for v in lambdas)
    if not lams:
        raise ValueError("empty lambda grid")
    if profile is None:
        profile = exponent_profile(n, Fraction(1, 100) if n > 3 else None)
    if profile.n != n:
        raise ValueError(f"profile is for n={profile.n}, directions give n={n}")
    exps = profile.as_floats()
    cutoff = cutoff or CutoffSpec()

    def build(lam):
        if isinstance(family, str):
            if family != "extremizer":
                raise ValueError(f"unknown family {family!r}")
            fs = [extremizer(lam, n)] * n
        else:
            fs = list(family)
        return IntegrandSpec(phase, lam, dirs, fs, cutoff)

    specs = [build(lam) for lam in lams]
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            records = list(pool.map(lambda s: _record(s, exps, rtol, panel_budget), specs))
    else:
        records = [_record(s, exps, rtol, panel_budget) for s in specs]
    return sorted(records, key=lambda r: r.lam)


def fit_loglog(records: Sequence[SweepRecord], column: str = "abs_value", drop: int = 0) -> FitResult:
    """Least squares of ``log(column)`` against ``log(lambda)``.

    Non-converged and non-positive records are skipped, then the ``drop``
    smallest lambdas are discarded.
    """
    if column not in ("abs_value", "ratio"):
        raise ValueError(f"cannot fit column {column!r}")
    usable = sorted(
        (r for r in records if r.converged and getattr(r, column) > 0 and math.isfinite(getattr(r, column))),
        key=lambda r: r.lam,
    )[drop:]
    if len(usable) < 3:
        raise InsufficientData(f"need at least 3 usable records, have {len(usable)}")
    lx = np.log([r.lam for r in usable])
    ly = np.log([getattr(r, column) for r in usable])
    fit = stats.linregress(lx, ly)
    return FitResult(
        slope=float(fit.slope),
        intercept=float(fit.intercept),
        r_squared=float(min(1.0, fit.rvalue**2)),
        stderr_slope=float(fit.stderr),
        points_used=len(usable),
    )


def is_nonincreasing(records: Sequence[SweepRecord], rtol: float = 1e-6) -> bool:
    recs = sorted(records, key=lambda r: r.lam)
    return all(
        b.abs_value <= a.abs_value * (1 + rtol) + a.error_estimate + b.error_estimate
        for a, b in zip(recs, recs[1:])
    )


# --------------------------------------------------------------------------
# degenerate phases


def no_decay_records(
    dirs,
    degenerate_phase: BivariatePolynomial,
    lambdas: Iterable[float],
    rtol: float = 1e-4,
    width=Fraction(1, 10),
    samples_per_interval: int = 1,
    max_phase_step: float = 0.1,
    cutoff: CutoffSpec | None = None,
    panel_budget: int = 4_000_000,
) -> list[SweepRecord]:
    """Sweep with indicators of ``[0, width]`` modulated against the phase's own decomposition."""
    dirs = dirs if isinstance(dirs, DirectionSystem) else DirectionSystem(dirs)
    if not is_simply_degenerate(degenerate_phase, dirs):
        raise DecompositionUnavailable("phase is not degenerate for these directions")
    parts = degenerate_decomposition(degenerate_phase, dirs)
    if parts is None:
        raise DecompositionUnavailable("no decomposition found")
    base = indicator(0, width)
    cutoff = cutoff or CutoffSpec()
    records = []
    for lam in sorted(float(v) for v in lambdas):
        fs = [modulate(base, lam, s, samples_per_interval, max_phase_step) for s in parts]
        spec = IntegrandSpec(degenerate_phase, lam, dirs, fs, cutoff)
        records.append(_record(spec, [2.0] * len(dirs), rtol, panel_budget))
    return records


def no_decay_demo(dirs, degenerate_phase: BivariatePolynomial, lambdas: Iterable[float], rtol: float = 1e-4, **kw) -> FitResult:
    """Slope of ``|Lambda_n|`` when the modulations cancel the phase; should be ~0."""
    return fit_loglog(no_decay_records(dirs, degenerate_phase, lambdas, rtol=rtol, **kw), "abs_value")


# --------------------------------------------------------------------------
# output


def records_to_csv(records: Sequence[SweepRecord]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_COLUMNS)
    for r in records:
        w.writerow(r.row())
    return buf.getvalue()


def fit_report(fit: FitResult, expected_slope: float | None, tolerance: float, column: str) -> dict:
    """JSON-ready summary; ``pass`` is None when there is no expected slope."""
    ok = None if expected_slope is None else bool(abs(fit.slope - float(expected_slope)) <= tolerance)
    return {
        "column": column,
        "slope": fit.slope,
        "intercept": fit.intercept,
        "stderr_slope": fit.stderr_slope,
        "r2": fit.r_squared,
        "points_used": fit.points_used,
        "expected_slope": None if expected_slope is None else float(expected_slope),
        "tolerance": tolerance,
        "pass": ok,
    }


def plot_data(records: Sequence[SweepRecord], fit: FitResult, column: str = "ratio") -> str:
    """Two gnuplot data blocks: measured ``log10`` pairs, then the fitted line."""
    pts = [r for r in records if r.converged and getattr(r, column) > 0]
    lines = [f"# log10(lambda) log10({column})"]
    for r in pts:
        lines.append(f"{math.log10(r.lam)!r} {math.log10(getattr(r, column))!r}")
    lines += ["", "", "# fitted line"]
    for r in pts:
        lx = math.log(r.lam)
        lines.append(f"{math.log10(r.lam)!r} {(fit.intercept + fit.slope * lx) / math.log(10)!r}")
    return "\n".join(lines) + "\n"


def dumps_json(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True) + "\n"
