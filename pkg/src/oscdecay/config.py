"""Sectioned experiment configuration files.

Example::

    [phase]
    # i j coefficient   ->  coefficient * x^i * y^j
    2 1 1

    [directions]
    1 0
    0 1
    1 1

    [sweep]
    lambda_min = 100
    lambda_max = 100000
    lambda_points = 12
    drop = 2

    [quadrature]
    rtol = 1e-6

``[phase]`` and ``[directions]`` hold whitespace-separated rows; ``[function]``
(repeatable, one per direction, used when ``family = fixed``) holds a step
function in its text format; every other section is ``key = value``.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from fractions import Fraction
from pathlib import Path

from .phase import Direction
from .polynomial import BivariatePolynomial
from .testfunctions import PiecewiseConstant1D

_ROW_SECTIONS = ("phase", "directions", "function")
_KEYS = {
    "sweep": {
        "family", "lambda_min", "lambda_max", "lambda_points", "drop", "epsilon", "delta",
        "triple", "tolerance", "workers",
    },
    "quadrature": {"rtol", "panel_budget"},
    "cutoff": {"radius", "center"},
    "analyze": {"grid_n"},
    "identities": {"samples", "seed"},
    "demo": {"width", "lambda_min", "lambda_max", "lambda_points", "tolerance", "max_phase_step", "rtol"},
}


class ConfigError(ValueError):
    pass


@dataclass(frozen=True)
class ExperimentConfig:
    phase: BivariatePolynomial = field(default_factory=BivariatePolynomial)
    directions: tuple[Direction, ...] = ()
    functions: tuple[PiecewiseConstant1D, ...] = ()
    family: str = "extremizer"
    lambda_min: float = 1e2
    lambda_max: float = 1e5
    lambda_points: int = 12
    drop: int = 2
    epsilon: Fraction = Fraction(1, 100)
    delta: Fraction = Fraction(1, 20)
    triple: tuple | None = None
    tolerance: float = 0.05
    workers: int = 1
    rtol: float = 1e-6
    panel_budget: int = 4_000_000
    cutoff_radius: float = 2.0
    cutoff_center: tuple[float, float] = (0.0, 0.0)
    grid_n: int = 64
    samples: int = 50
    seed: int = 0
    demo_width: Fraction = Fraction(1, 10)
    demo_lambda_min: float = 1e2
    demo_lambda_max: float = 1e4
    demo_lambda_points: int = 7
    demo_tolerance: float = 0.02
    demo_max_phase_step: float = 0.1
    demo_rtol: float = 1e-4

    @property
    def n(self) -> int:
        return len(self.directions)

    def with_overrides(self, **kw) -> "ExperimentConfig":
        return replace(self, **{k: v for k, v in kw.items() if v is not None})


def _rational(text: str) -> Fraction:
    try:
        return Fraction(text.strip())
    except (ValueError, ZeroDivisionError) as exc:
        raise ConfigError(f"not a rational number: {text!r}") from exc


def _split_sections(text: str):
    sections: list[tuple[str, list[tuple[int, str]]]] = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if line.startswith("[") and line.endswith("]"):
            sections.append((line[1:-1].strip().lower(), []))
            continue
        if not sections:
            raise ConfigError(f"line {lineno}: content before the first section")
        sections[-1][1].append((lineno, line))
    return sections


def parse_config(text: str) -> ExperimentConfig:
    kw: dict = {}
    functions = []
    for name, lines in _split_sections(text):
        body = "\n".join(line for _, line in lines)
        try:
            if name == "phase":
                kw["phase"] = BivariatePolynomial.from_text(body)
            elif name == "directions":
                dirs = []
                for lineno, line in lines:
                    fields = line.split()
                    if len(fields) != 2:
                        raise ConfigError(f"line {lineno}: expected 'b c'")
                    dirs.append(Direction(_rational(fields[0]), _rational(fields[1])))
                kw["directions"] = tuple(dirs)
            elif name == "function":
                functions.append(PiecewiseConstant1D.from_text(body))
            elif name in _KEYS:
                for lineno, line in lines:
                    if "=" not in line:
                        raise ConfigError(f"line {lineno}: expected 'key = value' in [{name}]")
                    key, value = (s.strip() for s in line.split("=", 1))
                    if key not in _KEYS[name]:
                        raise ConfigError(f"line {lineno}: unknown key {key!r} in [{name}]")
                    _set(kw, name, key, value)
            else:
                raise ConfigError(f"unknown section [{name}]")
        except ConfigError:
            raise
        except ValueError as exc:
            raise ConfigError(f"[{name}]: {exc}") from exc
    if functions:
        kw["functions"] = tuple(functions)
    return ExperimentConfig(**kw)


def _set(kw: dict, section: str, key: str, value: str) -> None:
    if section == "demo":
        target = "demo_" + key
    elif section == "cutoff":
        target = "cutoff_" + key
    else:
        target = key
    if key in ("lambda_points", "drop", "workers", "panel_budget", "grid_n", "samples", "seed"):
        kw[target] = int(value)
    elif key in ("epsilon", "delta", "width"):
        kw[target] = _rational(value)
    elif key == "triple":
        kw[target] = tuple(float(v) for v in value.replace(",", " ").split())
    elif key == "center":
        cx, cy = value.replace(",", " ").split()
        kw[target] = (float(cx), float(cy))
    elif key == "family":
        if value not in ("extremizer", "fixed"):
            raise ConfigError(f"family must be 'extremizer' or 'fixed', got {value!r}")
        kw[target] = value
    else:
        kw[target] = float(value)


def load_config(path: str | Path) -> ExperimentConfig:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ConfigError(f"cannot read config: {exc}") from exc
    return parse_config(text)
