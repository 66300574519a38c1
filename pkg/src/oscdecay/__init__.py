"""Numerical laboratory for n-linear oscillatory integral forms in the plane."""

from .decay import (
    ExponentProfile,
    FitResult,
    SweepRecord,
    exponent_profile,
    fit_loglog,
    holder_sum_target,
    limiting_profile,
    no_decay_demo,
    run_sweep,
    theoretical_decay,
)
from .phase import (
    Direction,
    DirectionSystem,
    RegionBox,
    apply_dn,
    certified_lower_bound,
    check_general_position,
    degenerate_decomposition,
    homogeneous_part,
    is_simply_degenerate,
    partial_derivative,
)
from .polynomial import BivariatePolynomial, Polynomial1D
from .quadrature import (
    CutoffSpec,
    IntegrandSpec,
    QuadratureResult,
    brute_force_oracle,
    evaluate_lambda_n,
    standard_bump,
)
from .testfunctions import (
    LambdaParam,
    PiecewiseConstant1D,
    extremizer,
    indicator,
    lp_norm,
    modulate,
    tau_energy_integral,
    tau_sup_norm,
    twisted_product,
)

__version__ = "0.1.0"
