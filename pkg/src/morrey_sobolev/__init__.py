"""Numerical checks of sharp Morrey-Sobolev inequalities on rotationally symmetric models."""

__version__ = "0.1.0"

from .constants import Exponents, SharpConstants, c1, c2, make_exponents, omega, sharp_constants
from .exceptions import ConsistencyError, ConvergenceError, DomainError, QuadratureError
from .manifolds import (
    CurvatureClass,
    WarpedModel,
    ball_volume,
    inverse_ball_volume,
    isoperimetric_check,
    make_model,
    sphere_area,
    volume_monotonicity_report,
)
from .profiles import (
    Constant,
    NormsReport,
    PiecewiseLinear,
    PowerExtremal,
    RadialProfile,
    TalentiExtremal,
    F_lambda,
    make_profile,
    norms_report,
    quotient,
)
from .rearrangement import polya_szego_check, rearrange
from .specfun import QuadratureSpec, beta, integrate, ln_gamma, reg_inc_beta
from .variational import (
    Attainment,
    ScanResult,
    discrete_optimize,
    exact_radial_minimum,
    sharpness_scan,
    volume_bound_diagnostics,
)
