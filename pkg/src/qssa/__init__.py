"""Simulation, scaling and matched-asymptotic approximation of Michaelis-Menten kinetics."""

from .approx import (
    ApproxCurve,
    BlendedCurve,
    Layers,
    RateCurve,
    blend,
    mm_rate,
    rqssa_free,
    rqssa_rate,
    rqssa_total,
    sqssa_free,
    sqssa_total,
)
from .errors import (
    ConfigError,
    DegenerateBoundError,
    DomainError,
    InvariantViolationError,
    NotApplicableError,
    QSSAError,
    StiffnessError,
)
from .kinetics import (
    DerivedConstants,
    InitialState,
    RateConstants,
    Regime,
    RegimeKind,
    classify_regime,
    derive_constants,
)
from .lambertw import lambert_w0
from .ode import Trajectory, conservation_residuals, integrate, sc_rhs, secp_rhs
from .scaling import BoundedSystem, ScalingReport, scale_system, scaled_sc_coefficients
from .stability import EigenPair, dulac_divergence, eigenvalues_at_origin, jacobian

__version__ = "0.1.0"

__all__ = [
    "ApproxCurve",
    "BlendedCurve",
    "BoundedSystem",
    "ConfigError",
    "DegenerateBoundError",
    "DerivedConstants",
    "DomainError",
    "EigenPair",
    "InitialState",
    "InvariantViolationError",
    "Layers",
    "NotApplicableError",
    "QSSAError",
    "RateConstants",
    "RateCurve",
    "Regime",
    "RegimeKind",
    "ScalingReport",
    "StiffnessError",
    "Trajectory",
    "blend",
    "classify_regime",
    "conservation_residuals",
    "derive_constants",
    "dulac_divergence",
    "eigenvalues_at_origin",
    "integrate",
    "jacobian",
    "lambert_w0",
    "mm_rate",
    "rqssa_free",
    "rqssa_rate",
    "rqssa_total",
    "sc_rhs",
    "scale_system",
    "scaled_sc_coefficients",
    "secp_rhs",
    "sqssa_free",
    "sqssa_total",
]
