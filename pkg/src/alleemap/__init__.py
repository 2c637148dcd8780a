"""Discrete predator-prey map with a double Allee effect on the prey."""

from .bifurcation import (
    NormalFormReport,
    NSConditions,
    TaylorCoeffs,
    normal_form,
    ns_locate,
    ns_nondegeneracy,
    taylor_coefficients,
)
from .errors import AnalysisError, DomainError
from .fixed_points import (
    FixedPoint,
    Stability,
    StabilityKind,
    classify_boundary_analytic,
    classify_interior_analytic,
    classify_numeric,
    coexistence_point,
    enumerate_fixed_points,
)
from .model import (
    BASELINE,
    BASELINE_RAW,
    Orbit,
    Parameters,
    RawParameters,
    State,
    iterate_orbit,
    jacobian_analytic,
    jacobian_fd,
    map_step,
    nondimensionalize,
)
from .scan import (
    BifurcationDiagram,
    ClassificationGrid,
    Fate,
    GridAxis,
    bifurcation_diagram,
    extinction_threshold,
    orbit_fate,
    plane_scan,
)

__version__ = "0.1.0"
