"""Mean curvature flow of Hermann-action orbits as an ODE on the fundamental alcove."""

from __future__ import annotations

from .alcove import (
    INTERIOR,
    ON_STRATUM,
    OUTSIDE,
    Alcove,
    AlcoveError,
    Location,
    StratumSpec,
    WallConstraint,
    alcove_of,
    build_alcove,
    classify,
    enumerate_strata,
    reflect,
)
from .curvature import (
    CurvatureError,
    CurvatureFamily,
    families_at,
    focal_distance,
    max_sup_norm,
    spectrum_parallel,
    sup_norm_shape,
    trace_closed,
    trace_oracle,
)
from .dynamics import (
    BUDGET,
    FIXED_POINT,
    WALL_HIT,
    FlowError,
    FlowOptions,
    FlowResult,
    NumericalFailure,
    ZeroReport,
    basin_map,
    find_minimal,
    find_minimal_on_stratum,
    integrate,
    integrate_on_stratum,
)
from .flowfield import (
    FieldError,
    div_X,
    div_X_sigma,
    field_X,
    field_X_sigma,
    field_X_via_families,
    jacobian_X,
)
from .kernels import BACKEND
from .rootdata import ActionData, RestrictedRoot, RootDataError, load_custom, preset
from .singularity import SingularityError, SingularityReport, type_I_estimate

__version__ = "0.1.0"
