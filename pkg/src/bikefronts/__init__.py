"""Bicycle kinematics and wave fronts on the sphere and hyperbolic plane."""

from .bicycle import (
    BicycleParams,
    RearTrack,
    SteeringSolution,
    front_from_rear,
    integrate_steering,
    rear_track,
    speed_ratio_check,
    steering_rhs,
)
from .errors import (
    BikefrontsError,
    DegenerateCurve,
    NoFixedPoint,
    NotConvex,
    NotHorocyclicallyConvex,
    NotHyperbolic,
    NotProper,
    NullVector,
    ParseError,
    SchemaError,
    SpecInvalid,
    StepUnstable,
    WrongModel,
    WrongSheet,
)
from .geometry import (
    SurfaceModel,
    cross,
    geodesic_point,
    inner,
    project_to_surface,
    tangent_frame_at,
)
from .monodromy import (
    FixedPointData,
    MobiusClass,
    MobiusMap,
    act,
    compute_monodromy,
    derivative_curve_identity,
    fixed_points,
    length_derivative_check,
    sl2_coefficients,
    small_l_probe,
)
from .verify import (
    MenzinSweepReport,
    VerificationReport,
    check_curvature_relation,
    check_hyperbolic_isoperimetric,
    check_spherical_isoperimetric,
    find_parabolic_length,
    menzin_sweep,
    menzin_threshold,
)
from .wavefront import (
    CurveSpec,
    SupportFunction,
    WaveFront,
    acc,
    algebraic_length,
    area_convex,
    build,
    cusp_scan,
    dual,
    equidistant,
    horocyclic_margin,
    inflection_scan,
    support_curvature,
    total_curvature,
    wavefront_from_samples,
)

__version__ = "0.1.0"
