"""asakit: L_p affine surface area of convex bodies through four equal representations."""

__version__ = "0.1.0"

from .errors import *  # noqa: F401,F403
from .convex_body import (
    Ball,
    ConvexBody,
    Ellipsoid,
    Polytope,
    SupportOracle,
    Transformed,
    apply_linear,
    cube,
    gauss,
    inverse_gauss,
    random_simplex,
    regular_simplex,
    scale,
    support,
    translate,
)
from .curvature import curvature_function, gauss_curvature, support_hessian
from .sampling import sample_boundary, sample_sphere, sphere_samples
from .measures import (
    curvature_measure_c0,
    curvature_measure_cn1,
    normal_cone_solid_angle,
    polar_volume,
    surface_area_measure,
    volume,
)
from .asa import (
    AsaReport,
    DiscreteFunction,
    analytic_minimizer,
    asa_boundary,
    asa_cm_infimum,
    asa_lutwak_infimum,
    asa_sphere,
    compute_asa,
    functional_L1,
    functional_L2,
    truncation_sequence,
)
from .coarea import (
    in_enclosing_ball_set,
    in_rolling_ball_set,
    verify_change_of_variable,
    verify_sphere_boundary_equality,
)
from .verify import (
    PropertyResult,
    check_gl_covariance,
    check_homogeneity,
    check_isoperimetric,
    check_mixed_volume_inequality,
    demo_upper_semicontinuity,
    run_suite,
)
