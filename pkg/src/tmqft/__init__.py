"""Scalar field theory on the 1+1 canonical time machine and its Einstein-cylinder limit."""
from .boundary_conditions import (
    BCClass,
    BoundaryProblem,
    Classification,
    classify_bc,
    expected_exponent,
    fit_exponent,
    mode_solution,
    nu_index,
    ode_residual,
    robin_residual,
)
from .correlators import (
    HadamardDecomposition,
    LimitDeviation,
    PauliJordanDecomposition,
    c0_asymptote,
    gamma_of_delta,
    hadamard_closed,
    hadamard_series,
    limit_deviation,
    pj_closed,
    pj_series,
    weak_warp_null,
    wightman,
)
from .cylinder_qft import (
    CorrelatorTriple,
    CorrelatorValue,
    CylinderConfig,
    Status,
    ZeroModeState,
    cylinder_correlators,
    image_sum_pj,
    minkowski_pj,
    osc_correlators,
    osc_mode,
    zm_correlators,
)
from .errors import (
    ConvergenceError,
    DegenerateProfileError,
    DomainError,
    HorizonError,
    SingularStateError,
)
from .geometry import (
    Chart,
    ConformalMap,
    KillingResiduals,
    MetricProfile,
    SpacetimePoint,
    WarpConfig,
    canonicalize,
    chart_transform,
    circulation,
    curvature_scalar,
    is_ctc_region,
    killing_residuals,
    to_null,
)
from .rset import (
    RsetChart,
    RsetComponents,
    cylinder_rset,
    f_beta,
    f_beta_asymptote,
    f_beta_series,
    rset_cylinder_chart,
    rset_zeta,
)
from .series import SeriesControl, SeriesReport
from .special_functions import bessel_j, jacobi_theta, lanczos_gamma, log_abs_sinh, log_abs_theta
from .tm_modes import (
    AutomorphicMode,
    CoveringMode,
    automorphy_residual,
    covering_mode,
    gram_matrix,
    kg_inner_product,
    kg_residual,
    mode_eval,
)

__version__ = "0.1.0"
