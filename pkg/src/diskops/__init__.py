"""Numerical tools for analytic functions on the unit disk and the operator S_g f = int f' g."""

from .errors import ConfigError, NumericalFailure, ResourceLimit
from .geometry import (
    EuclideanSubdisk,
    PseudoDisk,
    StolzAngle,
    euclidean_subdisk_area,
    in_pseudo_disk,
    in_stolz_angle,
    inclusion_radius,
    moebius_psi,
    pseudo_disk_area_exact,
    pseudo_disk_as_euclidean,
    pseudo_distance,
)
from .nets import CenterNet, center_net
from .norms import (
    NormResult,
    SpaceSpec,
    besov_norm,
    bergman_norm,
    bmoa_norm,
    h2_littlewood_paley,
    hardy_calderon,
    hardy_classical,
    qp_norm,
)
from .operator import (
    LowerBoundReport,
    TestFamily,
    besov_test,
    lower_bound_estimate,
    moebius_test,
    reverse_carleson_ratio,
    sg_apply,
    sg_derivative,
)
from .quadrature import (
    PolarGrid,
    integrate_circle,
    integrate_disk,
    integrate_region,
    integrate_segment,
    integrate_stolz,
    integrate_subdisk,
    make_grid,
)
from .symbols import (
    BlaschkeProduct,
    Const,
    LevelSetSpec,
    Polynomial,
    Product,
    Rational,
    Scale,
    Sum,
    derivative,
    evaluate,
    level_set_member,
    sup_norm_estimate,
    symbol_from_json,
)

__version__ = "0.1.0"
