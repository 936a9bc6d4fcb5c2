"""ECH capacities, Ruelle invariants and error-term asymptotics of toric domains."""

__version__ = "0.1.0"

from .capacities import (  # noqa: E402
    CapacityResult,
    Method,
    MethodMismatch,
    capacity_sequence,
    ck_ball,
    ck_ball_union,
    ck_concave_weights,
    ck_ellipsoid,
    ck_polydisk,
    ck_union,
)
from .domains import Ball, Ellipsoid, Polydisk, Toric, Union, volume  # noqa: E402
from .geometry import (  # noqa: E402
    IntegralAffineMap,
    Kind,
    LatticePath,
    PathKind,
    ToricProfile,
    affine_length,
    anti_norm,
    dual_norm,
    lattice_count_concave,
    lattice_count_convex,
    omega_length,
    rectangle_profile,
    region_area,
    triangle_profile,
)
from .weights import WeightExpansion, weight_expansion  # noqa: E402
