"""Exact algebra of regular open rational polytopes, with the predicates,
segment arithmetic, fixing descriptors, and first-order evaluator built on it.
"""

from .geometry import (
    AffineMap,
    DegenerateGeometry,
    DimensionMismatch,
    GeometryError,
    HalfSpace,
    Hyperplane,
    Matrix,
    Rational,
    Vector,
    affine_from_simplex,
    apply_affine,
    feasible_interior,
    format_rational,
    halfspace,
    hyperplane,
    rat,
    vec,
)
from .regions import (
    BudgetExceeded,
    ConvexCell,
    Region,
    apply_affine_region,
    complement,
    count_cells,
    equals,
    halfspace_region,
    is_convex,
    is_empty,
    leq,
    product,
    region_from_halfspaces,
    region_sum,
    set_hyperplane_budget,
)

__version__ = "0.1.0"
