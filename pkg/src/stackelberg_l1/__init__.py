"""Exact solver for the one-round L1 Voronoi game in a rectangle.

White places a row or a grid of points; Black answers with a single point
and claims its Voronoi cell under the Manhattan metric.  The package
provides exact cell geometry, the section partition of a White cell, the
closed-form area formulas, best-point tables and an independent numerical
oracle.
"""

from .core_geometry import (
    Arena,
    Bisector,
    Grid,
    OctoPolygon,
    Point,
    Row,
    as_exact,
    bisector,
    cell_area,
    cell_of_site,
    dominance_clip,
    grid_sites,
    l1_distance,
    polygon_area,
    row_sites,
)
from .errors import (
    DomainError,
    OnBoundary,
    OrientationError,
    SectionNotPresent,
    StackelbergError,
)
from .grid_solver import (
    area_grid_closed_form,
    best_point_grid,
    black_grid_arrangement,
    grid_table,
    theft_pair_area,
)
from .oracle import SampleSpec, grid_search_best, sampled_area, verify_suite
from .partition import section_of_grid, section_of_row, square_grid_feasible
from .row_solver import (
    area_row_closed_form,
    best_point_row,
    black_row_arrangement,
    row_table,
    score_arrangement,
    section_optimum_row,
)

__all__ = [
    "Arena",
    "Bisector",
    "Grid",
    "OctoPolygon",
    "Point",
    "Row",
    "as_exact",
    "bisector",
    "cell_area",
    "cell_of_site",
    "dominance_clip",
    "grid_sites",
    "l1_distance",
    "polygon_area",
    "row_sites",
    "DomainError",
    "OnBoundary",
    "OrientationError",
    "SectionNotPresent",
    "StackelbergError",
    "area_grid_closed_form",
    "best_point_grid",
    "black_grid_arrangement",
    "grid_table",
    "theft_pair_area",
    "SampleSpec",
    "grid_search_best",
    "sampled_area",
    "verify_suite",
    "section_of_grid",
    "section_of_row",
    "square_grid_feasible",
    "area_row_closed_form",
    "best_point_row",
    "black_row_arrangement",
    "row_table",
    "score_arrangement",
    "section_optimum_row",
]

__version__ = "0.1.0"
