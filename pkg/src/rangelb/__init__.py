"""Hard instances and framework checks for semialgebraic range-searching lower bounds."""

from .geometry import (
    Annulus,
    AnnulusPairGeometry,
    Circle,
    Point2,
    Rect,
    annulus_area,
    annulus_area_in_rect,
    annulus_rect_area,
    disk_area_in_rect,
    annulus_contains,
    annulus_intersection_area,
    lens_area,
    mc_area,
    radial_corner_gap,
    ring_int_bound,
)
from .poly import (
    Interval,
    PolySlab,
    UniPoly,
    max_bounded_interval_length,
    poly_int_bound,
    real_roots_in,
    slab_area_on_interval,
    slab_contains,
    slab_intersection_area,
)

__version__ = "0.1.0"
