"""Volume-preserving anisotropic curvature flow of closed planar curves."""

from . import errors
from .geometry import (
    ClosedCurve,
    TubularData,
    build_curve,
    circle_curve,
    correct_area,
    ellipse_curve,
    enclosed_area,
    hausdorff_distance,
    perturbed_circle_curve,
    read_curve_csv,
    resample_arclength,
    shoelace,
    tangential_derivative,
    tangential_second_derivative,
    tubular_radius,
    write_curve_csv,
)

__version__ = "0.1.0"
