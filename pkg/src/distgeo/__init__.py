"""Curvature of distributions in frame-described Riemannian manifolds.

Fields are sampled as truncated Taylor jets along a curve of sample points,
so every derivative the curvature formulas need is exact to floating point.
"""

from .catalog import PRESET_NAMES, manifold, preset
from .connections import ConnectionSpec
from .distribution import Distribution
from .frame import FrameManifold
from .scalarfield import DEFAULT_PLAN, SamplePlan, parse_expr

__version__ = "0.1.0"

__all__ = [
    "ConnectionSpec",
    "DEFAULT_PLAN",
    "Distribution",
    "FrameManifold",
    "PRESET_NAMES",
    "SamplePlan",
    "manifold",
    "parse_expr",
    "preset",
]
