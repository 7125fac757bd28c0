"""Boundary quantum ergodicity laboratory for planar billiards."""

__version__ = "0.1.0"

from .geometry import ArcSegment, BoundaryCurve, DomainSpec, build_domain  # noqa: F401
