"""Global minimum cuts and shortest cycles in directed planar graphs."""

from .plane_graph import INF, PlaneGraph, RawGraph, build_from_rotation, dual, suppress_degree2

__all__ = ["INF", "PlaneGraph", "RawGraph", "build_from_rotation", "dual", "suppress_degree2"]

__version__ = "0.1.0"
