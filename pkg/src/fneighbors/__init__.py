"""Induced triangulations, folding complexes, antipodal paths and distance
level sets for simplicial maps of convex polyhedron boundaries to the plane.
"""

__version__ = "0.1.0"

from .exact import (barycentric_2d, in_circumcircle, orient2d, orient3d,
                    point_in_triangle_2d, point_in_triangle_3d,
                    segment_intersection)
from .mesh_core import (MeshError, MeshFormatError, MeshValidationError,
                        RaycastError, SurfaceMesh, ValidationReport,
                        load_surface_mesh, require_valid, surface_antipode,
                        surface_raycast, validate_surface)
from .image_arrangement import (ArrangementError, GeneralPositionError,
                                GeneralPositionReport, ImagePSLG, MapError,
                                PlanarMap, build_pslg, check_general_position,
                                load_planar_map, require_general_position)
from .cdt import (ImageTriangulation, TriangulationError, constrained_delaunay,
                  covered_area_identity, restrict_to_image)
from .induced import (InducedError, InducedTriangle, InducedTriangulation,
                      pull_back, refinement_area_identity)

__all__ = [
    "__version__",
    "barycentric_2d", "in_circumcircle", "orient2d", "orient3d",
    "point_in_triangle_2d", "point_in_triangle_3d", "segment_intersection",
    "MeshError", "MeshFormatError", "MeshValidationError", "RaycastError",
    "SurfaceMesh", "ValidationReport", "load_surface_mesh", "require_valid",
    "surface_antipode", "surface_raycast", "validate_surface",
    "ArrangementError", "GeneralPositionError", "GeneralPositionReport",
    "ImagePSLG", "MapError", "PlanarMap", "build_pslg",
    "check_general_position", "load_planar_map", "require_general_position",
    "ImageTriangulation", "TriangulationError", "constrained_delaunay",
    "covered_area_identity", "restrict_to_image",
    "InducedError", "InducedTriangle", "InducedTriangulation",
    "pull_back", "refinement_area_identity",
]
