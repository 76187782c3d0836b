"""Random instance generators: convex-hull meshes and planar vertex maps.

Coordinates are quantized to a fixed power-of-two denominator so every
generated instance is exact-rational and reproducible from its seed.  Maps
that violate general position are redrawn up to a retry cap.
"""

from __future__ import annotations

from fractions import Fraction
from typing import List, Optional, Tuple

import numpy as np

from ..image_arrangement import PlanarMap, check_general_position
from ..mesh_core import SurfaceMesh, require_valid, validate_surface

QUANTUM = 1 << 20          # denominator for all generated coordinates
MAP_KINDS = ("projection", "random-images")


class GeneratorError(ValueError):
    """An instance could not be generated within the retry budget."""


def _quantize(x: float) -> Fraction:
    return Fraction(int(round(x * QUANTUM)), QUANTUM)


def _rotation_matrix(rng: np.random.Generator) -> np.ndarray:
    """Uniformly random rotation from a normalized random quaternion."""
    while True:
        q = rng.normal(size=4)
        n = float(np.linalg.norm(q))
        if n > 1e-6:
            break
    w, x, y, z = q / n
    return np.array([
        [1 - 2 * (y * y + z * z), 2 * (x * y - w * z), 2 * (x * z + w * y)],
        [2 * (x * y + w * z), 1 - 2 * (x * x + z * z), 2 * (y * z - w * x)],
        [2 * (x * z - w * y), 2 * (y * z + w * x), 1 - 2 * (x * x + y * y)],
    ])


def random_hull_mesh(n_points: int, seed: int, *,
                     max_retries: int = 100) -> SurfaceMesh:
    """Convex hull of `n_points` random directions on a sphere of radius 2,
    quantized, triangulated, and consistently wound.  Points that fall off
    the hull after quantization are dropped; degenerate draws are retried."""
    from scipy.spatial import ConvexHull

    if n_points < 4:
        raise GeneratorError("a solid hull needs at least 4 points")
    rng = np.random.default_rng(seed)
    from ..exact import orient3d

    for _ in range(max_retries):
        dirs = rng.normal(size=(n_points, 3))
        norms = np.linalg.norm(dirs, axis=1)
        if np.any(norms < 1e-9):
            continue
        pts = 2.0 * dirs / norms[:, None]
        exact = [tuple(_quantize(c) for c in p) for p in pts]
        fpts = np.array([[float(c) for c in p] for p in exact])
        try:
            hull = ConvexHull(fpts)
        except Exception:
            continue
        used = sorted(int(v) for v in hull.vertices)
        relabel = {old: new for new, old in enumerate(used)}
        verts = [exact[old] for old in used]
        k = len(verts)
        centroid = tuple(sum(v[c] for v in verts) / k for c in range(3))
        faces: List[Tuple[int, int, int]] = []
        degenerate = False
        for simplex in hull.simplices:
            tri = [relabel.get(int(i)) for i in simplex]
            if any(t is None for t in tri):
                degenerate = True
                break
            a, b, c = (verts[t] for t in tri)
            s = orient3d(a, b, c, centroid)
            if s == 0:
                degenerate = True
                break
            if s > 0:
                tri = [tri[0], tri[2], tri[1]]
            faces.append(tuple(tri))
        if degenerate:
            continue
        mesh = SurfaceMesh(verts, faces)
        if validate_surface(mesh).passed:
            require_valid(mesh)
            return mesh
    raise GeneratorError("no valid hull mesh after %d draws" % max_retries)


def generate_map(mesh: SurfaceMesh, kind: str, seed: int, *,
                 max_retries: int = 100) -> PlanarMap:
    """Planar vertex map in general position.

    "projection": apply a uniformly random rotation and drop the third
    coordinate (silhouette-fold regime).  "random-images": draw each vertex
    image uniformly in a square matching the mesh extent (richly folded
    regime).  Draws violating general position are rejected, up to the cap.
    """
    if kind not in MAP_KINDS:
        raise GeneratorError("unknown map generator %r (choose from %s)"
                             % (kind, ", ".join(MAP_KINDS)))
    rng = np.random.default_rng(seed)
    fverts = mesh.float_vertices()
    extent = float(np.abs(fverts).max()) or 1.0
    for _ in range(max_retries):
        if kind == "projection":
            rot = _rotation_matrix(rng)
            planar = fverts @ rot.T
            images = [(_quantize(p[0]), _quantize(p[1])) for p in planar]
        else:
            draws = rng.uniform(-extent, extent, size=(len(fverts), 2))
            images = [(_quantize(u), _quantize(v)) for u, v in draws]
        pmap = PlanarMap(images)
        if check_general_position(mesh, pmap).passed:
            return pmap
    raise GeneratorError("no general-position %s map after %d draws"
                         % (kind, max_retries))


def generate_instance(kind: str, seed: int, n_points: int = 16,
                      mesh: Optional[SurfaceMesh] = None
                      ) -> Tuple[SurfaceMesh, PlanarMap]:
    """A seeded (mesh, map) pair: a random hull unless a mesh is supplied,
    plus a general-position map of the requested kind."""
    if mesh is None:
        mesh = random_hull_mesh(n_points, seed)
    return mesh, generate_map(mesh, kind, seed + 1)
