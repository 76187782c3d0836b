"""Pull the restricted planar triangulation back onto the polyhedron.

Every triangle of the restricted triangulation lies inside the image of
each face that covers it, so it lifts to one flat triangle per coverer.
The lifts are computed with exact barycentric coordinates, all lifted
corners are deduplicated by exact coordinates, and together they refine the
original boundary into a mesh where any two triangles with the same planar
image are either disjoint or identical.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Tuple

from .cdt import ImageTriangulation
from .exact import Point2, Point3, barycentric_2d, orient2d
from .image_arrangement import PlanarMap
from .mesh_core import SurfaceMesh


class InducedError(ValueError):
    """The pull-back violated a structural invariant."""


@dataclass
class InducedTriangle:
    """One lift: planar triangle cd_tri lifted through mesh face `face`.
    Corners follow the planar triangle's stored (ccw) corner order."""

    cd_tri: int
    face: int
    corners: Tuple[int, int, int]       # induced-vertex ids
    orient_sign: int                    # +1 when the face image is ccw


@dataclass
class InducedTriangulation:
    """The refined boundary: exact vertices, one triangle per (planar
    triangle, covering face) pair, and the edge adjacency of the lifts."""

    mesh: SurfaceMesh
    images: List[Point2]
    planar: ImageTriangulation
    vertices: List[Point3]
    vertex_images: List[Point2]
    triangles: List[InducedTriangle]
    by_cd: Dict[int, List[int]]
    edge_triangles: Dict[Tuple[int, int], List[int]]

    _cache: dict = field(default_factory=dict, repr=False, compare=False)

    def corner_points(self, ti: int) -> Tuple[Point3, Point3, Point3]:
        c = self.triangles[ti].corners
        return (self.vertices[c[0]], self.vertices[c[1]], self.vertices[c[2]])

    def as_surface_mesh(self) -> SurfaceMesh:
        """The refinement as a plain mesh with winding consistent with the
        parent faces (lifts of cw face images get two corners swapped)."""
        tris = []
        for t in self.triangles:
            i, j, k = t.corners
            tris.append((i, j, k) if t.orient_sign > 0 else (i, k, j))
        return SurfaceMesh(vertices=list(self.vertices), triangles=tris)


def pull_back(planar: ImageTriangulation, mesh: SurfaceMesh,
              pmap: PlanarMap) -> InducedTriangulation:
    if planar.inside is None or planar.coverers is None:
        raise InducedError("restriction has not been computed")
    images = list(pmap.images)

    face_orient: List[int] = []
    for (i, j, k) in mesh.triangles:
        face_orient.append(orient2d(images[i], images[j], images[k]))

    vertex_id: Dict[Point3, int] = {}
    vertices: List[Point3] = []
    vertex_images: List[Point2] = []

    def register(p: Point3, q: Point2) -> int:
        if p in vertex_id:
            return vertex_id[p]
        vid = len(vertices)
        vertex_id[p] = vid
        vertices.append(p)
        vertex_images.append(q)
        return vid

    lift_cache: Dict[Tuple[int, int], int] = {}

    def lift(point_id: int, face: int) -> int:
        key = (point_id, face)
        if key in lift_cache:
            return lift_cache[key]
        q = planar.points[point_id]
        fi, fj, fk = mesh.triangles[face]
        w1, w2, w3 = barycentric_2d(q, images[fi], images[fj], images[fk])
        if w1 < 0 or w2 < 0 or w3 < 0:
            raise InducedError(
                "point %d is outside the image of covering face %d"
                % (point_id, face))
        a, b, c = (mesh.vertices[fi], mesh.vertices[fj], mesh.vertices[fk])
        p = (w1 * a[0] + w2 * b[0] + w3 * c[0],
             w1 * a[1] + w2 * b[1] + w3 * c[1],
             w1 * a[2] + w2 * b[2] + w3 * c[2])
        vid = register(p, q)
        lift_cache[key] = vid
        return vid

    triangles: List[InducedTriangle] = []
    by_cd: Dict[int, List[int]] = {}
    for ti in planar.inside_indices():
        tri = planar.triangles[ti]
        ids = []
        for face in planar.coverers[ti]:
            corners = (lift(tri[0], face), lift(tri[1], face),
                       lift(tri[2], face))
            ids.append(len(triangles))
            triangles.append(InducedTriangle(
                cd_tri=ti, face=face, corners=corners,
                orient_sign=1 if face_orient[face] > 0 else -1))
        by_cd[ti] = ids

    edge_triangles: Dict[Tuple[int, int], List[int]] = {}
    for idx, t in enumerate(triangles):
        i, j, k = t.corners
        if len({i, j, k}) < 3:
            raise InducedError("degenerate lifted triangle %d" % idx)
        for u, v in ((i, j), (j, k), (k, i)):
            key = (u, v) if u < v else (v, u)
            edge_triangles.setdefault(key, []).append(idx)

    for key, tris in edge_triangles.items():
        if len(tris) != 2:
            raise InducedError(
                "lifted edge %s is shared by %d triangles" % (key, len(tris)))

    return InducedTriangulation(mesh=mesh, images=images, planar=planar,
                                vertices=vertices,
                                vertex_images=vertex_images,
                                triangles=triangles,
                                by_cd=by_cd, edge_triangles=edge_triangles)


def refinement_area_identity(ind: InducedTriangulation) -> Tuple[Fraction, Fraction]:
    """(total area of the lifted triangles, total area of the original
    faces), both projected per face to the dominant axis of the face normal
    so the comparison stays exact; equal when the refinement covers the
    boundary once."""
    from .exact import cross3, sub3
    total_by_face: Dict[int, Fraction] = {}
    for t in ind.triangles:
        a, b, c = (ind.vertices[t.corners[0]], ind.vertices[t.corners[1]],
                   ind.vertices[t.corners[2]])
        fi, fj, fk = ind.mesh.triangles[t.face]
        n = cross3(sub3(ind.mesh.vertices[fj], ind.mesh.vertices[fi]),
                   sub3(ind.mesh.vertices[fk], ind.mesh.vertices[fi]))
        ax = max(range(3), key=lambda i: abs(n[i]))
        u, v = (ax + 1) % 3, (ax + 2) % 3
        area = abs((b[u] - a[u]) * (c[v] - a[v])
                   - (b[v] - a[v]) * (c[u] - a[u]))
        total_by_face[t.face] = total_by_face.get(t.face, Fraction(0)) + area

    lhs = Fraction(0)
    rhs = Fraction(0)
    for face, (fi, fj, fk) in enumerate(ind.mesh.triangles):
        a = ind.mesh.vertices[fi]
        b = ind.mesh.vertices[fj]
        c = ind.mesh.vertices[fk]
        n = cross3(sub3(b, a), sub3(c, a))
        ax = max(range(3), key=lambda i: abs(n[i]))
        u, v = (ax + 1) % 3, (ax + 2) % 3
        rhs += abs((b[u] - a[u]) * (c[v] - a[v])
                   - (b[v] - a[v]) * (c[u] - a[u]))
        lhs += total_by_face.get(face, Fraction(0))
    return lhs / 2, rhs / 2
