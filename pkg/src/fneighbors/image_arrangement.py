"""Planar images of mesh vertices and the arrangement of mapped edges.

The vertex images define a straight-line image of each mesh edge.  The
arrangement step intersects all edge images pairwise (exactly), collects the
intersection points together with the vertex images, and subdivides every
edge image at the points lying on it.  The result is a planar straight-line
graph whose segments will become constrained edges of the triangulation.

General position means: no two vertex images coincide and no three are
collinear.  Under that restriction edge images can only meet transversally
or at shared endpoints, never overlap along a segment.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd
from pathlib import Path
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from .exact import (CollinearOverlapError, Point2, orient2d,
                    segment_intersection)
from .mesh_core import SurfaceMesh


class MapError(ValueError):
    """Malformed or incompatible vertex-image data."""


class GeneralPositionError(ValueError):
    """The vertex images violate the general-position requirement."""


@dataclass
class PlanarMap:
    """One planar image point per mesh vertex."""

    images: List[Point2]

    def __post_init__(self):
        self.images = [(Fraction(u), Fraction(v)) for (u, v) in self.images]

    def __len__(self) -> int:
        return len(self.images)

    def float_images(self) -> np.ndarray:
        return np.array([[float(u), float(v)] for (u, v) in self.images])


def _coord(value) -> Fraction:
    if isinstance(value, Fraction):
        return value
    if isinstance(value, str):
        return Fraction(value)
    if isinstance(value, int):
        return Fraction(value)
    raise MapError("unsupported coordinate type %r" % type(value).__name__)


def load_planar_map(path, n_vertices: Optional[int] = None) -> PlanarMap:
    """Load vertex images from JSON ({"images": [[u, v], ...]}) or from a
    plain text file with lines "index u v".  Coordinates may be strings
    ("3/7"), integers, or decimals (read exactly)."""
    text = Path(path).read_text()
    stripped = text.lstrip()
    if stripped.startswith("{"):
        data = json.loads(text, parse_float=Fraction)
        if "images" not in data:
            raise MapError("missing 'images' key")
        rows = data["images"]
        images = []
        for row in rows:
            if len(row) != 2:
                raise MapError("image rows must have 2 coordinates")
            images.append((_coord(row[0]), _coord(row[1])))
    else:
        entries: Dict[int, Point2] = {}
        for line in text.splitlines():
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            parts = line.split()
            if len(parts) != 3:
                raise MapError("expected 'index u v' lines")
            k = int(parts[0])
            if k in entries:
                raise MapError("repeated vertex index %d" % k)
            entries[k] = (Fraction(parts[1]), Fraction(parts[2]))
        if not entries:
            raise MapError("empty map file")
        n = max(entries) + 1
        if set(entries) != set(range(n)):
            raise MapError("vertex indices must cover 0..%d" % (n - 1))
        images = [entries[i] for i in range(n)]
    if n_vertices is not None and len(images) != n_vertices:
        raise MapError("map has %d images but the mesh has %d vertices"
                       % (len(images), n_vertices))
    return PlanarMap(images=images)


@dataclass
class GeneralPositionReport:
    violations: List[Tuple[str, object, str]]

    @property
    def passed(self) -> bool:
        return not self.violations

    def coincident_pairs(self) -> List[Tuple[int, int]]:
        return [ref for code, ref, _ in self.violations
                if code == "coincident-images"]

    def collinear_triples(self) -> List[Tuple[int, int, int]]:
        return [ref for code, ref, _ in self.violations
                if code == "collinear-images"]


def check_general_position(mesh: Optional[SurfaceMesh], pmap: PlanarMap,
                           max_violations: int = 20) -> GeneralPositionReport:
    """Exact check that no two images coincide and no three are collinear.

    Collinear triples are found by hashing, per anchor point, the reduced
    integer direction to every later point; a repeated direction is a
    collinear triple.  That keeps the check quadratic."""
    if mesh is not None and len(pmap) != len(mesh.vertices):
        raise MapError("map has %d images but the mesh has %d vertices"
                       % (len(pmap), len(mesh.vertices)))
    pts = pmap.images
    n = len(pts)
    violations: List[Tuple[str, object, str]] = []
    seen: Dict[Point2, int] = {}
    for i, p in enumerate(pts):
        if p in seen:
            violations.append(("coincident-images", (seen[p], i),
                               "vertex images %d and %d coincide"
                               % (seen[p], i)))
            if len(violations) >= max_violations:
                break
        else:
            seen[p] = i
    if not violations:
        for i in range(n):
            dirs: Dict[Tuple[int, int], int] = {}
            for j in range(i + 1, n):
                dx = pts[j][0] - pts[i][0]
                dy = pts[j][1] - pts[i][1]
                a = dx.numerator * dy.denominator
                b = dy.numerator * dx.denominator
                g = gcd(abs(a), abs(b))
                a, b = a // g, b // g
                if a < 0 or (a == 0 and b < 0):
                    a, b = -a, -b
                key = (a, b)
                if key in dirs:
                    violations.append((
                        "collinear-images", (i, dirs[key], j),
                        "vertex images %d, %d, %d are collinear"
                        % (i, dirs[key], j)))
                    if len(violations) >= max_violations:
                        break
                else:
                    dirs[key] = j
            if len(violations) >= max_violations:
                break
    return GeneralPositionReport(violations=violations)


def require_general_position(mesh: Optional[SurfaceMesh],
                             pmap: PlanarMap) -> None:
    report = check_general_position(mesh, pmap)
    if not report.passed:
        raise GeneralPositionError(report.violations[0][2])


@dataclass
class ImagePSLG:
    """Arrangement of the edge images: points, subdivided constraint
    segments, and the provenance of every point."""

    points: List[Point2]
    constraints: List[Tuple[int, int]]
    point_provenance: List[List[dict]]
    constraint_edges: List[int]
    mesh_edges: List[Tuple[int, int]]

    _cache: dict = field(default_factory=dict, repr=False, compare=False)

    def n_crossings(self) -> int:
        return sum(1 for prov in self.point_provenance
                   if all(entry["kind"] == "crossing" for entry in prov))


class ArrangementError(ValueError):
    """The edge images cannot be arranged (overlap along a segment)."""


def build_pslg(mesh: SurfaceMesh, pmap: PlanarMap) -> ImagePSLG:
    """Intersect all edge images pairwise and subdivide them at the
    resulting points.  Points are deduplicated exactly; each point records
    how it arose (vertex image and/or pairwise crossing)."""
    require_general_position(mesh, pmap)
    edges = mesh.edges()
    pts = pmap.images

    point_id: Dict[Point2, int] = {}
    points: List[Point2] = []
    provenance: List[List[dict]] = []

    def register(p: Point2) -> int:
        if p in point_id:
            return point_id[p]
        pid = len(points)
        point_id[p] = pid
        points.append(p)
        provenance.append([])
        return pid

    for vi, p in enumerate(pts):
        pid = register(p)
        provenance[pid].append({"kind": "vertex-image", "vertex": vi})

    on_edge: List[set] = [set() for _ in edges]
    for ei, (a, b) in enumerate(edges):
        on_edge[ei].add(point_id[pts[a]])
        on_edge[ei].add(point_id[pts[b]])

    # conservative float boxes for pair prefiltering
    fpts = pmap.float_images()
    seg = np.array([[fpts[a], fpts[b]] for (a, b) in edges])
    lo = seg.min(axis=1) - 1e-9 * (1.0 + np.abs(seg).max())
    hi = seg.max(axis=1) + 1e-9 * (1.0 + np.abs(seg).max())

    n_edges = len(edges)
    for i in range(n_edges):
        overlap = np.nonzero((lo[i + 1:, 0] <= hi[i, 0])
                             & (lo[i, 0] <= hi[i + 1:, 0])
                             & (lo[i + 1:, 1] <= hi[i, 1])
                             & (lo[i, 1] <= hi[i + 1:, 1]))[0]
        ai, bi = edges[i]
        sa, sb = pts[ai], pts[bi]
        for off in overlap:
            j = i + 1 + int(off)
            aj, bj = edges[j]
            if len({ai, bi, aj, bj}) < 4:
                continue  # shared mesh vertex: images meet at the endpoint
            try:
                hit = segment_intersection(sa, sb, pts[aj], pts[bj])
            except CollinearOverlapError:
                raise ArrangementError(
                    "edge images %d and %d overlap along a segment" % (i, j))
            if hit is None:
                continue
            p, proper = hit
            pid = register(p)
            provenance[pid].append({"kind": "crossing", "edges": [i, j],
                                    "proper": proper})
            on_edge[i].add(pid)
            on_edge[j].add(pid)

    constraints: List[Tuple[int, int]] = []
    constraint_edges: List[int] = []
    for ei, (a, b) in enumerate(edges):
        pa, pb = pts[a], pts[b]
        dx, dy = pb[0] - pa[0], pb[1] - pa[1]
        if dx == 0 and dy == 0:
            raise ArrangementError("edge %d has a degenerate image" % ei)
        use_x = abs(dx) >= abs(dy)

        def param(pid: int) -> Fraction:
            q = points[pid]
            if use_x:
                return (q[0] - pa[0]) / dx
            return (q[1] - pa[1]) / dy

        ordered = sorted(on_edge[ei], key=param)
        if points[ordered[0]] != pa or points[ordered[-1]] != pb:
            raise ArrangementError(
                "edge %d subdivision does not start and end at its "
                "endpoints" % ei)
        for u, v in zip(ordered, ordered[1:]):
            constraints.append((u, v) if u < v else (v, u))
            constraint_edges.append(ei)

    expected = sum(len(on_edge[ei]) - 1 for ei in range(n_edges))
    if expected != len(constraints):
        raise AssertionError("subdivision count mismatch")

    return ImagePSLG(points=points, constraints=constraints,
                     point_provenance=provenance,
                     constraint_edges=constraint_edges,
                     mesh_edges=list(edges))
