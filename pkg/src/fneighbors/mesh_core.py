"""Triangulated convex polyhedron boundaries with exact rational coordinates.

Loads OFF and JSON meshes, validates that they are closed convex surfaces
(every check exact), and shoots exact rays: a line through a strictly
interior point meets the boundary in exactly two points.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Dict, List, Tuple

import numpy as np

from .exact import Point3, cross3, point_in_triangle_3d, sub3


class MeshError(ValueError):
    """Problem with mesh data (parse or validation)."""


class MeshFormatError(MeshError):
    """Unparseable or structurally invalid mesh file."""


class MeshValidationError(MeshError):
    """Mesh fails a closed-convex-surface check."""


class RaycastError(MeshError):
    """Invalid raycast query (origin not strictly interior, zero direction)."""


@dataclass
class ValidationReport:
    n_vertices: int
    n_edges: int
    n_faces: int
    euler_characteristic: int
    violations: List[Tuple[str, object, str]] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.violations


@dataclass
class SurfaceMesh:
    """Triangle boundary mesh; vertices are exact rational 3d points."""

    vertices: List[Point3]
    triangles: List[Tuple[int, int, int]]
    _cache: dict = field(default_factory=dict, repr=False, compare=False)

    # -- derived combinatorics ------------------------------------------

    def edge_faces(self) -> Dict[Tuple[int, int], List[int]]:
        """Map sorted vertex pair -> incident face indices."""
        if "edge_faces" not in self._cache:
            ef: Dict[Tuple[int, int], List[int]] = {}
            for fi, (i, j, k) in enumerate(self.triangles):
                for u, v in ((i, j), (j, k), (k, i)):
                    key = (u, v) if u < v else (v, u)
                    ef.setdefault(key, []).append(fi)
            self._cache["edge_faces"] = ef
        return self._cache["edge_faces"]

    def edges(self) -> List[Tuple[int, int]]:
        return sorted(self.edge_faces().keys())

    def face_points(self, fi: int) -> Tuple[Point3, Point3, Point3]:
        i, j, k = self.triangles[fi]
        return self.vertices[i], self.vertices[j], self.vertices[k]

    def vertex_centroid(self) -> Point3:
        n = len(self.vertices)
        sx = sum(v[0] for v in self.vertices)
        sy = sum(v[1] for v in self.vertices)
        sz = sum(v[2] for v in self.vertices)
        return (sx / n, sy / n, sz / n)

    # -- scaled integer geometry ----------------------------------------

    def _int_geometry(self):
        """Vertices scaled by the lcm of coordinate denominators to integers,
        plus per-face integer plane equations n.x = c with outward normals.

        Outwardness is fixed from the global signed volume, so a validated
        (consistently wound) mesh gets a uniform orientation sign.
        """
        if "intgeom" in self._cache:
            return self._cache["intgeom"]
        scale = 1
        for v in self.vertices:
            for x in v:
                d = x.denominator
                scale = scale * d // math.gcd(scale, d)
        iverts = [(int(v[0] * scale), int(v[1] * scale), int(v[2] * scale))
                  for v in self.vertices]
        vol6 = 0
        planes = []
        for (i, j, k) in self.triangles:
            p1, p2, p3 = iverts[i], iverts[j], iverts[k]
            ux, uy, uz = p2[0] - p1[0], p2[1] - p1[1], p2[2] - p1[2]
            wx, wy, wz = p3[0] - p1[0], p3[1] - p1[1], p3[2] - p1[2]
            nx, ny, nz = uy * wz - uz * wy, uz * wx - ux * wz, ux * wy - uy * wx
            c = nx * p1[0] + ny * p1[1] + nz * p1[2]
            planes.append((nx, ny, nz, c))
            vol6 += c  # det(p1,p2,p3) = n.p1 for this winding
        if vol6 < 0:
            planes = [(-nx, -ny, -nz, -c) for (nx, ny, nz, c) in planes]
        geom = {"scale": scale, "iverts": iverts, "planes": planes,
                "outward": vol6 != 0}
        self._cache["intgeom"] = geom
        return geom

    def float_vertices(self) -> np.ndarray:
        if "fverts" not in self._cache:
            self._cache["fverts"] = np.array(
                [[float(x) for x in v] for v in self.vertices], dtype=float)
        return self._cache["fverts"]

    def float_planes(self) -> Tuple[np.ndarray, np.ndarray]:
        """Unit outward normals (F,3) and offsets (F,) in original coords."""
        if "fplanes" not in self._cache:
            geom = self._int_geometry()
            s = float(geom["scale"])
            normals = np.array([[float(nx), float(ny), float(nz)]
                                for (nx, ny, nz, _) in geom["planes"]])
            offsets = np.array([float(c) for (_, _, _, c) in geom["planes"]])
            # n.(s x) = c  =>  n.x = c/s in original coordinates
            offsets = offsets / s
            norms = np.linalg.norm(normals, axis=1)
            normals = normals / norms[:, None]
            offsets = offsets / norms
            self._cache["fplanes"] = (normals, offsets)
        return self._cache["fplanes"]


# ---------------------------------------------------------------------------
# loading


def _mesh_from_lists(vertices, triangles) -> SurfaceMesh:
    nv = len(vertices)
    for t in triangles:
        if len(t) != 3:
            raise MeshFormatError("non-triangular face: %r" % (t,))
        if any((not isinstance(i, int)) or i < 0 or i >= nv for i in t):
            raise MeshFormatError("face index out of range: %r" % (t,))
        if len(set(t)) != 3:
            raise MeshFormatError("face with repeated vertex: %r" % (t,))
    return SurfaceMesh(vertices=[tuple(v) for v in vertices],
                       triangles=[tuple(t) for t in triangles])


def _load_off(text: str) -> SurfaceMesh:
    tokens: List[str] = []
    for line in text.splitlines():
        line = line.split("#", 1)[0].strip()
        if line:
            tokens.extend(line.split())
    if not tokens or tokens[0] != "OFF":
        raise MeshFormatError("missing OFF header")
    try:
        nv, nf = int(tokens[1]), int(tokens[2])
        ne = int(tokens[3])  # ignored per format
    except (IndexError, ValueError) as exc:
        raise MeshFormatError("bad OFF counts line") from exc
    pos = 4
    need = nv * 3
    if len(tokens) < pos + need:
        raise MeshFormatError("truncated OFF vertex block")
    vertices = []
    for i in range(nv):
        x, y, z = tokens[pos:pos + 3]
        try:
            vertices.append((Fraction(x), Fraction(y), Fraction(z)))
        except (ValueError, ZeroDivisionError) as exc:
            raise MeshFormatError("bad vertex coordinate at vertex %d" % i) from exc
        pos += 3
    triangles = []
    for i in range(nf):
        if pos >= len(tokens):
            raise MeshFormatError("truncated OFF face block")
        cnt = int(tokens[pos])
        pos += 1
        if cnt != 3:
            raise MeshFormatError("non-triangular face with %d vertices" % cnt)
        idx = [int(t) for t in tokens[pos:pos + 3]]
        pos += 3
        triangles.append(idx)
    return _mesh_from_lists(vertices, triangles)


def _coord(value) -> Fraction:
    if isinstance(value, Fraction):
        return value
    if isinstance(value, str):
        return Fraction(value)
    if isinstance(value, int):
        return Fraction(value)
    raise MeshFormatError("unparseable coordinate: %r" % (value,))


def _load_json_mesh(text: str) -> SurfaceMesh:
    try:
        data = json.loads(text, parse_float=Fraction)
    except json.JSONDecodeError as exc:
        raise MeshFormatError("invalid JSON mesh: %s" % exc) from exc
    if not isinstance(data, dict) or "vertices" not in data or "triangles" not in data:
        raise MeshFormatError("JSON mesh needs 'vertices' and 'triangles'")
    vertices = [tuple(_coord(x) for x in v) for v in data["vertices"]]
    for v in vertices:
        if len(v) != 3:
            raise MeshFormatError("vertex with %d coordinates" % len(v))
    triangles = [list(t) for t in data["triangles"]]
    return _mesh_from_lists(vertices, triangles)


def load_surface_mesh(path) -> SurfaceMesh:
    """Load a mesh from an OFF or JSON file (format sniffed from content)."""
    text = Path(path).read_text()
    stripped = text.lstrip()
    if stripped.startswith("{"):
        return _load_json_mesh(text)
    return _load_off(text)


# ---------------------------------------------------------------------------
# validation


def validate_surface(mesh: SurfaceMesh, max_violations: int = 20) -> ValidationReport:
    """Check that the mesh is a closed, consistently wound, convex
    triangulated sphere with no degenerate faces.  All geometric tests are
    exact; floats only pre-filter the convexity scan."""
    violations: List[Tuple[str, object, str]] = []

    def add(code: str, ref, message: str):
        if len(violations) < max_violations:
            violations.append((code, ref, message))

    nv, nf = len(mesh.vertices), len(mesh.triangles)
    ef = mesh.edge_faces()
    ne = len(ef)

    for fi in range(nf):
        a, b, c = mesh.face_points(fi)
        if cross3(sub3(b, a), sub3(c, a)) == (0, 0, 0):
            add("degenerate-face", fi, "zero-area face %d" % fi)

    directed_seen: Dict[Tuple[int, int], int] = {}
    for edge, faces in ef.items():
        if len(faces) == 1:
            add("boundary-edge", tuple(edge),
                "boundary edge %s has one incident face" % (tuple(edge),))
        elif len(faces) > 2:
            add("non-manifold-edge", tuple(edge),
                "edge %s has %d incident faces" % (tuple(edge), len(faces)))
    for fi, (i, j, k) in enumerate(mesh.triangles):
        for u, v in ((i, j), (j, k), (k, i)):
            if (u, v) in directed_seen:
                add("inconsistent-winding", (u, v),
                    "directed edge (%d,%d) used by faces %d and %d"
                    % (u, v, directed_seen[(u, v)], fi))
            directed_seen[(u, v)] = fi

    euler = nv - ne + nf
    if not violations and euler != 2:
        add("euler-characteristic", euler,
            "V - E + F = %d, expected 2" % euler)

    if not violations:
        geom = mesh._int_geometry()
        if not geom["outward"]:
            add("degenerate-volume", None, "enclosed volume is zero")
    if not violations:
        violations.extend(_convexity_violations(mesh, max_violations))

    report = ValidationReport(n_vertices=nv, n_edges=ne, n_faces=nf,
                              euler_characteristic=euler,
                              violations=violations)
    return report


def _convexity_violations(mesh: SurfaceMesh, cap: int
                          ) -> List[Tuple[str, object, str]]:
    """Every vertex must satisfy n.v <= c for every outward face plane.
    Planes are deduplicated (coplanar faces share one test) and clear float
    margins skip the exact test."""
    geom = mesh._int_geometry()
    iverts = geom["iverts"]
    planes = geom["planes"]
    unique: Dict[Tuple[int, int, int, int], int] = {}
    for fi, (nx, ny, nz, c) in enumerate(planes):
        g = math.gcd(math.gcd(abs(nx), abs(ny)), math.gcd(abs(nz), abs(c)))
        if g == 0:
            continue  # degenerate face reported elsewhere
        key = (nx // g, ny // g, nz // g, c // g)
        unique.setdefault(key, fi)
    V = np.array(iverts, dtype=float)
    scale_hint = np.abs(V).max() or 1.0
    out: List[Tuple[str, object, str]] = []
    for (nx, ny, nz, c), fi in unique.items():
        n = np.array([float(nx), float(ny), float(nz)])
        nn = np.linalg.norm(n)
        dist = (V @ n - float(c)) / nn
        suspect = np.nonzero(dist > -1e-9 * scale_hint)[0]
        for vi in suspect:
            x, y, z = iverts[int(vi)]
            if nx * x + ny * y + nz * z - c > 0:
                out.append(("non-convex", (fi, int(vi)),
                            "non-convex at face %d: vertex %d lies outside "
                            "its plane" % (fi, int(vi))))
                if len(out) >= cap:
                    return out
    return out


def require_valid(mesh: SurfaceMesh) -> ValidationReport:
    report = mesh._cache.get("validation")
    if report is None:
        report = validate_surface(mesh)
        mesh._cache["validation"] = report
    if not report.passed:
        code, _, message = report.violations[0]
        raise MeshValidationError("mesh validation failed [%s]: %s"
                                  % (code, message))
    return report


# ---------------------------------------------------------------------------
# raycast


def _frac_triple(p) -> Tuple[Fraction, Fraction, Fraction]:
    return (Fraction(p[0]), Fraction(p[1]), Fraction(p[2]))


def surface_raycast(mesh: SurfaceMesh, origin, direction
                    ) -> List[Tuple[Point3, int]]:
    """Intersect the full line origin + t*direction with the boundary.

    origin must be strictly interior.  Returns the two hit points with
    their triangle indices, ordered along the direction; a hit on a shared
    edge or vertex reports the smallest incident triangle index.
    """
    o = _frac_triple(origin)
    d = _frac_triple(direction)
    if d == (Fraction(0), Fraction(0), Fraction(0)):
        raise RaycastError("zero direction")
    require_valid(mesh)
    geom = mesh._int_geometry()
    planes = geom["planes"]
    scale = geom["scale"]

    # work in the scaled-integer world: x_scaled = scale * x
    on = [(o[i] * scale).numerator for i in range(3)]
    od = [(o[i] * scale).denominator for i in range(3)]
    dn = [(d[i] * scale).numerator for i in range(3)]
    dd = [(d[i] * scale).denominator for i in range(3)]
    oD = od[0] * od[1] * od[2]
    dD = dd[0] * dd[1] * dd[2]

    def dot_num(n_vec, nums, dens, D):
        # numerator of n_vec . (nums/dens) over common denominator D
        return (n_vec[0] * nums[0] * dens[1] * dens[2]
                + n_vec[1] * nums[1] * dens[0] * dens[2]
                + n_vec[2] * nums[2] * dens[0] * dens[1])

    # residuals r_f = n.o - c (as numerator over oD) and slopes s_f = n.d
    residuals = []
    slopes = []
    for (nx, ny, nz, c) in planes:
        r = dot_num((nx, ny, nz), on, od, oD) - c * oD
        if r >= 0:
            raise RaycastError("origin not interior")
        residuals.append(r)
        slopes.append(dot_num((nx, ny, nz), dn, dd, dD))

    def best_hit(sign: int):
        # exit along sign*d: faces with sign*slope > 0, t = -r/slope;
        # nearest such plane, then the face(s) actually containing the point
        best = None  # (num, den) normalized so den > 0
        for r, s in zip(residuals, slopes):
            if sign * s <= 0:
                continue
            num, den = -r * dD, s * oD
            if den < 0:
                num, den = -num, -den
            # nearest plane: smallest |t|; all candidate t share sign, so
            # compare sign*t (dens are positive)
            if best is None or sign * num * best[1] < sign * best[0] * den:
                best = (num, den)
        if best is None:
            raise RaycastError("ray does not exit the polytope")
        t = Fraction(best[0], best[1])
        point = (o[0] + t * d[0], o[1] + t * d[1], o[2] + t * d[2])
        for fi, (r, s) in enumerate(zip(residuals, slopes)):
            if sign * s <= 0:
                continue
            num, den = -r * dD, s * oD
            if den < 0:
                num, den = -num, -den
            if num * best[1] != best[0] * den:
                continue
            a, b, c3 = mesh.face_points(fi)
            if point_in_triangle_3d(point, a, b, c3) >= 0:
                return t, point, fi
        raise MeshValidationError("ray hit not on any face (internal error)")

    hits = [best_hit(-1), best_hit(1)]
    hits.sort(key=lambda h: h[0])
    return [(p, tri) for (_, p, tri) in hits]


def surface_antipode(mesh: SurfaceMesh, interior_point, surface_point) -> Point3:
    """Second intersection of the line through interior_point and
    surface_point: the image of surface_point under the two-point swap."""
    sp = _frac_triple(surface_point)
    ip = _frac_triple(interior_point)
    d = sub3(sp, ip)
    hits = surface_raycast(mesh, ip, d)
    # the hit along -d is the antipode; along +d it is surface_point itself
    return hits[0][0]
