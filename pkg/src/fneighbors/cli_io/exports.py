"""File exports: SVG of the image triangulation, OBJ surfaces, and JSON
dumps of the complex and level sets.

Triangles sharing an image are colored identically: in the plane every
covered triangle gets its own color, and on the refined boundary surface
each lift inherits the color of its image triangle.
"""

from __future__ import annotations

import colorsys
import json
from typing import Dict, List, Optional, Sequence, Tuple

from ..induced import InducedTriangulation
from ..levelset import LevelSetResult
from ..neighbor_complex import ResolvedComplex


def _color(i: int) -> Tuple[float, float, float]:
    hue = (i * 137.508) % 360.0 / 360.0
    return colorsys.hls_to_rgb(hue, 0.55, 0.65)


def _css(rgb: Tuple[float, float, float]) -> str:
    return "#%02x%02x%02x" % tuple(int(round(255 * c)) for c in rgb)


def _svg_document(body: List[str], xs: Sequence[float], ys: Sequence[float],
                  pad_ratio: float = 0.05) -> str:
    x0, x1 = min(xs), max(xs)
    y0, y1 = min(ys), max(ys)
    pad = pad_ratio * max(x1 - x0, y1 - y0, 1e-9)
    x0, x1 = x0 - pad, x1 + pad
    y0, y1 = y0 - pad, y1 + pad
    width = x1 - x0
    height = y1 - y0
    # flip the y axis so the mathematical plane reads upright
    head = ('<svg xmlns="http://www.w3.org/2000/svg" '
            'viewBox="%.6g %.6g %.6g %.6g" width="640" height="%d">'
            % (x0, -y1, width, height, int(round(640 * height / width))))
    flip = '<g transform="scale(1,-1)">'
    return "\n".join([head, flip] + body + ["</g>", "</svg>", ""])


def svg_image_triangulation(ind: InducedTriangulation, path: str) -> str:
    """Covered image triangles filled with one color each (the color class
    of all their lifts), constraint edges stroked on top."""
    planar = ind.planar
    body: List[str] = []
    xs: List[float] = []
    ys: List[float] = []
    for rank, cd in enumerate(planar.inside_indices()):
        pts = [planar.points[v] for v in planar.triangles[cd]]
        coords = [(float(p[0]), float(p[1])) for p in pts]
        xs.extend(c[0] for c in coords)
        ys.extend(c[1] for c in coords)
        poly = " ".join("%.6g,%.6g" % c for c in coords)
        mult = planar.multiplicity(cd)
        body.append('<polygon points="%s" fill="%s" fill-opacity="0.85" '
                    'stroke="none"><title>image triangle %d, %d lifts'
                    '</title></polygon>' % (poly, _css(_color(rank)), cd, mult))
    seen = set()
    for u, v in planar.constrained:
        key = (u, v) if u < v else (v, u)
        if key in seen:
            continue
        seen.add(key)
        p, q = planar.points[u], planar.points[v]
        body.append('<line x1="%.6g" y1="%.6g" x2="%.6g" y2="%.6g" '
                    'stroke="#222222" stroke-width="0.6%%" '
                    'vector-effect="non-scaling-stroke"/>'
                    % (float(p[0]), float(p[1]), float(q[0]), float(q[1])))
    if not xs:
        xs, ys = [0.0, 1.0], [0.0, 1.0]
    text = _svg_document(body, xs, ys)
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(text)
    return path


def _write_obj(path: str, vertices: List[Tuple[float, float, float]],
               groups: List[Tuple[str, List[Tuple[int, int, int]]]],
               palette: Dict[str, Tuple[float, float, float]]) -> str:
    mtl_path = path[:-4] + ".mtl" if path.endswith(".obj") else path + ".mtl"
    with open(mtl_path, "w", encoding="utf-8") as fh:
        for name in sorted(palette):
            r, g, b = palette[name]
            fh.write("newmtl %s\nKd %.4f %.4f %.4f\n" % (name, r, g, b))
    import os
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("mtllib %s\n" % os.path.basename(mtl_path))
        for x, y, z in vertices:
            fh.write("v %.12g %.12g %.12g\n" % (x, y, z))
        for name, faces in groups:
            fh.write("usemtl %s\n" % name)
            for i, j, k in faces:
                fh.write("f %d %d %d\n" % (i + 1, j + 1, k + 1))
    return path


def obj_induced_surface(ind: InducedTriangulation, path: str) -> str:
    """The refined boundary surface; every lift is colored by its image
    triangle, so triangles with coinciding images are colored identically."""
    vertices = [tuple(float(c) for c in p) for p in ind.vertices]
    ranks = {cd: rank for rank, cd in enumerate(ind.planar.inside_indices())}
    by_class: Dict[str, List[Tuple[int, int, int]]] = {}
    palette: Dict[str, Tuple[float, float, float]] = {}
    for tri in ind.triangles:
        name = "image%d" % tri.cd_tri
        palette[name] = _color(ranks[tri.cd_tri])
        by_class.setdefault(name, []).append(tri.corners)
    groups = sorted(by_class.items())
    return _write_obj(path, vertices, groups, palette)


def obj_pair_projections(rc: ResolvedComplex, path_first: str,
                         path_second: str) -> Tuple[str, str]:
    """Two surfaces over the boundary: each resolved vertex projected to its
    first (resp. second) pair member.  Faces are colored by component."""
    paths = []
    for member, path in ((0, path_first), (1, path_second)):
        vertices = []
        for vid in range(rc.n_vertices):
            p = rc.vertex_pair_points(vid)[member]
            vertices.append(tuple(float(c) for c in p))
        by_comp: Dict[str, List[Tuple[int, int, int]]] = {}
        palette: Dict[str, Tuple[float, float, float]] = {}
        for tid, corners in enumerate(rc.triangles):
            comp = rc.components[tid] if rc.components is not None else 0
            name = "component%d" % comp
            palette[name] = _color(comp)
            by_comp.setdefault(name, []).append(corners)
        _write_obj(path, vertices, sorted(by_comp.items()), palette)
        paths.append(path)
    return tuple(paths)


def json_complex(rc: ResolvedComplex, path: str) -> str:
    """Adjacency dump of the resolved complex with pair geometry, diagonal
    flags, swap involution, and component table."""
    verts = []
    for vid in range(rc.n_vertices):
        pa, pb = rc.vertex_pair_points(vid)
        verts.append({
            "a": [float(c) for c in pa],
            "b": [float(c) for c in pb],
            "diagonal": rc.diagonal_flags[vid],
            "component": (rc.vertex_components[vid]
                          if rc.vertex_components is not None else None),
            "swap": rc.swap_vertices[vid],
        })
    comps = []
    if rc.component_info is not None:
        for info in rc.component_info:
            comps.append({
                "component": info.component,
                "vertices": info.n_vertices,
                "edges": info.n_edges,
                "triangles": info.n_triangles,
                "euler_characteristic": info.euler_characteristic,
                "orientable": info.orientable,
                "genus": info.genus,
                "degree_mod2": info.degree_mod2,
                "degree_signed": info.degree_signed,
                "meets_diagonal": info.meets_diagonal,
            })
    data = {
        "vertices": verts,
        "triangles": [{"corners": list(c), "pair": list(rc.pairs[t]),
                       "swap": rc.swap_triangles[t],
                       "component": (rc.components[t]
                                     if rc.components is not None else None)}
                      for t, c in enumerate(rc.triangles)],
        "edges": [{"vertices": list(k), "triangles": v}
                  for k, v in sorted(rc.edge_triangles.items())],
        "components": comps,
    }
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(data, fh, indent=2, sort_keys=True)
        fh.write("\n")
    return path


def _loop_dicts(result: LevelSetResult) -> List[List[dict]]:
    out = []
    for loop in result.loops or []:
        out.append([{
            "triangle": p.triangle,
            "bary": list(p.bary),
            "a": list(p.a),
            "b": list(p.b),
            "distance": p.value,
        } for p in loop])
    return out


def json_levelset(result: LevelSetResult, path: str) -> str:
    data = {
        "delta": result.delta,
        "eps_level": result.eps_level,
        "total_loop_count": result.total_loop_count,
        "below_components": result.below_components,
        "above_components": result.above_components,
        "separated": result.separated,
        "nudges": result.nudges,
        "refined_triangles": result.refined_triangles,
        "loops": _loop_dicts(result),
    }
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(data, fh, indent=2, sort_keys=True)
        fh.write("\n")
    return path


def svg_levelset(rc: ResolvedComplex, ind: InducedTriangulation,
                 result: LevelSetResult, path: str) -> str:
    """Loops drawn in the image plane: each sample is projected to the
    common image of its pair; the covered image boundary is underlaid."""
    body: List[str] = []
    xs: List[float] = []
    ys: List[float] = []
    planar = ind.planar
    seen = set()
    for u, v in planar.constrained:
        key = (u, v) if u < v else (v, u)
        if key in seen:
            continue
        seen.add(key)
        p, q = planar.points[u], planar.points[v]
        body.append('<line x1="%.6g" y1="%.6g" x2="%.6g" y2="%.6g" '
                    'stroke="#bbbbbb" stroke-width="0.4%%" '
                    'vector-effect="non-scaling-stroke"/>'
                    % (float(p[0]), float(p[1]), float(q[0]), float(q[1])))
        xs.extend((float(p[0]), float(q[0])))
        ys.extend((float(p[1]), float(q[1])))
    for li, loop in enumerate(result.loops or []):
        pts = []
        for p in loop:
            A = rc.pairs[p.triangle][0]
            corners = ind.triangles[A].corners
            u = sum(p.bary[s] * float(ind.vertex_images[corners[s]][0])
                    for s in range(3))
            v = sum(p.bary[s] * float(ind.vertex_images[corners[s]][1])
                    for s in range(3))
            pts.append((u, v))
            xs.append(u)
            ys.append(v)
        poly = " ".join("%.6g,%.6g" % c for c in pts)
        body.append('<polygon points="%s" fill="none" stroke="%s" '
                    'stroke-width="0.8%%" vector-effect="non-scaling-stroke">'
                    '<title>loop %d, %d samples</title></polygon>'
                    % (poly, _css(_color(li)), li, len(pts)))
    if not xs:
        xs, ys = [0.0, 1.0], [0.0, 1.0]
    text = _svg_document(body, xs, ys)
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(text)
    return path
