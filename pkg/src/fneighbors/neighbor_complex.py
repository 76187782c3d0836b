"""Ordered pairs of distinct overlapping lifts, and their resolution.

Two distinct lifted triangles with the same planar image form a matched
ordered pair.  Corner-by-corner matching glues the pairs into a simplicial
complex (a closed pseudo-surface once edge-manifoldness is certified).
Splitting every vertex into one copy per link cycle resolves the pinch
points, giving a closed surface -- possibly several components -- that
carries the pair-swap involution and projects to the polyhedron boundary
through the first factor.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Tuple

import numpy as np

from .exact import Point3, cross3, dot3, sub3
from .induced import InducedTriangulation
from .mesh_core import SurfaceMesh

CASE_CREASE = "crease"          # partner is the swapped pair (equal lifted edges)
CASE_ONE_FOLD = "one-folding"   # exactly one factor jumps to its fold partner
CASE_NO_FOLD = "no-folding"     # both factors continue into the adjacent triangle


class ComplexError(ValueError):
    """The pair complex violated a structural invariant."""


EdgeKey = Tuple[int, int]


@dataclass
class NeighborComplex:
    """Complex of ordered pairs of distinct lifts with equal planar image.

    Vertices are ordered pairs of induced-triangulation vertices (diagonal
    pairs allowed); triangles are ordered pairs of induced triangles over the
    same planar triangle, corners matched slot by slot; edges are derived."""

    induced: InducedTriangulation
    vertices: List[Tuple[int, int]]
    diagonal_flags: List[bool]
    triangles: List[Tuple[int, int]]
    corners: List[Tuple[int, int, int]]
    vertex_id: Dict[Tuple[int, int], int]
    pair_id: Dict[Tuple[int, int], int]
    swap: List[int]
    vertex_swap: List[int]
    edge_triangles: Dict[EdgeKey, List[int]]

    @property
    def n_vertices(self) -> int:
        return len(self.vertices)

    @property
    def n_edges(self) -> int:
        return len(self.edge_triangles)

    @property
    def n_triangles(self) -> int:
        return len(self.triangles)

    def euler_characteristic(self) -> int:
        return self.n_vertices - self.n_edges + self.n_triangles

    def triangle_edges(self, tid: int) -> List[EdgeKey]:
        c = self.corners[tid]
        keys = []
        for s in range(3):
            u, v = c[s], c[(s + 1) % 3]
            keys.append((u, v) if u < v else (v, u))
        return keys


def build_complex(ind: InducedTriangulation) -> NeighborComplex:
    """Emit one triangle per ordered pair of distinct lifts of each planar
    triangle; match their corners slot by slot (the slots follow the planar
    triangle's corner order, so matched corners have equal image)."""
    vertices: List[Tuple[int, int]] = []
    vertex_id: Dict[Tuple[int, int], int] = {}

    def vert(key: Tuple[int, int]) -> int:
        if key in vertex_id:
            return vertex_id[key]
        vid = len(vertices)
        vertex_id[key] = vid
        vertices.append(key)
        return vid

    triangles: List[Tuple[int, int]] = []
    corners: List[Tuple[int, int, int]] = []
    pair_id: Dict[Tuple[int, int], int] = {}
    for cd in sorted(ind.by_cd):
        lifts = sorted(ind.by_cd[cd])
        for a in lifts:
            for b in lifts:
                if a == b:
                    continue
                ca = ind.triangles[a].corners
                cb = ind.triangles[b].corners
                pair_id[(a, b)] = len(triangles)
                triangles.append((a, b))
                corners.append(tuple(vert((ca[s], cb[s])) for s in range(3)))

    diagonal_flags = [a == b for (a, b) in vertices]
    swap = [pair_id[(b, a)] for (a, b) in triangles]
    vertex_swap = [vertex_id[(b, a)] for (a, b) in vertices]

    edge_triangles: Dict[EdgeKey, List[int]] = {}
    for tid, c in enumerate(corners):
        if len(set(c)) < 3:
            raise ComplexError("pair triangle %d has repeated corners" % tid)
        for s in range(3):
            u, v = c[s], c[(s + 1) % 3]
            key = (u, v) if u < v else (v, u)
            edge_triangles.setdefault(key, []).append(tid)

    return NeighborComplex(induced=ind, vertices=vertices,
                           diagonal_flags=diagonal_flags,
                           triangles=triangles, corners=corners,
                           vertex_id=vertex_id, pair_id=pair_id,
                           swap=swap, vertex_swap=vertex_swap,
                           edge_triangles=edge_triangles)


@dataclass
class EdgeManifoldReport:
    """Per-edge classification of the pair complex plus any violations."""

    edge_cases: Dict[EdgeKey, str]
    case_counts: Dict[str, int]
    violations: List[Tuple[str, object, str]]

    @property
    def passed(self) -> bool:
        return not self.violations


def verify_edge_manifold(cx: NeighborComplex) -> EdgeManifoldReport:
    """Certify that every edge lies in exactly two triangles and classify
    how the two meet: across a crease (the partner is the swapped pair, the
    two lifted edges coincide), with one factor folding back over the same
    planar triangle, or with both factors continuing into the adjacent one.
    A failure means the vertex images were not in general position."""
    edge_cases: Dict[EdgeKey, str] = {}
    case_counts = {CASE_CREASE: 0, CASE_ONE_FOLD: 0, CASE_NO_FOLD: 0}
    violations: List[Tuple[str, object, str]] = []
    for key in sorted(cx.edge_triangles):
        tris = cx.edge_triangles[key]
        if len(tris) != 2:
            violations.append((
                "edge-degree", key,
                "edge %s has %d incident triangles (expected 2)"
                % (key, len(tris))))
            continue
        t1, t2 = tris
        a, b = cx.triangles[t1]
        x, y = cx.triangles[t2]
        if (x, y) == (b, a):
            u, v = key
            if not (cx.diagonal_flags[u] and cx.diagonal_flags[v]):
                violations.append((
                    "crease-off-diagonal", key,
                    "edge %s joins a pair to its swap but has a"
                    " non-diagonal endpoint" % (key,)))
                continue
            label = CASE_CREASE
        elif (x == a) != (y == b):
            label = CASE_ONE_FOLD
        elif x != a and y != b:
            label = CASE_NO_FOLD
        else:
            violations.append((
                "fold-degeneracy", key,
                "edge %s has an unclassifiable partner; the vertex images"
                " violate general position" % (key,)))
            continue
        edge_cases[key] = label
        case_counts[label] += 1
    return EdgeManifoldReport(edge_cases=edge_cases, case_counts=case_counts,
                              violations=violations)


@dataclass
class ComponentInfo:
    """Topology of one connected component of the resolved complex."""

    component: int
    n_vertices: int
    n_edges: int
    n_triangles: int
    euler_characteristic: int
    orientable: bool
    genus: Optional[int]
    degree_mod2: int
    degree_signed: Optional[int]
    meets_diagonal: bool
    generic_triangle: int


@dataclass
class ResolvedComplex:
    """The pair complex with every vertex split into one copy per link
    cycle.  Triangles keep their ids; `to_Ff` maps each split vertex back
    to the pair-complex vertex it came from (on triangles the map is the
    identity), and the swap involution is lifted to the split vertices."""

    complex: NeighborComplex
    vertices: List[Tuple[int, int]]            # (pair-complex vertex, cycle id)
    to_Ff: List[int]
    triangles: List[Tuple[int, int, int]]      # split-vertex ids, slot order kept
    pairs: List[Tuple[int, int]]               # induced-triangle pair per triangle
    diagonal_flags: List[bool]
    swap_triangles: List[int]
    swap_vertices: List[int]
    edge_triangles: Dict[EdgeKey, List[int]]
    components: Optional[List[int]] = None             # per triangle
    vertex_components: Optional[List[int]] = None
    triangle_signs: Optional[List[int]] = None         # +-1, 0 when unorientable
    component_info: Optional[List[ComponentInfo]] = None

    _cache: dict = field(default_factory=dict, repr=False, compare=False)

    @property
    def n_vertices(self) -> int:
        return len(self.vertices)

    @property
    def n_edges(self) -> int:
        return len(self.edge_triangles)

    @property
    def n_triangles(self) -> int:
        return len(self.triangles)

    def euler_characteristic(self) -> int:
        return self.n_vertices - self.n_edges + self.n_triangles

    def vertex_pair(self, vid: int) -> Tuple[int, int]:
        """The ordered pair of induced vertices under a split vertex."""
        return self.complex.vertices[self.to_Ff[vid]]

    def vertex_pair_points(self, vid: int) -> Tuple[Point3, Point3]:
        """The two boundary points of the pair under a split vertex."""
        p, q = self.vertex_pair(vid)
        verts = self.complex.induced.vertices
        return verts[p], verts[q]

    def triangle_edges(self, tid: int) -> List[EdgeKey]:
        c = self.triangles[tid]
        keys = []
        for s in range(3):
            u, v = c[s], c[(s + 1) % 3]
            keys.append((u, v) if u < v else (v, u))
        return keys


def _vertex_link_cycles(cx: NeighborComplex,
                        incident: List[Tuple[int, int]]) -> List[List[int]]:
    """Group the triangles around one vertex into closed cycles, rotating
    across shared edges.  `incident` lists (triangle id, corner slot)."""
    # the two edges of each incident triangle at this vertex
    tri_edges: Dict[int, Tuple[EdgeKey, EdgeKey]] = {}
    edge_tris: Dict[EdgeKey, List[int]] = {}
    for tid, s in incident:
        c = cx.corners[tid]
        e1 = (c[s], c[(s + 1) % 3])
        e2 = (c[s], c[(s + 2) % 3])
        k1 = (min(e1), max(e1))
        k2 = (min(e2), max(e2))
        tri_edges[tid] = (k1, k2)
        edge_tris.setdefault(k1, []).append(tid)
        edge_tris.setdefault(k2, []).append(tid)
    for key, tris in edge_tris.items():
        if len(tris) != 2:
            raise ComplexError("not a closed pseudo-surface")
    cycles: List[List[int]] = []
    seen: Dict[int, bool] = {}
    for start, _ in incident:
        if start in seen:
            continue
        cycle = [start]
        seen[start] = True
        enter = tri_edges[start][0]
        cur = start
        while True:
            k1, k2 = tri_edges[cur]
            leave = k2 if enter == k1 else k1
            nxt = [t for t in edge_tris[leave] if t != cur]
            if len(nxt) != 1:
                raise ComplexError("not a closed pseudo-surface")
            cur = nxt[0]
            if cur == start:
                break
            if cur in seen:
                raise ComplexError("not a closed pseudo-surface")
            seen[cur] = True
            cycle.append(cur)
            enter = leave
        cycles.append(cycle)
    return cycles


def resolve_singularities(cx: NeighborComplex) -> ResolvedComplex:
    """Split each vertex into one copy per link cycle.  Triangle ids are
    preserved; only the corner labels change, so pinch points separate while
    every surface sheet stays intact."""
    report = verify_edge_manifold(cx)
    if not report.passed:
        raise ComplexError("cannot resolve: %s" % report.violations[0][2])

    incident: List[List[Tuple[int, int]]] = [[] for _ in cx.vertices]
    for tid, c in enumerate(cx.corners):
        for s in range(3):
            incident[c[s]].append((tid, s))

    vertices: List[Tuple[int, int]] = []
    to_Ff: List[int] = []
    diagonal_flags: List[bool] = []
    # per pair-complex vertex: cycle id of each incident triangle, and the
    # split-vertex id of each cycle
    cycle_of: List[Dict[int, int]] = []
    cycle_vertex: List[List[int]] = []
    for v in range(len(cx.vertices)):
        cycles = _vertex_link_cycles(cx, incident[v])
        cycles.sort(key=min)
        cmap: Dict[int, int] = {}
        ids: List[int] = []
        for ci, cyc in enumerate(cycles):
            vid = len(vertices)
            vertices.append((v, ci))
            to_Ff.append(v)
            diagonal_flags.append(cx.diagonal_flags[v])
            ids.append(vid)
            for t in cyc:
                cmap[t] = ci
        cycle_of.append(cmap)
        cycle_vertex.append(ids)

    triangles: List[Tuple[int, int, int]] = []
    for tid, c in enumerate(cx.corners):
        triangles.append(tuple(
            cycle_vertex[c[s]][cycle_of[c[s]][tid]] for s in range(3)))

    edge_triangles: Dict[EdgeKey, List[int]] = {}
    for tid, c in enumerate(triangles):
        for s in range(3):
            u, v = c[s], c[(s + 1) % 3]
            key = (u, v) if u < v else (v, u)
            edge_triangles.setdefault(key, []).append(tid)
    for key, tris in edge_triangles.items():
        if len(tris) != 2:
            raise ComplexError("not a closed pseudo-surface")

    swap_vertices: List[int] = []
    for vid, (v, _ci) in enumerate(vertices):
        sv = cx.vertex_swap[v]
        tid = next(t for t, c in cycle_of[v].items() if c == _ci)
        st = cx.swap[tid]
        swap_vertices.append(cycle_vertex[sv][cycle_of[sv][st]])

    rc = ResolvedComplex(complex=cx, vertices=vertices, to_Ff=to_Ff,
                         triangles=triangles, pairs=list(cx.triangles),
                         diagonal_flags=diagonal_flags,
                         swap_triangles=list(cx.swap),
                         swap_vertices=swap_vertices,
                         edge_triangles=edge_triangles)
    return rc


def _on_segment_3d(p: Point3, a: Point3, b: Point3) -> bool:
    ab = sub3(b, a)
    ap = sub3(p, a)
    if cross3(ab, ap) != (0, 0, 0):
        return False
    t = dot3(ap, ab)
    return 0 <= t <= dot3(ab, ab)


def _generic_projection_point(rc: ResolvedComplex) -> Tuple[int, Point3]:
    """An induced triangle whose barycenter avoids the projections of every
    resolved edge (exactly certified), plus that barycenter.  The projection
    of each triangle either contains the point in its interior or misses it,
    so covering counts at the point are unambiguous."""
    ind = rc.complex.induced
    third = Fraction(1, 3)
    segs = []
    for (u, v) in rc.edge_triangles:
        pu = ind.vertices[rc.complex.vertices[rc.to_Ff[u]][0]]
        pv = ind.vertices[rc.complex.vertices[rc.to_Ff[v]][0]]
        segs.append((pu, pv))
    if segs:
        fa = np.array([[float(x) for x in a] for a, _ in segs])
        fb = np.array([[float(x) for x in b] for _, b in segs])
        scale = 1.0 + max(np.abs(fa).max(), np.abs(fb).max())
    for ti in range(len(ind.triangles)):
        pa, pb, pc = ind.corner_points(ti)
        g = tuple((pa[k] + pb[k] + pc[k]) * third for k in range(3))
        if segs:
            gp = np.array([float(x) for x in g])
            d1 = fa - gp
            d2 = fb - gp
            cr = np.cross(d1, d2)
            near = np.nonzero((cr * cr).sum(axis=1)
                              <= (1e-9 * scale * scale) ** 2)[0]
            if any(_on_segment_3d(g, segs[i][0], segs[i][1]) for i in near):
                continue
        return ti, g
    raise ComplexError("no generic point for the degree count")


def analyze_components(rc: ResolvedComplex,
                       mesh: SurfaceMesh) -> List[ComponentInfo]:
    """Label connected components and compute, per component: Euler
    characteristic, orientability (propagating corner windings), genus when
    orientable, and the mod-2 and signed covering degrees of the first-factor
    projection at an exactly certified generic boundary point."""
    ind = rc.complex.induced
    if mesh is not ind.mesh and mesh.triangles != ind.mesh.triangles:
        raise ComplexError("mesh does not match the resolved complex")

    nt = len(rc.triangles)
    tri_edges = [rc.triangle_edges(t) for t in range(nt)]

    components = [-1] * nt
    signs = [0] * nt
    orientable: List[bool] = []
    ncomp = 0
    for seed in range(nt):
        if components[seed] != -1:
            continue
        comp = ncomp
        ncomp += 1
        components[seed] = comp
        signs[seed] = 1
        ok = True
        stack = [seed]
        while stack:
            t = stack.pop()
            c = rc.triangles[t]
            for s in range(3):
                key = tri_edges[t][s]
                u, v = c[s], c[(s + 1) % 3]
                for t2 in rc.edge_triangles[key]:
                    if t2 == t:
                        continue
                    c2 = rc.triangles[t2]
                    # does t2 traverse the shared edge in the same direction?
                    same = False
                    for s2 in range(3):
                        if c2[s2] == u and c2[(s2 + 1) % 3] == v:
                            same = True
                    want = -signs[t] if same else signs[t]
                    if components[t2] == -1:
                        components[t2] = comp
                        signs[t2] = want
                        stack.append(t2)
                    elif signs[t2] != want:
                        ok = False
        orientable.append(ok)

    vertex_components = [-1] * len(rc.vertices)
    for t, c in enumerate(rc.triangles):
        for vid in c:
            vertex_components[vid] = components[t]

    generic_tri, _g = _generic_projection_point(rc)

    comp_v = [set() for _ in range(ncomp)]
    comp_e = [0] * ncomp
    comp_f = [0] * ncomp
    comp_diag = [False] * ncomp
    cover = [[] for _ in range(ncomp)]
    for t, c in enumerate(rc.triangles):
        comp = components[t]
        comp_f[comp] += 1
        comp_v[comp].update(c)
        if any(rc.diagonal_flags[v] for v in c):
            comp_diag[comp] = True
        if rc.pairs[t][0] == generic_tri:
            cover[comp].append(t)
    for key, tris in rc.edge_triangles.items():
        comp_e[components[tris[0]]] += 1

    info: List[ComponentInfo] = []
    for comp in range(ncomp):
        chi = len(comp_v[comp]) - comp_e[comp] + comp_f[comp]
        orient = orientable[comp]
        genus = (2 - chi) // 2 if orient else None
        mod2 = len(cover[comp]) % 2
        if orient:
            osign = ind.triangles[generic_tri].orient_sign
            degree = sum(signs[t] * osign for t in cover[comp])
        else:
            degree = None
        info.append(ComponentInfo(
            component=comp, n_vertices=len(comp_v[comp]),
            n_edges=comp_e[comp], n_triangles=comp_f[comp],
            euler_characteristic=chi, orientable=orient, genus=genus,
            degree_mod2=mod2, degree_signed=degree,
            meets_diagonal=comp_diag[comp], generic_triangle=generic_tri))

    if not all(orientable):
        signs = [s if orientable[components[t]] else 0
                 for t, s in enumerate(signs)]
    rc.components = components
    rc.vertex_components = vertex_components
    rc.triangle_signs = signs
    rc.component_info = info
    return info


@dataclass
class BaseComponent:
    """The component selected to search for an antipodal-to-diagonal path,
    with the pair of adjacent equal-image lifts that certified it (when the
    selection came from such a folding rather than the degree fallback)."""

    component: int
    triangle: Optional[int]
    folding_pair: Optional[Tuple[int, int]]
    via: str                     # "folding" or "odd-degree"


def _folding_candidates(rc: ResolvedComplex) -> List[Tuple[int, int, int]]:
    """(component, triangle id, smallness key) for every pair [A,B] whose
    lifts share an edge and whose planar triangle has multiplicity two."""
    ind = rc.complex.induced
    planar = ind.planar
    out = []
    for tid, (a, b) in enumerate(rc.pairs):
        cd = ind.triangles[a].cd_tri
        if planar.multiplicity(cd) != 2:
            continue
        ea = set(ind.triangles[a].corners)
        eb = set(ind.triangles[b].corners)
        if len(ea & eb) == 2:
            out.append((rc.components[tid], tid, (a, b)))
    return out


def find_base_component(rc: ResolvedComplex) -> BaseComponent:
    """Pick the component guaranteed to reach the diagonal: one containing a
    pair of adjacent lifts folded over a multiplicity-two planar triangle
    (smallest component id wins), else any component whose first-factor
    projection has odd mod-2 degree and which touches the diagonal."""
    if rc.components is None or rc.component_info is None:
        raise ComplexError("components have not been analyzed")
    folds = _folding_candidates(rc)
    if folds:
        comp, tid, pair = min(folds)
        return BaseComponent(component=comp, triangle=tid,
                             folding_pair=rc.pairs[tid], via="folding")
    for info in rc.component_info:
        if info.degree_mod2 % 2 == 1 and info.meets_diagonal:
            return BaseComponent(component=info.component, triangle=None,
                                 folding_pair=None, via="odd-degree")
    raise ComplexError("no Hopf base component")
