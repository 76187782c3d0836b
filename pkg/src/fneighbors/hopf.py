"""Center estimation and the antipodal pair connected to the diagonal.

The center maximizes, over interior points p, the minimum distance from a
boundary point to its opposite boundary point through p; the maximized
minimum is the body's antipodal width.  On a component of the resolved pair
complex whose first-factor projection has odd degree, some pair consists of
two points opposite through p; a coarse grid plus local refinement finds it
to a residual tolerance, and a breadth-first walk over the component's edges
then connects it to a pair of equal points.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np
from scipy.optimize import minimize

from .mesh_core import SurfaceMesh
from .neighbor_complex import ResolvedComplex

Float3 = Tuple[float, float, float]


class HopfError(ValueError):
    """Center estimation or the antipodal pair search failed."""


@dataclass
class CenterResult:
    """Estimated center p, antipodal width D_hat, and the surface point
    whose opposite-point distance attains the estimate."""

    center: Float3
    D_hat: float
    inner_argmin: Float3
    converged: bool


@dataclass
class HopfWitness:
    """An approximately antipodal pair on the resolved complex: location by
    triangle and barycentric coordinates, the two boundary points, the
    unit-vector residual, and (once set) the polygonal path of pairs that
    ends where both members coincide."""

    component: int
    triangle: int
    bary: Float3
    a: Float3
    b: Float3
    residual: float
    path: Optional[List[Tuple[Float3, Float3]]] = None


def _uniform_barycentric(rng: np.random.Generator, k: int) -> np.ndarray:
    r1 = rng.random(k)
    r2 = rng.random(k)
    s = np.sqrt(r1)
    return np.column_stack([1.0 - s, s * (1.0 - r2), s * r2])


class _AntipodeSampler:
    """Vectorized distance-to-opposite-point evaluation for a fixed sample
    of boundary points: the ray from x through p exits the body at the
    opposite point, found as the nearest forward plane crossing."""

    def __init__(self, mesh: SurfaceMesh, points: np.ndarray):
        self.points = points
        self.normals, self.offsets = mesh.float_planes()
        self.ndotx = points @ self.normals.T          # (S, F)

    def distances(self, p: np.ndarray) -> np.ndarray:
        d = p[None, :] - self.points                  # (S, 3)
        ndotd = d @ self.normals.T                    # (S, F)
        num = self.offsets[None, :] - self.ndotx
        with np.errstate(divide="ignore", invalid="ignore"):
            t = np.where(ndotd > 1e-15, num / ndotd, np.inf)
        t_exit = t.min(axis=1)
        t_exit = np.where(np.isfinite(t_exit), t_exit, 0.0)
        return t_exit * np.linalg.norm(d, axis=1)

    def exit_points(self, p: np.ndarray) -> np.ndarray:
        d = p[None, :] - self.points
        ndotd = d @ self.normals.T
        num = self.offsets[None, :] - self.ndotx
        with np.errstate(divide="ignore", invalid="ignore"):
            t = np.where(ndotd > 1e-15, num / ndotd, np.inf)
        t_exit = t.min(axis=1)
        t_exit = np.where(np.isfinite(t_exit), t_exit, 0.0)
        return self.points + t_exit[:, None] * d


def _interior_projector(mesh: SurfaceMesh):
    normals, offsets = mesh.float_planes()
    anchor = np.array([float(x) for x in mesh.vertex_centroid()])
    scale = 1.0 + float(np.abs(mesh.float_vertices()).max())
    margin = 1e-9 * scale

    def project(p: np.ndarray) -> np.ndarray:
        slack = offsets - normals @ p
        if slack.min() >= margin:
            return p
        d = p - anchor
        nd = normals @ d
        room = offsets - margin - normals @ anchor
        alphas = np.where(nd > 1e-15, room / nd, np.inf)
        alpha = max(0.0, min(1.0, 0.999 * alphas.min()))
        return anchor + alpha * d

    return project


def estimate_center(mesh: SurfaceMesh, metric: str = "euclidean", *,
                    extra_points: Optional[Sequence] = None,
                    samples_per_face: int = 20, max_iters: int = 200,
                    refine_top: int = 12, refine_iters: int = 60,
                    seed: int = 0) -> CenterResult:
    """Maximize, over interior p, the sampled minimum distance from a
    boundary point to its opposite point through p.  Sampling covers all
    vertices, all face barycenters, `samples_per_face` random points per
    face, and any extra boundary points supplied; a simplex search (at most
    `max_iters` iterations, steps projected back inside) moves p, then a
    per-face compass search tightens the minimum at the best p."""
    if metric not in ("euclidean", "extrinsic"):
        raise HopfError("unsupported metric %r" % (metric,))
    rng = np.random.default_rng(seed)
    fverts = mesh.float_vertices()
    tris = np.array(mesh.triangles, dtype=int)
    corner = fverts[tris]                              # (F, 3, 3)

    chunks = [fverts, corner.mean(axis=1)]
    faces = [np.full(len(fverts), -1), np.arange(len(tris))]
    if samples_per_face > 0:
        w = _uniform_barycentric(rng, samples_per_face * len(tris))
        w = w.reshape(len(tris), samples_per_face, 3)
        chunks.append(np.einsum("fkc,fcd->fkd", w, corner).reshape(-1, 3))
        faces.append(np.repeat(np.arange(len(tris)), samples_per_face))
    if extra_points is not None and len(extra_points) > 0:
        pts = np.array([[float(x) for x in q] for q in extra_points])
        chunks.append(pts)
        faces.append(np.full(len(pts), -1))
    samples = np.vstack(chunks)
    sample_face = np.concatenate(faces)

    sampler = _AntipodeSampler(mesh, samples)
    project = _interior_projector(mesh)
    anchor = np.array([float(x) for x in mesh.vertex_centroid()])

    def inner_min(p: np.ndarray, top: int, iters: int
                  ) -> Tuple[float, np.ndarray]:
        """Sampled minimum opposite-point distance at p, tightened by a
        compass search inside the faces holding the smallest samples (the
        sampled minimum alone overestimates between sample points)."""
        dists = sampler.distances(p)
        order = np.argsort(dists, kind="stable")
        best_val = float(dists[order[0]])
        best_point = samples[order[0]]
        seen_faces = set()
        for idx in order:
            fi = int(sample_face[idx])
            if fi < 0 or fi in seen_faces:
                continue
            seen_faces.add(fi)
            if len(seen_faces) > top:
                break
            val, point = _refine_face_minimum(mesh, p, corner[fi], iters)
            if val < best_val:
                best_val = val
                best_point = point
        return best_val, best_point

    def objective(p: np.ndarray) -> float:
        return -inner_min(project(p), top=3, iters=25)[0]

    res = minimize(objective, anchor, method="Nelder-Mead",
                   options={"maxiter": max_iters, "xatol": 1e-10,
                            "fatol": 1e-14})
    center = project(np.asarray(res.x, dtype=float))
    best_val, best_point = inner_min(center, top=refine_top,
                                     iters=refine_iters)
    return CenterResult(center=tuple(float(x) for x in center),
                        D_hat=best_val,
                        inner_argmin=tuple(float(x) for x in best_point),
                        converged=bool(res.success))


def _refine_face_minimum(mesh: SurfaceMesh, p: np.ndarray,
                         corners: np.ndarray,
                         iters: int) -> Tuple[float, np.ndarray]:
    """Compass search in barycentric coordinates for the point of one face
    whose opposite point through p is nearest."""
    dirs = []
    for s in range(3):
        for t in range(3):
            if s != t:
                e = np.zeros(3)
                e[s], e[t] = 1.0, -1.0
                dirs.append(e)
    w = np.full(3, 1.0 / 3.0)

    def value(wv: np.ndarray) -> float:
        pt = wv @ corners
        s = _AntipodeSampler(mesh, pt[None, :])
        return float(s.distances(p)[0])

    cur = value(w)
    h = 0.25
    for _ in range(iters):
        best_w, best_v = None, cur
        for d in dirs:
            w2 = w + h * d
            if w2.min() < 0:
                w2 = np.clip(w2, 0.0, None)
                ssum = w2.sum()
                if ssum <= 0:
                    continue
                w2 = w2 / ssum
            v2 = value(w2)
            if v2 < best_v:
                best_w, best_v = w2, v2
        if best_w is None:
            h *= 0.5
            if h < 1e-12:
                break
        else:
            w, cur = best_w, best_v
    return cur, w @ corners


def _component_pair_arrays(rc: ResolvedComplex, component: int
                           ) -> Tuple[List[int], np.ndarray, np.ndarray]:
    if rc.components is None:
        raise HopfError("components have not been analyzed")
    tids = [t for t in range(rc.n_triangles) if rc.components[t] == component]
    if not tids:
        raise HopfError("component %d has no triangles" % component)
    A = np.empty((len(tids), 3, 3))
    B = np.empty((len(tids), 3, 3))
    for row, t in enumerate(tids):
        for s, vid in enumerate(rc.triangles[t]):
            pa, pb = rc.vertex_pair_points(vid)
            A[row, s] = [float(x) for x in pa]
            B[row, s] = [float(x) for x in pb]
    return tids, A, B


def _residual_grid(n: int) -> np.ndarray:
    pts = []
    for i in range(n + 1):
        for j in range(n + 1 - i):
            pts.append((i / n, j / n, (n - i - j) / n))
    return np.array(pts)


def _pair_residual(p: np.ndarray, a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """|u(a) + u(b)| with u the unit vector from p; shape-preserving."""
    da = a - p
    db = b - p
    na = np.linalg.norm(da, axis=-1, keepdims=True)
    nb = np.linalg.norm(db, axis=-1, keepdims=True)
    na = np.where(na == 0, 1.0, na)
    nb = np.where(nb == 0, 1.0, nb)
    return np.linalg.norm(da / na + db / nb, axis=-1)


def find_equivariant_pair(rc: ResolvedComplex, component: int,
                          center, *,
                          tol_residual: float = 1e-6,
                          grid_resolution: int = 10,
                          max_depth: int = 40,
                          starts: int = 8) -> HopfWitness:
    """Minimize the unit-vector residual |u(a)+u(b)| over the component's
    pair parametrization: coarse barycentric grid, then pattern search from
    the best triangles, stepping across shared edges when the incumbent
    leaves its triangle.  Zero residual means a and b are opposite through
    the center, which may be given as a point or a center estimate."""
    p = np.array(getattr(center, "center", center), dtype=float)
    tids, A, B = _component_pair_arrays(rc, component)
    W = _residual_grid(grid_resolution)
    a = np.einsum("gs,tsc->tgc", W, A)
    b = np.einsum("gs,tsc->tgc", W, B)
    R = _pair_residual(p, a, b)                       # (T, G)

    per_tri_best = R.min(axis=1)
    seed_rows = list(np.argsort(per_tri_best, kind="stable")[:starts])

    row_of = {t: r for r, t in enumerate(tids)}
    corner_rows: Dict[int, Tuple[np.ndarray, np.ndarray]] = {}

    def tri_arrays(tid: int) -> Tuple[np.ndarray, np.ndarray]:
        if tid in row_of:
            r = row_of[tid]
            return A[r], B[r]
        if tid not in corner_rows:
            Ai = np.empty((3, 3))
            Bi = np.empty((3, 3))
            for s, vid in enumerate(rc.triangles[tid]):
                pa, pb = rc.vertex_pair_points(vid)
                Ai[s] = [float(x) for x in pa]
                Bi[s] = [float(x) for x in pb]
            corner_rows[tid] = (Ai, Bi)
        return corner_rows[tid]

    def value(tid: int, w: np.ndarray) -> float:
        Ai, Bi = tri_arrays(tid)
        return float(_pair_residual(p, w @ Ai, w @ Bi))

    dirs = []
    for s in range(3):
        for t in range(3):
            if s != t:
                e = np.zeros(3)
                e[s], e[t] = 1.0, -1.0
                dirs.append((s, e))

    best_overall = None
    for row in seed_rows:
        tid = tids[row]
        w = W[int(np.argmin(R[row]))].copy()
        cur = float(R[row].min())
        h = 1.0 / grid_resolution
        depth = 0
        while depth < max_depth and cur > tol_residual:
            cand: List[Tuple[float, int, np.ndarray]] = []
            for s, e in dirs:
                w2 = w + h * e
                if w2.min() >= 0:
                    cand.append((value(tid, w2), tid, w2))
                    continue
                neg = int(np.argmin(w2))
                # candidate inside this triangle, clipped to the edge
                w2c = np.clip(w2, 0.0, None)
                w2c = w2c / w2c.sum()
                cand.append((value(tid, w2c), tid, w2c))
                # candidate across the edge opposite the negative corner
                c = rc.triangles[tid]
                u, v = c[(neg + 1) % 3], c[(neg + 2) % 3]
                key = (u, v) if u < v else (v, u)
                others = [t2 for t2 in rc.edge_triangles[key] if t2 != tid]
                if not others:
                    continue
                t2 = others[0]
                c2 = rc.triangles[t2]
                w3 = np.zeros(3)
                shared = {u: w2[(neg + 1) % 3], v: w2[(neg + 2) % 3]}
                for s2, vid in enumerate(c2):
                    w3[s2] = shared.get(vid, -w2[neg])
                w3 = np.clip(w3, 0.0, None)
                w3 = w3 / w3.sum()
                cand.append((value(t2, w3), t2, w3))
            cand.sort(key=lambda item: item[0])
            if cand and cand[0][0] < cur:
                cur, tid, w = cand[0][0], cand[0][1], cand[0][2].copy()
            else:
                h *= 0.5
                depth += 1
        Ai, Bi = tri_arrays(tid)
        wa = tuple((w @ Ai).tolist())
        wb = tuple((w @ Bi).tolist())
        witness = HopfWitness(component=component, triangle=tid,
                              bary=tuple(w.tolist()), a=wa, b=wb,
                              residual=cur, path=None)
        if cur <= tol_residual:
            return witness
        if best_overall is None or cur < best_overall.residual:
            best_overall = witness
    raise HopfError("equivariant search failed: best residual %.6g"
                    % (best_overall.residual if best_overall else float("inf")))


def _vertex_pair_floats(rc: ResolvedComplex, vid: int) -> Tuple[Float3, Float3]:
    pa, pb = rc.vertex_pair_points(vid)
    return (tuple(float(x) for x in pa), tuple(float(x) for x in pb))


def path_to_diagonal(rc: ResolvedComplex,
                     witness: HopfWitness) -> HopfWitness:
    """Connect the witness to a pair of equal points: walk to the nearest
    corner of its triangle (distance taken on pairs), then breadth-first
    along the component's edges to any vertex whose pair members coincide."""
    if rc.vertex_components is None:
        raise HopfError("components have not been analyzed")
    comp = witness.component
    target = np.array(list(witness.a) + list(witness.b))
    corners = list(rc.triangles[witness.triangle])
    best = None
    for vid in sorted(corners):
        pa, pb = _vertex_pair_floats(rc, vid)
        d = float(np.linalg.norm(np.array(list(pa) + list(pb)) - target))
        if best is None or d < best[0]:
            best = (d, vid)
    start = best[1]

    adjacency: Dict[int, List[int]] = {}
    for (u, v) in rc.edge_triangles:
        if rc.vertex_components[u] == comp and rc.vertex_components[v] == comp:
            adjacency.setdefault(u, []).append(v)
            adjacency.setdefault(v, []).append(u)
    for vid in adjacency:
        adjacency[vid].sort()

    parent = {start: None}
    goal = None
    if rc.diagonal_flags[start]:
        goal = start
    else:
        queue = [start]
        while queue and goal is None:
            nxt: List[int] = []
            for u in queue:
                for v in adjacency.get(u, []):
                    if v in parent:
                        continue
                    parent[v] = u
                    if rc.diagonal_flags[v]:
                        goal = v
                        break
                    nxt.append(v)
                if goal is not None:
                    break
            queue = nxt
    if goal is None:
        raise HopfError("no diagonal vertex in component %d" % comp)

    vids = []
    cur: Optional[int] = goal
    while cur is not None:
        vids.append(cur)
        cur = parent[cur]
    vids.reverse()

    path: List[Tuple[Float3, Float3]] = [(witness.a, witness.b)]
    for vid in vids:
        pa, pb = _vertex_pair_floats(rc, vid)
        if path and path[-1] == (pa, pb):
            continue
        path.append((pa, pb))
    return replace(witness, path=path)
