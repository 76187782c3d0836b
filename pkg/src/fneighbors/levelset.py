"""Distance level sets on the resolved complex, with a separation check.

The distance between the two members of a pair is a continuous function on
the resolved complex: per triangle it is the norm of an affine map of the
barycentric coordinates.  Level sets are extracted by adaptively refining
the triangles whose value range brackets the level, then marching with
linear interpolation; the crossing segments chain into closed loops.  The
separation check labels each refined triangle by the exact sign of the
distance minus the level at its barycenter and counts connected regions on
either side -- both sides nonempty means the level set separates the
surface, which certifies a homologically essential family of loops.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import sqrt
from typing import Dict, List, Optional, Tuple

import numpy as np

from .neighbor_complex import ResolvedComplex

Float3 = Tuple[float, float, float]
FracW = Tuple[Fraction, Fraction, Fraction]
# barycentric weights with power-of-two denominator: (n0, n1, n2, e) stands
# for (n0, n1, n2) / 2**e with n0 + n1 + n2 == 2**e.  Every refinement
# vertex is dyadic; only closure centroids need general fractions.
DyadW = Tuple[int, int, int, int]

_THIRD = Fraction(1, 3)
_UNIT_W: Tuple[DyadW, DyadW, DyadW] = ((1, 0, 0, 0), (0, 1, 0, 0),
                                       (0, 0, 1, 0))


class LevelSetError(ValueError):
    """Level-set extraction failed or was invoked out of range."""


@dataclass
class LiftedDistance:
    """Per-triangle evaluator of the pair distance |a(x) - b(x)| plus its
    global range.  The squared distance is a convex quadratic per triangle,
    so the maximum sits at a vertex; it is zero exactly on simplices whose
    pair members coincide."""

    rc: ResolvedComplex
    corner_diff: List[Tuple[Tuple[Fraction, ...], ...]]
    corner_float: np.ndarray             # (n_triangles, 3 corners, 3 coords)
    corner_values: np.ndarray            # (n_triangles, 3)
    max_value: float
    argmax: Tuple[int, int]              # (triangle, corner slot)

    @property
    def range(self) -> Tuple[float, float]:
        return (0.0, self.max_value)

    def __call__(self, triangle: int, bary) -> float:
        w = np.asarray([float(x) for x in bary])
        return float(np.linalg.norm(w @ self.corner_float[triangle]))

    def exact_sq(self, triangle: int, w: FracW) -> Fraction:
        c = self.corner_diff[triangle]
        v = [w[0] * c[0][k] + w[1] * c[1][k] + w[2] * c[2][k]
             for k in range(3)]
        return v[0] * v[0] + v[1] * v[1] + v[2] * v[2]


def lift_distance(rc: ResolvedComplex) -> LiftedDistance:
    """Build the distance evaluator from the exact pair parametrization."""
    corner_diff: List[Tuple[Tuple[Fraction, ...], ...]] = []
    n = rc.n_triangles
    if n == 0:
        raise LevelSetError("resolved complex has no triangles")
    cfloat = np.empty((n, 3, 3))
    for tid in range(n):
        diffs = []
        for s, vid in enumerate(rc.triangles[tid]):
            pa, pb = rc.vertex_pair_points(vid)
            d = tuple(pa[k] - pb[k] for k in range(3))
            diffs.append(d)
            cfloat[tid, s] = [float(x) for x in d]
        corner_diff.append(tuple(diffs))
    cvals = np.linalg.norm(cfloat, axis=2)
    flat = int(np.argmax(cvals))
    argmax = (flat // 3, flat % 3)
    return LiftedDistance(rc=rc, corner_diff=corner_diff,
                          corner_float=cfloat, corner_values=cvals,
                          max_value=float(cvals[argmax]), argmax=argmax)


@dataclass
class LoopPoint:
    """One sample of a level loop: its triangle and barycentric location on
    the resolved complex, the boundary pair there, and the pair distance."""

    triangle: int
    bary: Float3
    a: Float3
    b: Float3
    value: float


@dataclass
class LevelSetResult:
    delta: float
    eps_level: float
    loops: Optional[List[List[LoopPoint]]] = None
    total_loop_count: Optional[int] = None
    below_components: Optional[int] = None
    above_components: Optional[int] = None
    separated: Optional[bool] = None
    nudges: Optional[List[dict]] = None
    refined_triangles: int = 0


def _mid(wa: DyadW, wb: DyadW) -> DyadW:
    ea = wa[3]
    eb = wb[3]
    e = ea if ea >= eb else eb
    sa = e - ea
    sb = e - eb
    return ((wa[0] << sa) + (wb[0] << sb), (wa[1] << sa) + (wb[1] << sb),
            (wa[2] << sa) + (wb[2] << sb), e + 1)


def _reduce(w: DyadW) -> DyadW:
    n0, n1, n2, e = w
    m = n0 | n1 | n2
    while e > 0 and not (m & 1):
        n0 >>= 1
        n1 >>= 1
        n2 >>= 1
        m >>= 1
        e -= 1
    return (n0, n1, n2, e)


def _wfloat(w) -> Float3:
    if len(w) == 4:
        d = float(1 << w[3])
        return (w[0] / d, w[1] / d, w[2] / d)
    return (float(w[0]), float(w[1]), float(w[2]))


def _wfrac(w) -> FracW:
    if len(w) == 4:
        d = 1 << w[3]
        return (Fraction(w[0], d), Fraction(w[1], d), Fraction(w[2], d))
    return w


def _origin_triangle_distance(c0: Float3, c1: Float3, c2: Float3) -> float:
    """Distance from the origin to the triangle (c0, c1, c2) in 3-space."""
    c0x, c0y, c0z = c0
    ux = c1[0] - c0x
    uy = c1[1] - c0y
    uz = c1[2] - c0z
    vx = c2[0] - c0x
    vy = c2[1] - c0y
    vz = c2[2] - c0z
    # interior: project the origin onto the plane and test barycentrically
    nx = uy * vz - uz * vy
    ny = uz * vx - ux * vz
    nz = ux * vy - uy * vx
    nn = nx * nx + ny * ny + nz * nz
    best = None
    if nn > 0:
        t = -(c0x * nx + c0y * ny + c0z * nz) / nn
        qx = t * nx                    # foot of the origin on the plane
        qy = t * ny
        qz = t * nz
        wx = qx - c0x
        wy = qy - c0y
        wz = qz - c0z
        uu = ux * ux + uy * uy + uz * uz
        vv = vx * vx + vy * vy + vz * vz
        uv = ux * vx + uy * vy + uz * vz
        wu = wx * ux + wy * uy + wz * uz
        wv = wx * vx + wy * vy + wz * vz
        den = uu * vv - uv * uv
        if den > 0:
            s1 = (wu * vv - wv * uv) / den
            s2 = (wv * uu - wu * uv) / den
            if s1 >= 0 and s2 >= 0 and s1 + s2 <= 1:
                best = sqrt(qx * qx + qy * qy + qz * qz)
    for (ax, ay, az), (bx, by, bz) in ((c0, c1), (c1, c2), (c2, c0)):
        dx = bx - ax
        dy = by - ay
        dz = bz - az
        dd = dx * dx + dy * dy + dz * dz
        if dd == 0:
            t = 0.0
        else:
            t = -(ax * dx + ay * dy + az * dz) / dd
            t = 0.0 if t < 0.0 else (1.0 if t > 1.0 else t)
        px = ax + t * dx
        py = ay + t * dy
        pz = az + t * dz
        cand = sqrt(px * px + py * py + pz * pz)
        if best is None or cand < best:
            best = cand
    return best


class _RefinedMesh:
    """Conforming adaptive refinement of one component, with exact
    barycentric coordinates per refined vertex and per-triangle coordinates
    in the owning resolved triangle.  Only triangles whose value range can
    bracket the level enter the per-cell refinement; everything else is
    handled in bulk."""

    def __init__(self, rc: ResolvedComplex, ld: LiftedDistance,
                 component: int, delta: float, tol: float, max_depth: int):
        if rc.components is None:
            raise LevelSetError("components have not been analyzed")
        self.rc = rc
        self.ld = ld
        self.delta = delta
        self.delta_sq = Fraction(delta) ** 2
        self.scale = 1.0 + ld.max_value
        self.sign_margin = 1e-9 * self.scale
        band_margin = 1e-7 * self.scale
        self.reg: Dict[tuple, int] = {}
        self.vw: List[tuple] = []       # bary in the registration triangle
        self.vtid: List[int] = []
        self.vd: List[float] = []
        self.vc: List[Float3] = []      # pair-difference vector per vertex
        self._nudged: set = set()
        self.nudges: List[dict] = []
        # refined triangles: (rc triangle, vids, ws in that triangle)
        self.tris: List[Tuple[int, Tuple[int, int, int], tuple]] = []

        tids = np.nonzero(np.asarray(rc.components) == component)[0]
        if tids.size == 0:
            raise LevelSetError("component %d has no triangles" % component)
        # pair-difference corner vectors as plain tuples for the hot loop
        self._ct: Dict[int, Tuple[Float3, Float3, Float3]] = {
            int(t): tuple(map(tuple, ld.corner_float[int(t)]))
            for t in tids}
        self._register_component_vertices(tids)

        # cheap certified bounds: the cell maximum is the corner maximum
        # (convexity); the minimum is at least the centroid distance minus
        # the corner spread.  Cells passing this filter are re-tested with
        # the exact point-to-triangle bound inside the refinement loop.
        CF = ld.corner_float[tids]
        ub = ld.corner_values[tids].max(axis=1)
        cen = CF.mean(axis=1)
        rmax = np.linalg.norm(CF - cen[:, None, :], axis=2).max(axis=1)
        lb = np.linalg.norm(cen, axis=1) - rmax
        maybe_band = ((lb - band_margin <= delta)
                      & (delta <= ub + band_margin))

        lo_band = delta - band_margin
        hi_band = delta + band_margin
        register = self.register
        vd = self.vd
        vc = self.vc
        # vid-pair codes of cell edges whose midpoint has been created; a
        # leaf edge can carry hanging vertices only if its code is here
        split_edges: set = set()
        self._split_edges = split_edges
        leaves: List[Tuple[int, Tuple[int, int, int], tuple]] = []
        for row, tid in enumerate(tids):
            tid = int(tid)
            if not maybe_band[row]:
                leaves.append((tid, self._corner_vids[tid], _UNIT_W))
                continue
            a, b, c = self._corner_vids[tid]
            stack = [(a, b, c, _UNIT_W, 0)]
            while stack:
                a, b, c, ws, depth = stack.pop()
                da = vd[a]
                db = vd[b]
                dc = vd[c]
                dmax = da if da >= db else db
                if dc > dmax:
                    dmax = dc
                split = False
                if depth < max_depth and dmax >= lo_band:
                    dlow = _origin_triangle_distance(vc[a], vc[b], vc[c])
                    split = dlow <= hi_band and dmax - dlow > tol
                if split:
                    w0, w1, w2 = ws
                    m01 = _mid(w0, w1)
                    m12 = _mid(w1, w2)
                    m20 = _mid(w2, w0)
                    v01 = register(tid, m01)
                    v12 = register(tid, m12)
                    v20 = register(tid, m20)
                    split_edges.add((a << 32 | b) if a < b else (b << 32 | a))
                    split_edges.add((b << 32 | c) if b < c else (c << 32 | b))
                    split_edges.add((c << 32 | a) if c < a else (a << 32 | c))
                    depth += 1
                    stack.append((a, v01, v20, (w0, m01, m20), depth))
                    stack.append((v01, b, v12, (m01, w1, m12), depth))
                    stack.append((v20, v12, c, (m20, m12, w2), depth))
                    stack.append((v01, v12, v20, (m01, m12, m20), depth))
                else:
                    leaves.append((tid, (a, b, c), ws))
        self._close(leaves)
        self._build_edges()
        self._vsign: Optional[np.ndarray] = None
        self._labels: Optional[np.ndarray] = None

    # -- vertex registry ---------------------------------------------------

    def _register_component_vertices(self, tids: np.ndarray) -> None:
        self._corner_vids: Dict[int, Tuple[int, int, int]] = {}
        cvals = self.ld.corner_values
        for tid in tids:
            tid = int(tid)
            ct = self._ct[tid]
            vids = []
            for s, v in enumerate(self.rc.triangles[tid]):
                key = ("v", v)
                vid = self.reg.get(key)
                if vid is None:
                    vid = len(self.vw)
                    self.reg[key] = vid
                    self.vw.append(_UNIT_W[s])
                    self.vtid.append(tid)
                    self.vd.append(float(cvals[tid, s]))
                    self.vc.append(ct[s])
                vids.append(vid)
            self._corner_vids[tid] = tuple(vids)

    def _vert_key(self, tid: int, w: DyadW) -> tuple:
        n0, n1, n2, e = _reduce(w)
        c = self.rc.triangles[tid]
        if n0 == 0:
            if n1 == 0:
                return ("v", c[2])
            if n2 == 0:
                return ("v", c[1])
            u, v, nu, nv = c[1], c[2], n1, n2
        elif n1 == 0:
            if n2 == 0:
                return ("v", c[0])
            u, v, nu, nv = c[2], c[0], n2, n0
        elif n2 == 0:
            u, v, nu, nv = c[0], c[1], n0, n1
        else:
            return ("t", tid, (n0, n1, n2, e))
        if u < v:
            return ("e", u, v, nv, e)
        return ("e", v, u, nu, e)

    def register(self, tid: int, w: DyadW) -> int:
        key = self._vert_key(tid, w)
        vid = self.reg.get(key)
        if vid is None:
            vid = len(self.vw)
            self.reg[key] = vid
            self.vw.append(key[2] if key[0] == "t" else _reduce(w))
            self.vtid.append(tid)
            d = float(1 << w[3])
            f0 = w[0] / d
            f1 = w[1] / d
            f2 = w[2] / d
            (x0, y0, z0), (x1, y1, z1), (x2, y2, z2) = self._ct[tid]
            cx = f0 * x0 + f1 * x1 + f2 * x2
            cy = f0 * y0 + f1 * y1 + f2 * y2
            cz = f0 * z0 + f1 * z1 + f2 * z2
            self.vd.append(sqrt(cx * cx + cy * cy + cz * cz))
            self.vc.append((cx, cy, cz))
        return vid

    def _register_centroid(self, tid: int, wc: FracW) -> int:
        # a leaf centroid lies strictly inside its leaf, so it is never
        # shared with any other cell and needs no registry entry
        vid = len(self.vw)
        self.vw.append(wc)
        self.vtid.append(tid)
        f0, f1, f2 = float(wc[0]), float(wc[1]), float(wc[2])
        (x0, y0, z0), (x1, y1, z1), (x2, y2, z2) = self._ct[tid]
        cx = f0 * x0 + f1 * x1 + f2 * x2
        cy = f0 * y0 + f1 * y1 + f2 * y2
        cz = f0 * z0 + f1 * z1 + f2 * z2
        self.vd.append(sqrt(cx * cx + cy * cy + cz * cz))
        self.vc.append((cx, cy, cz))
        return vid

    # -- conforming closure --------------------------------------------------

    def _expand_edge(self, tid: int, va: int, vb: int, wa: DyadW, wb: DyadW
                     ) -> List[Tuple[int, DyadW]]:
        code = (va << 32 | vb) if va < vb else (vb << 32 | va)
        if code not in self._split_edges:
            return []
        m = _mid(wa, wb)
        vm = self.reg.get(self._vert_key(tid, m))
        if vm is None:
            raise LevelSetError("refinement lost conformity")
        return (self._expand_edge(tid, va, vm, wa, m) + [(vm, m)]
                + self._expand_edge(tid, vm, vb, m, wb))

    def _close(self, leaves) -> None:
        split_edges = self._split_edges
        tris = self.tris
        for tid, vids, ws in leaves:
            a, b, c = vids
            if ((a << 32 | b) if a < b else (b << 32 | a)) not in split_edges \
                    and ((b << 32 | c) if b < c
                         else (c << 32 | b)) not in split_edges \
                    and ((c << 32 | a) if c < a
                         else (a << 32 | c)) not in split_edges:
                tris.append((tid, vids, ws))
                continue
            chain: List[Tuple[int, DyadW]] = []
            for s in range(3):
                chain.append((vids[s], ws[s]))
                chain.extend(self._expand_edge(tid, vids[s], vids[(s + 1) % 3],
                                               ws[s], ws[(s + 1) % 3]))
            # weights are dyadic, so the centroid is a single rational
            # construction per coordinate over the common denominator
            e = max(ws[0][3], ws[1][3], ws[2][3])
            den = 3 << e
            wc = tuple(Fraction((ws[0][k] << (e - ws[0][3]))
                                + (ws[1][k] << (e - ws[1][3]))
                                + (ws[2][k] << (e - ws[2][3])), den)
                       for k in range(3))
            cv = self._register_centroid(tid, wc)
            n = len(chain)
            for i in range(n):
                v1, w1 = chain[i]
                v2, w2 = chain[(i + 1) % n]
                tris.append((tid, (cv, v1, v2), (wc, w1, w2)))

    # -- edges ---------------------------------------------------------------

    def _build_edges(self) -> None:
        corners = np.array([t[1] for t in self.tris], dtype=np.int64)
        self.corner_ids = corners                       # (n_tris, 3)
        e = np.stack([corners, np.roll(corners, -1, axis=1)], axis=2)
        lo = e.min(axis=2).ravel()
        hi = e.max(axis=2).ravel()
        codes = lo << np.int64(32) | hi
        order = np.argsort(codes, kind="stable")
        sc = codes[order]
        uniq, start, counts = np.unique(sc, return_index=True,
                                        return_counts=True)
        if np.any(counts != 2):
            raise LevelSetError("refinement lost conformity")
        tri_of = order // 3
        self.edge_codes = uniq                          # sorted (n_edges,)
        self.edge_tri_pairs = np.stack(
            [tri_of[start], tri_of[start + 1]], axis=1)
        self.edge_vids = np.stack([sc >> np.int64(32),
                                   sc & np.int64(0xffffffff)],
                                  axis=1)[::2]

    def edge_other_triangle(self, u: int, v: int, tri: int) -> int:
        lo, hi = (u, v) if u < v else (v, u)
        code = np.int64(lo) << np.int64(32) | np.int64(hi)
        row = int(np.searchsorted(self.edge_codes, code))
        t1, t2 = self.edge_tri_pairs[row]
        return int(t2 if t1 == tri else t1)

    # -- exact signs ----------------------------------------------------------

    def vertex_signs(self) -> np.ndarray:
        """Exactly certified sign of d - delta per refined vertex (0 on
        exact hits).  Floats decide outside the margin; the rational square
        distance decides inside it."""
        if self._vsign is None:
            vd = np.array(self.vd)
            sign = np.where(vd < self.delta - self.sign_margin, -1,
                            np.where(vd > self.delta + self.sign_margin,
                                     1, 0)).astype(np.int8)
            for vid in np.nonzero(sign == 0)[0]:
                vid = int(vid)
                sq = self.ld.exact_sq(self.vtid[vid], _wfrac(self.vw[vid]))
                sign[vid] = (-1 if sq < self.delta_sq
                             else (1 if sq > self.delta_sq else 0))
            self._vsign = sign
        return self._vsign

    def effective_signs(self) -> np.ndarray:
        """Marching signs: exact hits count as below, each recorded once."""
        sign = self.vertex_signs()
        for vid in np.nonzero(sign == 0)[0]:
            vid = int(vid)
            if vid not in self._nudged:
                self._nudged.add(vid)
                self.nudges.append({"kind": "vertex-on-level",
                                    "vertex": vid, "shift": 1e-12})
        return np.where(sign == 0, np.int8(-1), sign)

    def triangle_labels(self) -> np.ndarray:
        """Exact sign of d - delta at each refined triangle's barycenter
        (exact hits counted as below and recorded)."""
        if self._labels is None:
            C = np.asarray(self.vc)[self.corner_ids]    # (n_tris, 3, 3)
            dbar = np.linalg.norm(C.mean(axis=1), axis=1)
            labels = np.where(dbar < self.delta - self.sign_margin, -1,
                              np.where(dbar > self.delta + self.sign_margin,
                                       1, 0)).astype(np.int8)
            for idx in np.nonzero(labels == 0)[0]:
                idx = int(idx)
                tid, _, ws = self.tris[idx]
                fa, fb, fc = _wfrac(ws[0]), _wfrac(ws[1]), _wfrac(ws[2])
                wc = tuple((fa[k] + fb[k] + fc[k]) * _THIRD
                           for k in range(3))
                sq = self.ld.exact_sq(tid, wc)
                if sq == self.delta_sq:
                    self.nudges.append({"kind": "barycenter-on-level",
                                        "triangle": tid, "shift": 1e-12})
                    labels[idx] = -1
                else:
                    labels[idx] = -1 if sq < self.delta_sq else 1
            self._labels = labels
        return self._labels


def _pair_corner_tuples(rc: ResolvedComplex, tid: int):
    A = []
    B = []
    for vid in rc.triangles[tid]:
        pa, pb = rc.vertex_pair_points(vid)
        A.append(tuple(float(x) for x in pa))
        B.append(tuple(float(x) for x in pb))
    return tuple(A), tuple(B)


def _march(rm: _RefinedMesh) -> List[List[LoopPoint]]:
    rc = rm.rc
    eff = rm.effective_signs()
    tri_signs = eff[rm.corner_ids]                      # (n_tris, 3)
    mixed = np.nonzero(tri_signs.max(axis=1) != tri_signs.min(axis=1))[0]

    crossing_edges: Dict[int, Tuple[Tuple[int, int], Tuple[int, int]]] = {}
    edge_cells: Dict[Tuple[int, int], List[int]] = {}
    for idx in mixed:
        idx = int(idx)
        vids = rm.tris[idx][1]
        signs = tri_signs[idx]
        edges = []
        for s in range(3):
            if signs[s] != signs[(s + 1) % 3]:
                u, v = vids[s], vids[(s + 1) % 3]
                key = (u, v) if u < v else (v, u)
                edges.append(key)
                edge_cells.setdefault(key, []).append(idx)
        if len(edges) != 2:
            raise LevelSetError("marching produced a non-chain cell")
        crossing_edges[idx] = (edges[0], edges[1])

    vsign = rm.vertex_signs()
    vd = rm.vd
    delta = rm.delta
    pair_cache: Dict[int, tuple] = {}

    def crossing_point(key: Tuple[int, int], idx: int) -> LoopPoint:
        tid, vids, ws = rm.tris[idx]
        u, v = key
        su = 0 if vids[0] == u else (1 if vids[1] == u else 2)
        sv = 0 if vids[0] == v else (1 if vids[1] == v else 2)
        fu = 0.0 if vsign[u] == 0 else vd[u] - delta
        fv = 0.0 if vsign[v] == 0 else vd[v] - delta
        den = fu - fv
        t = 0.5 if den == 0 else fu / den
        t = 1e-12 if t < 1e-12 else (1.0 - 1e-12 if t > 1.0 - 1e-12 else t)
        wu0, wu1, wu2 = _wfloat(ws[su])
        wv0, wv1, wv2 = _wfloat(ws[sv])
        s = 1.0 - t
        w0 = s * wu0 + t * wv0
        w1 = s * wu1 + t * wv1
        w2 = s * wu2 + t * wv2
        cached = pair_cache.get(tid)
        if cached is None:
            cached = pair_cache[tid] = _pair_corner_tuples(rc, tid)
        A, B = cached
        a = tuple(w0 * A[0][k] + w1 * A[1][k] + w2 * A[2][k]
                  for k in range(3))
        b = tuple(w0 * B[0][k] + w1 * B[1][k] + w2 * B[2][k]
                  for k in range(3))
        return LoopPoint(triangle=tid, bary=(w0, w1, w2), a=a, b=b,
                         value=sqrt((a[0] - b[0]) ** 2 + (a[1] - b[1]) ** 2
                                    + (a[2] - b[2]) ** 2))

    loops: List[List[LoopPoint]] = []
    visited = set()
    for start in sorted(crossing_edges):
        if start in visited:
            continue
        points: List[LoopPoint] = []
        enter = crossing_edges[start][0]
        idx = start
        while True:
            visited.add(idx)
            e1, e2 = crossing_edges[idx]
            leave = e2 if enter == e1 else e1
            points.append(crossing_point(leave, idx))
            cells = edge_cells[leave]
            if len(cells) != 2:
                raise LevelSetError("level loop failed to close")
            nxt = cells[1] if cells[0] == idx else cells[0]
            idx = nxt
            enter = leave
            if idx == start:
                break
        loops.append(points)
    return loops


def _component_max(rc: ResolvedComplex, ld: LiftedDistance,
                   component: int) -> float:
    mask = np.asarray(rc.components) == component
    return float(ld.corner_values[mask].max())


def _prepare(rc: ResolvedComplex, component: int, delta: float,
             eps_level: Optional[float], max_depth: int
             ) -> Tuple[LiftedDistance, _RefinedMesh, float]:
    ld = lift_distance(rc)
    if not (0.0 < delta < ld.max_value):
        raise LevelSetError("delta out of range: %g not in (0, %g)"
                            % (delta, ld.max_value))
    if eps_level is None:
        eps_level = 1e-4 * _component_max(rc, ld, component)
    if eps_level <= 0:
        raise LevelSetError("eps_level must be positive")
    tol = max(eps_level, 1e-3 * delta)
    rm = _RefinedMesh(rc, ld, component, delta, tol, max_depth)
    return ld, rm, eps_level


def extract_level_set(rc: ResolvedComplex, component: int, delta: float, *,
                      eps_level: Optional[float] = None,
                      max_depth: int = 8) -> LevelSetResult:
    """Closed polyline loops where the pair distance equals `delta` on one
    component: adaptive refinement until each bracketing triangle's value
    range is within tolerance, then linear marching.  Vertices hitting the
    level exactly are nudged below it by shifting the interpolation
    parameter 1e-12 (each shift is recorded)."""
    ld, rm, eps = _prepare(rc, component, delta, eps_level, max_depth)
    loops = _march(rm)
    return LevelSetResult(delta=delta, eps_level=eps, loops=loops,
                          total_loop_count=len(loops), nudges=rm.nudges,
                          refined_triangles=len(rm.tris))


def separation_check(rc: ResolvedComplex, component: int, delta: float, *,
                     eps_level: Optional[float] = None,
                     max_depth: int = 8) -> LevelSetResult:
    """Label each refined triangle by the exact sign of the pair distance
    minus `delta` at its barycenter, union same-sign neighbors across edges
    the level set does not cross, and report the region counts on both
    sides.  Both sides nonempty certifies that the level set separates the
    component.  Loops are extracted on the same refinement."""
    ld, rm, eps = _prepare(rc, component, delta, eps_level, max_depth)
    loops = _march(rm)

    labels = rm.triangle_labels()
    vsign = rm.vertex_signs()
    # the level set crosses the open edge only where the sign strictly
    # changes; touching an endpoint or running along the edge does not
    # disconnect the two sides of the adjacency
    es = vsign[rm.edge_vids]                            # (n_edges, 2)
    t1 = rm.edge_tri_pairs[:, 0]
    t2 = rm.edge_tri_pairs[:, 1]
    mergeable = ((es[:, 0].astype(np.int16) * es[:, 1] != -1)
                 & (labels[t1] == labels[t2]))

    parent = list(range(len(rm.tris)))

    def find(x: int) -> int:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for row in np.nonzero(mergeable)[0]:
        r1 = find(int(t1[row]))
        r2 = find(int(t2[row]))
        if r1 != r2:
            parent[r1] = r2
    below = {find(t) for t in range(len(rm.tris)) if labels[t] < 0}
    above = {find(t) for t in range(len(rm.tris)) if labels[t] > 0}
    return LevelSetResult(delta=delta, eps_level=eps, loops=loops,
                          total_loop_count=len(loops),
                          below_components=len(below),
                          above_components=len(above),
                          separated=bool(below) and bool(above),
                          nudges=rm.nudges, refined_triangles=len(rm.tris))
