"""Exact constrained Delaunay triangulation of the image arrangement.

Incremental insertion with an infinite vertex (the triangulation plus
infinite triangles forms a combinatorial sphere, so every edge always has
exactly two incident triangles and flips need no boundary cases).  All
predicates work on integer homogeneous coordinates, so the construction is
exact; cocircular ties are broken by preferring the diagonal whose smaller
endpoint index is smaller, which makes the output canonical regardless of
insertion order.

After construction the triangulation is restricted to the image of the
mapped polyhedron: a triangle belongs to the image iff its barycenter lies
in some mesh-face image (exact test), and the faces covering it give its
multiplicity.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Set, Tuple

import numpy as np

from .exact import Point2
from .image_arrangement import ImagePSLG, PlanarMap
from .mesh_core import SurfaceMesh

INF = -1


class TriangulationError(ValueError):
    """Inconsistent input to the triangulation (crossing or repeated
    constraints, duplicate points)."""


def _sign(x: int) -> int:
    if x > 0:
        return 1
    if x < 0:
        return -1
    return 0


def _homogenize(points: Sequence[Point2]) -> List[Tuple[int, int, int]]:
    out = []
    for (x, y) in points:
        b, d = x.denominator, y.denominator
        from math import gcd
        w = b * d // gcd(b, d)
        out.append((x.numerator * (w // b), y.numerator * (w // d), w))
    return out


def _orient_h(p, q, r) -> int:
    """Orientation of three homogeneous points (W > 0)."""
    px, py, pw = p
    qx, qy, qw = q
    rx, ry, rw = r
    a = qx * pw - px * qw
    b = qy * pw - py * qw
    c = rx * pw - px * rw
    d = ry * pw - py * rw
    return _sign((a * d - b * c) * qw * rw)


def _incircle_h(a, b, c, d) -> int:
    """+1 when d is strictly inside the circumcircle of ccw triangle abc."""
    dx, dy, dw = d
    rows = []
    for (px, py, pw) in (a, b, c):
        u = px * dw - dx * pw
        v = py * dw - dy * pw
        m = pw * dw
        # row (u/m, v/m, (u^2+v^2)/m^2) scaled by m^2 > 0
        rows.append((u * m, v * m, u * u + v * v))
    (a0, a1, a2), (b0, b1, b2), (c0, c1, c2) = rows
    det = (a0 * (b1 * c2 - b2 * c1)
           - a1 * (b0 * c2 - b2 * c0)
           + a2 * (b0 * c1 - b1 * c0))
    return _sign(det)


@dataclass
class ImageTriangulation:
    """Finite triangles of the constrained Delaunay triangulation, plus the
    restriction data filled in by restrict_to_image."""

    points: List[Point2]
    triangles: List[Tuple[int, int, int]]
    constrained: List[Tuple[int, int]]
    inside: Optional[List[bool]] = None
    coverers: Optional[List[List[int]]] = None

    _cache: dict = field(default_factory=dict, repr=False, compare=False)

    def edge_triangles(self) -> Dict[Tuple[int, int], List[int]]:
        if "edge_tris" not in self._cache:
            et: Dict[Tuple[int, int], List[int]] = {}
            for ti, (i, j, k) in enumerate(self.triangles):
                for u, v in ((i, j), (j, k), (k, i)):
                    key = (u, v) if u < v else (v, u)
                    et.setdefault(key, []).append(ti)
            self._cache["edge_tris"] = et
        return self._cache["edge_tris"]

    def multiplicity(self, ti: int) -> int:
        if self.coverers is None:
            raise ValueError("restriction has not been computed")
        return len(self.coverers[ti])

    def inside_indices(self) -> List[int]:
        if self.inside is None:
            raise ValueError("restriction has not been computed")
        return [i for i, flag in enumerate(self.inside) if flag]

    def multiplicity_histogram(self) -> Dict[int, int]:
        hist: Dict[int, int] = {}
        for ti in self.inside_indices():
            m = self.multiplicity(ti)
            hist[m] = hist.get(m, 0) + 1
        return dict(sorted(hist.items()))


class _Triangulation:
    """Mutable incremental structure.  Triangles are vertex triples (ccw for
    finite ones; infinite ones hold INF and read (v, u, INF) for hull edge
    u->v).  nbr[t][i] is the triangle across the edge opposite vertex i."""

    def __init__(self, hpoints):
        self.hp = hpoints
        self.tri: List[Optional[List[int]]] = []
        self.nbr: List[Optional[List[int]]] = []
        self.free: List[int] = []
        self.vert_tri: Dict[int, int] = {}
        self.last = 0

    # -- basic helpers ---------------------------------------------------

    def orient(self, i: int, j: int, k: int) -> int:
        return _orient_h(self.hp[i], self.hp[j], self.hp[k])

    def _new_tri(self, verts: List[int]) -> int:
        if self.free:
            t = self.free.pop()
            self.tri[t] = verts
            self.nbr[t] = [-9, -9, -9]
        else:
            t = len(self.tri)
            self.tri.append(verts)
            self.nbr.append([-9, -9, -9])
        for v in verts:
            if v != INF:
                self.vert_tri[v] = t
        return t

    def _kill(self, t: int) -> None:
        self.tri[t] = None
        self.nbr[t] = None
        self.free.append(t)

    def _glue(self, t1: int, e1: int, t2: int, e2: int) -> None:
        self.nbr[t1][e1] = t2
        self.nbr[t2][e2] = t1

    def _edge_index(self, t: int, u: int, v: int) -> int:
        """Index i such that edge opposite vertex i of t is {u, v}."""
        verts = self.tri[t]
        for i in range(3):
            if verts[i] != u and verts[i] != v:
                return i
        raise AssertionError("edge not in triangle")

    def _neighbor_slot(self, t: int, n: int) -> int:
        for i in range(3):
            if self.nbr[n][i] == t:
                return i
        raise AssertionError("broken adjacency")

    def is_infinite(self, t: int) -> bool:
        return INF in self.tri[t]

    # -- bootstrap -------------------------------------------------------

    def bootstrap(self, i0: int, i1: int, i2: int) -> None:
        if self.orient(i0, i1, i2) < 0:
            i1, i2 = i2, i1
        t = self._new_tri([i0, i1, i2])
        a = self._new_tri([i1, i0, INF])   # hull edge i0->i1
        b = self._new_tri([i2, i1, INF])   # hull edge i1->i2
        c = self._new_tri([i0, i2, INF])   # hull edge i2->i0
        self._glue(t, self._edge_index(t, i0, i1), a, self._edge_index(a, i0, i1))
        self._glue(t, self._edge_index(t, i1, i2), b, self._edge_index(b, i1, i2))
        self._glue(t, self._edge_index(t, i2, i0), c, self._edge_index(c, i2, i0))
        # infinite triangles meet along edges (x, INF)
        self._glue(a, self._edge_index(a, i1, INF), b, self._edge_index(b, i1, INF))
        self._glue(b, self._edge_index(b, i2, INF), c, self._edge_index(c, i2, INF))
        self._glue(c, self._edge_index(c, i0, INF), a, self._edge_index(a, i0, INF))
        self.last = t

    # -- location --------------------------------------------------------

    def locate(self, p: int):
        """Return (tri, kind, data): kind 'in' | 'edge' | 'vertex' |
        'outside'.  For 'edge', data is (u, v); for 'vertex' the vertex id;
        for 'outside' the infinite triangle whose wedge holds p."""
        t = self.last
        if self.tri[t] is None:
            t = next(i for i in range(len(self.tri)) if self.tri[i] is not None)
        guard = 0
        limit = 4 * (len(self.tri) + 8)
        while True:
            guard += 1
            if guard > limit:
                raise AssertionError("point location did not terminate")
            verts = self.tri[t]
            if INF in verts:
                res = self._locate_hull(t, p)
                if res is not None:
                    return res
                # wedge says p is back inside: cross the finite edge
                k = verts.index(INF)
                t = self.nbr[t][k]
                continue
            a, b, c = verts
            o_ab = self.orient(a, b, p)
            if o_ab < 0:
                t = self.nbr[t][self._edge_index(t, a, b)]
                continue
            o_bc = self.orient(b, c, p)
            if o_bc < 0:
                t = self.nbr[t][self._edge_index(t, b, c)]
                continue
            o_ca = self.orient(c, a, p)
            if o_ca < 0:
                t = self.nbr[t][self._edge_index(t, c, a)]
                continue
            zeros = [(o_ab, a, b), (o_bc, b, c), (o_ca, c, a)]
            on = [(u, v) for o, u, v in zeros if o == 0]
            if not on:
                return t, "in", None
            if len(on) == 1:
                return t, "edge", on[0]
            # two zero orientations: p coincides with the shared vertex
            (u1, v1), (u2, v2) = on
            shared = ({u1, v1} & {u2, v2}).pop()
            return t, "vertex", shared

    def _locate_hull(self, t: int, p: int):
        """Walk the cycle of infinite triangles; find the wedge containing p
        strictly, or a hull edge containing p.  Returns None when p lies
        strictly inside the hull relative to triangle t's hull edge."""
        start = t
        guard = 0
        while True:
            guard += 1
            if guard > len(self.tri) + 8:
                raise AssertionError("hull walk did not terminate")
            v, u, _ = self._hull_reading(t)
            s = self.orient(v, u, p)
            if s > 0:
                return t, "outside", None
            if s == 0:
                if self._between_h(p, u, v):
                    if p == u:
                        return t, "vertex", u
                    if p == v:
                        return t, "vertex", v
                    return t, "edge", (u, v)
                # beyond the hull edge along its line: step around the hull
                t = self.nbr[t][self._edge_index(t, u, INF)] \
                    if self._beyond(p, v, u) else \
                    self.nbr[t][self._edge_index(t, v, INF)]
                if t == start:
                    raise AssertionError("hull walk cycled")
                continue
            return None

    def _hull_reading(self, t: int) -> Tuple[int, int, int]:
        """Infinite triangle as (v, u, INF): hull edge u->v."""
        verts = self.tri[t]
        k = verts.index(INF)
        return verts[(k + 1) % 3], verts[(k + 2) % 3], INF

    def _between_h(self, p: int, a: int, b: int) -> bool:
        """p on segment [a,b], all three collinear (homogeneous compare)."""
        for axis in (0, 1):
            pa = self.hp[p][axis] * self.hp[a][2] - self.hp[a][axis] * self.hp[p][2]
            pb = self.hp[p][axis] * self.hp[b][2] - self.hp[b][axis] * self.hp[p][2]
            if pa * pb > 0:
                return False
        return True

    def _beyond(self, p: int, a: int, b: int) -> bool:
        """Collinear p,a,b: is p beyond b (so that b lies between a and p)?"""
        return self._between_h(b, a, p) and p != b

    # -- insertion ---------------------------------------------------------

    def insert_point(self, p: int) -> None:
        t, kind, data = self.locate(p)
        if kind == "vertex":
            raise TriangulationError("duplicate point %d" % p)
        if kind == "in":
            self._split_interior(t, p)
        elif kind == "edge":
            self._split_edge(t, data[0], data[1], p)
        else:  # outside, in the wedge of infinite triangle t
            self._split_interior(t, p)
        self.last = self.vert_tri[p]

    def _split_interior(self, t: int, p: int) -> None:
        a, b, c = self.tri[t]
        na = self.nbr[t][self._edge_index(t, b, c)]
        nb = self.nbr[t][self._edge_index(t, c, a)]
        nc = self.nbr[t][self._edge_index(t, a, b)]
        sa = self._neighbor_slot(t, na)
        sb = self._neighbor_slot(t, nb)
        sc = self._neighbor_slot(t, nc)
        self._kill(t)
        t1 = self._new_tri([a, b, p])
        t2 = self._new_tri([b, c, p])
        t3 = self._new_tri([c, a, p])
        self._glue(t1, self._edge_index(t1, a, b), nc, sc)
        self._glue(t2, self._edge_index(t2, b, c), na, sa)
        self._glue(t3, self._edge_index(t3, c, a), nb, sb)
        self._glue(t1, self._edge_index(t1, b, p), t2, self._edge_index(t2, b, p))
        self._glue(t2, self._edge_index(t2, c, p), t3, self._edge_index(t3, c, p))
        self._glue(t3, self._edge_index(t3, a, p), t1, self._edge_index(t1, a, p))
        stack = [(t1, self._edge_index(t1, a, b)),
                 (t2, self._edge_index(t2, b, c)),
                 (t3, self._edge_index(t3, c, a))]
        self._legalize(stack, p)

    def _split_edge(self, t: int, u: int, v: int, p: int) -> None:
        t2 = self.nbr[t][self._edge_index(t, u, v)]
        c1 = next(x for x in self.tri[t] if x != u and x != v)
        c2 = next(x for x in self.tri[t2] if x != u and x != v)
        n_uc1 = self.nbr[t][self._edge_index(t, u, c1)]
        n_vc1 = self.nbr[t][self._edge_index(t, v, c1)]
        n_uc2 = self.nbr[t2][self._edge_index(t2, u, c2)]
        n_vc2 = self.nbr[t2][self._edge_index(t2, v, c2)]
        s_uc1 = self._neighbor_slot(t, n_uc1)
        s_vc1 = self._neighbor_slot(t, n_vc1)
        s_uc2 = self._neighbor_slot(t2, n_uc2)
        s_vc2 = self._neighbor_slot(t2, n_vc2)
        # order (u, v) so that triangle t reads (u, v, c1) ccw-compatibly
        iu, iv = self.tri[t].index(u), self.tri[t].index(v)
        if (iu + 1) % 3 != iv:
            u, v = v, u
            n_uc1, n_vc1, n_uc2, n_vc2 = n_vc1, n_uc1, n_vc2, n_uc2
            s_uc1, s_vc1, s_uc2, s_vc2 = s_vc1, s_uc1, s_vc2, s_uc2
        self._kill(t)
        self._kill(t2)
        a1 = self._new_tri([u, p, c1])
        a2 = self._new_tri([p, v, c1])
        b1 = self._new_tri([p, u, c2])
        b2 = self._new_tri([v, p, c2])
        self._glue(a1, self._edge_index(a1, u, c1), n_uc1, s_uc1)
        self._glue(a2, self._edge_index(a2, v, c1), n_vc1, s_vc1)
        self._glue(b1, self._edge_index(b1, u, c2), n_uc2, s_uc2)
        self._glue(b2, self._edge_index(b2, v, c2), n_vc2, s_vc2)
        self._glue(a1, self._edge_index(a1, p, c1), a2, self._edge_index(a2, p, c1))
        self._glue(b1, self._edge_index(b1, p, c2), b2, self._edge_index(b2, p, c2))
        self._glue(a1, self._edge_index(a1, u, p), b1, self._edge_index(b1, u, p))
        self._glue(a2, self._edge_index(a2, v, p), b2, self._edge_index(b2, v, p))
        stack = [(a1, self._edge_index(a1, u, c1)),
                 (a2, self._edge_index(a2, v, c1)),
                 (b1, self._edge_index(b1, u, c2)),
                 (b2, self._edge_index(b2, v, c2))]
        self._legalize(stack, p)

    # -- legalization ------------------------------------------------------

    def _illegal(self, t: int, e: int, constrained_pairs: Optional[Set] = None) -> bool:
        """Should edge e of t be flipped?  Implements the Delaunay rule with
        the infinite-vertex conventions and the cocircular tie-break."""
        n = self.nbr[t][e]
        verts = self.tri[t]
        u, v = verts[(e + 1) % 3], verts[(e + 2) % 3]
        o1 = verts[e]
        o2 = self.tri[n][self._neighbor_slot(t, n)]
        if constrained_pairs is not None:
            key = (u, v) if u < v else (v, u)
            if key in constrained_pairs:
                return False
        if u == INF or v == INF:
            # edge between the infinite vertex and hull vertex x: flip
            # exactly when the hull turns the wrong way at x (predecessor w,
            # x, successor s wind clockwise).  Which of the two opposite
            # vertices is the predecessor depends on t's hull reading.
            x = u if v == INF else v
            if o1 == INF or o2 == INF:
                return False
            rv, ru, _ = self._hull_reading(t)
            w, s_ = (o1, o2) if x == rv else (o2, o1)
            return _orient_h(self.hp[w], self.hp[x], self.hp[s_]) < 0
        if o1 == INF and o2 == INF:
            return False
        if o1 == INF:
            return False  # hull edge seen from the infinite side stays
        if o2 == INF:
            # (u,v) is interior iff o2 finite; o2 == INF means hull edge:
            return False
        s = _incircle_h(self.hp[u], self.hp[v], self.hp[o1], self.hp[o2]) \
            if self.orient(u, v, o1) > 0 else \
            _incircle_h(self.hp[v], self.hp[u], self.hp[o1], self.hp[o2])
        if s > 0:
            return True
        if s == 0:
            return min(o1, o2) < min(u, v)
        return False

    def flip(self, t: int, e: int) -> Tuple[int, int]:
        """Flip edge e of t; returns the two new triangles."""
        n = self.nbr[t][e]
        en = self._neighbor_slot(t, n)
        o1 = self.tri[t][e]
        o2 = self.tri[n][en]
        verts = self.tri[t]
        a, b = verts[(e + 1) % 3], verts[(e + 2) % 3]
        # t reads (o1, a, b); n reads (o2, b, a)
        n_o1a = self.nbr[t][self._edge_index(t, o1, a)]
        n_o1b = self.nbr[t][self._edge_index(t, o1, b)]
        n_o2a = self.nbr[n][self._edge_index(n, o2, a)]
        n_o2b = self.nbr[n][self._edge_index(n, o2, b)]
        s_o1a = self._neighbor_slot(t, n_o1a)
        s_o1b = self._neighbor_slot(t, n_o1b)
        s_o2a = self._neighbor_slot(n, n_o2a)
        s_o2b = self._neighbor_slot(n, n_o2b)
        self._kill(t)
        self._kill(n)
        t1 = self._new_tri([a, o2, o1])
        t2 = self._new_tri([b, o1, o2])
        self._glue(t1, self._edge_index(t1, a, o2), n_o2a, s_o2a)
        self._glue(t1, self._edge_index(t1, a, o1), n_o1a, s_o1a)
        self._glue(t2, self._edge_index(t2, b, o1), n_o1b, s_o1b)
        self._glue(t2, self._edge_index(t2, b, o2), n_o2b, s_o2b)
        self._glue(t1, self._edge_index(t1, o1, o2), t2, self._edge_index(t2, o1, o2))
        return t1, t2

    def _legalize(self, stack: List[Tuple[int, int]], p: int,
                  constrained_pairs: Optional[Set] = None) -> None:
        guard = 0
        while stack:
            guard += 1
            if guard > 400 * (len(self.tri) + 32):
                raise AssertionError("legalization did not terminate")
            t, e = stack.pop()
            if self.tri[t] is None:
                continue
            # entries may be stale after flips; _illegal re-derives the
            # current geometry, so flipping only when it says so is safe
            if not self._illegal(t, e, constrained_pairs):
                continue
            t1, t2 = self.flip(t, e)
            for tn in (t1, t2):
                for i in range(3):
                    vs = self.tri[tn]
                    a, b = vs[(i + 1) % 3], vs[(i + 2) % 3]
                    if p in (a, b):
                        continue
                    stack.append((tn, i))

    # -- constraints -------------------------------------------------------

    def _triangles_around(self, v: int) -> List[int]:
        t0 = self.vert_tri[v]
        if self.tri[t0] is None or v not in self.tri[t0]:
            t0 = next(t for t in range(len(self.tri))
                      if self.tri[t] is not None and v in self.tri[t])
        out = [t0]
        # walk one way around v
        cur = t0
        while True:
            verts = self.tri[cur]
            i = verts.index(v)
            nxt = self.nbr[cur][(i + 1) % 3]
            if nxt == t0:
                break
            out.append(nxt)
            cur = nxt
        return out

    def find_edge(self, u: int, v: int) -> Optional[Tuple[int, int]]:
        for t in self._triangles_around(u):
            if v in self.tri[t]:
                return t, self._edge_index(t, u, v)
        return None

    def insert_constraint(self, u: int, v: int,
                          constrained_pairs: Set) -> None:
        if self.find_edge(u, v) is not None:
            constrained_pairs.add((u, v) if u < v else (v, u))
            return
        # collect the pipe of edges crossed by the open segment (u, v)
        crossed: List[Tuple[int, int]] = []  # vertex pairs
        start = None
        for t in self._triangles_around(u):
            verts = self.tri[t]
            if INF in verts:
                continue
            i = verts.index(u)
            a, b = verts[(i + 1) % 3], verts[(i + 2) % 3]
            if self.orient(u, a, v) >= 0 and self.orient(u, b, v) <= 0 \
                    and self.orient(a, b, u) * self.orient(a, b, v) < 0:
                start = t
                crossed.append((a, b))
                break
        if start is None:
            raise TriangulationError(
                "constraint (%d,%d) start not found" % (u, v))
        # walk across crossed edges to v, keeping a on the positive side
        t = start
        a, b = crossed[-1]
        if self.orient(u, v, a) < 0:
            a, b = b, a
        crossed[-1] = (a, b)
        while True:
            n = self.nbr[t][self._edge_index(t, a, b)]
            if INF in self.tri[n]:
                raise TriangulationError("constraint escapes the hull")
            w = next(x for x in self.tri[n] if x != a and x != b)
            if w == v:
                break
            ouv_w = self.orient(u, v, w)
            if ouv_w == 0:
                raise TriangulationError(
                    "constraint (%d,%d) passes through vertex %d" % (u, v, w))
            if ouv_w > 0:
                a = w
            else:
                b = w
            crossed.append((a, b))
            t = n
        # flip crossed edges away until (u,v) appears
        pending = list(crossed)
        new_edges: List[Tuple[int, int]] = []
        guard = 0
        while pending:
            guard += 1
            if guard > 40 * len(crossed) ** 2 + 400:
                raise AssertionError("constraint flipping did not terminate")
            x, y = pending.pop(0)
            found = self.find_edge(x, y)
            if found is None:
                continue
            t, e = found
            n = self.nbr[t][e]
            o1 = self.tri[t][e]
            o2 = self.tri[n][self._neighbor_slot(t, n)]
            if o1 == INF or o2 == INF:
                pending.append((x, y))
                continue
            # flippable only if the quad is strictly convex
            if self.orient(x, o1, o2) == 0 or self.orient(y, o1, o2) == 0:
                pending.append((x, y))
                continue
            if self.orient(o1, o2, x) * self.orient(o1, o2, y) >= 0:
                pending.append((x, y))
                continue
            self.flip(t, e)
            d1, d2 = (o1, o2) if o1 < o2 else (o2, o1)
            if (d1, d2) == ((u, v) if u < v else (v, u)):
                continue
            if self.orient(u, v, d1) * self.orient(u, v, d2) < 0 \
                    and self._segments_cross(u, v, d1, d2):
                pending.append((d1, d2))
            else:
                new_edges.append((d1, d2))
        key = (u, v) if u < v else (v, u)
        constrained_pairs.add(key)
        if self.find_edge(u, v) is None:
            raise AssertionError("constraint not realized")
        # restore the Delaunay property around the new edges
        stack = []
        for (x, y) in new_edges:
            found = self.find_edge(x, y)
            if found is not None:
                t, e = found
                stack.append((t, e))
                n = self.nbr[t][e]
                stack.append((n, self._neighbor_slot(t, n)))
        self._legalize(stack, -2, constrained_pairs)

    def _segments_cross(self, u, v, a, b) -> bool:
        return (self.orient(u, v, a) * self.orient(u, v, b) < 0
                and self.orient(a, b, u) * self.orient(a, b, v) < 0)


def constrained_delaunay(pslg: ImagePSLG) -> ImageTriangulation:
    """Exact constrained Delaunay triangulation of the arrangement points
    with every subdivided edge-image segment as a constrained edge."""
    pts = pslg.points
    n = len(pts)
    if n < 3:
        raise TriangulationError("need at least 3 points")
    seen = {}
    for i, p in enumerate(pts):
        if p in seen:
            raise TriangulationError("duplicate point %d == %d" % (i, seen[p]))
        seen[p] = i
    hp = _homogenize(pts)
    T = _Triangulation(hp)

    order = sorted(range(n), key=lambda i: (pts[i][0], pts[i][1]))
    # seed with the first two points plus the first non-collinear third
    i0, i1 = order[0], order[1]
    i2 = None
    rest = []
    for i in order[2:]:
        if i2 is None and _orient_h(hp[i0], hp[i1], hp[i]) != 0:
            i2 = i
        else:
            rest.append(i)
    if i2 is None:
        raise TriangulationError("all points collinear")
    T.bootstrap(i0, i1, i2)
    for i in rest:
        T.insert_point(i)

    constrained_pairs: Set[Tuple[int, int]] = set()
    for (u, v) in pslg.constraints:
        T.insert_constraint(u, v, constrained_pairs)

    triangles = []
    for t in range(len(T.tri)):
        verts = T.tri[t]
        if verts is None or INF in verts:
            continue
        a, b, c = verts
        if _orient_h(hp[a], hp[b], hp[c]) <= 0:
            raise AssertionError("non-ccw finite triangle in output")
        # canonical rotation: smallest vertex first, ccw kept
        k = min(range(3), key=lambda i: verts[i])
        triangles.append((verts[k], verts[(k + 1) % 3], verts[(k + 2) % 3]))
    triangles.sort()
    constraints_sorted = sorted(constrained_pairs)
    return ImageTriangulation(points=list(pts), triangles=triangles,
                              constrained=constraints_sorted)


# ---------------------------------------------------------------------------
# restriction to the image of the mapped polyhedron


def _point_in_tri_h(p, a, b, c) -> int:
    o = _orient_h(a, b, c)
    s1 = _orient_h(a, b, p) * o
    s2 = _orient_h(b, c, p) * o
    s3 = _orient_h(c, a, p) * o
    if s1 < 0 or s2 < 0 or s3 < 0:
        return -1
    if s1 > 0 and s2 > 0 and s3 > 0:
        return 1
    return 0


def restrict_to_image(tri: ImageTriangulation, mesh: SurfaceMesh,
                      pmap: PlanarMap) -> ImageTriangulation:
    """Fill inside flags and coverer lists: a triangle lies in the image of
    the mapped boundary iff its barycenter lies in at least one mesh-face
    image; the list of such faces is its coverer set."""
    images = pmap.images
    face_h = []
    for (i, j, k) in mesh.triangles:
        face_h.append((_homog_one(images[i]), _homog_one(images[j]),
                       _homog_one(images[k])))
    # conservative float bounding boxes for prefiltering
    scale = 1.0 + max(abs(float(u)) + abs(float(v)) for (u, v) in images)
    pad = 1e-9 * scale
    fb = np.array([[min(float(images[i][0]) for i in f) - pad,
                    min(float(images[i][1]) for i in f) - pad,
                    max(float(images[i][0]) for i in f) + pad,
                    max(float(images[i][1]) for i in f) + pad]
                   for f in mesh.triangles])
    inside: List[bool] = []
    coverers: List[List[int]] = []
    third = Fraction(1, 3)
    for t in tri.triangles:
        p1, p2, p3 = (tri.points[t[0]], tri.points[t[1]], tri.points[t[2]])
        bc = ((p1[0] + p2[0] + p3[0]) * third, (p1[1] + p2[1] + p3[1]) * third)
        bh = _homog_one(bc)
        fx, fy = float(bc[0]), float(bc[1])
        cand = np.nonzero((fb[:, 0] <= fx) & (fx <= fb[:, 2])
                          & (fb[:, 1] <= fy) & (fy <= fb[:, 3]))[0]
        cover = []
        for fi in cand:
            a, b, c = face_h[int(fi)]
            if _point_in_tri_h(bh, a, b, c) >= 0:
                cover.append(int(fi))
        cover.sort()
        coverers.append(cover)
        inside.append(bool(cover))
    tri.inside = inside
    tri.coverers = coverers
    return tri


def _homog_one(p: Point2) -> Tuple[int, int, int]:
    from math import gcd
    b, d = p[0].denominator, p[1].denominator
    w = b * d // gcd(b, d)
    return (p[0].numerator * (w // b), p[1].numerator * (w // d), w)


def covered_area_identity(tri: ImageTriangulation, mesh: SurfaceMesh,
                          pmap: PlanarMap) -> Tuple[Fraction, Fraction]:
    """(sum of multiplicity * area over inside triangles, sum of mesh-face
    image areas); both exact, equal for a correct restriction."""
    images = pmap.images
    def area2(a: Point2, b: Point2, c: Point2) -> Fraction:
        return abs((b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0]))

    lhs = Fraction(0)
    for ti in tri.inside_indices():
        i, j, k = tri.triangles[ti]
        lhs += tri.multiplicity(ti) * area2(tri.points[i], tri.points[j],
                                            tri.points[k])
    rhs = Fraction(0)
    for (i, j, k) in mesh.triangles:
        rhs += area2(images[i], images[j], images[k])
    return lhs / 2, rhs / 2
