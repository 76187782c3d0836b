"""Constrained Delaunay triangulation of the image arrangement.

Independent oracles used here:

* empty-circumcircle check — brute force over every triangle/point pair
  with the exact predicate (valid on unconstrained inputs);
* convex hull area by monotone chain + shoelace, compared against the
  sum of triangle areas;
* multiplicity-weighted area identity — both sides recomputed from
  scratch inside the library, asserted exactly equal here.
"""

import random
from fractions import Fraction as F

import pytest

from fneighbors import cdt as cdtm
from fneighbors import exact
from fneighbors.image_arrangement import ImagePSLG, PlanarMap, build_pslg


def pslg_of_points(pts, constraints=()):
    pts = [(F(a), F(b)) for a, b in pts]
    return ImagePSLG(
        points=pts,
        constraints=list(constraints),
        point_provenance=[[] for _ in pts],
        constraint_edges=[0] * len(constraints),
        mesh_edges=[],
    )


def undirected_edges(triangles):
    edges = set()
    for a, b, c in triangles:
        for u, v in ((a, b), (b, c), (c, a)):
            edges.add((min(u, v), max(u, v)))
    return edges


def convex_hull(points):
    """Monotone-chain hull over exact rational points (CCW order)."""
    pts = sorted(set(points))
    if len(pts) <= 2:
        return pts

    def half(iterable):
        chain = []
        for p in iterable:
            while len(chain) >= 2 and exact.orient2d(chain[-2], chain[-1], p) <= 0:
                chain.pop()
            chain.append(p)
        return chain

    lower = half(pts)
    upper = half(reversed(pts))
    return lower[:-1] + upper[:-1]


def shoelace2(polygon):
    n = len(polygon)
    return sum(
        polygon[i][0] * polygon[(i + 1) % n][1]
        - polygon[(i + 1) % n][0] * polygon[i][1]
        for i in range(n)
    )


class TestReferenceTriangulation:
    def test_tetrahedron_image_triangulation(self, tetra):
        tri = tetra.tri
        assert tri.points == [
            (F(0), F(0)),
            (F(4), F(0)),
            (F(0), F(4)),
            (F(1), F(1)),
        ]
        assert tri.triangles == [(0, 1, 3), (0, 3, 2), (1, 2, 3)]
        assert tri.inside == [True, True, True]

    def test_every_triangle_is_covered_twice(self, tetra):
        assert tetra.tri.coverers == [[0, 1], [0, 3], [0, 2]]

    def test_area_identity_holds_exactly(self, tetra):
        lhs, rhs = cdtm.covered_area_identity(tetra.tri, tetra.mesh, tetra.pmap)
        assert lhs == rhs == 16

    def test_triangles_are_counterclockwise(self, tetra):
        pts = tetra.tri.points
        for a, b, c in tetra.tri.triangles:
            assert exact.orient2d(pts[a], pts[b], pts[c]) == 1


class TestDelaunayProperty:
    @pytest.mark.parametrize("seed", [3, 11, 29])
    def test_empty_circumcircle_on_random_points(self, seed):
        rng = random.Random(seed)
        pts = list(
            {(F(rng.randint(0, 50)), F(rng.randint(0, 50))) for _ in range(30)}
        )
        tri = cdtm.constrained_delaunay(pslg_of_points(pts))
        for a, b, c in tri.triangles:
            for i, p in enumerate(pts):
                if i in (a, b, c):
                    continue
                assert (
                    exact.in_circumcircle(pts[a], pts[b], pts[c], p) <= 0
                ), f"point {i} inside circumcircle of ({a},{b},{c})"

    @pytest.mark.parametrize("seed", [3, 11, 29])
    def test_triangulation_fills_the_convex_hull(self, seed):
        rng = random.Random(seed)
        pts = list(
            {(F(rng.randint(0, 50)), F(rng.randint(0, 50))) for _ in range(30)}
        )
        tri = cdtm.constrained_delaunay(pslg_of_points(pts))
        hull_area = shoelace2(convex_hull(pts))
        tri_area = sum(
            exact.triangle_area2_2d(pts[a], pts[b], pts[c])
            for a, b, c in tri.triangles
        )
        assert hull_area == tri_area
        assert all(
            exact.orient2d(pts[a], pts[b], pts[c]) == 1
            for a, b, c in tri.triangles
        )


class TestConstraints:
    def test_forced_diagonal_appears_as_an_edge(self):
        # Delaunay alone would not pick the long diagonal of this square.
        tri = cdtm.constrained_delaunay(
            pslg_of_points(
                [(0, 0), (10, 0), (10, 10), (0, 10), (5, 1)], [(0, 2)]
            )
        )
        assert (0, 2) in undirected_edges(tri.triangles)
        assert tri.constrained == [(0, 2)]

    def test_crossing_map_constraints_all_present(self, tetra_mesh):
        pmap = PlanarMap(
            images=[(F(0), F(0)), (F(4), F(0)), (F(0), F(4)), (F(5), F(5))]
        )
        pslg = build_pslg(tetra_mesh, pmap)
        tri = cdtm.constrained_delaunay(pslg)
        edges = undirected_edges(tri.triangles)
        for u, v in pslg.constraints:
            assert (min(u, v), max(u, v)) in edges


class TestDegenerateInput:
    def test_fewer_than_three_points_rejected(self):
        with pytest.raises(cdtm.TriangulationError, match="at least 3 points"):
            cdtm.constrained_delaunay(pslg_of_points([(0, 0), (1, 0)]))

    def test_all_collinear_rejected(self):
        with pytest.raises(cdtm.TriangulationError, match="collinear"):
            cdtm.constrained_delaunay(
                pslg_of_points([(0, 0), (1, 1), (2, 2), (3, 3)])
            )
