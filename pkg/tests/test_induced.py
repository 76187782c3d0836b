"""Pulling the image triangulation back onto the surface.

Frozen expectations were derived by hand for the reference
tetrahedron: image point (1,1) is the image of apex (1,1,4) and also
the interior of the base face, so the pull-back introduces the extra
surface vertex (1,1,0); each of the three image triangles is covered
twice (once by the base, once by a slanted face), giving six induced
triangles on the surface.
"""

from fractions import Fraction as F

from fneighbors import exact
from fneighbors.induced import refinement_area_identity


class TestVertices:
    def test_surface_vertices_include_the_pulled_back_point(self, tetra):
        assert tetra.ind.vertices == [
            (F(0), F(0), F(0)),
            (F(4), F(0), F(0)),
            (F(1), F(1), F(0)),
            (F(1), F(1), F(4)),
            (F(0), F(4), F(0)),
        ]

    def test_vertex_images_match_the_plane_points(self, tetra):
        assert tetra.ind.vertex_images == [
            (F(0), F(0)),
            (F(4), F(0)),
            (F(1), F(1)),
            (F(1), F(1)),
            (F(0), F(4)),
        ]

    def test_every_vertex_lies_on_its_host_face(self, tetra):
        mesh = tetra.mesh
        for tri in tetra.ind.triangles:
            face_pts = [mesh.vertices[i] for i in mesh.triangles[tri.face]]
            for corner in tri.corners:
                p = tetra.ind.vertices[corner]
                assert exact.point_in_triangle_3d(p, *face_pts) >= 0


class TestTriangles:
    def test_frozen_triangle_list(self, tetra):
        got = [
            (t.cd_tri, t.face, t.corners, t.orient_sign)
            for t in tetra.ind.triangles
        ]
        assert got == [
            (0, 0, (0, 1, 2), -1),
            (0, 1, (0, 1, 3), 1),
            (1, 0, (0, 2, 4), -1),
            (1, 3, (0, 3, 4), 1),
            (2, 0, (1, 4, 2), -1),
            (2, 2, (1, 4, 3), 1),
        ]

    def test_grouping_by_image_triangle_matches_coverers(self, tetra):
        assert tetra.ind.by_cd == {0: [0, 1], 1: [2, 3], 2: [4, 5]}
        for cd, members in tetra.ind.by_cd.items():
            assert len(members) == len(tetra.tri.coverers[cd])

    def test_corner_images_equal_the_image_triangle(self, tetra):
        pts = tetra.tri.points
        for tri in tetra.ind.triangles:
            expected = {pts[i] for i in tetra.tri.triangles[tri.cd_tri]}
            got = {tetra.ind.vertex_images[c] for c in tri.corners}
            assert got == expected

    def test_orient_sign_matches_face_image_orientation(self, tetra):
        # Independent oracle: the sign records whether the planar map
        # preserves or reverses the face's boundary orientation.
        mesh, pmap = tetra.mesh, tetra.pmap
        for tri in tetra.ind.triangles:
            a, b, c = mesh.triangles[tri.face]
            expected = exact.orient2d(pmap.images[a], pmap.images[b], pmap.images[c])
            assert tri.orient_sign == expected


class TestSurfaceStructure:
    def test_every_edge_has_exactly_two_triangles(self, tetra):
        assert len(tetra.ind.edge_triangles) == 9
        for edge, incident in tetra.ind.edge_triangles.items():
            assert len(incident) == 2, f"edge {edge} has {len(incident)} triangles"

    def test_euler_characteristic_is_spherical(self, tetra):
        v = len(tetra.ind.vertices)
        e = len(tetra.ind.edge_triangles)
        f = len(tetra.ind.triangles)
        assert v - e + f == 2

    def test_area_identity_counts_multiplicity(self, tetra):
        lhs, rhs = refinement_area_identity(tetra.ind)
        assert lhs == rhs == 32
