"""Planar vertex maps, general-position checks, and the edge-image PSLG.

The crossing scenario below was worked out by hand: mapping the
tetrahedron vertices to (0,0), (4,0), (0,4), (5,5) makes the images of
mesh edges (0,3) and (1,2) cross properly at (2,2), so the subdivision
must introduce exactly one new point and split both edges there.
"""

import json
from fractions import Fraction as F

import pytest

from fneighbors import exact
from fneighbors import image_arrangement as ia


def planar(images):
    return ia.PlanarMap(images=[(F(a), F(b)) for a, b in images])


CROSSING = [(0, 0), (4, 0), (0, 4), (5, 5)]


@pytest.fixture(scope="module")
def crossing_pslg(tetra_mesh):
    return ia.build_pslg(tetra_mesh, planar(CROSSING))


class TestLoading:
    def test_round_trip(self, tmp_path, tetra_map):
        path = tmp_path / "map.json"
        path.write_text(json.dumps({"images": [["0", "0"], ["4", "0"], ["0", "4"], ["1", "1"]]}))
        pm = ia.load_planar_map(path, 4)
        assert pm.images == tetra_map.images

    def test_vertex_count_mismatch(self, tmp_path):
        path = tmp_path / "map.json"
        path.write_text(json.dumps({"images": [["0", "0"], ["1", "1"]]}))
        with pytest.raises(ia.MapError, match="2 images but the mesh has 4"):
            ia.load_planar_map(path, 4)

    def test_missing_images_key(self, tmp_path):
        path = tmp_path / "map.json"
        path.write_text(json.dumps({"points": []}))
        with pytest.raises(ia.MapError, match="missing 'images' key"):
            ia.load_planar_map(path, 4)


class TestGeneralPosition:
    def test_reference_map_passes(self, tetra_mesh, tetra_map):
        rep = ia.check_general_position(tetra_mesh, tetra_map)
        assert rep.passed
        assert rep.violations == []

    def test_coincident_images_detected(self, tetra_mesh):
        rep = ia.check_general_position(tetra_mesh, planar([(0, 0), (0, 0), (0, 4), (1, 1)]))
        assert rep.violations == [
            ("coincident-images", (0, 1), "vertex images 0 and 1 coincide")
        ]

    def test_collinear_images_detected(self, tetra_mesh):
        rep = ia.check_general_position(tetra_mesh, planar([(0, 0), (2, 2), (4, 4), (1, 0)]))
        assert ("collinear-images", (0, 1, 2), "vertex images 0, 1, 2 are collinear") in rep.violations

    def test_require_raises_on_violation(self, tetra_mesh):
        with pytest.raises(ia.GeneralPositionError, match="coincide"):
            ia.require_general_position(
                tetra_mesh, planar([(0, 0), (0, 0), (0, 4), (1, 1)])
            )

    def test_crossing_map_is_still_general_position(self, tetra_mesh):
        rep = ia.check_general_position(tetra_mesh, planar(CROSSING))
        assert rep.passed


class TestPslg:
    def test_points_are_vertex_images_plus_one_crossing(self, crossing_pslg):
        assert crossing_pslg.points == [
            (F(0), F(0)),
            (F(4), F(0)),
            (F(0), F(4)),
            (F(5), F(5)),
            (F(2), F(2)),
        ]

    def test_provenance_identifies_the_crossing(self, crossing_pslg):
        assert crossing_pslg.point_provenance[:4] == [
            [{"kind": "vertex-image", "vertex": i}] for i in range(4)
        ]
        assert crossing_pslg.point_provenance[4] == [
            {"kind": "crossing", "edges": [2, 3], "proper": True}
        ]

    def test_crossed_edges_are_split_at_the_crossing(self, crossing_pslg):
        assert crossing_pslg.mesh_edges == [
            (0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3),
        ]
        assert crossing_pslg.constraints == [
            (0, 1), (0, 2), (0, 4), (3, 4), (1, 4), (2, 4), (1, 3), (2, 3),
        ]
        assert crossing_pslg.constraint_edges == [0, 1, 2, 2, 3, 3, 4, 5]

    def test_crossing_point_is_the_exact_intersection(self, crossing_pslg, tetra_mesh):
        # Independent oracle: re-intersect the two named edge images.
        e_a, e_b = crossing_pslg.point_provenance[4][0]["edges"]
        pa, pb = crossing_pslg.mesh_edges[e_a]
        pc, pd = crossing_pslg.mesh_edges[e_b]
        pts = crossing_pslg.points
        hit = exact.segment_intersection(pts[pa], pts[pb], pts[pc], pts[pd])
        assert hit == (crossing_pslg.points[4], True)

    def test_every_constraint_lies_on_its_mesh_edge(self, crossing_pslg):
        pts = crossing_pslg.points
        for (u, v), parent in zip(
            crossing_pslg.constraints, crossing_pslg.constraint_edges
        ):
            a, b = crossing_pslg.mesh_edges[parent]
            for endpoint in (pts[u], pts[v]):
                assert exact.on_segment(endpoint, pts[a], pts[b])

    def test_uncrossed_map_adds_no_points(self, tetra_mesh, tetra_map):
        pslg = ia.build_pslg(tetra_mesh, tetra_map)
        assert len(pslg.points) == 4
        assert all(
            prov[0]["kind"] == "vertex-image" for prov in pslg.point_provenance
        )
        # Every mesh edge appears as exactly one unsplit constraint.
        assert sorted(pslg.constraints) == sorted(pslg.mesh_edges)
