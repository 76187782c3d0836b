"""The complex of ordered pairs of surface triangles over a common
image triangle, its edge-manifold certificate, and the resolved
two-sheeted surface with its component invariants.

Hand-derived expectations for the reference tetrahedron: each of the
three image triangles is covered twice, so there are 3*2*1 = 6 ordered
pairs; the five pair vertices are the diagonal copies of the three
image corners plus the off-diagonal pair {(1,1,0),(1,1,4)} in both
orders; the resolved surface is a single sphere meeting the diagonal.
"""

import dataclasses
from fractions import Fraction as F

import pytest

from fneighbors.image_arrangement import PlanarMap
from fneighbors.neighbor_complex import (
    CASE_CREASE,
    CASE_NO_FOLD,
    CASE_ONE_FOLD,
    analyze_components,
    find_base_component,
    verify_edge_manifold,
)
from conftest import build_pair_complex, link_is_single_cycle


@pytest.fixture(scope="module")
def octa(octa_mesh):
    """Octahedron under a sheared vertical projection (general position)."""
    images = [
        (v[0] + F(3, 10) * v[2], v[1] + F(1, 6) * v[2])
        for v in octa_mesh.vertices
    ]
    return build_pair_complex(octa_mesh, PlanarMap(images=images))


class TestPairVertices:
    def test_vertices_are_ordered_pairs_of_surface_vertices(self, tetra):
        assert tetra.cx.vertices == [(0, 0), (1, 1), (2, 3), (3, 2), (4, 4)]

    def test_diagonal_flags_mark_repeated_vertices(self, tetra):
        assert tetra.cx.diagonal_flags == [True, True, False, False, True]
        for (a, b), flag in zip(tetra.cx.vertices, tetra.cx.diagonal_flags):
            assert flag == (a == b)

    def test_paired_vertices_share_an_image(self, tetra):
        for a, b in tetra.cx.vertices:
            assert tetra.ind.vertex_images[a] == tetra.ind.vertex_images[b]

    def test_vertex_swap_exchanges_the_factors(self, tetra):
        assert tetra.cx.vertex_swap == [0, 1, 3, 2, 4]
        for vid, (a, b) in enumerate(tetra.cx.vertices):
            assert tetra.cx.vertices[tetra.cx.vertex_swap[vid]] == (b, a)


class TestPairTriangles:
    def test_triangles_are_ordered_pairs_over_one_image_triangle(self, tetra):
        assert tetra.cx.triangles == [(0, 1), (1, 0), (2, 3), (3, 2), (4, 5), (5, 4)]
        for a, b in tetra.cx.triangles:
            assert a != b
            assert tetra.ind.triangles[a].cd_tri == tetra.ind.triangles[b].cd_tri

    def test_corner_lists_reference_pair_vertices(self, tetra):
        assert tetra.cx.corners == [
            (0, 1, 2),
            (0, 1, 3),
            (0, 2, 4),
            (0, 3, 4),
            (1, 4, 2),
            (1, 4, 3),
        ]

    def test_pair_id_inverts_the_triangle_list(self, tetra):
        for tid, pair in enumerate(tetra.cx.triangles):
            assert tetra.cx.pair_id[pair] == tid

    def test_swap_is_a_fixed_point_free_involution(self, tetra):
        swap = tetra.cx.swap
        assert swap == [1, 0, 3, 2, 5, 4]
        for tid, (a, b) in enumerate(tetra.cx.triangles):
            assert swap[swap[tid]] == tid
            assert swap[tid] != tid
            assert tetra.cx.triangles[swap[tid]] == (b, a)

    def test_counting_identity(self, tetra):
        multiplicities = [len(c) for c in tetra.tri.coverers]
        assert sum(m * (m - 1) for m in multiplicities) == len(tetra.cx.triangles) == 6


class TestEdgeManifold:
    def test_every_edge_has_a_case_and_no_violations(self, tetra):
        rep = tetra.report
        assert rep.violations == []
        assert set(rep.edge_cases) == set(tetra.cx.edge_triangles)
        assert rep.case_counts == {
            CASE_CREASE: 3,
            CASE_ONE_FOLD: 0,
            CASE_NO_FOLD: 6,
        }

    def test_case_classification_frozen(self, tetra):
        assert tetra.report.edge_cases == {
            (0, 1): CASE_CREASE,
            (0, 2): CASE_NO_FOLD,
            (0, 3): CASE_NO_FOLD,
            (0, 4): CASE_CREASE,
            (1, 2): CASE_NO_FOLD,
            (1, 3): CASE_NO_FOLD,
            (1, 4): CASE_CREASE,
            (2, 4): CASE_NO_FOLD,
            (3, 4): CASE_NO_FOLD,
        }

    def test_crease_edges_join_swapped_pairs_on_the_diagonal(self, tetra):
        for key, case in tetra.report.edge_cases.items():
            if case == CASE_CREASE:
                u, v = key
                assert tetra.cx.diagonal_flags[u] and tetra.cx.diagonal_flags[v]
                t1, t2 = tetra.cx.edge_triangles[key]
                assert tetra.cx.swap[t1] == t2

    def test_missing_triangle_reported_as_edge_degree(self, tetra):
        et = {k: list(v) for k, v in tetra.cx.edge_triangles.items()}
        et[(0, 1)] = [0]
        broken = dataclasses.replace(tetra.cx, edge_triangles=et)
        rep = verify_edge_manifold(broken)
        assert rep.violations == [
            (
                "edge-degree",
                (0, 1),
                "edge (0, 1) has 1 incident triangles (expected 2)",
            )
        ]

    def test_crease_with_off_diagonal_endpoint_reported(self, tetra):
        flags = list(tetra.cx.diagonal_flags)
        flags[0] = False
        broken = dataclasses.replace(tetra.cx, diagonal_flags=flags)
        rep = verify_edge_manifold(broken)
        assert [v[0] for v in rep.violations] == [
            "crease-off-diagonal",
            "crease-off-diagonal",
        ]


class TestResolvedComplex:
    def test_triangles_and_pairs_frozen(self, tetra):
        rc = tetra.rc
        assert rc.triangles == [
            (0, 1, 2),
            (0, 1, 3),
            (0, 2, 4),
            (0, 3, 4),
            (1, 4, 2),
            (1, 4, 3),
        ]
        assert rc.pairs == [(0, 1), (1, 0), (2, 3), (3, 2), (4, 5), (5, 4)]
        assert rc.n_triangles == 6

    def test_swap_squares_to_identity_everywhere(self, tetra):
        rc = tetra.rc
        for tid in range(rc.n_triangles):
            assert rc.swap_triangles[rc.swap_triangles[tid]] == tid
        for vid in range(len(rc.vertices)):
            assert rc.swap_vertices[rc.swap_vertices[vid]] == vid

    def test_swap_reverses_the_pair_simplexwise(self, tetra):
        rc = tetra.rc
        for tid, (a, b) in enumerate(rc.pairs):
            assert rc.pairs[rc.swap_triangles[tid]] == (b, a)
        for vid in range(len(rc.vertices)):
            a, b = rc.vertex_pair(vid)
            assert rc.vertex_pair(rc.swap_vertices[vid]) == (b, a)

    def test_vertex_pair_points_share_an_image(self, tetra):
        rc = tetra.rc
        for vid in range(len(rc.vertices)):
            a, b = rc.vertex_pair(vid)
            pa, pb = rc.vertex_pair_points(vid)
            assert pa == tetra.ind.vertices[a]
            assert pb == tetra.ind.vertices[b]
            assert tetra.ind.vertex_images[a] == tetra.ind.vertex_images[b]

    def test_every_vertex_link_is_a_single_cycle(self, tetra):
        for vid in range(len(tetra.rc.vertices)):
            assert link_is_single_cycle(tetra.rc, vid)


class TestComponents:
    def test_single_spherical_component(self, tetra):
        assert tetra.infos == tetra.rc.component_info
        info = tetra.infos[0]
        assert info.component == 0
        assert (info.n_vertices, info.n_edges, info.n_triangles) == (5, 9, 6)
        assert info.euler_characteristic == 2
        assert info.orientable is True
        assert info.genus == 0
        assert info.degree_mod2 == 1
        assert info.degree_signed == -1
        assert info.meets_diagonal is True

    def test_labels_cover_every_simplex(self, tetra):
        rc = tetra.rc
        assert rc.components == [0] * 6
        assert rc.vertex_components == [0] * 5
        assert rc.triangle_signs == [1, -1, 1, -1, 1, -1]

    def test_base_component_found_via_folding(self, tetra):
        base = find_base_component(tetra.rc)
        assert base.component == 0
        assert base.triangle == 0
        assert base.folding_pair == (0, 1)
        assert base.via == "folding"

    def test_orientable_components_satisfy_genus_relation(self, tetra, octa):
        for ns in (tetra, octa):
            for info in ns.infos:
                if info.orientable:
                    assert info.euler_characteristic == 2 - 2 * info.genus
                assert info.degree_mod2 == abs(info.degree_signed) % 2


class TestShearedProjectionInvariants:
    """A second, larger instance exercised through the same invariants."""

    def test_counting_identity(self, octa):
        multiplicities = [len(c) for c in octa.tri.coverers]
        assert sum(m * (m - 1) for m in multiplicities) == len(octa.cx.triangles) == 20

    def test_edge_manifold_clean(self, octa):
        assert octa.report.violations == []
        assert sum(octa.report.case_counts.values()) == 30

    def test_all_links_single_cycles(self, octa):
        for vid in range(len(octa.rc.vertices)):
            assert link_is_single_cycle(octa.rc, vid)

    def test_projection_doubles_the_sphere(self, octa):
        info = octa.infos[0]
        assert len(octa.infos) == 1
        assert info.euler_characteristic == 2
        assert info.orientable and info.genus == 0
        assert info.degree_mod2 == 1
        assert info.meets_diagonal

    def test_swap_involution(self, octa):
        rc = octa.rc
        for tid, (a, b) in enumerate(rc.pairs):
            assert rc.pairs[rc.swap_triangles[tid]] == (b, a)
            assert rc.swap_triangles[rc.swap_triangles[tid]] == tid
