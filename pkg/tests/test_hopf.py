"""Center estimation and the antipodal-pair-to-diagonal search.

Independent geometric facts used as oracles:

* For the regular octahedron with vertices (+-1,0,0), (0,+-1,0),
  (0,0,+-1) the inscribed-width optimum is attained at the origin and
  the minimal antipodal width is 2/sqrt(3) (twice the inradius
  1/sqrt(3) of the unit L1 ball).
* A witness pair (a, b) must satisfy the reported residual
  || unit(a-p) + unit(b-p) || with p the center, must be collinear
  with p up to the stated tolerance, and p must lie strictly between
  a and b.
"""

import dataclasses
import math

import pytest

from fneighbors.hopf import (
    HopfError,
    estimate_center,
    find_equivariant_pair,
    path_to_diagonal,
)
from fneighbors.neighbor_complex import find_base_component


def norm(v):
    return math.sqrt(sum(x * x for x in v))


def sub(a, b):
    return tuple(x - y for x, y in zip(a, b))


@pytest.fixture(scope="module")
def tetra_center(tetra_mesh):
    return estimate_center(tetra_mesh)


@pytest.fixture(scope="module")
def tetra_witness(tetra, tetra_center):
    base = find_base_component(tetra.rc)
    return find_equivariant_pair(tetra.rc, base.component, tetra_center)


class TestCenterEstimation:
    def test_octahedron_width_is_two_over_sqrt3(self, octa_mesh):
        result = estimate_center(octa_mesh)
        assert result.converged
        assert result.D_hat == pytest.approx(2 / math.sqrt(3), abs=1e-3)
        assert norm(result.center) < 1e-2

    def test_tetrahedron_width_frozen(self, tetra_center):
        assert tetra_center.D_hat == pytest.approx(2.0818143, abs=1e-3)

    def test_deterministic_across_calls(self, tetra_mesh, tetra_center):
        again = estimate_center(tetra_mesh)
        assert again.center == tetra_center.center
        assert again.D_hat == tetra_center.D_hat

    def test_center_is_strictly_interior(self, tetra_mesh, tetra_center):
        # The inner optimum of the antipodal width must be attainable,
        # which requires an interior point; check against the four
        # supporting planes of the tetrahedron.
        x, y, z = tetra_center.center
        assert z > 0
        assert x > 0 and y > 0
        assert 2 * x + 2 * y + z < 8


class TestEquivariantPair:
    def test_residual_within_tolerance(self, tetra_witness):
        assert tetra_witness.residual <= 1e-6

    def test_residual_matches_its_definition(self, tetra_witness, tetra_center):
        p = tetra_center.center
        da = sub(tetra_witness.a, p)
        db = sub(tetra_witness.b, p)
        ua = tuple(x / norm(da) for x in da)
        ub = tuple(x / norm(db) for x in db)
        recomputed = norm(tuple(x + y for x, y in zip(ua, ub)))
        assert recomputed == pytest.approx(tetra_witness.residual, abs=1e-12)

    def test_pair_is_collinear_through_the_center(self, tetra_witness, tetra_center):
        p = tetra_center.center
        da = sub(tetra_witness.a, p)
        db = sub(tetra_witness.b, p)
        cx = (
            da[1] * db[2] - da[2] * db[1],
            da[2] * db[0] - da[0] * db[2],
            da[0] * db[1] - da[1] * db[0],
        )
        sine = norm(cx) / (norm(da) * norm(db))
        assert sine <= 1e-5

    def test_center_strictly_between_the_pair(self, tetra_witness, tetra_center):
        p = tetra_center.center
        da = sub(tetra_witness.a, p)
        db = sub(tetra_witness.b, p)
        assert sum(x * y for x, y in zip(da, db)) < 0

    def test_witness_location_is_valid(self, tetra, tetra_witness):
        assert tetra_witness.component == 0
        assert 0 <= tetra_witness.triangle < tetra.rc.n_triangles
        assert sum(tetra_witness.bary) == pytest.approx(1.0, abs=1e-9)
        assert all(b >= 0 for b in tetra_witness.bary)

    def test_accepts_a_bare_center_point(self, tetra, tetra_center, tetra_witness):
        base = find_base_component(tetra.rc)
        w = find_equivariant_pair(tetra.rc, base.component, tetra_center.center)
        assert (w.a, w.b, w.residual) == (
            tetra_witness.a,
            tetra_witness.b,
            tetra_witness.residual,
        )


class TestPathToDiagonal:
    def test_path_starts_at_witness_and_ends_on_diagonal(self, tetra, tetra_witness):
        routed = path_to_diagonal(tetra.rc, tetra_witness)
        assert routed.path is not None and len(routed.path) >= 2
        assert routed.path[0] == (tetra_witness.a, tetra_witness.b)
        final_a, final_b = routed.path[-1]
        assert final_a == final_b  # separation is exactly zero here

    def test_intermediate_stops_are_paired_vertices(self, tetra):
        base = find_base_component(tetra.rc)
        center = estimate_center(tetra.mesh)
        routed = path_to_diagonal(
            tetra.rc, find_equivariant_pair(tetra.rc, base.component, center)
        )
        vertex_pairs = {
            tuple(
                tuple(float(c) for c in p)
                for p in tetra.rc.vertex_pair_points(v)
            )
            for v in range(len(tetra.rc.vertices))
        }
        for stop in routed.path[1:]:
            assert stop in vertex_pairs

    def test_witness_fields_preserved(self, tetra, tetra_witness):
        routed = path_to_diagonal(tetra.rc, tetra_witness)
        assert routed.a == tetra_witness.a
        assert routed.b == tetra_witness.b
        assert routed.triangle == tetra_witness.triangle

    def test_component_without_diagonal_raises(self, tetra, tetra_witness):
        stripped = dataclasses.replace(
            tetra.rc, diagonal_flags=[False] * len(tetra.rc.diagonal_flags)
        )
        with pytest.raises(HopfError, match="no diagonal vertex in component"):
            path_to_diagonal(stripped, tetra_witness)
