"""Exact rational geometry predicates and helpers.

Reference values below were derived by hand from the determinant
definitions (signed parallelogram areas, 3x3 / 4x4 minors) on small
integer inputs, so every assertion is an independent check of the sign
conventions rather than a regression snapshot.
"""

from fractions import Fraction as F

import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from fneighbors import exact

# Small exact rationals keep determinant arithmetic fast in properties.
coords = st.fractions(
    min_value=-8, max_value=8, max_denominator=16
)
point2 = st.tuples(coords, coords)
point3 = st.tuples(coords, coords, coords)


class TestOrient2d:
    def test_counterclockwise_is_positive(self):
        assert exact.orient2d((F(0), F(0)), (F(1), F(0)), (F(0), F(1))) == 1

    def test_clockwise_is_negative(self):
        assert exact.orient2d((F(0), F(0)), (F(0), F(1)), (F(1), F(0))) == -1

    def test_collinear_is_zero(self):
        assert exact.orient2d((F(0), F(0)), (F(1), F(1)), (F(2), F(2))) == 0

    @given(point2, point2, point2)
    def test_swapping_two_points_flips_sign(self, a, b, c):
        assert exact.orient2d(a, b, c) == -exact.orient2d(b, a, c)

    @given(point2, point2, point2)
    def test_cyclic_rotation_preserves_sign(self, a, b, c):
        assert exact.orient2d(a, b, c) == exact.orient2d(b, c, a)

    @given(point2, point2)
    def test_degenerate_repeated_point_is_zero(self, a, b):
        assert exact.orient2d(a, a, b) == 0


class TestOrient3d:
    def test_right_handed_basis_is_positive(self):
        o = (F(0), F(0), F(0))
        assert (
            exact.orient3d(o, (F(1), F(0), F(0)), (F(0), F(1), F(0)), (F(0), F(0), F(1)))
            == 1
        )

    def test_swapped_basis_is_negative(self):
        o = (F(0), F(0), F(0))
        assert (
            exact.orient3d(o, (F(0), F(1), F(0)), (F(1), F(0), F(0)), (F(0), F(0), F(1)))
            == -1
        )

    def test_coplanar_is_zero(self):
        o = (F(0), F(0), F(0))
        assert (
            exact.orient3d(o, (F(1), F(0), F(0)), (F(0), F(1), F(0)), (F(1), F(1), F(0)))
            == 0
        )

    @given(point3, point3, point3, point3)
    @settings(max_examples=50)
    def test_swapping_two_points_flips_sign(self, a, b, c, d):
        assert exact.orient3d(a, b, c, d) == -exact.orient3d(a, c, b, d)


class TestInCircumcircle:
    # Circle through (0,0), (2,0), (0,2) has center (1,1), radius sqrt(2).
    TRI = ((F(0), F(0)), (F(2), F(0)), (F(0), F(2)))

    def test_interior_point_is_positive(self):
        assert exact.in_circumcircle(*self.TRI, (F(1), F(1))) == 1

    def test_exterior_point_is_negative(self):
        assert exact.in_circumcircle(*self.TRI, (F(3), F(3))) == -1

    def test_cocircular_point_is_zero(self):
        assert exact.in_circumcircle(*self.TRI, (F(2), F(2))) == 0

    @given(point2, point2, point2, point2)
    @settings(max_examples=50)
    def test_cyclic_rotation_of_triangle_preserves_sign(self, a, b, c, d):
        assume(exact.orient2d(a, b, c) != 0)
        assert exact.in_circumcircle(a, b, c, d) == exact.in_circumcircle(b, c, a, d)


class TestSegmentIntersection:
    def test_proper_crossing_returns_point_and_flag(self):
        hit = exact.segment_intersection(
            (F(0), F(0)), (F(2), F(2)), (F(0), F(2)), (F(2), F(0))
        )
        assert hit == ((F(1), F(1)), True)

    def test_endpoint_touch_is_not_proper(self):
        hit = exact.segment_intersection(
            (F(0), F(0)), (F(2), F(2)), (F(1), F(1)), (F(3), F(0))
        )
        assert hit == ((F(1), F(1)), False)

    def test_disjoint_parallel_segments_return_none(self):
        hit = exact.segment_intersection(
            (F(0), F(0)), (F(1), F(0)), (F(0), F(2)), (F(1), F(2))
        )
        assert hit is None

    @given(point2, point2, point2, point2)
    @settings(max_examples=50)
    def test_symmetric_in_segment_order(self, a, b, c, d):
        assume(a != b and c != d)
        try:
            first = exact.segment_intersection(a, b, c, d)
        except exact.CollinearOverlapError:
            with pytest.raises(exact.CollinearOverlapError):
                exact.segment_intersection(c, d, a, b)
            return
        second = exact.segment_intersection(c, d, a, b)
        assert first == second

    def test_collinear_overlap_raises(self):
        with pytest.raises(exact.CollinearOverlapError):
            exact.segment_intersection(
                (F(0), F(0)), (F(2), F(2)), (F(1), F(1)), (F(3), F(3))
            )


class TestOnSegment:
    def test_interior_point(self):
        assert exact.on_segment((F(1), F(1)), (F(0), F(0)), (F(2), F(2)))

    def test_endpoint(self):
        assert exact.on_segment((F(2), F(2)), (F(0), F(0)), (F(2), F(2)))

    def test_off_segment(self):
        assert not exact.on_segment((F(1), F(0)), (F(0), F(0)), (F(2), F(2)))

    def test_collinear_but_outside(self):
        assert not exact.on_segment((F(3), F(3)), (F(0), F(0)), (F(2), F(2)))


class TestParseRational:
    def test_fraction_string(self):
        assert exact.parse_rational("3/4") == F(3, 4)

    def test_decimal_string_is_exact(self):
        assert exact.parse_rational("0.25") == F(1, 4)

    def test_float_uses_exact_binary_value(self):
        assert exact.parse_rational(0.5) == F(1, 2)

    def test_integer_passthrough(self):
        assert exact.parse_rational(7) == F(7)

    def test_invalid_literal_raises(self):
        with pytest.raises(ValueError):
            exact.parse_rational("abc")


class TestBarycentric:
    TRI = ((F(0), F(0)), (F(4), F(0)), (F(0), F(4)))

    def test_known_interior_point(self):
        assert exact.barycentric_2d((F(1), F(1)), *self.TRI) == (
            F(1, 2),
            F(1, 4),
            F(1, 4),
        )

    def test_vertices_map_to_unit_weights(self):
        a, b, c = self.TRI
        assert exact.barycentric_2d(a, *self.TRI) == (F(1), F(0), F(0))
        assert exact.barycentric_2d(b, *self.TRI) == (F(0), F(1), F(0))
        assert exact.barycentric_2d(c, *self.TRI) == (F(0), F(0), F(1))

    @given(
        st.fractions(min_value=0, max_value=1, max_denominator=32),
        st.fractions(min_value=0, max_value=1, max_denominator=32),
    )
    def test_roundtrip_through_affine_combination(self, u, v):
        if u + v > 1:
            u, v = 1 - u, 1 - v
        w = 1 - u - v
        a, b, c = self.TRI
        p = (
            u * a[0] + v * b[0] + w * c[0],
            u * a[1] + v * b[1] + w * c[1],
        )
        assert exact.barycentric_2d(p, a, b, c) == (u, v, w)


class TestPointInTriangle:
    TRI2 = ((F(0), F(0)), (F(4), F(0)), (F(0), F(4)))

    def test_strict_interior_is_positive(self):
        assert exact.point_in_triangle_2d((F(1), F(1)), *self.TRI2) == 1

    def test_boundary_is_zero(self):
        assert exact.point_in_triangle_2d((F(2), F(0)), *self.TRI2) == 0

    def test_exterior_is_negative(self):
        assert exact.point_in_triangle_2d((F(4), F(4)), *self.TRI2) == -1

    def test_coplanar_3d_interior(self):
        tri = ((F(0), F(0), F(0)), (F(4), F(0), F(0)), (F(0), F(4), F(0)))
        assert exact.point_in_triangle_3d((F(1), F(1), F(0)), *tri) == 1


class TestVectorHelpers:
    def test_doubled_area_of_right_triangle(self):
        assert (
            exact.triangle_area2_2d((F(0), F(0)), (F(4), F(0)), (F(0), F(4))) == 16
        )

    def test_cross_of_basis_vectors(self):
        assert exact.cross3((F(1), F(0), F(0)), (F(0), F(1), F(0))) == (
            F(0),
            F(0),
            F(1),
        )

    def test_dot_product(self):
        assert exact.dot3((F(1), F(2), F(3)), (F(4), F(5), F(6))) == 32

    def test_vector_difference(self):
        assert exact.sub3((F(4), F(5), F(6)), (F(1), F(2), F(3))) == (
            F(3),
            F(3),
            F(3),
        )

    def test_rational_constructors_and_float_views(self):
        p2 = exact.fractions_2d(1, "1/2")
        p3 = exact.fractions_3d(1, "1/2", 0.25)
        assert p2 == (F(1), F(1, 2))
        assert p3 == (F(1), F(1, 2), F(1, 4))
        assert exact.as_float2(p2) == (1.0, 0.5)
        assert exact.as_float3(p3) == (1.0, 0.5, 0.25)
