"""Exact rational geometric predicates and constructions.

Points are tuples of ``fractions.Fraction``.  The predicates below never
round: they extract numerators/denominators and decide signs with integer
arithmetic only, so no intermediate Fraction objects (and no gcd calls) are
created in the hot paths.  Constructions (intersection points, barycentric
solves) return ordinary Fractions, which are canonical and hashable, so
exact deduplication of points is a dict lookup.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Optional, Sequence, Tuple

Point2 = Tuple[Fraction, Fraction]
Point3 = Tuple[Fraction, Fraction, Fraction]


class CollinearOverlapError(ValueError):
    """Two segments overlap along a common line segment."""


def _sign(x: int) -> int:
    if x > 0:
        return 1
    if x < 0:
        return -1
    return 0


def orient2d(a: Point2, b: Point2, c: Point2) -> int:
    """Sign of the cross product (b-a) x (c-a): +1 ccw, -1 cw, 0 collinear."""
    axn, axd = a[0].numerator, a[0].denominator
    ayn, ayd = a[1].numerator, a[1].denominator
    bxn, bxd = b[0].numerator, b[0].denominator
    byn, byd = b[1].numerator, b[1].denominator
    cxn, cxd = c[0].numerator, c[0].denominator
    cyn, cyd = c[1].numerator, c[1].denominator
    # (b-a)_x = p/dp, (c-a)_y = q/dq, (b-a)_y = r/dr, (c-a)_x = s/ds
    p = bxn * axd - axn * bxd
    dp = bxd * axd
    q = cyn * ayd - ayn * cyd
    dq = cyd * ayd
    r = byn * ayd - ayn * byd
    dr = byd * ayd
    s = cxn * axd - axn * cxd
    ds = cxd * axd
    return _sign(p * q * dr * ds - r * s * dp * dq)


def in_circumcircle(a: Point2, b: Point2, c: Point2, d: Point2) -> int:
    """+1 if d lies strictly inside the circumcircle of triangle abc,
    -1 if strictly outside, 0 if cocircular.  abc may have either
    orientation but must not be degenerate."""
    o = orient2d(a, b, c)
    if o == 0:
        raise ValueError("degenerate triangle in in_circumcircle")
    rows = []
    dxn, dxd = d[0].numerator, d[0].denominator
    dyn, dyd = d[1].numerator, d[1].denominator
    for p in (a, b, c):
        pxn, pxd = p[0].numerator, p[0].denominator
        pyn, pyd = p[1].numerator, p[1].denominator
        u = pxn * dxd - dxn * pxd        # (p-d)_x = u/du
        du = pxd * dxd
        v = pyn * dyd - dyn * pyd        # (p-d)_y = v/dv
        dv = pyd * dyd
        # scale the row by (du*dv)^2 > 0
        rows.append((u * du * dv * dv, v * dv * du * du,
                     u * u * dv * dv + v * v * du * du))
    (a0, a1, a2), (b0, b1, b2), (c0, c1, c2) = rows
    det = (a0 * (b1 * c2 - b2 * c1)
           - a1 * (b0 * c2 - b2 * c0)
           + a2 * (b0 * c1 - b1 * c0))
    return _sign(det) * o


def point_in_triangle_2d(p: Point2, a: Point2, b: Point2, c: Point2) -> int:
    """+1 strictly inside, 0 on the boundary, -1 outside.  abc in any
    orientation, nondegenerate."""
    o = orient2d(a, b, c)
    if o == 0:
        raise ValueError("degenerate triangle in point_in_triangle_2d")
    s1 = orient2d(a, b, p) * o
    s2 = orient2d(b, c, p) * o
    s3 = orient2d(c, a, p) * o
    if s1 < 0 or s2 < 0 or s3 < 0:
        return -1
    if s1 > 0 and s2 > 0 and s3 > 0:
        return 1
    return 0


def _between_collinear(p: Point2, a: Point2, b: Point2) -> bool:
    """p assumed on line ab; is it on the closed segment?"""
    lo, hi = (a[0], b[0]) if a[0] <= b[0] else (b[0], a[0])
    if not (lo <= p[0] <= hi):
        return False
    lo, hi = (a[1], b[1]) if a[1] <= b[1] else (b[1], a[1])
    return lo <= p[1] <= hi


def on_segment(p: Point2, a: Point2, b: Point2) -> bool:
    """Is p on the closed segment [a, b]?"""
    return orient2d(a, b, p) == 0 and _between_collinear(p, a, b)


def segment_intersection(a: Point2, b: Point2, c: Point2, d: Point2
                         ) -> Optional[Tuple[Point2, bool]]:
    """Intersection of closed segments [a,b] and [c,d].

    Returns None if they are disjoint, or (point, proper) where proper is
    True for a crossing in both relative interiors.  Raises
    CollinearOverlapError when the segments share more than one point.
    """
    o1 = orient2d(c, d, a)
    o2 = orient2d(c, d, b)
    o3 = orient2d(a, b, c)
    o4 = orient2d(a, b, d)

    if o1 == 0 and o2 == 0:
        # collinear: a touch at a single shared endpoint is allowed
        touches = []
        for p in (a, b):
            if _between_collinear(p, c, d):
                touches.append(p)
        for p in (c, d):
            if _between_collinear(p, a, b) and p not in touches:
                touches.append(p)
        if not touches:
            return None
        if len(touches) == 1:
            return touches[0], False
        raise CollinearOverlapError("segments overlap along a line")

    if o1 * o2 < 0 and o3 * o4 < 0:
        # proper crossing: a + t(b-a), t = cross(c-a, d-c)/cross(b-a, d-c)
        bax, bay = b[0] - a[0], b[1] - a[1]
        dcx, dcy = d[0] - c[0], d[1] - c[1]
        cax, cay = c[0] - a[0], c[1] - a[1]
        denom = bax * dcy - bay * dcx
        t = (cax * dcy - cay * dcx) / denom
        return (a[0] + t * bax, a[1] + t * bay), True

    # touching cases: an endpoint of one lies on the other segment
    if o1 == 0 and _between_collinear(a, c, d):
        return a, False
    if o2 == 0 and _between_collinear(b, c, d):
        return b, False
    if o3 == 0 and _between_collinear(c, a, b):
        return c, False
    if o4 == 0 and _between_collinear(d, a, b):
        return d, False
    return None


def barycentric_2d(p: Point2, a: Point2, b: Point2, c: Point2
                   ) -> Tuple[Fraction, Fraction, Fraction]:
    """Exact barycentric coordinates of p with respect to triangle abc."""
    v0x, v0y = a[0] - c[0], a[1] - c[1]
    v1x, v1y = b[0] - c[0], b[1] - c[1]
    px, py = p[0] - c[0], p[1] - c[1]
    det = v0x * v1y - v0y * v1x
    if det == 0:
        raise ValueError("degenerate triangle in barycentric_2d")
    alpha = (px * v1y - py * v1x) / det
    beta = (v0x * py - v0y * px) / det
    return alpha, beta, 1 - alpha - beta


def triangle_area2_2d(a: Point2, b: Point2, c: Point2) -> Fraction:
    """Twice the signed area of triangle abc (exact)."""
    return ((b[0] - a[0]) * (c[1] - a[1])
            - (b[1] - a[1]) * (c[0] - a[0]))


# ---------------------------------------------------------------------------
# 3d


def orient3d(a: Point3, b: Point3, c: Point3, d: Point3) -> int:
    """Sign of det[b-a; c-a; d-a].  Positive when d is on the side of
    plane abc given by the right-hand rule."""
    rows = []
    an = (a[0].numerator, a[1].numerator, a[2].numerator)
    ad = (a[0].denominator, a[1].denominator, a[2].denominator)
    for p in (b, c, d):
        nums = []
        dens = []
        for i in range(3):
            pn, pd = p[i].numerator, p[i].denominator
            nums.append(pn * ad[i] - an[i] * pd)
            dens.append(pd * ad[i])
        # scale the row by the product of its three positive denominators
        d0, d1, d2 = dens
        rows.append((nums[0] * d1 * d2, nums[1] * d0 * d2, nums[2] * d0 * d1))
    (r0, r1, r2), (s0, s1, s2), (t0, t1, t2) = rows
    det = (r0 * (s1 * t2 - s2 * t1)
           - r1 * (s0 * t2 - s2 * t0)
           + r2 * (s0 * t1 - s1 * t0))
    return _sign(det)


def sub3(a: Point3, b: Point3) -> Point3:
    return (a[0] - b[0], a[1] - b[1], a[2] - b[2])


def cross3(a: Point3, b: Point3) -> Point3:
    return (a[1] * b[2] - a[2] * b[1],
            a[2] * b[0] - a[0] * b[2],
            a[0] * b[1] - a[1] * b[0])


def dot3(a: Point3, b: Point3) -> Fraction:
    return a[0] * b[0] + a[1] * b[1] + a[2] * b[2]


def point_in_triangle_3d(p: Point3, a: Point3, b: Point3, c: Point3) -> int:
    """Membership of p in the closed triangle abc, all assumed coplanar.
    +1 strictly inside, 0 on the boundary, -1 outside."""
    n = cross3(sub3(b, a), sub3(c, a))
    # project out the dominant normal axis and test in 2d
    ax = max(range(3), key=lambda i: abs(n[i]))
    keep = [i for i in range(3) if i != ax]
    p2 = (p[keep[0]], p[keep[1]])
    a2 = (a[keep[0]], a[keep[1]])
    b2 = (b[keep[0]], b[keep[1]])
    c2 = (c[keep[0]], c[keep[1]])
    return point_in_triangle_2d(p2, a2, b2, c2)


def as_float2(p: Point2) -> Tuple[float, float]:
    return float(p[0]), float(p[1])


def as_float3(p: Point3) -> Tuple[float, float, float]:
    return float(p[0]), float(p[1]), float(p[2])


def parse_rational(token: str) -> Fraction:
    """Parse a decimal or p/q token to an exact Fraction."""
    return Fraction(token)


def fractions_2d(x, y) -> Point2:
    return Fraction(x), Fraction(y)


def fractions_3d(x, y, z) -> Point3:
    return Fraction(x), Fraction(y), Fraction(z)
