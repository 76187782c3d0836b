"""Brute-force cross-check of the pair complex against its definition.

Both directions are sampled: random points of the image must have every
ordered pair of distinct preimage lifts present as a complex triangle, and
random points of complex triangles must project to a single image point
(exact equality on both factors).  All membership tests are exact; points
landing on triangulation boundaries are resampled and logged.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import List, Optional, Tuple

import numpy as np

from ..exact import orient2d
from ..image_arrangement import PlanarMap
from ..mesh_core import SurfaceMesh
from ..neighbor_complex import NeighborComplex

BARY_QUANTUM = 1 << 16


@dataclass
class OracleReport:
    passed: bool
    n_samples: int
    location_checks: int
    pair_checks: int
    resampled: int
    failures: List[dict] = field(default_factory=list)


def _strict_inside(q, a, b, c) -> Optional[bool]:
    """True if strictly inside, False if strictly outside, None on the
    boundary (any zero orientation)."""
    s1 = orient2d(a, b, q)
    s2 = orient2d(b, c, q)
    s3 = orient2d(c, a, q)
    if s1 == 0 or s2 == 0 or s3 == 0:
        if (s1 >= 0 and s2 >= 0 and s3 >= 0) or \
           (s1 <= 0 and s2 <= 0 and s3 <= 0):
            return None
        return False
    return (s1 > 0) == (s2 > 0) == (s3 > 0)


def _quant_bary(rng: np.random.Generator) -> Optional[Tuple[Fraction, ...]]:
    r1, r2 = rng.random(), rng.random()
    s = r1 ** 0.5
    w = (1.0 - s, s * (1.0 - r2), s * r2)
    q = [Fraction(int(round(x * BARY_QUANTUM)), BARY_QUANTUM) for x in w[:2]]
    q.append(1 - q[0] - q[1])
    if any(x <= 0 for x in q):
        return None
    return tuple(q)


def oracle_check(mesh: SurfaceMesh, pmap: PlanarMap, cx: NeighborComplex,
                 n: int = 10000, seed: int = 0,
                 max_failures: int = 20) -> OracleReport:
    """Sample `n` points for each direction of the pair characterization."""
    ind = cx.induced
    rng = np.random.default_rng(seed)
    failures: List[dict] = []
    resampled = 0

    # float image geometry of every induced triangle, for the bbox prefilter
    n_ind = len(ind.triangles)
    corners_img = []
    for ti in range(n_ind):
        tri = ind.triangles[ti]
        corners_img.append([ind.vertex_images[v] for v in tri.corners])
    fimg = np.array([[[float(c[0]), float(c[1])] for c in tri]
                     for tri in corners_img])
    lo = fimg.min(axis=1)           # (n_ind, 2)
    hi = fimg.max(axis=1)

    inside_cd = ind.planar.inside_indices()
    cd_corners = [[ind.planar.points[v] for v in ind.planar.triangles[cd]]
                  for cd in inside_cd]
    areas = np.array([abs(float((b[0] - a[0]) * (c[1] - a[1])
                                - (c[0] - a[0]) * (b[1] - a[1]))) / 2.0
                      for a, b, c in cd_corners])
    weights = areas / areas.sum()

    location_checks = 0
    done = 0
    budget = 20 * n
    while done < n and budget > 0:
        budget -= 1
        pick = int(rng.choice(len(inside_cd), p=weights))
        w = _quant_bary(rng)
        if w is None:
            resampled += 1
            continue
        a, b, c = cd_corners[pick]
        q = (w[0] * a[0] + w[1] * b[0] + w[2] * c[0],
             w[0] * a[1] + w[1] * b[1] + w[2] * c[1])
        qf = (float(q[0]), float(q[1]))
        mask = ((lo[:, 0] <= qf[0]) & (hi[:, 0] >= qf[0])
                & (lo[:, 1] <= qf[1]) & (hi[:, 1] >= qf[1]))
        containing = []
        boundary = False
        for ti in np.nonzero(mask)[0]:
            res = _strict_inside(q, *corners_img[int(ti)])
            if res is None:
                boundary = True
                break
            if res:
                containing.append(int(ti))
        if boundary:
            resampled += 1
            continue
        done += 1
        for A in containing:
            for B in containing:
                if A == B:
                    continue
                location_checks += 1
                if (A, B) not in cx.pair_id:
                    if len(failures) < max_failures:
                        failures.append({
                            "kind": "uncovered-pair",
                            "point": [str(q[0]), str(q[1])],
                            "pair": [A, B],
                        })

    pair_checks = 0
    done_pairs = 0
    budget = 20 * n
    while done_pairs < n and budget > 0 and cx.triangles:
        budget -= 1
        pid = int(rng.integers(len(cx.triangles)))
        w = _quant_bary(rng)
        if w is None:
            resampled += 1
            continue
        done_pairs += 1
        A, B = cx.triangles[pid]
        ca = ind.triangles[A].corners
        cb = ind.triangles[B].corners
        fa = tuple(sum(w[s] * ind.vertex_images[ca[s]][k] for s in range(3))
                   for k in range(2))
        fb = tuple(sum(w[s] * ind.vertex_images[cb[s]][k] for s in range(3))
                   for k in range(2))
        pair_checks += 1
        if fa != fb:
            if len(failures) < max_failures:
                failures.append({
                    "kind": "image-mismatch",
                    "pair_triangle": pid,
                    "bary": [str(x) for x in w],
                })

    return OracleReport(passed=not failures, n_samples=n,
                        location_checks=location_checks,
                        pair_checks=pair_checks,
                        resampled=resampled, failures=failures)
