#!/usr/bin/env python3
"""Construct the optional torus fixture used by the acceptance suite.

The goal is a convex boundary and a general-position planar map whose
resolved pair complex is a single orientable genus-1 surface.  Folded
random-image maps reach genus 1 readily; this script scans seeded
instances of the bundled generator until it finds one whose resolved
complex is connected with Euler characteristic 0 and orientable, then
freezes it as exact-rational OFF/JSON fixture files.

Run from the repository root:

    python3 tools/make_torus_fixture.py [--out tests/fixtures]

The scan is deterministic, so the files it writes are reproducible.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from fneighbors.cdt import constrained_delaunay, restrict_to_image
from fneighbors.cli_io import generate_instance
from fneighbors.image_arrangement import build_pslg
from fneighbors.induced import pull_back
from fneighbors.neighbor_complex import (
    analyze_components,
    build_complex,
    resolve_singularities,
    verify_edge_manifold,
)

# First (seed, n_points) pair in scan order that yields a connected
# orientable genus-1 resolution with the bundled generator; kept
# explicit so reruns do not depend on scan speed.
KNOWN_GOOD = (132, 8)


def resolved_topology(seed: int, n_points: int):
    mesh, pmap = generate_instance("random-images", seed=seed, n_points=n_points)
    pslg = build_pslg(mesh, pmap)
    tri = restrict_to_image(constrained_delaunay(pslg), mesh, pmap)
    ind = pull_back(tri, mesh, pmap)
    cx = build_complex(ind)
    if verify_edge_manifold(cx).violations:
        return mesh, pmap, None
    rc = resolve_singularities(cx)
    infos = analyze_components(rc, mesh)
    return mesh, pmap, infos


def is_single_torus(infos) -> bool:
    return (
        infos is not None
        and len(infos) == 1
        and infos[0].euler_characteristic == 0
        and infos[0].orientable
        and infos[0].genus == 1
    )


def find_instance(max_seeds: int):
    seed, n = KNOWN_GOOD
    mesh, pmap, infos = resolved_topology(seed, n)
    if is_single_torus(infos):
        return mesh, pmap, infos, (seed, n)
    for seed in range(max_seeds):
        for n in (8, 9, 10, 11, 12):
            try:
                mesh, pmap, infos = resolved_topology(seed, n)
            except Exception:
                continue
            if is_single_torus(infos):
                return mesh, pmap, infos, (seed, n)
    raise SystemExit("no suitable instance found; raise --max-seeds")


def write_off(mesh, path: Path) -> None:
    lines = ["OFF", "%d %d 0" % (len(mesh.vertices), len(mesh.triangles))]
    for v in mesh.vertices:
        lines.append(" ".join(str(c) for c in v))
    for t in mesh.triangles:
        lines.append("3 %d %d %d" % t)
    path.write_text("\n".join(lines) + "\n")


def write_map(pmap, path: Path) -> None:
    payload = {"images": [[str(x), str(y)] for x, y in pmap.images]}
    path.write_text(json.dumps(payload, indent=2) + "\n")


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--out", default="tests/fixtures",
                        help="directory for torus.off / torus_map.json")
    parser.add_argument("--max-seeds", type=int, default=2000,
                        help="scan budget if the known instance regresses")
    args = parser.parse_args(argv)

    mesh, pmap, infos, (seed, n) = find_instance(args.max_seeds)
    info = infos[0]
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    write_off(mesh, out / "torus.off")
    write_map(pmap, out / "torus_map.json")
    print(
        "wrote %s and %s (seed=%d, hull of %d points): connected, "
        "chi=%d, orientable=%s, genus=%s"
        % (out / "torus.off", out / "torus_map.json", seed, n,
           info.euler_characteristic, info.orientable, info.genus)
    )
    return 0


if __name__ == "__main__":
    sys.exit(main())
