"""Shared fixtures and oracle helpers for the test suite.

The heavyweight pipeline stages (arrangement, triangulation, pull-back,
pair complex) are built once per session for the small reference meshes
and shared across test modules through session-scoped fixtures.
"""

from __future__ import annotations

from pathlib import Path
from types import SimpleNamespace

import pytest
from hypothesis import HealthCheck, settings as hyp_settings

from fneighbors.cdt import constrained_delaunay, restrict_to_image
from fneighbors.image_arrangement import build_pslg, load_planar_map
from fneighbors.induced import pull_back
from fneighbors.mesh_core import load_surface_mesh
from fneighbors.neighbor_complex import (
    analyze_components,
    build_complex,
    resolve_singularities,
    verify_edge_manifold,
)

hyp_settings.register_profile(
    "suite",
    max_examples=25,
    deadline=None,
    suppress_health_check=[HealthCheck.too_slow],
)
hyp_settings.load_profile("suite")

FIXTURES = Path(__file__).parent / "fixtures"


def fixture_path(name: str) -> Path:
    """Absolute path of a bundled test fixture file."""
    path = FIXTURES / name
    if not path.exists():
        raise FileNotFoundError(path)
    return path


def build_pair_complex(mesh, pmap) -> SimpleNamespace:
    """Run the full pipeline from a mesh and planar map to component info.

    Returns a namespace with every intermediate stage so tests can assert
    against any of them without re-running the expensive steps.
    """
    pslg = build_pslg(mesh, pmap)
    tri = restrict_to_image(constrained_delaunay(pslg), mesh, pmap)
    ind = pull_back(tri, mesh, pmap)
    cx = build_complex(ind)
    report = verify_edge_manifold(cx)
    rc = resolve_singularities(cx)
    infos = analyze_components(rc, mesh)
    return SimpleNamespace(
        mesh=mesh,
        pmap=pmap,
        pslg=pslg,
        tri=tri,
        ind=ind,
        cx=cx,
        report=report,
        rc=rc,
        infos=infos,
    )


@pytest.fixture(scope="session")
def tetra_mesh():
    return load_surface_mesh(fixture_path("tetra.off"))


@pytest.fixture(scope="session")
def tetra_map(tetra_mesh):
    return load_planar_map(fixture_path("tetra_map.json"), len(tetra_mesh.vertices))


@pytest.fixture(scope="session")
def tetra(tetra_mesh, tetra_map):
    """Full pipeline output for the reference tetrahedron."""
    return build_pair_complex(tetra_mesh, tetra_map)


@pytest.fixture(scope="session")
def octa_mesh():
    return load_surface_mesh(fixture_path("octahedron.off"))


def all_links_single_cycles(rc) -> list:
    """Bulk version of the link oracle: returns the vertex ids whose link
    is NOT a single closed cycle (empty list means the surface is a
    closed 2-manifold at every vertex)."""
    incident: dict[int, list[tuple[int, int]]] = {}
    for tri in rc.triangles:
        a, b, c = tri
        incident.setdefault(a, []).append((b, c))
        incident.setdefault(b, []).append((c, a))
        incident.setdefault(c, []).append((a, b))
    bad = []
    for vid in range(len(rc.vertices)):
        edges = incident.get(vid, [])
        if not edges or not _edges_form_single_cycle(edges):
            bad.append(vid)
    return bad


def _edges_form_single_cycle(edges) -> bool:
    degree: dict[int, list[int]] = {}
    for idx, (a, b) in enumerate(edges):
        degree.setdefault(a, []).append(idx)
        degree.setdefault(b, []).append(idx)
    if any(len(ids) != 2 for ids in degree.values()):
        return False
    used = [False] * len(edges)
    start = edges[0][0]
    cur = start
    steps = 0
    while True:
        nxt = next((i for i in degree[cur] if not used[i]), None)
        if nxt is None:
            break
        used[nxt] = True
        a, b = edges[nxt]
        cur = b if cur == a else a
        steps += 1
    return cur == start and steps == len(edges)


def link_is_single_cycle(rc, vid: int) -> bool:
    """Independent oracle: the link of a vertex is one closed cycle.

    Collects the edge opposite ``vid`` in every incident triangle and
    checks that these edges form a connected graph in which every link
    vertex has degree exactly two — i.e. a single closed loop.
    """
    edges = []
    for tri in rc.triangles:
        if vid in tri:
            rest = [v for v in tri if v != vid]
            if len(rest) != 2:  # degenerate corner list
                return False
            edges.append(tuple(rest))
    return bool(edges) and _edges_form_single_cycle(edges)
