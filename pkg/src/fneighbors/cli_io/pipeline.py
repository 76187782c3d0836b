"""Staged pipeline: load and validate, arrange and triangulate the image,
pull back, build and resolve the pair complex, find the antipodal witness,
and extract level sets.  Produces a deterministic report; all volatile data
(wall-clock times) lives under the single "timestamps" key."""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple

from ..cdt import (ImageTriangulation, constrained_delaunay,
                   covered_area_identity, restrict_to_image)
from ..image_arrangement import (GeneralPositionError, MapError, PlanarMap,
                                 build_pslg, check_general_position,
                                 load_planar_map)
from ..induced import (InducedTriangulation, pull_back,
                       refinement_area_identity)
from ..levelset import LevelSetResult, lift_distance, separation_check
from ..mesh_core import (MeshError, MeshValidationError, SurfaceMesh,
                         load_surface_mesh, validate_surface)
from ..neighbor_complex import (NeighborComplex, ResolvedComplex,
                                analyze_components, build_complex,
                                find_base_component, resolve_singularities,
                                verify_edge_manifold)
from ..hopf import estimate_center, find_equivariant_pair, path_to_diagonal
from .generators import MAP_KINDS, generate_map

STAGES = ("validate", "triangulate", "complex", "hopf", "levelset", "all")

VALIDATION_ERRORS = (MeshError, MapError, GeneralPositionError)


class ConfigError(ValueError):
    """The run configuration is incomplete or inconsistent."""


@dataclass
class RunConfig:
    mesh: Optional[str] = None
    map: Optional[str] = None
    gen: Optional[str] = None
    seed: int = 0
    deltas: Tuple[object, ...] = ()
    out_dir: str = "."
    svg: bool = False
    obj: bool = False
    report: bool = False
    tol_residual: float = 1e-6
    tol_level: Optional[float] = None
    max_depth: int = 8
    stage: str = "all"

    def validate(self) -> None:
        if self.mesh is None:
            raise ConfigError("a mesh path is required")
        if self.map is None and self.gen is None:
            raise ConfigError("either a map path or a generator is required")
        if self.map is not None and self.gen is not None:
            raise ConfigError("give a map path or a generator, not both")
        if self.gen is not None and self.gen not in MAP_KINDS:
            raise ConfigError("unknown generator %r (choose from %s)"
                              % (self.gen, ", ".join(MAP_KINDS)))
        if self.tol_residual <= 0:
            raise ConfigError("tol-residual must be positive")
        if self.tol_level is not None and self.tol_level <= 0:
            raise ConfigError("tol-level must be positive")
        if self.max_depth < 0:
            raise ConfigError("max-depth must be nonnegative")
        if self.stage not in STAGES:
            raise ConfigError("unknown stage %r" % (self.stage,))
        for spec in self.deltas:
            parse_delta(spec)


def parse_delta(spec) -> Tuple[str, float]:
    """A delta is an absolute length, or a fraction of the antipodal width
    when written with a trailing D (e.g. "0.5D", "0.5*D_hat")."""
    if isinstance(spec, (int, float)):
        value = float(spec)
        if value <= 0:
            raise ConfigError("delta must be positive: %r" % (spec,))
        return ("absolute", value)
    text = str(spec).strip().lower().replace(" ", "")
    kind, number = "absolute", text
    for suffix in ("*d_hat", "*dhat", "*d", "d_hat", "dhat", "d"):
        if text.endswith(suffix):
            kind, number = "of-width", text[:-len(suffix)]
            break
    try:
        value = float(number)
    except ValueError:
        raise ConfigError("invalid delta %r (use a length like 1.5 or a"
                          " width fraction like 0.5D)" % (spec,)) from None
    if value <= 0:
        raise ConfigError("delta must be positive: %r" % (spec,))
    return (kind, value)


class StageError(RuntimeError):
    """A pipeline stage failed; the partial report is retained."""

    def __init__(self, stage: str, original: BaseException,
                 report: "RunReport"):
        super().__init__("%s: %s" % (stage, original))
        self.stage = stage
        self.original = original
        self.report = report

    @property
    def is_validation(self) -> bool:
        return isinstance(self.original, VALIDATION_ERRORS)


@dataclass
class RunReport:
    config: dict = field(default_factory=dict)
    validation: Optional[dict] = None
    general_position: Optional[dict] = None
    arrangement: Optional[dict] = None
    cdt: Optional[dict] = None
    induced: Optional[dict] = None
    complex: Optional[dict] = None
    resolved: Optional[dict] = None
    components: Optional[List[dict]] = None
    center: Optional[dict] = None
    witness: Optional[dict] = None
    levelsets: Optional[List[dict]] = None
    error: Optional[dict] = None
    stage_seconds: Dict[str, float] = field(default_factory=dict)

    # live objects for callers that keep going after run_pipeline
    objects: dict = field(default_factory=dict, repr=False)

    def to_dict(self) -> dict:
        out = {
            "config": self.config,
            "validation": self.validation,
            "general_position": self.general_position,
            "arrangement": self.arrangement,
            "cdt": self.cdt,
            "induced": self.induced,
            "complex": self.complex,
            "resolved": self.resolved,
            "components": self.components,
            "center": self.center,
            "witness": self.witness,
            "levelsets": self.levelsets,
            "error": self.error,
            "timestamps": {
                "generated": time.strftime("%Y-%m-%dT%H:%M:%S%z"),
                "stage_seconds": {k: round(v, 6)
                                  for k, v in self.stage_seconds.items()},
            },
        }
        return out


def _stage_order(stage: str) -> int:
    order = {"validate": 0, "triangulate": 1, "complex": 2, "hopf": 3,
             "levelset": 4, "all": 4}
    return order[stage]


def run_pipeline(config: RunConfig, *, mesh: Optional[SurfaceMesh] = None,
                 pmap: Optional[PlanarMap] = None) -> RunReport:
    """Run the stages up to config.stage; raise StageError (with the partial
    report attached) on the first failure.  A mesh/map object may be passed
    directly to bypass file loading."""
    if mesh is None or pmap is None:
        config.validate()
    report = RunReport(config={
        "mesh": config.mesh, "map": config.map, "gen": config.gen,
        "seed": config.seed, "deltas": [str(d) for d in config.deltas],
        "tol_residual": config.tol_residual, "tol_level": config.tol_level,
        "max_depth": config.max_depth, "stage": config.stage,
    })
    want = _stage_order(config.stage)

    def run_stage(name: str, fn):
        t0 = time.perf_counter()
        try:
            result = fn()
        except Exception as exc:
            report.error = {"stage": name, "message": str(exc)}
            raise StageError(name, exc, report) from exc
        finally:
            report.stage_seconds[name] = time.perf_counter() - t0
        return result

    # -- validate ---------------------------------------------------------
    def load_and_validate():
        m = mesh if mesh is not None else load_surface_mesh(config.mesh)
        vrep = validate_surface(m)
        report.validation = {
            "n_vertices": vrep.n_vertices, "n_edges": vrep.n_edges,
            "n_faces": vrep.n_faces,
            "euler_characteristic": vrep.euler_characteristic,
            "passed": vrep.passed,
            "violations": [{"code": c, "ref": repr(r), "message": msg}
                           for c, r, msg in vrep.violations],
        }
        if not vrep.passed:
            raise MeshValidationError("mesh validation failed [%s]: %s"
                                      % (vrep.violations[0][0],
                                         vrep.violations[0][2]))
        if pmap is not None:
            pm = pmap
        elif config.map is not None:
            pm = load_planar_map(config.map, n_vertices=len(m.vertices))
        else:
            pm = generate_map(m, config.gen, config.seed)
        gp = check_general_position(m, pm)
        report.general_position = {
            "passed": gp.passed,
            "violations": [{"code": c, "ref": repr(r), "message": msg}
                           for c, r, msg in gp.violations],
        }
        if not gp.passed:
            raise GeneralPositionError(gp.violations[0][2])
        return m, pm

    m, pm = run_stage("validate", load_and_validate)
    report.objects.update(mesh=m, pmap=pm)
    if want < 1:
        return report

    # -- triangulate ------------------------------------------------------
    def triangulate():
        pslg = build_pslg(m, pm)
        tri = constrained_delaunay(pslg)
        tri = restrict_to_image(tri, m, pm)
        lhs, rhs = covered_area_identity(tri, m, pm)
        ind = pull_back(tri, m, pm)
        ilhs, irhs = refinement_area_identity(ind)
        report.arrangement = {
            "n_points": len(pslg.points),
            "n_constraints": len(pslg.constraints),
            "n_crossings": pslg.n_crossings(),
        }
        report.cdt = {
            "n_triangles": len(tri.triangles),
            "n_inside": len(tri.inside_indices()),
            "multiplicity_histogram": tri.multiplicity_histogram(),
            "covered_area_identity": lhs == rhs,
        }
        report.induced = {
            "n_vertices": len(ind.vertices),
            "n_triangles": len(ind.triangles),
            "n_edges": len(ind.edge_triangles),
            "refinement_area_identity": ilhs == irhs,
        }
        return tri, ind

    tri, ind = run_stage("triangulate", triangulate)
    report.objects.update(tri=tri, ind=ind)
    if want < 2:
        return report

    # -- complex ----------------------------------------------------------
    def build_and_resolve():
        cx = build_complex(ind)
        manifold = verify_edge_manifold(cx)
        expected = sum(len(lifts) * (len(lifts) - 1)
                       for lifts in cx.induced.by_cd.values())
        report.complex = {
            "n_vertices": cx.n_vertices,
            "n_edges": cx.n_edges,
            "n_triangles": cx.n_triangles,
            "euler_characteristic": cx.euler_characteristic(),
            "counting_identity": cx.n_triangles == expected,
            "edge_case_counts": dict(sorted(manifold.case_counts.items())),
            "two_triangles_per_edge": manifold.passed,
            "violations": [{"code": c, "ref": repr(r), "message": msg}
                           for c, r, msg in manifold.violations],
        }
        if not manifold.passed:
            raise ValueError("edge-manifold verification failed: %s"
                             % manifold.violations[0][2])
        rc = resolve_singularities(cx)
        infos = analyze_components(rc, m)
        report.resolved = {
            "n_vertices": rc.n_vertices,
            "n_edges": rc.n_edges,
            "n_triangles": rc.n_triangles,
            "n_components": len(infos),
        }
        report.components = [{
            "component": info.component,
            "vertices": info.n_vertices,
            "edges": info.n_edges,
            "triangles": info.n_triangles,
            "euler_characteristic": info.euler_characteristic,
            "orientable": info.orientable,
            "genus": info.genus,
            "degree_mod2": info.degree_mod2,
            "degree_signed": info.degree_signed,
            "meets_diagonal": info.meets_diagonal,
        } for info in infos]
        return cx, rc

    cx, rc = run_stage("complex", build_and_resolve)
    report.objects.update(cx=cx, rc=rc)
    if want < 3:
        return report

    # -- hopf -------------------------------------------------------------
    def hopf():
        center = estimate_center(m)
        base = find_base_component(rc)
        witness = find_equivariant_pair(rc, base.component, center.center,
                                        tol_residual=config.tol_residual)
        witness = path_to_diagonal(rc, witness)
        report.center = {
            "center": list(center.center),
            "D_hat": center.D_hat,
            "converged": center.converged,
        }
        report.witness = {
            "component": witness.component,
            "triangle": witness.triangle,
            "bary": list(witness.bary),
            "a": list(witness.a),
            "b": list(witness.b),
            "residual": witness.residual,
            "base_component_via": base.via,
            "path_length": len(witness.path),
            "path": [[list(pa), list(pb)] for pa, pb in witness.path],
        }
        return center, base, witness

    center, base, witness = run_stage("hopf", hopf)
    report.objects.update(center=center, base=base, witness=witness)
    if want < 4:
        return report

    # -- levelset ---------------------------------------------------------
    def levelsets():
        results = []
        rows = []
        ld = lift_distance(rc)
        for spec in config.deltas:
            kind, value = parse_delta(spec)
            delta = value * center.D_hat if kind == "of-width" else value
            eps = config.tol_level
            if eps is None:
                eps = 1e-4 * center.D_hat
            res = separation_check(rc, base.component, delta,
                                   eps_level=eps, max_depth=config.max_depth)
            results.append(res)
            rows.append({
                "requested": str(spec),
                "delta": delta,
                "eps_level": res.eps_level,
                "total_loop_count": res.total_loop_count,
                "loop_sizes": [len(l) for l in res.loops],
                "below_components": res.below_components,
                "above_components": res.above_components,
                "separated": res.separated,
                "h1_certified": res.separated,
                "nudge_count": len(res.nudges or []),
                "refined_triangles": res.refined_triangles,
                "max_distance": ld.max_value,
            })
        report.levelsets = rows
        return results

    results = run_stage("levelset", levelsets)
    report.objects.update(levelsets=results)
    return report
