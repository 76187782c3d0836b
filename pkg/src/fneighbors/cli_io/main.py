"""Command-line interface.

Subcommands run the pipeline through successive stages: validate,
triangulate, complex, hopf, levelset, all.  Flags may also come from a TOML
config file (keys mirror the flags); explicit flags override the file.
Exit codes: 0 success, 1 validation failure, 2 pipeline error, 3 I/O error.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from typing import List, Optional

try:
    import tomllib
except ModuleNotFoundError:                      # Python < 3.11
    import tomli as tomllib

from .pipeline import (ConfigError, RunConfig, RunReport, StageError,
                       STAGES, run_pipeline)

EXIT_OK = 0
EXIT_VALIDATION = 1
EXIT_PIPELINE = 2
EXIT_IO = 3


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="fneighbors",
        description="Pair complexes of planar maps on convex boundaries: "
                    "triangulate the image, build and resolve the pair "
                    "complex, find antipodal witnesses, extract distance "
                    "level sets.")
    sub = parser.add_subparsers(dest="command", required=True)
    for name, info in (
            ("validate", "load the mesh and map and check validity and "
                         "general position"),
            ("triangulate", "arrange edge images and build the induced "
                            "refinement"),
            ("complex", "build and resolve the pair complex, with topology "
                        "per component"),
            ("hopf", "estimate the center and find the antipodal witness "
                     "and its path"),
            ("levelset", "extract distance level sets and separation "
                         "certificates"),
            ("all", "run every stage and write the requested artifacts")):
        p = sub.add_parser(name, help=info)
        p.add_argument("--config", help="TOML file with these same keys")
        p.add_argument("--mesh", help="mesh path (OFF or JSON)")
        p.add_argument("--map", dest="map_path",
                       help="vertex image file (JSON or 'k u v' lines)")
        p.add_argument("--gen", choices=("projection", "random-images"),
                       help="generate the vertex map instead of loading it")
        p.add_argument("--seed", type=int, help="generator seed (default 0)")
        p.add_argument("--delta", action="append", default=None,
                       metavar="VALUE",
                       help="level-set distance; repeatable; a trailing D "
                            "means a fraction of the antipodal width "
                            "(e.g. 0.5D)")
        p.add_argument("--out-dir", help="directory for artifacts")
        p.add_argument("--svg", action="store_true", default=None,
                       help="write SVG artifacts")
        p.add_argument("--obj", action="store_true", default=None,
                       help="write OBJ artifacts")
        p.add_argument("--report", action="store_true", default=None,
                       help="write the JSON report")
        p.add_argument("--tol-residual", type=float,
                       help="antipodal witness residual tolerance "
                            "(default 1e-6)")
        p.add_argument("--tol-level", type=float,
                       help="level-set tolerance (default 1e-4 of the "
                            "antipodal width)")
        p.add_argument("--max-depth", type=int,
                       help="level-set refinement depth cap (default 8)")
    return parser


def _load_config_file(path: str) -> dict:
    with open(path, "rb") as fh:
        data = tomllib.load(fh)
    known = {"mesh", "map", "gen", "seed", "delta", "out_dir", "svg", "obj",
             "report", "tol_residual", "tol_level", "max_depth"}
    out = {}
    for key, value in data.items():
        norm = key.replace("-", "_")
        if norm not in known:
            raise ConfigError("unknown config key %r" % key)
        out[norm] = value
    return out


def _merge_config(args: argparse.Namespace) -> RunConfig:
    file_values = _load_config_file(args.config) if args.config else {}

    def pick(flag_value, file_key, default):
        if flag_value is not None:
            return flag_value
        if file_key in file_values and file_values[file_key] is not None:
            return file_values[file_key]
        return default

    deltas = pick(args.delta, "delta", [])
    if not isinstance(deltas, (list, tuple)):
        deltas = [deltas]
    return RunConfig(
        mesh=pick(args.mesh, "mesh", None),
        map=pick(args.map_path, "map", None),
        gen=pick(args.gen, "gen", None),
        seed=int(pick(args.seed, "seed", 0)),
        deltas=tuple(deltas),
        out_dir=str(pick(args.out_dir, "out_dir", ".")),
        svg=bool(pick(args.svg, "svg", False)),
        obj=bool(pick(args.obj, "obj", False)),
        report=bool(pick(args.report, "report", False)),
        tol_residual=float(pick(args.tol_residual, "tol_residual", 1e-6)),
        tol_level=pick(args.tol_level, "tol_level", None),
        max_depth=int(pick(args.max_depth, "max_depth", 8)),
        stage=args.command,
    )


def _print_summary(report: RunReport, out=sys.stdout) -> None:
    def line(text):
        print(text, file=out)

    v = report.validation
    if v:
        line("mesh: V=%d E=%d F=%d chi=%d %s"
             % (v["n_vertices"], v["n_edges"], v["n_faces"],
                v["euler_characteristic"],
                "valid" if v["passed"] else "INVALID"))
    gp = report.general_position
    if gp:
        line("general position: %s"
             % ("pass" if gp["passed"] else
                "FAIL (%s)" % gp["violations"][0]["message"]))
    if report.arrangement:
        a, c, i = report.arrangement, report.cdt, report.induced
        line("arrangement: %d points, %d constraints, %d crossings"
             % (a["n_points"], a["n_constraints"], a["n_crossings"]))
        line("image triangulation: %d triangles, %d covered, "
             "multiplicities %s" % (c["n_triangles"], c["n_inside"],
                                    c["multiplicity_histogram"]))
        line("induced refinement: %d vertices, %d triangles"
             % (i["n_vertices"], i["n_triangles"]))
    if report.complex:
        cx = report.complex
        line("pair complex: V=%d E=%d F=%d chi=%d, edge check %s, cases %s"
             % (cx["n_vertices"], cx["n_edges"], cx["n_triangles"],
                cx["euler_characteristic"],
                "pass" if cx["two_triangles_per_edge"] else "FAIL",
                cx["edge_case_counts"]))
    if report.components:
        for row in report.components:
            line("  component %d: chi=%d %s genus=%s degree mod2=%d "
                 "signed=%s diagonal=%s"
                 % (row["component"], row["euler_characteristic"],
                    "orientable" if row["orientable"] else "non-orientable",
                    row["genus"], row["degree_mod2"], row["degree_signed"],
                    row["meets_diagonal"]))
    if report.center:
        line("center estimate: %s, antipodal width %.9g%s"
             % (["%.6g" % c for c in report.center["center"]],
                report.center["D_hat"],
                "" if report.center["converged"] else " (not converged)"))
    if report.witness:
        w = report.witness
        line("witness: component %d triangle %d residual %.3g, path of %d "
             "pairs to the diagonal" % (w["component"], w["triangle"],
                                        w["residual"], w["path_length"]))
    for row in report.levelsets or []:
        line("level set delta=%.6g: %d loops, below=%d above=%d, "
             "separated=%s%s"
             % (row["delta"], row["total_loop_count"],
                row["below_components"], row["above_components"],
                row["separated"],
                ", non-trivial H1 certified" if row["h1_certified"] else ""))
    if report.error:
        line("error at stage %(stage)s: %(message)s" % report.error)


def _write_artifacts(report: RunReport, config: RunConfig) -> List[str]:
    from .exports import (json_complex, json_levelset, obj_induced_surface,
                          obj_pair_projections, svg_image_triangulation,
                          svg_levelset)
    written: List[str] = []
    objs = report.objects
    out = config.out_dir
    os.makedirs(out, exist_ok=True)

    def path(name):
        return os.path.join(out, name)

    if config.report:
        p = path("report.json")
        with open(p, "w", encoding="utf-8") as fh:
            json.dump(report.to_dict(), fh, indent=2, sort_keys=True)
            fh.write("\n")
        written.append(p)
    if config.svg and "ind" in objs:
        written.append(svg_image_triangulation(objs["ind"],
                                               path("image.svg")))
    if config.obj and "ind" in objs:
        written.append(obj_induced_surface(objs["ind"], path("induced.obj")))
    if config.obj and "rc" in objs:
        a, b = obj_pair_projections(objs["rc"], path("pairs_first.obj"),
                                    path("pairs_second.obj"))
        written.extend([a, b])
    if config.report and "rc" in objs:
        written.append(json_complex(objs["rc"], path("complex.json")))
    for k, res in enumerate(objs.get("levelsets") or []):
        if config.report:
            written.append(json_levelset(res, path("levelset_%d.json" % k)))
        if config.svg:
            written.append(svg_levelset(objs["rc"], objs["ind"], res,
                                        path("levelset_%d.svg" % k)))
    return written


def main(argv: Optional[List[str]] = None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        config = _merge_config(args)
        config.validate()
    except (ConfigError, tomllib.TOMLDecodeError) as exc:
        print("configuration error: %s" % exc, file=sys.stderr)
        return EXIT_VALIDATION
    except OSError as exc:
        print("cannot read config: %s" % exc, file=sys.stderr)
        return EXIT_IO

    try:
        report = run_pipeline(config)
    except StageError as exc:
        _print_summary(exc.report)
        print("error at stage %s: %s" % (exc.stage, exc.original),
              file=sys.stderr)
        if isinstance(exc.original, OSError):
            return EXIT_IO
        return EXIT_VALIDATION if exc.is_validation else EXIT_PIPELINE

    _print_summary(report)
    if config.svg or config.obj or config.report:
        try:
            written = _write_artifacts(report, config)
        except OSError as exc:
            print("cannot write artifact: %s" % exc, file=sys.stderr)
            return EXIT_IO
        for p in written:
            print("wrote %s" % p)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
