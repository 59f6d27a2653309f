"""coxcell command line interface.

Subcommands: info, orbit, root, voronoi, delone, contact, facets, volume,
verify, project, report. Exit status 0 on success, 1 when a verification
fails, 2 on usage errors.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction

from . import formats, report, tessellate, volume
from .coxeter import (
    LatticeSpec,
    cartan_determinant,
    cartan_matrix,
    coxeter_number,
    fundamental_weights,
    group_order,
    orbit,
)
from .polytope import (
    contact_polytope,
    delone_cells_at_origin,
    enumerate_faces,
    facet_count_table,
    root_polytope,
    voronoi_cell,
)


def _spec_from(args) -> LatticeSpec:
    return LatticeSpec(args.family, args.rank, args.variant)


def _add_spec_flags(sub, variant_default="root"):
    sub.add_argument("--family", required=True, choices=["A", "D"])
    sub.add_argument("--rank", required=True, type=int)
    sub.add_argument("--variant", default=variant_default,
                     choices=["root", "weight"])


def _add_output_flags(sub):
    sub.add_argument("--out", help="output file path (default: stdout)")
    sub.add_argument("--format", default="json",
                     choices=["json", "off", "csv"])
    sub.add_argument("--max-vertices", type=int, default=50000)


def _emit(text: str, out: str | None) -> None:
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _cmd_info(args) -> int:
    spec = _spec_from(args)
    payload = {
        "lattice": spec.label,
        "ambient_dim": spec.ambient_dim,
        "cartan_matrix": [list(row) for row in cartan_matrix(spec)],
        "cartan_determinant": cartan_determinant(spec),
        "group_order": group_order(spec),
        "coxeter_number": coxeter_number(spec),
        "fundamental_weights": [formats.vector_json(w)
                                for w in fundamental_weights(spec)],
    }
    _emit(formats.dumps(payload), args.out)
    return 0


def _parse_weights(text: str, rank: int) -> list[Fraction]:
    parts = [Fraction(p) for p in text.split(",")]
    if len(parts) != rank:
        raise SystemExit(f"--weights needs {rank} comma-separated values")
    return parts


def _cmd_orbit(args) -> int:
    spec = _spec_from(args)
    coeffs = _parse_weights(args.weights, spec.rank)
    verts = orbit(spec, coeffs)
    payload = {
        "lattice": spec.label,
        "highest_weight_coeffs": [str(c) for c in coeffs],
        "vertex_count": len(verts),
        "vertices": [formats.vector_json(v) for v in verts],
    }
    _emit(formats.dumps(payload), args.out)
    return 0


def _cmd_polytope(args, builder) -> int:
    spec = _spec_from(args)
    poly = builder(spec)
    if args.format == "csv":
        _emit(formats.vertices_csv(poly), args.out)
        return 0
    faces = None
    if args.format == "off" or args.with_faces:
        faces = enumerate_faces(poly, max_vertices=args.max_vertices)
    if args.format == "off":
        _emit(formats.off_string(poly, faces), args.out)
        return 0
    _emit(formats.dumps(formats.polytope_json(poly, faces)), args.out)
    return 0


def _cmd_delone(args) -> int:
    spec = _spec_from(args)
    cells = delone_cells_at_origin(spec)
    payload = {
        "lattice": spec.label,
        "cells": [{
            "kind": c.kind,
            "vertex_count": len(c.vertices),
            "vertices": [formats.vector_json(v) for v in c.vertices],
        } for c in cells],
    }
    _emit(formats.dumps(payload), args.out)
    return 0


def _cmd_facets(args) -> int:
    spec = _spec_from(args)
    bodies = ["root", "voronoi"] if spec.is_root else ["voronoi"]
    tables = [facet_count_table(spec, body) for body in bodies]
    if args.format == "csv":
        text = "".join(f"# {spec.label} {t.body}\n" + formats.table_csv(t)
                       for t in tables)
        _emit(text, args.out)
    else:
        _emit(formats.dumps([formats.table_json(t) for t in tables]), args.out)
    return 0 if all(t.all_agree() for t in tables) else 1


def _cmd_volume(args) -> int:
    spec = _spec_from(args)
    exact = volume.voronoi_volume(spec)
    payload = {"lattice": spec.label, "voronoi_volume": str(exact),
               "voronoi_volume_json": exact.to_json()}
    if spec.is_root:
        payload["fundamental_simplex_volume"] = str(
            volume.fundamental_simplex_volume(spec))
    if args.oracle:
        got = volume.numeric_volume_oracle(voronoi_cell(spec).vertices)
        gap = abs(got - float(exact)) / max(1.0, float(exact))
        payload["oracle"] = got
        payload["relative_gap"] = gap
        if gap > args.tolerance:
            _emit(formats.dumps(payload), args.out)
            return 1
    _emit(formats.dumps(payload), args.out)
    return 0


def _cmd_verify(args) -> int:
    spec = LatticeSpec(args.family, args.rank, "root")
    rep = tessellate.verify_tessellation(spec, tolerance=args.tolerance)
    payload = {
        "lattice": spec.label,
        "cell_count": rep.cell_count,
        "cells_by_kind": dict(sorted(rep.cells_by_kind.items())),
        "checks": rep.checks,
        "ok": rep.ok,
    }
    if rep.failure:
        payload["failure"] = rep.failure
    _emit(formats.dumps(payload), args.out)
    return 0 if rep.ok else 1


def _cmd_project(args) -> int:
    from . import project as proj
    spec = _spec_from(args)
    patch = proj.tiling_patch(spec, args.radius, args.window_scale)
    svg = formats.patch_svg(patch)
    _emit(svg, args.out)
    if args.json:
        with open(args.json, "w", encoding="utf-8") as fh:
            fh.write(formats.dumps(formats.patch_json(patch)))
    return 0


def _cmd_report(args) -> int:
    dossier = report.run_report(args.max_rank, out_dir=args.out_dir,
                                make_figures=not args.no_figures)
    if not args.out_dir:
        sys.stdout.write(formats.dumps(dossier))
    else:
        failed = [c["id"] for c in dossier["checks"] if not c["passed"]]
        sys.stdout.write(
            f"{dossier['check_count']} checks, "
            f"{'all passed' if dossier['all_passed'] else 'FAILED: ' + ', '.join(failed)}\n")
    return 0 if dossier["all_passed"] else 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="coxcell",
        description="Exact Voronoi/Delone cells, volumes and Coxeter-plane "
                    "tilings of the A and D lattices")
    subs = parser.add_subparsers(dest="command", required=True)

    p = subs.add_parser("info", help="Cartan matrix, group order, weights")
    _add_spec_flags(p)
    p.add_argument("--out")

    p = subs.add_parser("orbit", help="Weyl orbit of a highest weight")
    _add_spec_flags(p)
    p.add_argument("--weights", required=True,
                   help="comma-separated coefficients, e.g. 1,0,0,1")
    p.add_argument("--out")

    for name, help_text in [("root", "root polytope"),
                            ("voronoi", "Voronoi cell"),
                            ("contact", "contact polytope")]:
        p = subs.add_parser(name, help=help_text)
        _add_spec_flags(p)
        _add_output_flags(p)
        p.add_argument("--with-faces", action="store_true",
                       help="include the face lattice in JSON output")

    p = subs.add_parser("delone", help="Delone cells at the origin")
    _add_spec_flags(p)
    p.add_argument("--out")

    p = subs.add_parser("facets", help="facet count table, formula vs enumeration")
    _add_spec_flags(p)
    p.add_argument("--out")
    p.add_argument("--format", default="json", choices=["json", "csv"])

    p = subs.add_parser("volume", help="exact and oracle volumes")
    _add_spec_flags(p)
    p.add_argument("--oracle", action="store_true")
    p.add_argument("--tolerance", type=float, default=1e-9)
    p.add_argument("--out")

    p = subs.add_parser("verify", help="tessellation verification suite")
    p.add_argument("--family", required=True, choices=["A", "D"])
    p.add_argument("--rank", required=True, type=int)
    p.add_argument("--tolerance", type=float, default=1e-9)
    p.add_argument("--out")

    p = subs.add_parser("project", help="Coxeter-plane tiling patch (SVG)")
    _add_spec_flags(p)
    p.add_argument("--radius", type=float, default=5.0)
    p.add_argument("--window-scale", type=float, default=1.0)
    p.add_argument("--out", help="SVG output path")
    p.add_argument("--json", help="also write the patch as JSON here")

    p = subs.add_parser("report", help="full verification dossier")
    p.add_argument("--max-rank", type=int, default=5)
    p.add_argument("--out-dir", help="write dossier.json, checks.csv, figures")
    p.add_argument("--no-figures", action="store_true")
    return parser


_DISPATCH = {
    "info": _cmd_info,
    "orbit": _cmd_orbit,
    "root": lambda a: _cmd_polytope(a, root_polytope),
    "voronoi": lambda a: _cmd_polytope(a, voronoi_cell),
    "contact": lambda a: _cmd_polytope(a, contact_polytope),
    "delone": _cmd_delone,
    "facets": _cmd_facets,
    "volume": _cmd_volume,
    "verify": _cmd_verify,
    "project": _cmd_project,
    "report": _cmd_report,
}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return _DISPATCH[args.command](args)
    except (ValueError, NotImplementedError) as exc:
        parser.exit(2, f"error: {exc}\n")
    except Exception as exc:  # verification and geometry failures
        name = type(exc).__name__
        if name in ("VerificationFailure",):
            sys.stderr.write(f"verification failed: {exc}\n")
            return 1
        if name in ("VariantMismatch", "OutOfValidityRange", "RankCapExceeded",
                    "BudgetExceeded", "EmptyWindow", "DimensionMismatch"):
            parser.exit(2, f"error ({name}): {exc}\n")
        raise


if __name__ == "__main__":
    sys.exit(main())
