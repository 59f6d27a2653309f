"""Verification dossier: every desk-scale acceptance check in one run.

``run_report`` executes the full battery for all families and ranks up to a
cap and returns one deterministic dossier dict. With an output directory it
also writes ``dossier.json``, a ``checks.csv`` summary, and matplotlib
renderings of the tiling patches and facet-count comparisons next to them.

COXCELL_THREADS caps the worker pool used to evaluate independent checks;
results are merged in a fixed order, so the dossier bytes never depend on
the worker count.
"""

from __future__ import annotations

import concurrent.futures
import csv
import io
import math
import os

from . import formats, project, tessellate, volume
from .coxeter import (
    LatticeSpec,
    coxeter_element_order,
    coxeter_number,
    group_order,
    stabilizer_order,
)
from .exactnum import Q, Surd
from .polytope import (
    contact_polytope,
    delone_cells_at_origin,
    enumerate_faces,
    euler_check,
    facet_count_table,
    facet_geometry_a,
    facet_geometry_d,
    voronoi_cell,
)

FACET_TABLE_MAX_RANK = 5
ORACLE_MAX_RANK = 5
WEIGHT_ORACLE_MAX_RANK = 4


def worker_count() -> int:
    raw = os.environ.get("COXCELL_THREADS", "1")
    try:
        return max(1, int(raw))
    except ValueError:
        return 1


def _check(cid: str, spec: LatticeSpec | None, passed: bool, detail: str) -> dict:
    out = {"id": cid, "passed": bool(passed), "detail": detail}
    if spec is not None:
        out["lattice"] = spec.label
    return out


def _root_checks(spec: LatticeSpec) -> list[dict]:
    n = spec.rank
    checks = []
    vor = voronoi_cell(spec)
    expect = 2 ** (n + 1) - 2 if spec.family == "A" else 2 ** n + 2 * n
    checks.append(_check(
        f"{spec.label}:voronoi_vertex_count", spec, len(vor) == expect,
        f"{len(vor)} vertices, closed form {expect}"))

    vol_exact = volume.voronoi_volume(spec)
    checks.append(_check(
        f"{spec.label}:weyl_copies_identity", spec,
        volume.weyl_copies_identity(spec),
        f"|W| x simplex volume == {vol_exact}"))

    if n >= 2:
        pyr = volume.pyramid_volume_identity(spec)
        checks.append(_check(
            f"{spec.label}:pyramid_identity", spec, pyr.ok,
            f"{pyr.facet_count} pyramids x {pyr.facet_volume} -> {pyr.reconstructed}"))

    if spec.family == "A" and n >= 2:
        geo = facet_geometry_a(n)
        ok = (geo.gram_det == Q(2, n + 1)
              and geo.matrix_det == Surd.sqrt(Q(2, n + 1))
              and geo.edge_norm_sq == Q(n, n + 1))
        checks.append(_check(
            f"{spec.label}:facet_geometry", spec, ok,
            f"gram det {geo.gram_det}, generator det {geo.matrix_det}"))
    if spec.family == "D":
        geo = facet_geometry_d(n)
        ok = geo.volume == Surd(Q(1, n - 1), 2) and len(geo.vertices) == 2 ** (n - 2) + 2
        checks.append(_check(
            f"{spec.label}:facet_geometry", spec, ok,
            f"dipyramid volume {geo.volume}, {len(geo.vertices)} vertices"))

    checks.append(_check(
        f"{spec.label}:coxeter_element_order", spec,
        coxeter_element_order(spec) == coxeter_number(spec),
        f"order {coxeter_number(spec)}"))

    if n <= FACET_TABLE_MAX_RANK:
        for body in ("root", "voronoi"):
            table = facet_count_table(spec, body)
            counts = {d: e for d, (f, e, a) in table.counts.items()}
            ok = table.all_agree() and euler_check(counts, n)
            checks.append(_check(
                f"{spec.label}:facet_table_{body}", spec, ok,
                ",".join(f"{d}:{e}" for d, (f, e, a) in sorted(table.counts.items()))))

    if n <= ORACLE_MAX_RANK:
        rep = volume.delone_volume_sum_check(spec)
        checks.append(_check(
            f"{spec.label}:delone_volume_sum", spec, rep.ok,
            f"sum {rep.total:.12f} vs {rep.expected} (gap {rep.relative_gap:.2e})"))
        tess = tessellate.verify_tessellation(spec)
        kinds = ",".join(f"{k}:{v}" for k, v in sorted(tess.cells_by_kind.items()))
        checks.append(_check(
            f"{spec.label}:tessellation", spec, tess.ok,
            f"{tess.cell_count} cells ({kinds})"))
    return checks


def _weight_checks(spec: LatticeSpec) -> list[dict]:
    n = spec.rank
    checks = []
    if spec.family == "D" and n == 3:
        return checks  # equivalent to the A3 weight lattice
    vor = voronoi_cell(spec)
    if spec.family == "A":
        expect = math.factorial(n + 1)
    else:
        coeffs = tuple(1 if x != 0 else 0
                       for x in voronoi_cell(spec).generating[0])
        expect = group_order(spec) // stabilizer_order(spec, coeffs)
    checks.append(_check(
        f"{spec.label}:voronoi_vertex_count", spec, len(vor) == expect,
        f"{len(vor)} vertices, orbit-stabilizer {expect}"))

    contact = contact_polytope(spec)
    if spec.family == "A":
        expect_contact = 2 * (n + 1) if n >= 2 else 2  # rank 1 degenerates
    else:
        expect_contact = 2 * n
    checks.append(_check(
        f"{spec.label}:contact_vertex_count", spec,
        len(contact) == expect_contact,
        f"{len(contact)} vertices, expected {expect_contact}"))

    cells = delone_cells_at_origin(spec)
    cell = cells[0]
    if spec.family == "A":
        ok = cell.kind == "simplex" and len(cell) == n + 1
    else:
        ok = len(cell) == 2 ** (n // 2 + 1)  # two 2^t-vertex hypercubes
    checks.append(_check(
        f"{spec.label}:delone_cell", spec, ok,
        f"{cell.kind} with {len(cell)} vertices"))

    if n <= WEIGHT_ORACLE_MAX_RANK:
        got = volume.numeric_volume_oracle(vor.vertices)
        want = float(volume.voronoi_volume(spec))
        gap = abs(got - want) / max(1.0, want)
        checks.append(_check(
            f"{spec.label}:voronoi_volume_oracle", spec, gap <= 1e-9,
            f"oracle {got:.12f} vs exact {want:.12f}"))
    return checks


def _projection_checks(max_rank: int) -> tuple[list[dict], dict]:
    checks = []
    patches = {}
    if max_rank >= 4:
        spec = LatticeSpec("A", 4)
        plane = project.coxeter_plane(spec)
        cell = voronoi_cell(spec)
        faces = enumerate_faces(cell)
        polys = project.project_faces(cell, faces, plane)
        patch = project.classify_tiles(polys)
        ok = len(patch.classes) == 2 and all(len(p[0]) == 4 for p in patch.tiles)
        checks.append(_check(
            "A4:rhombus_classes", spec, ok,
            f"{len(patch.classes)} congruence classes from {len(polys)} faces"))
        rot_err = _rotation_invariance_error(spec, plane)
        checks.append(_check(
            "A4:projection_rotation_invariance", spec, rot_err <= 1e-9,
            f"set-matching error {rot_err:.2e}"))
        patches["A4"] = project.tiling_patch(spec, 5.0)
        checks.append(_check(
            "A4:tiling_patch", spec, len(patches["A4"].classes) == 2,
            f"{len(patches['A4'].tiles)} tiles in "
            f"{len(patches['A4'].classes)} classes"))
    if max_rank >= 5:
        spec = LatticeSpec("D", 5)
        plane = project.coxeter_plane(spec)
        angle_sets = _reference_facet_triangle_angles(spec, plane)
        targets = [(1, 1, 6), (1, 2, 5)]
        ok = len(angle_sets) == 2 and all(
            any(max(abs(a - t * math.pi / 8) for a, t in zip(got, want)) <= 1e-6
                for want in targets)
            for got in angle_sets)
        checks.append(_check(
            "D5:facet_triangle_classes", spec, ok,
            f"angle multisets (x8/pi): "
            f"{[[round(a * 8 / math.pi, 6) for a in s] for s in angle_sets]}"))
        patches["D5"] = project.tiling_patch(spec, 5.0)
        present = _classes_present(patches["D5"], targets)
        checks.append(_check(
            "D5:tiling_patch", spec, present,
            f"{len(patches['D5'].tiles)} tiles; both reference triangles present"))
    return checks, patches


def _rotation_invariance_error(spec: LatticeSpec, plane) -> float:
    import numpy as np

    from .polytope import root_polytope
    pts = np.array([plane.project(v) for v in root_polytope(spec).vertices])
    th = 2 * math.pi / plane.h
    rot = pts @ np.array([[math.cos(th), math.sin(th)],
                          [-math.sin(th), math.cos(th)]])
    return max(min(float(np.linalg.norm(rot[i] - pts[j]))
                   for j in range(len(pts))) for i in range(len(pts)))


def _reference_facet_triangle_angles(spec: LatticeSpec, plane):
    import numpy as np

    from .hull import convex_polygon_cycle
    cell = voronoi_cell(spec)
    faces = enumerate_faces(cell)
    verts = list(cell.vertices)
    ref = set(facet_geometry_d(spec.rank).vertices)
    vidx = {v: i for i, v in enumerate(verts)}
    refset = {vidx[v] for v in ref}
    polys = []
    for f in faces.faces(2):
        if len(f.indices) == 3 and set(f.indices) <= refset:
            cyc = convex_polygon_cycle(verts, list(f.indices))
            poly2d = np.array([plane.project(verts[i]) for i in cyc])
            if project._polygon_area(poly2d) > 1e-9:
                polys.append(poly2d)
    patch = project.classify_tiles(polys)
    return [c.angles for c in patch.classes]


def _classes_present(patch, targets, tol: float = 1e-6) -> bool:
    got = [c.angles for c in patch.classes if len(c.angles) == 3]
    hits = 0
    for want in targets:
        want_angles = [t * math.pi / 8 for t in want]
        if any(max(abs(a - b) for a, b in zip(sorted(g), sorted(want_angles))) <= tol
               for g in got):
            hits += 1
    return hits == len(targets)


def run_report(max_rank: int, out_dir: str | None = None,
               make_figures: bool = True) -> dict:
    """Run the whole verification battery up to a rank cap.

    Returns the dossier dict; when ``out_dir`` is given, writes dossier.json,
    checks.csv and the figure files there as well.
    """
    if max_rank < 1:
        raise ValueError("max_rank must be >= 1")
    specs: list[LatticeSpec] = []
    for n in range(1, max_rank + 1):
        specs.append(LatticeSpec("A", n))
        specs.append(LatticeSpec("A", n, "weight"))
    for n in range(3, max_rank + 1):
        specs.append(LatticeSpec("D", n))
        specs.append(LatticeSpec("D", n, "weight"))

    jobs = [(s, _root_checks if s.is_root else _weight_checks) for s in specs]
    workers = worker_count()
    if workers > 1:
        with concurrent.futures.ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(lambda job: job[1](job[0]), jobs))
    else:
        results = [fn(s) for s, fn in jobs]
    checks: list[dict] = [c for sub in results for c in sub]

    proj_checks, patches = _projection_checks(max_rank)
    checks.extend(proj_checks)
    checks.sort(key=lambda c: c["id"])
    dossier = {
        "max_rank": max_rank,
        "check_count": len(checks),
        "all_passed": all(c["passed"] for c in checks),
        "checks": checks,
    }
    if out_dir is not None:
        _write_outputs(dossier, patches, out_dir, make_figures)
    return dossier


def _write_outputs(dossier: dict, patches: dict, out_dir: str,
                   make_figures: bool) -> None:
    os.makedirs(out_dir, exist_ok=True)
    with open(os.path.join(out_dir, "dossier.json"), "w", encoding="utf-8") as fh:
        fh.write(formats.dumps(dossier))
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["id", "lattice", "passed", "detail"])
    for c in dossier["checks"]:
        writer.writerow([c["id"], c.get("lattice", ""), c["passed"], c["detail"]])
    with open(os.path.join(out_dir, "checks.csv"), "w", encoding="utf-8") as fh:
        fh.write(buf.getvalue())
    for key, patch in patches.items():
        with open(os.path.join(out_dir, f"patch_{key}.svg"), "w",
                  encoding="utf-8") as fh:
            fh.write(formats.patch_svg(patch))
    if make_figures:
        _render_figures(dossier, patches, out_dir)


def _render_figures(dossier: dict, patches: dict, out_dir: str) -> None:
    import matplotlib
    matplotlib.use("Agg")
    import matplotlib.pyplot as plt
    from matplotlib.collections import PolyCollection

    for key, patch in patches.items():
        fig, ax = plt.subplots(figsize=(8, 8))
        polys = [p for p, _ in patch.tiles]
        colors = [formats._PALETTE[cls % len(formats._PALETTE)]
                  for _, cls in patch.tiles]
        ax.add_collection(PolyCollection(polys, facecolors=colors,
                                         edgecolors="#202020", linewidths=0.4))
        ax.autoscale()
        ax.set_aspect("equal")
        ax.set_axis_off()
        ax.set_title(f"{key} Coxeter-plane tiling patch")
        fig.savefig(os.path.join(out_dir, f"patch_{key}.png"), dpi=150,
                    bbox_inches="tight")
        plt.close(fig)

    rows = [c for c in dossier["checks"] if ":facet_table_" in c["id"]]
    if rows:
        fig, ax = plt.subplots(figsize=(10, 4))
        labels = [c["id"].replace(":facet_table_", " ") for c in rows]
        totals = []
        for c in rows:
            total = sum(int(part.split(":")[1])
                        for part in c["detail"].split(",") if ":" in part)
            totals.append(total)
        ax.bar(range(len(rows)), totals, color="#4878a8")
        ax.set_xticks(range(len(rows)))
        ax.set_xticklabels(labels, rotation=60, ha="right", fontsize=7)
        ax.set_ylabel("total face count")
        ax.set_title("enumerated face totals per polytope")
        fig.tight_layout()
        fig.savefig(os.path.join(out_dir, "facet_counts.png"), dpi=150)
        plt.close(fig)
