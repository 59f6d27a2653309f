"""Serialization: JSON structures, CSV, OFF meshes, and SVG tile patches.

Exact scalars always serialize as "p/q" strings so no reader ever parses a
float where an exact value was meant. All writers emit fully deterministic
byte streams for identical inputs.
"""

from __future__ import annotations

import json

import numpy as np

from .exactnum import Surd, Vector, scalar_to_str
from .hull import convex_polygon_cycle
from .polytope import FaceLattice, FacetCountTable, OrbitPolytope


def vector_json(v: Vector) -> list[str]:
    return [scalar_to_str(x) for x in v]


def polytope_json(poly: OrbitPolytope, faces: FaceLattice | None = None) -> dict:
    out = {
        "family": poly.spec.family,
        "rank": poly.spec.rank,
        "variant": poly.spec.variant,
        "kind": poly.kind,
        "vertex_count": len(poly.vertices),
        "vertices": [vector_json(v) for v in poly.vertices],
    }
    if faces is not None:
        out["face_counts"] = {str(d): c for d, c in sorted(faces.counts().items())}
        out["faces_by_dim"] = {
            str(d): [list(f.indices) for f in faces.faces(d)]
            for d in sorted(faces.faces_by_dim)
        }
    return out


def table_json(table: FacetCountTable) -> dict:
    return {
        "family": table.spec.family,
        "rank": table.spec.rank,
        "variant": table.spec.variant,
        "body": table.body,
        "counts": {
            str(d): {"formula": f, "enumerated": e, "agree": a}
            for d, (f, e, a) in sorted(table.counts.items())
        },
        "all_agree": table.all_agree(),
    }


def surd_json(x: Surd) -> dict:
    return x.to_json()


def dumps(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=2) + "\n"


def vertices_csv(poly: OrbitPolytope) -> str:
    dim = poly.spec.ambient_dim
    lines = [",".join(f"x{i}" for i in range(dim))]
    for v in poly.vertices:
        lines.append(",".join(scalar_to_str(x) for x in v))
    return "\n".join(lines) + "\n"


def table_csv(table: FacetCountTable) -> str:
    lines = ["d,formula,enumerated,agree"]
    for d, (f, e, a) in sorted(table.counts.items()):
        lines.append(f"{d},{'' if f is None else f},"
                     f"{'' if e is None else e},{'' if a is None else a}")
    return "\n".join(lines) + "\n"


def _fmt(x: float) -> str:
    return format(float(x), ".17g")


def off_string(poly: OrbitPolytope, faces: FaceLattice) -> str:
    """OFF mesh of a polytope with ambient dimension <= 4.

    Up to 3 coordinates this is plain OFF with the 2-faces as polygons.
    With 4 coordinates the facet cells are listed as plain vertex tuples,
    which suits cell-based viewers rather than surface renderers.
    """
    verts = poly.vertices
    dim = poly.spec.ambient_dim
    if dim > 4:
        raise ValueError("OFF export is limited to ambient dimension <= 4")
    lines = []
    if dim <= 3:
        if faces.dim == 2:
            # the polytope is itself a polygon
            cycles = [convex_polygon_cycle(list(verts))]
        else:
            cycles = [convex_polygon_cycle(list(verts), list(f.indices))
                      for f in faces.faces(2)]
        edge_count = len(faces.faces(1))
        lines.append("OFF")
        lines.append(f"{len(verts)} {len(cycles)} {edge_count}")
        for v in verts:
            coords = [float(x) for x in v] + [0.0] * (3 - dim)
            lines.append(" ".join(_fmt(c) for c in coords))
        for cyc in cycles:
            lines.append(" ".join([str(len(cyc))] + [str(i) for i in cyc]))
    else:
        cells = faces.faces(faces.dim - 1)
        lines.append("4OFF")
        lines.append("# cells are listed as plain vertex index tuples")
        lines.append(f"{len(verts)} {len(cells)} {len(faces.faces(1))}")
        for v in verts:
            lines.append(" ".join(_fmt(float(x)) for x in v))
        for cell in cells:
            idx = cell.indices
            lines.append(" ".join([str(len(idx))] + [str(i) for i in idx]))
    return "\n".join(lines) + "\n"


_PALETTE = ["#4878a8", "#e8b04a", "#b04a4a", "#5aa05a", "#8a5aa0",
            "#50b8b8", "#b8b850", "#a07850"]


def patch_svg(patch, px_per_unit: float = 100.0) -> str:
    """SVG rendering of a tile patch, one fill color per tile class."""
    pts = np.concatenate([poly2d for poly2d, _ in patch.tiles])
    lo = pts.min(axis=0) * px_per_unit - 10
    hi = pts.max(axis=0) * px_per_unit + 10
    width, height = hi - lo
    lines = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" '
        f'viewBox="0 0 {width:.2f} {height:.2f}">',
    ]
    for poly2d, cls in patch.tiles:
        color = _PALETTE[cls % len(_PALETTE)]
        coords = " ".join(
            f"{poly2d[i, 0] * px_per_unit - lo[0]:.4f},"
            f"{hi[1] - poly2d[i, 1] * px_per_unit:.4f}"
            for i in range(len(poly2d)))
        lines.append(f'<polygon points="{coords}" fill="{color}" '
                     f'stroke="#202020" stroke-width="1"/>')
    lines.append("</svg>")
    return "\n".join(lines) + "\n"


def patch_json(patch) -> dict:
    return {
        "classes": [
            {"edge_lengths": [round(x, 12) for x in c.edge_lengths],
             "angles": [round(x, 12) for x in c.angles],
             "count": c.count}
            for c in patch.classes
        ],
        "tiles": [
            {"class": cls,
             "points": [[round(float(x), 12) for x in pt] for pt in poly2d]}
            for poly2d, cls in patch.tiles
        ],
    }
