"""Lattice membership and the first shell of Delone cells around the origin.

The Delone tessellation near the Voronoi cell is produced by the orbit-sum
mechanism: adding the vertex set of one origin cell to the vertex set of its
partner orbit places one cell at every Voronoi vertex, with all vertices
landing on lattice points. Verification re-checks each of those properties
plus the local volume accounting.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from .coxeter import LatticeSpec, fundamental_weights, orbit, simple_roots
from .exactnum import DimensionMismatch, Q, Vector, dot, vadd
from .polytope import VariantMismatch, _unit_coeffs, voronoi_cell
from .volume import delone_volume_sum_check


class VerificationFailure(Exception):
    pass


def lattice_contains(spec: LatticeSpec, v: Vector) -> bool:
    """Exact membership test in the chosen lattice.

    Root lattices: integer coordinates with zero sum (family A) or even sum
    (family D). Weight lattices: all coordinates share one residue class of
    denominator n+1 and sum to zero (A), or are all integers / all
    half-odd-integers (D).
    """
    if len(v) != spec.ambient_dim:
        raise DimensionMismatch(f"{len(v)} != {spec.ambient_dim}")
    n = spec.rank
    if spec.family == "A":
        total = sum(v)
        if total != 0:
            return False
        scaled = [x * (n + 1) for x in v]
        if any(x.denominator != 1 for x in scaled):
            return False
        if spec.is_root:
            return all(x.denominator == 1 for x in v)
        r0 = int(scaled[0]) % (n + 1)
        return all(int(x) % (n + 1) == r0 for x in scaled)
    if spec.is_root:
        if any(x.denominator != 1 for x in v):
            return False
        return int(sum(v)) % 2 == 0
    if all(x.denominator == 1 for x in v):
        return True
    return all(x.denominator == 2 for x in v)


@dataclass(frozen=True)
class LatticePoint:
    vector: Vector
    basis_coeffs: tuple[int, ...]


def lattice_point(spec: LatticeSpec, v: Vector) -> LatticePoint:
    """Express a lattice vector in its integer basis (simple roots for a root
    lattice, fundamental weights for a weight lattice)."""
    if not lattice_contains(spec, v):
        raise ValueError(f"{v} is not in the {spec.label} lattice")
    duals = fundamental_weights(spec) if spec.is_root else simple_roots(spec)
    coeffs = tuple(int(dot(v, w)) for w in duals)
    return LatticePoint(v, coeffs)


@dataclass(frozen=True)
class PlacedCell:
    center: Vector
    vertices: tuple[Vector, ...]
    kind: str


def delone_neighbors(spec: LatticeSpec) -> list[PlacedCell]:
    """One Delone cell per Voronoi vertex of V(0), by the orbit-sum rule.

    Family A pairs orbit k with orbit n+1-k (the middle orbit pairs with
    itself at odd rank); family D self-pairs each of its three orbits at even
    rank and swaps the two half-cube orbits at odd rank.
    """
    if not spec.is_root:
        raise VariantMismatch("Delone neighbor construction is for root lattices")
    n = spec.rank
    if spec.family == "A":
        pairs = [(k, n - 1 - k,
                  "simplex" if n - 1 - k in (0, n - 1) else "ambo")
                 for k in range(n)]
    elif n % 2 == 0:
        pairs = [(0, 0, "cross-polytope"),
                 (n - 2, n - 2, "hemicube"), (n - 1, n - 1, "hemicube")]
    else:
        pairs = [(0, 0, "cross-polytope"),
                 (n - 2, n - 1, "hemicube"), (n - 1, n - 2, "hemicube")]
    cells = []
    for center_k, shape_k, kind in pairs:
        shape = orbit(spec, _unit_coeffs(n, shape_k))
        for c in orbit(spec, _unit_coeffs(n, center_k)):
            verts = tuple(sorted(vadd(c, w) for w in shape))
            cells.append(PlacedCell(c, verts, kind))
    cells.sort(key=lambda cell: cell.center)
    return cells


@dataclass
class TessellationReport:
    spec: LatticeSpec
    cell_count: int
    cells_by_kind: dict[str, int]
    checks: dict[str, bool] = field(default_factory=dict)
    failure: str | None = None

    @property
    def ok(self) -> bool:
        return all(self.checks.values())


def verify_tessellation(spec: LatticeSpec, tolerance: float = 1e-9,
                        strict: bool = False) -> TessellationReport:
    """Check the placed first-shell cells against the Voronoi cell of origin.

    (a) every placed vertex is a lattice point, (b) every center is a Voronoi
    vertex, (c) the centers cover the Voronoi vertex set exactly once, and
    (d) the distinct origin-cell volumes (one hole class each per fundamental
    domain) sum to the lattice covolume.
    """
    cells = delone_neighbors(spec)
    by_kind: dict[str, int] = {}
    for c in cells:
        by_kind[c.kind] = by_kind.get(c.kind, 0) + 1
    report = TessellationReport(spec, len(cells), by_kind)

    bad = next((c for c in cells for v in c.vertices
                if not lattice_contains(spec, v)), None)
    report.checks["vertices_in_lattice"] = bad is None
    if bad is not None:
        report.failure = f"cell at {bad.center} has a vertex off the lattice"

    vor = set(voronoi_cell(spec).vertices)
    centers = [c.center for c in cells]
    report.checks["centers_are_voronoi_vertices"] = all(c in vor for c in centers)
    report.checks["centers_cover_voronoi_vertices"] = (
        set(centers) == vor and len(centers) == len(vor))
    if report.failure is None and not report.checks["centers_are_voronoi_vertices"]:
        report.failure = "a cell center is not a Voronoi vertex"
    if report.failure is None and not report.checks["centers_cover_voronoi_vertices"]:
        report.failure = "cell centers do not cover the Voronoi vertex set once each"

    vol_report = delone_volume_sum_check(spec, tolerance)
    report.checks["volume_accounting"] = vol_report.ok
    if report.failure is None and not vol_report.ok:
        report.failure = (f"cell volumes sum to {vol_report.total}, "
                          f"expected {vol_report.expected}")

    if strict and not report.ok:
        raise VerificationFailure(report.failure or "tessellation check failed")
    return report


def hole_points_per_domain(spec: LatticeSpec, block: int = 1) -> list[Vector]:
    """Brute-force hole census: Voronoi-cell vertices of every lattice
    translate in a (2*block+1)^n block, reduced into the fundamental
    parallelepiped of the simple-root basis. The distinct reduced points are
    the holes per unit cell (one per Delone cell class for these lattices)."""
    if not spec.is_root:
        raise VariantMismatch("hole census implemented for root lattices")
    n = spec.rank
    roots = simple_roots(spec)
    duals = fundamental_weights(spec)
    vor = voronoi_cell(spec).vertices

    def reduce(v: Vector) -> Vector:
        out = v
        for w, a in zip(duals, roots):
            shift = math.floor(dot(v, w))
            if shift:
                out = vadd(out, tuple(-shift * x for x in a))
        return out

    reps: set[Vector] = set()
    import itertools
    for combo in itertools.product(range(-block, block + 1), repeat=n):
        p = tuple([Q(0)] * spec.ambient_dim)
        for b, a in zip(combo, roots):
            if b:
                p = vadd(p, tuple(b * x for x in a))
        for v in vor:
            reps.add(reduce(vadd(p, v)))
    return sorted(reps)
