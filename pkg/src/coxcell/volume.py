"""Exact cell volumes, a numeric triangulation oracle, and cross-identities.

Closed forms are evaluated through their recurrences in exact surd
arithmetic. The oracle takes nothing from those formulas: it decomposes a
convex hull into pyramids over its facets (facets from the exact wrapping
enumerator), recursing down to simplices whose volume is the square root of
an exactly assembled Gram determinant. Floating point enters only at the
final square roots, which keeps the relative error far below the 1e-9
acceptance tolerance at these sizes.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .coxeter import LatticeSpec, group_order
from .exactnum import (
    Q,
    Surd,
    Vector,
    affine_rank,
    det_fraction,
    dot,
    gram_matrix,
    independent_subset,
    norm_sq,
    solve_linear,
    vadd,
    vscale,
    vsub,
)
from .hull import DegenerateInput, FacetFinder
from .polytope import (
    VariantMismatch,
    delone_cells_at_origin,
    facet_geometry_a,
    facet_geometry_d,
    fundamental_simplex,
    voronoi_cell,
)


class RankTooSmall(Exception):
    pass


def simplex_volume(n: int) -> Surd:
    """Volume of the regular n-simplex with edge sqrt(2), via its recurrence."""
    if n < 1:
        raise RankTooSmall("simplex volume needs n >= 1")
    vol = Surd.sqrt(2)  # segment between the two weight vectors of rank 1
    for m in range(2, n + 1):
        vol = vol * Surd(Q(1, m)) * Surd.sqrt(Q(m + 1, m))
    return vol


def cross_polytope_volume(n: int) -> Fraction:
    """Volume of conv(+-l_i): 2^n/n!."""
    if n < 1:
        raise RankTooSmall("cross polytope volume needs n >= 1")
    return Q(2 ** n, math.factorial(n))


def hemicube_volume(n: int) -> Fraction:
    """Volume of the half-cube vertex class, telescoped from rank 3 upward."""
    if n < 3:
        raise RankTooSmall("hemicube needs n >= 3")
    vol = Q(2, 6)
    for m in range(4, n + 1):
        vol += Q(2 ** (m - 2) * (m - 2), math.factorial(m))
    return vol


def voronoi_volume(spec: LatticeSpec) -> Surd:
    """Exact Voronoi cell volume (the lattice covolume)."""
    n = spec.rank
    if spec.family == "A":
        return Surd.sqrt(n + 1) if spec.is_root else Surd.sqrt(Q(1, n + 1))
    return Surd(2) if spec.is_root else Surd(Q(1, 2))


def fundamental_simplex_volume(spec: LatticeSpec) -> Surd:
    if not spec.is_root:
        raise VariantMismatch("fundamental simplex volume is for root lattices")
    n = spec.rank
    if spec.family == "A":
        return Surd.sqrt(Q(1, n + 1)) * Surd(Q(1, math.factorial(n)))
    return Surd(Q(1, 2 ** (n - 2) * math.factorial(n)))


# ---------------------------------------------------------------------------
# Numeric oracle
# ---------------------------------------------------------------------------

def _dist_sq_to_affine(point: Vector, pts: list[Vector]) -> Fraction:
    """Exact squared distance from a point to the affine hull of pts."""
    p0 = pts[0]
    diffs = [vsub(p, p0) for p in pts[1:]]
    keep = independent_subset(diffs)
    basis = [diffs[i] for i in keep]
    y = vsub(point, p0)
    if not basis:
        return norm_sq(y)
    g = gram_matrix(basis)
    rhs = [dot(b, y) for b in basis]
    x = solve_linear(g, rhs)
    return norm_sq(y) - sum((xi * ri for xi, ri in zip(x, rhs)), Q(0))


def numeric_volume_oracle(vertices) -> float:
    """k-volume of conv(vertices) inside its affine hull.

    Recursive pyramidal decomposition from the exact centroid over exact
    facets; the base simplex volume is sqrt(det Gram)/k!.
    """
    pts = list(dict.fromkeys(tuple(v) for v in vertices))
    if affine_rank(pts) == 0:
        raise DegenerateInput("vertex set has affine rank 0")
    finder = FacetFinder(pts)
    memo: dict[frozenset, float] = {}

    def vol(idx: frozenset) -> float:
        got = memo.get(idx)
        if got is not None:
            return got
        sub = sorted(idx)
        sub_pts = [pts[i] for i in sub]
        p0 = sub_pts[0]
        diffs = [vsub(p, p0) for p in sub_pts[1:]]
        keep = independent_subset(diffs)
        k = len(keep)
        if len(sub) == k + 1:
            g = det_fraction(gram_matrix(diffs))
            v = math.sqrt(float(g)) / math.factorial(k)
        else:
            c = sub_pts[0]
            for p in sub_pts[1:]:
                c = vadd(c, p)
            c = vscale(c, Q(1, len(sub_pts)))
            v = 0.0
            for facet in finder.facets(sub):
                h_sq = _dist_sq_to_affine(c, [pts[i] for i in sorted(facet)])
                v += vol(facet) * math.sqrt(float(h_sq)) / k
        memo[idx] = v
        return v

    return vol(frozenset(range(len(pts))))


@dataclass
class VolumeResult:
    symbolic: Surd | None
    numeric: float | None
    relative_gap: float | None

    @staticmethod
    def compare(symbolic: Surd, numeric: float) -> "VolumeResult":
        ref = float(symbolic)
        gap = abs(numeric - ref) / max(1.0, abs(ref))
        return VolumeResult(symbolic, numeric, gap)


# ---------------------------------------------------------------------------
# Cross-identities
# ---------------------------------------------------------------------------

@dataclass
class DeloneVolumeReport:
    spec: LatticeSpec
    cell_kinds: list[str]
    cell_volumes: list[float]
    total: float
    expected: Surd
    relative_gap: float
    ok: bool


def delone_volume_sum_check(spec: LatticeSpec,
                            tolerance: float = 1e-9) -> DeloneVolumeReport:
    """Numeric volumes of the origin Delone cells against the Voronoi volume."""
    if not spec.is_root:
        raise VariantMismatch("the origin-cell volume identity is for root lattices")
    cells = delone_cells_at_origin(spec)
    vols = [numeric_volume_oracle(c.vertices) for c in cells]
    total = math.fsum(vols)
    expected = voronoi_volume(spec)
    gap = abs(total - float(expected)) / max(1.0, float(expected))
    return DeloneVolumeReport(
        spec=spec,
        cell_kinds=[c.kind for c in cells],
        cell_volumes=vols,
        total=total,
        expected=expected,
        relative_gap=gap,
        ok=gap <= tolerance,
    )


@dataclass
class PyramidIdentityReport:
    spec: LatticeSpec
    facet_count: int
    height: Surd
    facet_volume: Surd
    reconstructed: Surd
    expected: Surd
    ok: bool


def pyramid_volume_identity(spec: LatticeSpec) -> PyramidIdentityReport:
    """Voronoi volume rebuilt as (facets) x (1/n) x height x facet volume.

    The facet center is half the highest root in both families, so the
    pyramid height is sqrt(2)/2 exactly; everything stays in surd arithmetic
    and the comparison is exact equality.
    """
    if not spec.is_root:
        raise VariantMismatch("pyramid identity is for root lattices")
    n = spec.rank
    if spec.family == "A":
        count = n * (n + 1)
        facet_vol = facet_geometry_a(n).volume
    else:
        count = 2 * n * (n - 1)
        facet_vol = facet_geometry_d(n).volume
    height = Surd.sqrt(Q(1, 2))
    reconstructed = Surd(Q(count, n)) * height * facet_vol
    expected = voronoi_volume(spec)
    return PyramidIdentityReport(
        spec=spec,
        facet_count=count,
        height=height,
        facet_volume=facet_vol,
        reconstructed=reconstructed,
        expected=expected,
        ok=reconstructed == expected,
    )


def weyl_copies_identity(spec: LatticeSpec) -> bool:
    """group order x fundamental simplex volume == Voronoi volume, exactly."""
    total = Surd(group_order(spec)) * fundamental_simplex_volume(spec)
    return total == voronoi_volume(spec)


def fundamental_simplex_oracle(spec: LatticeSpec) -> float:
    return numeric_volume_oracle(fundamental_simplex(spec))


def voronoi_volume_oracle(spec: LatticeSpec) -> float:
    return numeric_volume_oracle(voronoi_cell(spec).vertices)
