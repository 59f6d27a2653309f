"""Named polytopes of the A/D lattices and their face lattices.

Constructors return vertex sets as Weyl orbits (or unions of orbits) in
canonical lexicographic order. Face enumeration is top-down: facets come from
supporting hyperplanes whose normals are known from lattice duality (roots
bisected for a root-lattice Voronoi cell, half-weight orbit centers for a
weight-lattice one, dual vertex directions for root polytopes); lower faces
are intersections of higher ones filtered by exact affine rank.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

import numpy as np

from . import hull
from .coxeter import (
    LatticeSpec,
    fundamental_weights,
    orbit,
    orbit_of_vector,
    reflect,
)
from .exactnum import (
    Q,
    Surd,
    Vector,
    affine_rank,
    dot,
    gram_matrix,
    det_fraction,
    norm_sq,
    vadd,
    vscale,
    vsub,
)


class VariantMismatch(Exception):
    """Operation not defined for this lattice variant."""


class OutOfValidityRange(Exception):
    """Closed-form facet count not applicable; enumeration is authoritative."""


class BudgetExceeded(Exception):
    pass


class MissingCounts(Exception):
    pass


@dataclass(frozen=True)
class OrbitPolytope:
    """Vertex set of a Weyl orbit or union of orbits, canonically ordered."""

    spec: LatticeSpec
    kind: str
    generating: tuple[tuple[Fraction, ...], ...]
    vertices: tuple[Vector, ...]

    def __len__(self):
        return len(self.vertices)

    @property
    def dim(self) -> int:
        return affine_rank(self.vertices)


def _unit_coeffs(n: int, k: int) -> tuple[Fraction, ...]:
    return tuple(Q(1) if i == k else Q(0) for i in range(n))


def _merge_orbits(spec: LatticeSpec, kind: str,
                  coeff_list: list[tuple[Fraction, ...]]) -> OrbitPolytope:
    verts: set[Vector] = set()
    for coeffs in coeff_list:
        verts.update(orbit(spec, coeffs))
    return OrbitPolytope(spec, kind, tuple(coeff_list), tuple(sorted(verts)))


def highest_root(spec: LatticeSpec) -> Vector:
    dim = spec.ambient_dim
    v = [Q(0)] * dim
    if spec.family == "A":
        v[0], v[dim - 1] = Q(1), Q(-1)
    else:
        v[0], v[1] = Q(1), Q(1)
    return tuple(v)


def root_system(spec: LatticeSpec) -> tuple[Vector, ...]:
    """All roots: the orbit of the highest root."""
    return orbit_of_vector(spec, highest_root(spec), force=True)


@lru_cache(maxsize=None)
def root_polytope(spec: LatticeSpec) -> OrbitPolytope:
    """Convex hull of the root system (n(n+1) vertices for A, 2n(n-1) for D)."""
    if not spec.is_root:
        raise VariantMismatch("root polytope is defined for root lattices")
    verts = root_system(spec)
    n = spec.rank
    if spec.family == "A":
        gen = tuple(Q(1) if i in (0, n - 1) else Q(0) for i in range(n))
    else:
        gen = _unit_coeffs(n, 1) if n >= 4 else (Q(0), Q(1), Q(1))
    return OrbitPolytope(spec, "root", (gen,), verts)


@lru_cache(maxsize=None)
def voronoi_cell(spec: LatticeSpec) -> OrbitPolytope:
    """Voronoi cell of the origin, as the union of hole orbits.

    Root lattices: unions of fundamental-weight orbits (all n of them for
    family A; the first and the two last for family D). Weight lattices: the
    single orbit of the deep hole (scaled Weyl vector for A*, half/quarter
    weight combinations for D*).
    """
    n = spec.rank
    if spec.is_root:
        ks = range(n) if spec.family == "A" else [0, n - 2, n - 1]
        return _merge_orbits(spec, "voronoi",
                             [_unit_coeffs(n, k) for k in ks])
    if spec.family == "A":
        coeffs = tuple(Q(1, n + 1) for _ in range(n))
        return _merge_orbits(spec, "voronoi", [coeffs])
    # D_n weight lattice: hole formulas hold for n >= 4
    if n < 4:
        raise OutOfValidityRange(
            "D3 weight lattice: use the equivalent A3 weight lattice")
    t = n // 2
    coeffs = [Q(0)] * n
    if n % 2 == 0:
        coeffs[t - 1] = Q(1, 2)
    else:
        coeffs[t - 1] = Q(1, 4)
        coeffs[t] = Q(1, 4)
    return _merge_orbits(spec, "voronoi", [tuple(coeffs)])


@lru_cache(maxsize=None)
def contact_polytope(spec: LatticeSpec) -> OrbitPolytope:
    """Convex hull of the nearest lattice points (kissing configuration)."""
    n = spec.rank
    if spec.is_root:
        rp = root_polytope(spec)
        return OrbitPolytope(spec, "contact", rp.generating, rp.vertices)
    if spec.family == "A":
        # diplo-simplex: a simplex orbit together with its negative
        return _merge_orbits(spec, "contact",
                             [_unit_coeffs(n, 0), _unit_coeffs(n, n - 1)])
    return _merge_orbits(spec, "contact", [_unit_coeffs(n, 0)])


def delone_cells_at_origin(spec: LatticeSpec) -> list[OrbitPolytope]:
    """Delone cells having the origin as a vertex (one per hole class).

    For weight lattices the representative cell sits at its hole point: the
    fundamental simplex for A*, the (separated) join of two hypercubes for D*.
    """
    n = spec.rank
    if spec.is_root:
        if spec.family == "A":
            kinds = ["simplex"] + ["ambo"] * max(0, n - 2) + (
                ["simplex"] if n >= 2 else [])
            return [_orbit_cell(spec, k, kinds[k]) for k in range(n)]
        return [_orbit_cell(spec, 0, "cross-polytope"),
                _orbit_cell(spec, n - 2, "hemicube"),
                _orbit_cell(spec, n - 1, "hemicube")]
    if spec.family == "A":
        weights = fundamental_weights(spec)
        zero = tuple([Q(0)] * spec.ambient_dim)
        verts = tuple(sorted((zero,) + weights))
        return [OrbitPolytope(spec, "simplex", (), verts)]
    return [_weight_d_join(spec)]


def _orbit_cell(spec: LatticeSpec, k: int, kind: str) -> OrbitPolytope:
    coeffs = _unit_coeffs(spec.rank, k)
    return OrbitPolytope(spec, kind, (coeffs,), orbit(spec, coeffs))


def _weight_d_join(spec: LatticeSpec) -> OrbitPolytope:
    """Delone cell of the D weight lattice at its representative hole.

    Two hypercubes in complementary coordinate blocks: for even rank they
    share the hole as common center; for odd rank their centers sit at
    offsets -+ l_{t+1}/4 from it, every vertex an integer or half-integer
    lattice point.
    """
    n = spec.rank
    if n < 4:
        raise OutOfValidityRange(
            "D3 weight lattice: use the equivalent A3 weight lattice")
    t = n // 2
    P = voronoi_hole_point(spec)
    verts: set[Vector] = set()
    if n % 2 == 0:
        blocks = [(range(0, t), tuple([Q(0)] * n)),
                  (range(t, n), tuple([Q(0)] * n))]
    else:
        off = [Q(0)] * n
        off[t] = Q(-1, 4)
        lo = tuple(off)
        hi = tuple(-x for x in off)
        blocks = [(range(0, t), lo), (range(t + 1, n), hi)]
    for coords, offset in blocks:
        coords = list(coords)
        for signs in range(1 << len(coords)):
            v = list(vadd(P, offset))
            for pos, j in enumerate(coords):
                v[j] += Q(1, 2) if (signs >> pos) & 1 else Q(-1, 2)
            verts.add(tuple(v))
    kind = "join" if n % 2 == 0 else "separated-join"
    return OrbitPolytope(spec, kind, (), tuple(sorted(verts)))


def voronoi_hole_point(spec: LatticeSpec) -> Vector:
    """The representative Voronoi-cell vertex (deep hole) of a weight lattice."""
    if spec.is_root:
        raise VariantMismatch("hole point formulas are for weight lattices")
    n = spec.rank
    weights = fundamental_weights(spec)
    if spec.family == "A":
        total = weights[0]
        for w in weights[1:]:
            total = vadd(total, w)
        return vscale(total, Q(1, n + 1))
    if n < 4:
        raise OutOfValidityRange(
            "D3 weight lattice: use the equivalent A3 weight lattice")
    t = n // 2
    if n % 2 == 0:
        return vscale(weights[t - 1], Q(1, 2))
    return vscale(vadd(weights[t - 1], weights[t]), Q(1, 4))


def fundamental_simplex(spec: LatticeSpec) -> tuple[Vector, ...]:
    """Vertices of the fundamental simplex (origin included)."""
    if not spec.is_root:
        raise VariantMismatch("fundamental simplex is defined for root lattices")
    n = spec.rank
    weights = fundamental_weights(spec)
    zero = tuple([Q(0)] * spec.ambient_dim)
    if spec.family == "A":
        return (zero,) + weights
    mids = tuple(vscale(weights[k], Q(1, 2)) for k in range(1, n - 2))
    return (zero, weights[0]) + mids + (weights[n - 2], weights[n - 1])


# ---------------------------------------------------------------------------
# Closed-form facet counts
# ---------------------------------------------------------------------------

def facet_counts_formula(spec: LatticeSpec, d: int, body: str = "voronoi") -> int:
    """Closed-form number of d-faces of the root polytope or Voronoi cell.

    Only root lattices have closed forms. For family D at rank 3 the printed
    edge-count cases collide and disagree with enumeration, so d = 1 raises
    OutOfValidityRange there; every other case is exact.
    """
    n = spec.rank
    if body not in ("root", "voronoi"):
        raise ValueError("body must be 'root' or 'voronoi'")
    if not spec.is_root:
        raise OutOfValidityRange("no closed facet-count forms for weight lattices")
    if not 0 <= d <= n - 1:
        raise OutOfValidityRange(f"d={d} outside 0..{n - 1}")
    if spec.family == "A":
        if body == "root":
            return (math.factorial(n + 1)
                    // (math.factorial(n - 1 - d) * math.factorial(d + 2))
                    * (2 ** (2 + d) - 2))
        return (math.factorial(n + 1)
                // (math.factorial(n + 1 - d) * math.factorial(d))
                * (2 ** (n + 1 - d) - 2))
    if body == "voronoi":
        d = n - 1 - d  # dual pairing with the root polytope
    if d == 0:
        return 2 * n * (n - 1)
    if d == n - 1:
        return 2 ** n + 2 * n
    if n == 3:
        raise OutOfValidityRange(
            "rank-3 D edge counts collide in closed form; enumerate instead")
    if d == 1:
        return 4 * n * (n - 1) * (n - 2)
    if d == n - 2:
        return 3 * 2 ** (n - 1) * n
    return 2 ** (d + 1) * math.comb(n, n - d - 1) * (2 * (n - d - 1) + 1)


def euler_check(counts: dict[int, int], n: int) -> bool:
    """Alternating face-count sum against 1 - (-1)^n."""
    missing = [d for d in range(n) if d not in counts]
    if missing:
        raise MissingCounts(f"missing face counts for dims {missing}")
    total = sum((-1) ** d * counts[d] for d in range(n))
    return total == 1 - (-1) ** n


# ---------------------------------------------------------------------------
# Face enumeration
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Face:
    indices: tuple[int, ...]
    normal: Vector | None = None
    offset: Fraction | None = None


@dataclass
class FaceLattice:
    dim: int
    faces_by_dim: dict[int, list[Face]]

    def counts(self) -> dict[int, int]:
        return {d: len(fs) for d, fs in self.faces_by_dim.items()}

    def faces(self, d: int) -> list[Face]:
        return self.faces_by_dim.get(d, [])


def _bisector_candidates(poly: OrbitPolytope) -> list[tuple[Vector, Fraction]]:
    spec = poly.spec
    if spec.is_root:
        return [(p, norm_sq(p) / 2) for p in root_system(spec)]
    n = spec.rank
    ks = range(n) if spec.family == "A" else [0, n - 2, n - 1]
    cands = []
    for k in ks:
        for w in orbit(spec, _unit_coeffs(n, k)):
            # facet center w/2 bisects the lattice vector w
            c = vscale(w, Q(1, 2))
            cands.append((c, norm_sq(c)))
    return cands


def _dual_direction_candidates(poly: OrbitPolytope) -> list[tuple[Vector, None]]:
    vor = voronoi_cell(poly.spec)
    return [(v, None) for v in vor.vertices]


def _facets_from_candidates(verts, candidates):
    scale = 1
    for v in verts:
        for x in v:
            scale = scale * x.denominator // math.gcd(scale, x.denominator)
    mat = np.asarray([[int(x * scale) for x in v] for v in verts],
                     dtype=np.int64)
    found = {}
    for a, b in candidates:
        denom = 1
        for x in a:
            denom = denom * x.denominator // math.gcd(denom, x.denominator)
        ia = [int(x * denom) for x in a]
        vals = mat @ np.asarray(ia, dtype=np.int64)
        target = b * scale * denom if b is not None else Q(int(vals.max()))
        if any(Q(int(v)) > target for v in vals):
            raise RuntimeError("vertex beyond candidate supporting plane")
        idx = frozenset(i for i, v in enumerate(vals) if Q(int(v)) == target)
        if idx and idx not in found:
            found[idx] = (a, Q(target, scale * denom) if b is None else b)
    return found


@lru_cache(maxsize=64)
def enumerate_faces(poly: OrbitPolytope, max_vertices: int = 50000,
                    lower: bool | None = None) -> FaceLattice:
    """Full face lattice (or facets only) of a constructed polytope.

    Facet candidates come from duality where available; for cell kinds with
    no published normal set the exact wrapping enumerator is used instead.
    ``lower=None`` builds the full lattice up to rank 6 and facets only above.
    """
    verts = poly.vertices
    if len(verts) > max_vertices:
        raise BudgetExceeded(f"{len(verts)} vertices > budget {max_vertices}")
    dim = affine_rank(verts)
    if lower is None:
        lower = dim <= 6

    if poly.kind == "voronoi":
        candidates = _bisector_candidates(poly)
    elif poly.kind in ("root", "contact") and poly.spec.is_root:
        candidates = _dual_direction_candidates(poly)
    else:
        candidates = None

    if candidates is not None:
        found = _facets_from_candidates(verts, candidates)
        facets = {fs: plane for fs, plane in found.items()
                  if affine_rank([verts[i] for i in fs]) == dim - 1}
    else:
        facets = {fs: (normal, offset)
                  for fs, normal, offset in hull.convex_facets(list(verts))}

    faces = {d: [] for d in range(dim)}
    faces[dim - 1] = [Face(tuple(sorted(fs)), a, b)
                      for fs, (a, b) in sorted(facets.items(), key=lambda kv: sorted(kv[0]))]
    if not lower or dim <= 1:
        return FaceLattice(dim, {d: v for d, v in faces.items() if v})

    ranks: dict[frozenset, int] = {fs: dim - 1 for fs in facets}
    frontier = list(facets)
    facet_list = list(facets)
    while frontier:
        fresh = []
        for f in frontier:
            for g in facet_list:
                h = f & g
                if not h or h == f or h in ranks:
                    continue
                ranks[h] = affine_rank([verts[i] for i in h])
                fresh.append(h)
        frontier = fresh
    for fs, r in ranks.items():
        if r < dim - 1:
            faces[r].append(Face(tuple(sorted(fs))))
    for d in range(dim - 1):
        faces[d].sort(key=lambda f: f.indices)

    # structural checks: every vertex appears; ridges sit in exactly 2 facets
    if {f.indices[0] for f in faces[0]} != set(range(len(verts))):
        raise RuntimeError("face closure lost vertices; candidate set incomplete")
    for ridge in faces.get(dim - 2, []):
        rset = set(ridge.indices)
        owners = sum(1 for fs in facets if rset <= fs)
        if owners != 2:
            raise RuntimeError(
                f"ridge in {owners} facets; candidate set incomplete")
    return FaceLattice(dim, faces)


@dataclass
class FacetCountTable:
    spec: LatticeSpec
    body: str
    counts: dict[int, tuple[int | None, int | None, bool | None]] = field(
        default_factory=dict)

    def all_agree(self) -> bool:
        return all(flag is not False for _, _, flag in self.counts.values())


def facet_count_table(spec: LatticeSpec, body: str = "voronoi",
                      lattice: FaceLattice | None = None) -> FacetCountTable:
    """Formula-vs-enumeration comparison for one polytope body."""
    poly = voronoi_cell(spec) if body == "voronoi" else root_polytope(spec)
    if lattice is None:
        lattice = enumerate_faces(poly)
    enumerated = lattice.counts()
    table = FacetCountTable(spec, body)
    for d in range(lattice.dim):
        try:
            formula = facet_counts_formula(spec, d, body)
        except OutOfValidityRange:
            formula = None
        enum = enumerated.get(d)
        agree = (formula == enum) if formula is not None and enum is not None else None
        table.counts[d] = (formula, enum, agree)
    return table


# ---------------------------------------------------------------------------
# Facet geometry
# ---------------------------------------------------------------------------

@dataclass
class RhombohedralFacet:
    """The A-family Voronoi facet: a rhombohedron on 2^{n-1} vertices."""

    rank: int
    vertices: tuple[Vector, ...]
    edge_generators: tuple[Vector, ...]
    edge_norm_sq: Fraction
    pair_inner_product: Fraction
    angle_cosine: Fraction
    gram_det: Fraction
    generator_matrix: list[list[Surd]]
    matrix_det: Surd
    center: Vector
    volume: Surd


def facet_geometry_a(n: int) -> RhombohedralFacet:
    """Geometry of the rhombohedral Voronoi facet of the rank-n A lattice.

    The facet centered at half the highest root is the orbit of the weight
    set under the interior diagram reflections; it is generated by the n-1
    consecutive weight differences, all of one length with one common angle.
    The generator matrix is expressed in a rotated orthonormal basis of the
    facet hyperplane and comes out upper triangular, so its determinant (the
    facet volume) is the product of the diagonal.
    """
    if n < 2:
        raise ValueError("facet geometry needs rank >= 2")
    spec = LatticeSpec("A", n)
    weights = fundamental_weights(spec)
    verts: set[Vector] = set(weights)
    frontier = list(weights)
    gens = list(range(1, n - 1))  # reflections fixing w_1 and w_n
    while frontier:
        nxt = []
        for v in frontier:
            for i in gens:
                w = reflect(v, i, spec)
                if w not in verts:
                    verts.add(w)
                    nxt.append(w)
        frontier = nxt
    ks = tuple(vsub(weights[i], weights[i + 1]) for i in range(n - 1))
    gram = gram_matrix(ks)
    # rotated orthonormal directions spanning the facet hyperplane
    us = []
    for j in range(2, n + 1):
        u = [Q(0)] * (n + 1)
        u[0] = Q(1)
        u[n] = Q(1)
        for m in range(1, j - 1):
            u[m] = Q(1)
        u[j - 1] = Q(-j)
        us.append(tuple(u))
    mat = [[dot(k, u) * Surd.sqrt(Q(1) / norm_sq(u)) for u in us] for k in ks]
    for i in range(n - 1):
        for j in range(i):
            if mat[i][j].coeff != 0:
                raise RuntimeError("generator matrix is not upper triangular")
    det = Surd(1)
    for i in range(n - 1):
        det = det * mat[i][i]
    center = vscale(vadd(weights[0], weights[n - 1]), Q(1, 2))
    return RhombohedralFacet(
        rank=n,
        vertices=tuple(sorted(verts)),
        edge_generators=ks,
        edge_norm_sq=Q(n, n + 1),
        pair_inner_product=Q(-1, n + 1),
        angle_cosine=Q(-1, n),
        gram_det=det_fraction(gram),
        generator_matrix=mat,
        matrix_det=det,
        center=center,
        volume=det,
    )


@dataclass
class DipyramidFacet:
    """The D-family Voronoi facet: a dipyramid over an (n-2)-cube."""

    rank: int
    apexes: tuple[Vector, Vector]
    base_vertices: tuple[Vector, ...]
    center: Vector
    volume: Surd
    apex_edge_norm_sq: Fraction
    base_edge_norm_sq: Fraction

    @property
    def vertices(self) -> tuple[Vector, ...]:
        return tuple(sorted(self.apexes + self.base_vertices))


def facet_geometry_d(n: int) -> DipyramidFacet:
    """Geometry of the dipyramid Voronoi facet of the rank-n D lattice."""
    if n < 3:
        raise ValueError("facet geometry needs rank >= 3")
    zero = [Q(0)] * n
    l1 = tuple([Q(1)] + zero[1:])
    l2 = tuple([Q(0), Q(1)] + zero[2:])
    base = []
    for signs in range(1 << (n - 2)):
        v = [Q(1, 2), Q(1, 2)] + [Q(0)] * (n - 2)
        for pos in range(n - 2):
            v[2 + pos] = Q(1, 2) if (signs >> pos) & 1 else Q(-1, 2)
        base.append(tuple(v))
    center = tuple([Q(1, 2), Q(1, 2)] + zero[2:])
    return DipyramidFacet(
        rank=n,
        apexes=(l1, l2),
        base_vertices=tuple(sorted(base)),
        center=center,
        volume=Surd(Q(1, n - 1), 2),
        apex_edge_norm_sq=Q(n, 4),
        base_edge_norm_sq=Q(1),
    )
