from fractions import Fraction as Q
from itertools import product

import pytest

from coxcell.coxeter import LatticeSpec, fundamental_weights, simple_roots
from coxcell.exactnum import DimensionMismatch, dot, norm_sq, vadd, vec, vscale
from coxcell.polytope import VariantMismatch, voronoi_cell
from coxcell.tessellate import (
    delone_neighbors,
    hole_points_per_domain,
    lattice_contains,
    lattice_point,
    verify_tessellation,
)
from coxcell.volume import numeric_volume_oracle


def test_lattice_contains_root_d():
    d4 = LatticeSpec("D", 4)
    assert lattice_contains(d4, vec([1, 1, 0, 0]))
    assert not lattice_contains(d4, vec([1, 0, 0, 0]))
    assert lattice_contains(d4, vec([2, 0, 0, 0]))
    assert not lattice_contains(d4, vec([Q(1, 2)] * 4))


def test_lattice_contains_root_a():
    a2 = LatticeSpec("A", 2)
    assert lattice_contains(a2, vec([1, -1, 0]))
    assert lattice_contains(a2, vec([0, 0, 0]))
    assert not lattice_contains(a2, vec([1, 0, 0]))  # nonzero sum
    assert not lattice_contains(a2, vec([Q(2, 3), Q(-1, 3), Q(-1, 3)]))
    with pytest.raises(DimensionMismatch):
        lattice_contains(a2, vec([1, -1]))


def test_lattice_contains_weight():
    a4s = LatticeSpec("A", 4, "weight")
    w1 = fundamental_weights(a4s)[0]
    assert lattice_contains(a4s, w1)
    assert lattice_contains(a4s, vec([1, -1, 0, 0, 0]))  # root sublattice
    assert not lattice_contains(a4s, vec([Q(1, 5), 0, 0, 0, Q(-1, 5)]))
    d5s = LatticeSpec("D", 5, "weight")
    assert lattice_contains(d5s, vec([Q(1, 2)] * 5))
    assert lattice_contains(d5s, vec([3, 0, 1, 0, 0]))
    assert not lattice_contains(d5s, vec([Q(1, 2), 0, 0, 0, 0]))


def test_lattice_point_coefficients():
    a2 = LatticeSpec("A", 2)
    lp = lattice_point(a2, vec([1, 0, -1]))  # a1 + a2
    assert lp.basis_coeffs == (1, 1)
    roots = simple_roots(a2)
    rebuilt = vadd(vscale(roots[0], lp.basis_coeffs[0]),
                   vscale(roots[1], lp.basis_coeffs[1]))
    assert rebuilt == lp.vector

    a4s = LatticeSpec("A", 4, "weight")
    w = fundamental_weights(a4s)
    lp = lattice_point(a4s, vadd(w[0], w[3]))
    assert lp.basis_coeffs == (1, 0, 0, 1)
    with pytest.raises(ValueError):
        lattice_point(a2, vec([1, 0, 0]))


def test_delone_neighbors_counts():
    cells = delone_neighbors(LatticeSpec("D", 3))
    kinds = {}
    for c in cells:
        kinds[c.kind] = kinds.get(c.kind, 0) + 1
    assert kinds == {"cross-polytope": 6, "hemicube": 8}

    cells = delone_neighbors(LatticeSpec("D", 4))
    assert len(cells) == 24
    assert all(len(c.vertices) == 8 for c in cells)

    cells = delone_neighbors(LatticeSpec("A", 2))
    assert len(cells) == 6 and all(c.kind == "simplex" for c in cells)
    with pytest.raises(VariantMismatch):
        delone_neighbors(LatticeSpec("A", 2, "weight"))


def test_delone_neighbor_cell_at_top_weight_d():
    # the cell centered at the half-sum hole has 2^{n-1} vertices
    for n in range(3, 7):
        spec = LatticeSpec("D", n)
        w_top = fundamental_weights(spec)[n - 1]
        cells = [c for c in delone_neighbors(spec) if c.center == w_top]
        assert len(cells) == 1
        assert len(cells[0].vertices) == 2 ** (n - 1)


def test_d4_neighbors_are_congruent_cross_polytopes():
    spec = LatticeSpec("D", 4)
    vols = {round(numeric_volume_oracle(c.vertices), 9)
            for c in delone_neighbors(spec)}
    assert vols == {round(2.0 / 3.0, 9)}


def test_a2_neighbor_vertices_from_orbit_sums():
    # the two triangle orbits add to put one triangle at each hexagon vertex
    spec = LatticeSpec("A", 2)
    cells = delone_neighbors(spec)
    vor = set(voronoi_cell(spec).vertices)
    assert {c.center for c in cells} == vor
    for c in cells:
        assert all(lattice_contains(spec, v) for v in c.vertices)


@pytest.mark.parametrize("family,rank", [("A", 2), ("A", 3), ("A", 4),
                                         ("D", 3), ("D", 4)])
def test_verify_tessellation(family, rank):
    report = verify_tessellation(LatticeSpec(family, rank))
    assert report.ok, report.failure
    assert set(report.checks) == {
        "vertices_in_lattice", "centers_are_voronoi_vertices",
        "centers_cover_voronoi_vertices", "volume_accounting"}


def test_verify_tessellation_counts():
    rep = verify_tessellation(LatticeSpec("D", 3))
    assert rep.cells_by_kind == {"cross-polytope": 6, "hemicube": 8}
    rep = verify_tessellation(LatticeSpec("D", 4))
    assert rep.cell_count == 24


def test_hole_census_matches_cell_classes():
    # one hole per Delone cell class per fundamental domain
    for family, rank, classes in [("A", 2, 2), ("A", 3, 3), ("D", 3, 3)]:
        holes = hole_points_per_domain(LatticeSpec(family, rank))
        assert len(holes) == classes


def test_translation_closure_bisectors():
    # every Voronoi vertex satisfies (v, p) <= (p,p)/2 for lattice points p
    # in a full coefficient shell, so translated cells cannot overlap V(0)
    for spec in [LatticeSpec("A", 3), LatticeSpec("D", 3)]:
        roots = simple_roots(spec)
        verts = voronoi_cell(spec).vertices
        for combo in product([-2, -1, 0, 1, 2], repeat=spec.rank):
            if not any(combo):
                continue
            p = tuple([Q(0)] * spec.ambient_dim)
            for b, a in zip(combo, roots):
                if b:
                    p = vadd(p, vscale(a, b))
            half = norm_sq(p) / 2
            assert all(dot(v, p) <= half for v in verts), (spec, combo)
