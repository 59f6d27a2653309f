from fractions import Fraction as Q

import pytest

from coxcell.coxeter import LatticeSpec, fundamental_weights, orbit
from coxcell.exactnum import Surd, dot, norm_sq, vadd, vec, vscale, vsub
from coxcell.polytope import (
    BudgetExceeded,
    MissingCounts,
    OutOfValidityRange,
    VariantMismatch,
    contact_polytope,
    delone_cells_at_origin,
    enumerate_faces,
    euler_check,
    facet_count_table,
    facet_counts_formula,
    facet_geometry_a,
    facet_geometry_d,
    fundamental_simplex,
    root_polytope,
    root_system,
    voronoi_cell,
)


def test_root_polytopes():
    assert len(root_polytope(LatticeSpec("A", 2))) == 6
    assert len(root_polytope(LatticeSpec("D", 4))) == 24
    assert len(root_polytope(LatticeSpec("D", 3))) == 12
    assert len(root_polytope(LatticeSpec("A", 1))) == 2
    for n in range(1, 8):
        assert len(root_system(LatticeSpec("A", n))) == n * (n + 1)
    for n in range(3, 8):
        assert len(root_system(LatticeSpec("D", n))) == 2 * n * (n - 1)
    with pytest.raises(VariantMismatch):
        root_polytope(LatticeSpec("A", 2, "weight"))


def test_voronoi_vertex_counts_root():
    assert len(voronoi_cell(LatticeSpec("A", 4))) == 30
    assert len(voronoi_cell(LatticeSpec("D", 3))) == 14
    for n in range(1, 9):
        assert len(voronoi_cell(LatticeSpec("A", n))) == 2 ** (n + 1) - 2
    for n in range(3, 9):
        assert len(voronoi_cell(LatticeSpec("D", n))) == 2 ** n + 2 * n


def test_voronoi_vertex_counts_weight():
    assert len(voronoi_cell(LatticeSpec("A", 3, "weight"))) == 24
    assert len(voronoi_cell(LatticeSpec("A", 4, "weight"))) == 120
    assert len(voronoi_cell(LatticeSpec("D", 4, "weight"))) == 24
    assert len(voronoi_cell(LatticeSpec("D", 5, "weight"))) == 240
    assert len(voronoi_cell(LatticeSpec("D", 6, "weight"))) == 160
    with pytest.raises(OutOfValidityRange):
        voronoi_cell(LatticeSpec("D", 3, "weight"))


def test_voronoi_bisector_inequalities():
    # every vertex stays weakly inside every root bisector, with equality
    # attained (the bisectors are the supporting planes)
    for spec in [LatticeSpec("A", 3), LatticeSpec("D", 4)]:
        cell = voronoi_cell(spec)
        for p in root_system(spec):
            half = norm_sq(p) / 2
            vals = [dot(v, p) for v in cell.vertices]
            assert max(vals) == half
            assert all(v <= half for v in vals)


def test_delone_cells_at_origin():
    cells = delone_cells_at_origin(LatticeSpec("A", 2))
    assert [c.kind for c in cells] == ["simplex", "simplex"]
    assert all(len(c) == 3 for c in cells)

    for n in range(3, 7):
        cells = delone_cells_at_origin(LatticeSpec("D", n))
        assert [c.kind for c in cells] == ["cross-polytope", "hemicube", "hemicube"]
        assert [len(c) for c in cells] == [2 * n, 2 ** (n - 1), 2 ** (n - 1)]

    cells = delone_cells_at_origin(LatticeSpec("A", 4, "weight"))
    assert len(cells) == 1 and cells[0].kind == "simplex" and len(cells[0]) == 5


def test_weight_d_join_cells():
    cell = delone_cells_at_origin(LatticeSpec("D", 6, "weight"))[0]
    assert cell.kind == "join" and len(cell) == 16
    # two cubes in complementary blocks around the hole (1,1,1,0,0,0)/2
    P = vec([Q(1, 2), Q(1, 2), Q(1, 2), 0, 0, 0])
    for v in cell.vertices:
        d = vsub(v, P)
        first, second = d[:3], d[3:]
        assert (all(abs(x) == Q(1, 2) for x in first) and all(x == 0 for x in second)) \
            or (all(x == 0 for x in first) and all(abs(x) == Q(1, 2) for x in second))

    cell5 = delone_cells_at_origin(LatticeSpec("D", 5, "weight"))[0]
    assert cell5.kind == "separated-join" and len(cell5) == 8
    # every vertex is a lattice point equidistant from the hole
    from coxcell.polytope import voronoi_hole_point
    from coxcell.tessellate import lattice_contains
    P5 = voronoi_hole_point(LatticeSpec("D", 5, "weight"))
    dists = {norm_sq(vsub(v, P5)) for v in cell5.vertices}
    assert dists == {Q(9, 16)}
    assert all(lattice_contains(LatticeSpec("D", 5, "weight"), v)
               for v in cell5.vertices)


def test_contact_polytopes():
    cp = contact_polytope(LatticeSpec("A", 3, "weight"))
    assert len(cp) == 8
    faces = enumerate_faces(cp)
    assert faces.counts() == {0: 8, 1: 12, 2: 6}  # a cube
    assert len(contact_polytope(LatticeSpec("A", 4, "weight"))) == 10
    assert len(contact_polytope(LatticeSpec("D", 5, "weight"))) == 10
    for n in range(2, 7):
        assert len(contact_polytope(LatticeSpec("A", n, "weight"))) == 2 * (n + 1)
    # rank 1 degenerates: the simplex orbit is already centrally symmetric
    assert len(contact_polytope(LatticeSpec("A", 1, "weight"))) == 2
    for n in range(3, 7):
        assert len(contact_polytope(LatticeSpec("D", n, "weight"))) == 2 * n
    # for root lattices the contact polytope is the root polytope
    assert contact_polytope(LatticeSpec("D", 4)).vertices == \
        root_polytope(LatticeSpec("D", 4)).vertices


def test_fundamental_simplex():
    a2 = LatticeSpec("A", 2)
    w = fundamental_weights(a2)
    assert set(fundamental_simplex(a2)) == {vec([0, 0, 0]), w[0], w[1]}

    d4 = LatticeSpec("D", 4)
    fs = fundamental_simplex(d4)
    assert len(fs) == 5
    assert vec([Q(1, 2), Q(1, 2), 0, 0]) in fs  # half the second weight

    d3 = LatticeSpec("D", 3)
    w3 = fundamental_weights(d3)
    assert set(fundamental_simplex(d3)) == {vec([0, 0, 0]), w3[0], w3[1], w3[2]}
    with pytest.raises(VariantMismatch):
        fundamental_simplex(LatticeSpec("A", 3, "weight"))


def test_facet_count_formulas_a4():
    a4 = LatticeSpec("A", 4)
    assert [facet_counts_formula(a4, d, "root") for d in range(4)] == [20, 60, 70, 30]
    assert [facet_counts_formula(a4, d, "voronoi") for d in range(4)] == [30, 70, 60, 20]


def test_facet_count_formulas_d():
    d4 = LatticeSpec("D", 4)
    assert [facet_counts_formula(d4, d, "root") for d in range(4)] == [24, 96, 96, 24]
    d5 = LatticeSpec("D", 5)
    assert facet_counts_formula(d5, 0, "voronoi") == 2 ** 5 + 10
    assert facet_counts_formula(d5, 4, "voronoi") == 2 * 5 * 4
    # rank 3 edge case: the printed closed forms collide and disagree
    with pytest.raises(OutOfValidityRange):
        facet_counts_formula(LatticeSpec("D", 3), 1, "root")
    with pytest.raises(OutOfValidityRange):
        facet_counts_formula(LatticeSpec("D", 3), 1, "voronoi")
    with pytest.raises(OutOfValidityRange):
        facet_counts_formula(LatticeSpec("A", 3, "weight"), 0)
    with pytest.raises(OutOfValidityRange):
        facet_counts_formula(d4, 4, "root")


def test_duality_of_formula_counts():
    for spec in [LatticeSpec("A", n) for n in range(2, 7)]:
        n = spec.rank
        for d in range(n):
            assert facet_counts_formula(spec, d, "voronoi") == \
                facet_counts_formula(spec, n - 1 - d, "root")
    for spec in [LatticeSpec("D", n) for n in range(4, 8)]:
        n = spec.rank
        for d in range(n):
            assert facet_counts_formula(spec, d, "voronoi") == \
                facet_counts_formula(spec, n - 1 - d, "root")


def test_enumeration_matches_formulas_family_a():
    for n in range(2, 6):
        spec = LatticeSpec("A", n)
        for body in ("root", "voronoi"):
            table = facet_count_table(spec, body)
            assert table.all_agree(), (n, body, table.counts)
            assert all(f is not None for f, _, _ in table.counts.values())


def test_enumeration_matches_formulas_family_d():
    for n in range(4, 6):
        spec = LatticeSpec("D", n)
        for body in ("root", "voronoi"):
            table = facet_count_table(spec, body)
            assert table.all_agree(), (n, body, table.counts)


def test_d3_enumeration_is_authoritative():
    d3 = LatticeSpec("D", 3)
    vor = facet_count_table(d3, "voronoi")
    assert {d: e for d, (f, e, a) in vor.counts.items()} == {0: 14, 1: 24, 2: 12}
    assert vor.counts[1][0] is None  # no closed form at the collision
    root = facet_count_table(d3, "root")
    assert {d: e for d, (f, e, a) in root.counts.items()} == {0: 12, 1: 24, 2: 14}
    assert vor.all_agree() and root.all_agree()


def test_euler_characteristic():
    assert euler_check({0: 30, 1: 70, 2: 60, 3: 20}, 4)
    assert euler_check({0: 24, 1: 96, 2: 96, 3: 24}, 4)
    assert euler_check({0: 6, 1: 6}, 2)
    assert not euler_check({0: 6, 1: 5}, 2)
    with pytest.raises(MissingCounts):
        euler_check({0: 6}, 2)


def test_euler_for_every_enumerated_lattice():
    specs = [LatticeSpec("A", n) for n in range(1, 6)] + \
            [LatticeSpec("D", n) for n in range(3, 6)]
    for spec in specs:
        for poly in (voronoi_cell(spec), root_polytope(spec)):
            faces = enumerate_faces(poly)
            assert euler_check(faces.counts(), faces.dim), (spec, poly.kind)
    for spec in [LatticeSpec("A", 3, "weight"), LatticeSpec("A", 4, "weight"),
                 LatticeSpec("D", 4, "weight")]:
        faces = enumerate_faces(voronoi_cell(spec))
        assert euler_check(faces.counts(), faces.dim), spec


def test_facets_only_mode_above_budget_dims():
    spec = LatticeSpec("A", 4)
    faces = enumerate_faces(voronoi_cell(spec), lower=False)
    assert set(faces.faces_by_dim) == {3}
    with pytest.raises(BudgetExceeded):
        enumerate_faces(voronoi_cell(spec), max_vertices=10)


def test_facet_supporting_planes_are_strict():
    spec = LatticeSpec("D", 4)
    cell = voronoi_cell(spec)
    faces = enumerate_faces(cell)
    for facet in faces.faces(3):
        a, b = facet.normal, facet.offset
        assert a is not None
        inside = set(facet.indices)
        for i, v in enumerate(cell.vertices):
            val = dot(v, a)
            assert (val == b) == (i in inside)
            assert val <= b


def test_facet_geometry_a():
    geo = facet_geometry_a(4)
    assert len(geo.vertices) == 8
    assert geo.edge_norm_sq == Q(4, 5)
    assert geo.pair_inner_product == Q(-1, 5)
    assert geo.angle_cosine == Q(-1, 4)
    assert geo.volume == Surd.sqrt(Q(2, 5))
    assert geo.gram_det == Q(2, 5)
    # all vertices lie on the plane orthogonal to the highest root through
    # its midpoint
    spec = LatticeSpec("A", 4)
    w = fundamental_weights(spec)
    q = vadd(w[0], w[3])
    assert all(dot(v, q) == norm_sq(q) / 2 for v in geo.vertices)


@pytest.mark.parametrize("n", range(2, 11))
def test_facet_geometry_a_general(n):
    geo = facet_geometry_a(n)
    assert len(geo.vertices) == 2 ** (n - 1)
    assert geo.edge_norm_sq == Q(n, n + 1)
    assert geo.pair_inner_product == Q(-1, n + 1)
    assert geo.angle_cosine == Q(-1, n)
    assert geo.gram_det == Q(2, n + 1)
    assert geo.matrix_det == Surd.sqrt(Q(2, n + 1))
    # squared determinant of the generator matrix equals the Gram determinant
    assert geo.matrix_det.squared() == geo.gram_det
    for i in range(n - 1):
        for j in range(n - 1):
            expect = geo.edge_norm_sq if i == j else geo.pair_inner_product
            assert dot(geo.edge_generators[i], geo.edge_generators[j]) == expect


def test_facet_geometry_a_matches_enumerated_facet():
    # the facet vertex orbit equals an enumerated facet of the Voronoi cell
    spec = LatticeSpec("A", 4)
    cell = voronoi_cell(spec)
    faces = enumerate_faces(cell)
    facet_sets = {frozenset(cell.vertices[i] for i in f.indices)
                  for f in faces.faces(3)}
    assert frozenset(facet_geometry_a(4).vertices) in facet_sets


def test_facet_geometry_d():
    geo = facet_geometry_d(4)
    assert len(geo.vertices) == 6
    assert geo.volume == Surd(Q(1, 3), 2)
    geo5 = facet_geometry_d(5)
    assert geo5.volume == Surd(Q(1, 4), 2)
    assert geo5.apex_edge_norm_sq == Q(5, 4)
    assert geo5.base_edge_norm_sq == 1
    geo3 = facet_geometry_d(3)
    assert len(geo3.vertices) == 4
    assert geo3.volume == Surd(Q(1, 2), 2)
    # rhombus diagonals of length sqrt(2) and 1
    assert norm_sq(vsub(geo3.apexes[0], geo3.apexes[1])) == 2
    b = geo3.base_vertices
    assert norm_sq(vsub(b[0], b[1])) == 1


def test_facet_geometry_d_matches_enumerated_facet():
    spec = LatticeSpec("D", 4)
    cell = voronoi_cell(spec)
    faces = enumerate_faces(cell)
    facet_sets = {frozenset(cell.vertices[i] for i in f.indices)
                  for f in faces.faces(3)}
    assert frozenset(facet_geometry_d(4).vertices) in facet_sets


def test_a3_weight_voronoi_face_inventory():
    # truncated octahedron: 8 hexagons and 6 squares
    faces = enumerate_faces(voronoi_cell(LatticeSpec("A", 3, "weight")))
    sizes = sorted(len(f.indices) for f in faces.faces(2))
    assert sizes == [4] * 6 + [6] * 8
    assert faces.counts() == {0: 24, 1: 36, 2: 14}


def test_a1_voronoi_is_segment():
    cell = voronoi_cell(LatticeSpec("A", 1))
    w = fundamental_weights(LatticeSpec("A", 1))[0]
    assert set(cell.vertices) == {w, vscale(w, -1)}
