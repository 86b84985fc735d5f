from fractions import Fraction

import pytest
from hypothesis import given, settings

from conftest import ribbon_graphs
from jsmoduli import linalg
from jsmoduli.cover import (
    build_cover,
    cover_genus_formula,
    darboux_check,
    homological_coordinates,
    intersection_matrix,
    symplectic_basis,
)
from jsmoduli.forms import poisson_bivector
from jsmoduli.ribbon import (
    MetricRibbonGraph,
    RibbonGraph,
    RibbonGraphError,
    enumerate_graphs,
    faces,
    genus,
    m11_graph,
    pentavalent_torus_graph,
    validate,
)

SUITE = [(0, 3), (0, 4), (1, 1), (1, 2)]


def test_m11_cover_has_genus_two():
    assert genus(build_cover(m11_graph()).cover_graph) == 2 == cover_genus_formula(m11_graph())


def test_zero_three_cover_has_genus_zero():
    for g in enumerate_graphs(0, 3):
        assert genus(build_cover(g).cover_graph) == 0


def test_one_two_cover_genus_from_euler_characteristic():
    # four trivalent branch vertices: 2 * 1 + 4 / 2 - 1 = 3
    for g in enumerate_graphs(1, 2):
        cover = build_cover(g).cover_graph
        chi = cover.vertex_count - cover.edge_count + len(faces(cover))
        assert len(build_cover(g).branch_vertices) == 4
        assert (2 - chi) // 2 == genus(cover) == 3


@pytest.mark.parametrize("target", SUITE)
def test_cover_genus_formula_on_suite(target):
    for g in enumerate_graphs(*target):
        assert genus(build_cover(g).cover_graph) == cover_genus_formula(g)


def test_pentavalent_cover_genus():
    g = pentavalent_torus_graph()
    assert genus(build_cover(g).cover_graph) == cover_genus_formula(g)


def test_even_valence_is_rejected():
    g = RibbonGraph(8, ((0, 1, 2, 3), (4, 5, 6, 7)), ((0, 4), (1, 5), (2, 6), (3, 7)))
    with pytest.raises(RibbonGraphError):
        build_cover(g)


def test_cover_structure():
    g = m11_graph()
    dc = build_cover(g)
    assert validate(dc.cover_graph).valid
    mu = dc.deck_involution
    assert all(mu[mu[c]] == c and mu[c] != c for c in range(len(mu)))
    images = [dc.projection(c) for c in range(dc.cover_graph.dart_count)]
    assert all(images.count(d) == 2 for d in range(g.dart_count))
    rotation, pairing = dc.cover_graph.rotation(), dc.cover_graph.pairing()
    assert all(mu[rotation[c]] == rotation[mu[c]] for c in range(len(mu)))
    assert all(mu[pairing[c]] == pairing[mu[c]] for c in range(len(mu)))


def test_m11_intersection_matrix():
    J = intersection_matrix(m11_graph()).J
    assert J == [[0, -2, 2], [2, 0, -2], [-2, 2, 0]]


def test_disjoint_edges_do_not_intersect():
    for g in enumerate_graphs(0, 4):
        vertex = g.vertex_of()
        ends = [{vertex[d] for d in p} for p in g.edge_pairing]
        J = intersection_matrix(g).J
        for x in range(g.edge_count):
            for y in range(g.edge_count):
                if not ends[x] & ends[y]:
                    assert J[x][y] == 0


def test_five_valent_adjacent_edges_follow_parity():
    g = pentavalent_torus_graph()
    J = intersection_matrix(g).J
    P = poisson_bivector(g).matrix
    assert J == [[-4 * x for x in row] for row in P]


@pytest.mark.parametrize("target", SUITE)
def test_intersection_matrix_properties(target):
    for g in enumerate_graphs(*target):
        h = intersection_matrix(g)
        J = h.J
        assert linalg.is_antisymmetric(J)
        assert all(Fraction(x).denominator == 1 for row in J for x in row)
        assert linalg.rank(J) == g.edge_count - len(faces(g))
        for cycle in h.face_cycles:
            assert not any(linalg.matvec(J, cycle))
        assert J == [[-4 * x for x in row] for row in poisson_bivector(g).matrix]


def _normal_form(sb, J):
    U = sb.U
    return linalg.matmul(linalg.transpose(U), linalg.matmul(J, U))


def test_m11_symplectic_basis():
    h = intersection_matrix(m11_graph())
    sb = symplectic_basis(h)
    assert sb.half_rank == 1
    (radical,) = sb.radical_classes
    assert len(set(radical)) == 1 and radical[0] != 0
    assert _normal_form(sb, h.J) == [[0, 1, 0], [-1, 0, 0], [0, 0, 0]]


def test_zero_three_has_no_symplectic_pairs():
    for g in enumerate_graphs(0, 3):
        sb = symplectic_basis(intersection_matrix(g))
        assert sb.half_rank == 0
        assert len(sb.radical_classes) == g.edge_count


def test_one_two_has_two_symplectic_pairs():
    for g in enumerate_graphs(1, 2):
        h = intersection_matrix(g)
        sb = symplectic_basis(h)
        assert sb.half_rank == 2
        form = _normal_form(sb, h.J)
        for i in range(2):
            for j in range(2):
                assert form[i][2 + j] == (1 if i == j else 0)
                assert form[i][j] == 0 and form[2 + i][2 + j] == 0


def test_m11_homological_coordinates():
    g = m11_graph()
    sb = symplectic_basis(intersection_matrix(g))
    coords = homological_coordinates(MetricRibbonGraph(g, (1, 1, 1)), sb)
    assert coords.p == [6]
    scaled = homological_coordinates(MetricRibbonGraph(g, (3, 3, 3)), sb)
    assert scaled.A == [3 * x for x in coords.A]
    assert scaled.B == [3 * x for x in coords.B]
    assert scaled.p == [3 * x for x in coords.p]


def test_facet_point_coordinates_are_finite():
    g = m11_graph()
    sb = symplectic_basis(intersection_matrix(g))
    coords = homological_coordinates(MetricRibbonGraph(g, (0, Fraction(1, 2), 2)), sb)
    assert all(isinstance(x, (int, Fraction)) for x in coords.A + coords.B + coords.p)


def test_darboux_vacuous_and_m11():
    assert all(darboux_check(g) for g in enumerate_graphs(0, 3))
    assert darboux_check(m11_graph())


@pytest.mark.parametrize("target", [(1, 1), (0, 4), (1, 2)])
def test_darboux_on_suite(target):
    assert all(darboux_check(g) for g in enumerate_graphs(*target))


def test_darboux_on_pentavalent_graph():
    assert darboux_check(pentavalent_torus_graph())


@settings(max_examples=40, deadline=None)
@given(ribbon_graphs(odd_valences=True))
def test_cover_genus_and_darboux_properties(g):
    dc = build_cover(g)
    assert genus(dc.cover_graph) == cover_genus_formula(g)
    J = intersection_matrix(g).J
    assert J == [[-4 * x for x in row] for row in poisson_bivector(g).matrix]
    assert darboux_check(g)
