import itertools
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import oracles
from corpus import SMALL, hull, space
from tightspan.cells import (barycentric_subdivision, build_complex, canonical_form,
                             cell_coordinates, cell_system, edge_length, enumerate_vertices,
                             equality_graph, grid_size, hull_dimension, parity_analysis, rank,
                             tight_pairs)
from tightspan.errors import (BudgetExceeded, NotAdmissible, NotExtremal, NotIntegerMetric,
                              ZeroDimensional)
from tightspan.metric import embed, is_extremal, validate_metric

H = Fraction(1, 2)
K3 = validate_metric([[0, 1, 1], [1, 0, 1], [1, 1, 0]])


def test_equality_graph_examples():
    c4 = space("c4")
    A = equality_graph(c4, embed(c4, 2))
    assert (2, 2) in A and all(tuple(sorted((2, y))) in A for y in range(4))
    assert equality_graph(K3, (H, H, H)) == {(0, 1), (0, 2), (1, 2)}
    assert equality_graph(c4, (1, 1, 1, 1)) == {(0, 2), (1, 3)}
    with pytest.raises(NotExtremal):
        equality_graph(K3, (1, 1, 1))


def test_parity_analysis():
    part = parity_analysis(equality_graph(K3, embed(K3, 0)), 3)
    assert len(part.components) == 1 and part.rank == 0
    part = parity_analysis({(0, 2), (1, 3)}, 4)
    assert part.rank == 2 and len(part.even_components) == 2
    w3 = space("w3")
    assert rank(equality_graph(w3, (Fraction(3, 2),) * 8), 8) == 4
    with pytest.raises(NotAdmissible):
        parity_analysis({(0, 1)}, 3)


def test_odd_cycle_makes_component_odd():
    assert parity_analysis({(0, 1), (1, 2), (0, 2)}, 3).rank == 0
    assert parity_analysis({(0, 1), (1, 2), (2, 3), (0, 3)}, 4).rank == 1


def test_enumerate_vertices_examples():
    assert enumerate_vertices(validate_metric([[0, 1], [1, 0]])) == [(0, 1), (1, 0)]
    assert sorted(enumerate_vertices(K3)) == sorted([(0, 1, 1), (1, 0, 1), (1, 1, 0), (H, H, H)])
    assert len(enumerate_vertices(space("sixpoint"))) == 10


def test_enumerate_vertices_errors():
    with pytest.raises(NotIntegerMetric):
        enumerate_vertices(validate_metric([[0, H], [H, 0]]))
    w3 = space("w3")
    with pytest.raises(BudgetExceeded):
        enumerate_vertices(w3, budget=grid_size(w3) - 1)


def test_parallel_search_is_identical():
    M = space("c6")
    assert enumerate_vertices(M, jobs=3) == enumerate_vertices(M)


def test_tripod():
    cx = hull("k3")
    assert cx.f_vector() == [4, 3]
    assert {edge_length(cx, i) for i in cx.cells_of_dim(1)} == {H}
    assert hull_dimension(cx) == 1


def test_square():
    cx = hull("c4")
    assert cx.f_vector() == [4, 4, 1]
    assert {edge_length(cx, i) for i in cx.cells_of_dim(1)} == {1}
    sq = cx.cells[cx.cells_of_dim(2)[0]]
    system = cell_system(cx.metric, sq, cx.vertices)
    assert system.n == 2
    assert set(system.cbar.values()) | set(system.cpair.values()) == {-1}


def test_edge_system_matches_length():
    cx = hull("sixpoint")
    for i in cx.cells_of_dim(1):
        s = cell_system(cx.metric, cx.cells[i], cx.vertices)
        assert -(s.cbar[(0, 1)] + s.cbar[(0, -1)]) == edge_length(cx, i)


def test_vertex_has_no_system():
    cx = hull("k3")
    with pytest.raises(ZeroDimensional):
        cell_system(cx.metric, cx.cells[0])


def test_fivepoint_triangles():
    cx = hull("fivepoint")
    ref = canonical_form([(1, 0), (-1, 0), (0, 1)])
    tri = cx.cells_of_dim(2)
    assert len(tri) == 3
    assert all(canonical_form(cell_coordinates(cx, i)) == ref for i in tri)
    assert len({cx.isometry_class[i] for i in tri}) == 1


def test_sixpoint_classes():
    cx = hull("sixpoint")
    two = cx.cells_of_dim(2)
    assert len({cx.isometry_class[i] for i in two}) == 2
    by_len = {}
    for i in cx.cells_of_dim(1):
        by_len.setdefault(edge_length(cx, i), set()).add(cx.isometry_class[i])
    assert not by_len[H] & by_len[Fraction(3, 2)]


def test_subdivision_counts():
    edge = build_complex(validate_metric([[0, 1], [1, 0]]))
    sub = barycentric_subdivision(edge)
    assert len(sub.of_dim(1)) == 2
    assert sub.barycenters[2] == (H, H)
    assert len(barycentric_subdivision(hull("c4")).of_dim(2)) == 8
    assert len(barycentric_subdivision(hull("k3")).of_dim(1)) == 6


@pytest.mark.parametrize("name, dim", [("k3", 1), ("c4", 2), ("w3", 4)])
def test_hull_dimension(name, dim):
    assert hull_dimension(hull(name)) == dim


@pytest.mark.parametrize("name", SMALL)
def test_complex_invariants(name):
    cx = hull(name)
    M = cx.metric
    for v in cx.vertices:
        assert is_extremal(M, v)
        assert all(x.denominator in (1, 2) for x in v)
    for i, c in enumerate(cx.cells):
        assert tight_pairs(M, c.representative) == c.admissible_set
        if c.dim:
            s = cell_system(M, c, cx.vertices)
            assert all(k < 0 for k in list(s.cbar.values()) + list(s.cpair.values()))
    vsets = [frozenset(c.vertex_ids) for c in cx.cells]
    for a, b in itertools.combinations(vsets, 2):
        assert not (a & b) or (a & b) in vsets
    for child, parent in cx.face_relation:
        assert cx.cells[parent].admissible_set < cx.cells[child].admissible_set


@st.composite
def six_point_metrics(draw):
    pts = draw(st.lists(st.tuples(st.integers(0, 3), st.integers(0, 3), st.integers(0, 1)),
                        min_size=6, max_size=6, unique=True))
    return [[sum(abs(p - q) for p, q in zip(a, b)) for b in pts] for a in pts]


@given(six_point_metrics())
@settings(max_examples=15, deadline=None)
def test_six_point_vertices_match_oracle(d):
    assert enumerate_vertices(validate_metric(d)) == oracles.polyhedron_vertices(d)
