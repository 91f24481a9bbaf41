from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from tightspan.errors import InvalidMetric, LengthMismatch
from tightspan.metric import (classify_function, cone, embed, gromov_product, interval,
                              is_extremal, median_points, sup_distance, to_rational,
                              validate_metric)

K3 = [[0, 1, 1], [1, 0, 1], [1, 1, 0]]
PATH3 = [[0, 1, 2], [1, 0, 1], [2, 1, 0]]


def kinds(exc):
    return [v.kind for v in exc.value.violations]


def test_two_point_space():
    M = validate_metric([[0, 1], [1, 0]])
    assert M.n == 2 and M.integer_valued


def test_asymmetric_pair():
    with pytest.raises(InvalidMetric) as e:
        validate_metric([[0, 1], [2, 0]])
    assert e.value.violations[0].kind == "AsymmetricPair"
    assert e.value.violations[0].points == (0, 1)


def test_triangle_violation_names_the_detour():
    with pytest.raises(InvalidMetric) as e:
        validate_metric([[0, 1, 3], [1, 0, 1], [3, 1, 0]])
    assert ("TriangleViolation", (0, 2, 1)) in [tuple(v) for v in e.value.violations]


@pytest.mark.parametrize("matrix, kind", [
    ([[0, 1], [1]], "NonSquare"),
    ([[0, -1], [-1, 0]], "NegativeEntry"),
    ([[1, 1], [1, 0]], "NonZeroDiagonal"),
    ([[0, 0], [0, 0]], "ZeroDistance"),
])
def test_other_violations(matrix, kind):
    with pytest.raises(InvalidMetric) as e:
        validate_metric(matrix)
    assert kind in kinds(e)


def test_all_violations_reported():
    with pytest.raises(InvalidMetric) as e:
        validate_metric([[0, 5, 1, 1], [5, 0, 1, 1], [1, 1, 0, 5], [1, 1, 5, 0]])
    assert len(e.value.violations) == 4


def test_rationals_and_floats():
    M = validate_metric([[0, "1/2"], ["1/2", 0]])
    assert M.d[0][1] == Fraction(1, 2) and not M.integer_valued
    with pytest.raises(TypeError):
        to_rational(0.5)


def test_labels_must_be_unique():
    with pytest.raises(InvalidMetric):
        validate_metric(K3, ["a", "a", "b"])


def test_intervals():
    assert interval(validate_metric([[0, 1], [1, 0]]), 0, 1) == {0, 1}
    assert interval(validate_metric(K3), 0, 1) == {0, 1}
    assert interval(validate_metric(PATH3), 0, 2) == {0, 1, 2}


def test_cones():
    M = validate_metric(PATH3)
    assert cone(M, 1, 1) == {0, 1, 2}
    assert cone(M, 0, 1) == {1, 2}
    assert cone(validate_metric(K3), 0, 1) == {1}


def test_gromov_and_median():
    M = validate_metric(PATH3)
    assert gromov_product(M, 0, 2, 1) == 0
    assert gromov_product(validate_metric(K3), 0, 1, 2) == Fraction(1, 2)
    assert median_points(M, 0, 1, 2) == {1}
    assert median_points(validate_metric(K3), 0, 1, 2) == frozenset()


def test_sup_distance():
    assert sup_distance((1, 2), (3, Fraction(3, 2))) == 2
    with pytest.raises(LengthMismatch):
        sup_distance((1,), (1, 2))


def test_classify_function():
    M = validate_metric(K3)
    half = (Fraction(1, 2),) * 3
    assert classify_function(M, half).extremal
    assert classify_function(M, embed(M, 0)).extremal
    assert classify_function(M, (0, 0, 0)).witness == ("pair", 0, 1)
    c = classify_function(M, (1, 1, 1))
    assert c.in_delta and c.lip1 and not c.extremal and c.witness == ("slack", 0)
    c = classify_function(M, (0, 5, 1))
    assert c.in_delta and not c.lip1 and c.witness[0] == "lipschitz"
    with pytest.raises(LengthMismatch):
        classify_function(M, (1, 1))


@st.composite
def metrics(draw, max_n=6):
    n = draw(st.integers(1, max_n))
    pts = draw(st.lists(st.tuples(st.integers(-4, 4), st.integers(-4, 4)), min_size=n, max_size=n,
                        unique=True))
    return [[abs(a[0] - b[0]) + abs(a[1] - b[1]) for b in pts] for a in pts]


@given(metrics())
@settings(max_examples=60, deadline=None)
def test_distance_functions_are_extremal(d):
    M = validate_metric(d)
    for z in range(M.n):
        assert is_extremal(M, embed(M, z))
        assert z in cone(M, z, z)
        for y in range(M.n):
            assert {z, y} <= interval(M, z, y)
