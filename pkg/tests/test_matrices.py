import numpy as np
import pytest
from hypothesis import given, settings
import hypothesis.strategies as st
from hypothesis.extra.numpy import arrays

from kgeodetic.errors import MissingValues, TooFewObjects, TooFewObservations, ZeroVarianceColumn
from kgeodetic.matrices import (
    CorrelationMatrix,
    DistanceMatrix,
    ThresholdConfig,
    correlation_matrix,
    distance_matrix,
    read_matrix,
    read_observations,
    threshold_correlation,
    threshold_distance,
)

import oracles


def test_distance_examples():
    d = distance_matrix([[0, 0], [3, 4]])
    assert d.entries[0, 1] == 5
    assert distance_matrix([[1, 2], [1, 2]]).entries[0, 1] == 0
    assert distance_matrix([[0, 0], [3, 4]], "manhattan").entries[0, 1] == 7


@pytest.mark.parametrize("metric", ["euclidean", "manhattan"])
def test_distance_matches_naive_loops(metric):
    x = np.random.default_rng(5).standard_normal((10, 3))
    np.testing.assert_allclose(distance_matrix(x, metric).entries, oracles.naive_distances(x, metric),
                               rtol=0, atol=1e-12)


def test_distance_errors():
    with pytest.raises(MissingValues):
        distance_matrix([[0, np.nan], [1, 1]])
    with pytest.raises(TooFewObjects):
        distance_matrix([[0, 1]])
    with pytest.raises(ValueError):
        distance_matrix([[0], [1]], "cosine")


def test_correlation_examples():
    rng = np.random.default_rng(1)
    a = rng.standard_normal(20)
    r = correlation_matrix(np.column_stack([a, a, -a]))
    assert r.entries[0, 1] == pytest.approx(1.0, abs=1e-15)
    assert r.entries[0, 2] == pytest.approx(-1.0, abs=1e-15)


def test_correlation_matches_two_pass_formula():
    x = np.random.default_rng(2).standard_normal((20, 4))
    np.testing.assert_allclose(correlation_matrix(x).entries, oracles.two_pass_correlation(x), rtol=0, atol=1e-12)


def test_correlation_errors_name_the_column():
    x = np.column_stack([np.arange(5.0), np.full(5, 2.0)])
    with pytest.raises(ZeroVarianceColumn) as exc:
        correlation_matrix(x, ["a", "flat"])
    assert exc.value.column == "flat"
    with pytest.raises(TooFewObservations):
        correlation_matrix([[1, 2], [2, 1]])


def test_matrix_types_validate():
    with pytest.raises(ValueError):
        DistanceMatrix([[0, 1], [2, 0]])
    with pytest.raises(ValueError):
        DistanceMatrix([[1, 1], [1, 0]])
    with pytest.raises(ValueError):
        CorrelationMatrix([[1, 1.5], [1.5, 1]])
    with pytest.raises(ValueError):
        ThresholdConfig(-0.1)
    with pytest.raises(ValueError):
        ThresholdConfig(1.0, "correlation")


def test_distance_rule_is_non_strict():
    d = DistanceMatrix([[0, 0.3], [0.3, 0]])
    assert threshold_distance(d, ThresholdConfig(0.5)).edges == ((0, 1),)
    d = DistanceMatrix([[0, 0.5], [0.5, 0]])
    assert threshold_distance(d, ThresholdConfig(0.5)).edges == ((0, 1),)


def test_three_close_points_form_a_triangle():
    d = distance_matrix([[0, 0], [0.1, 0], [0, 0.1]])
    assert threshold_distance(d, ThresholdConfig(0.2)).edges == ((0, 1), (0, 2), (1, 2))


@pytest.mark.parametrize("r01,edge", [(0.95, True), (-0.95, True), (0.9, False)])
def test_correlation_rule_is_strict_on_absolute_value(r01, edge):
    r = CorrelationMatrix([[1, r01], [r01, 1]])
    g = threshold_correlation(r, ThresholdConfig(0.9, "correlation"))
    assert (g.edges == ((0, 1),)) is edge


def test_threshold_graph_keeps_labels():
    d = DistanceMatrix(np.zeros((2, 2)), ("p", "q"))
    assert threshold_distance(d, ThresholdConfig(0.0)).labels == ("p", "q")


def test_mode_mismatch_is_rejected():
    with pytest.raises(ValueError):
        threshold_distance(DistanceMatrix(np.zeros((2, 2))), ThresholdConfig(0.5, "correlation"))


points = arrays(np.float64, st.tuples(st.integers(2, 9), st.integers(1, 3)),
                elements=st.floats(-100, 100, allow_nan=False))


@settings(max_examples=60, deadline=None)
@given(points, st.floats(0, 50), st.floats(0, 50))
def test_distance_monotone_in_delta(x, d1, d2):
    d = distance_matrix(x)
    lo, hi = sorted([d1, d2])
    g_lo = threshold_distance(d, ThresholdConfig(lo))
    g_hi = threshold_distance(d, ThresholdConfig(hi))
    assert g_lo.edge_set() <= g_hi.edge_set()
    assert g_lo.simple and g_hi.simple
    full = threshold_distance(d, ThresholdConfig(float(d.entries.max())))
    assert full.m == d.size * (d.size - 1) // 2


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10**6), st.floats(0, 0.99), st.floats(0, 0.99))
def test_correlation_antimonotone_in_delta(seed, d1, d2):
    x = np.random.default_rng(seed).standard_normal((12, 5))
    r = correlation_matrix(x)
    lo, hi = sorted([d1, d2])
    g_lo = threshold_correlation(r, ThresholdConfig(lo, "correlation"))
    g_hi = threshold_correlation(r, ThresholdConfig(hi, "correlation"))
    assert g_hi.edge_set() <= g_lo.edge_set()
    off = np.abs(r.entries[~np.eye(5, dtype=bool)]).max()
    eps = (1 - off) / 2
    assert threshold_correlation(r, ThresholdConfig(1 - eps, "correlation")).m == 0


def test_csv_readers():
    header, table = read_observations("a,b\n1,2\n3,\n")
    assert header == ["a", "b"] and np.isnan(table[1, 1])
    labels, a = read_matrix("p,q\n0,1\n1,0\n")
    assert labels == ["p", "q"] and a.tolist() == [[0, 1], [1, 0]]
    labels, _ = read_matrix("0,1\n1,0\n")
    assert labels == [0, 1]
    with pytest.raises(ValueError):
        read_matrix("0,1,2\n1,0,3\n")


def test_matrix_json():
    d = distance_matrix([[0, 0], [3, 4]], labels=["u", "v"])
    assert d.to_json() == {"labels": ["u", "v"], "entries": [[0.0, 5.0], [5.0, 0.0]]}
