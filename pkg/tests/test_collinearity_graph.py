"""Collinearity graph construction, multiplicity cap, and density bound."""

from fractions import Fraction
from itertools import combinations
from math import comb

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from arccount.arc_tools import PointSet, is_arc
from arccount.collinearity_graph import (
    Graph,
    build_collinearity_graph,
    density_check,
    density_required,
    density_sweep,
    density_trial,
    edge_multiplicity_histogram,
    random_arc,
    sample_density_pair,
)
from arccount.plane_geometry import plane_for_order
from arccount.rng import CounterRng


def test_graph_validation():
    Graph.from_edges(3, [(0, 1), (1, 2)])
    with pytest.raises(ValueError):
        Graph([0b10, 0b00])
    with pytest.raises(ValueError):
        Graph([0b01, 0b10])
    with pytest.raises(ValueError):
        Graph.from_edges(2, [(0, 0)])
    with pytest.raises(ValueError):
        Graph([0b100, 0b00])
    with pytest.raises(ValueError):
        Graph([0, 0], labels=[1, 2, 3])


def test_graph_edge_iteration_and_counts():
    g = Graph.from_edges(4, [(0, 1), (0, 2), (2, 3)])
    assert g.edge_count == 3
    assert sorted(g.edges()) == [(0, 1), (0, 2), (2, 3)]
    assert g.degree_in(0, 0b1111) == 2
    assert g.degree_in(0, 0b0010) == 1
    assert g.edges_in(0b0111) == 2
    assert g.is_independent(0b1010)
    assert not g.is_independent(0b0011)


def test_empty_f_gives_edgeless_graph(plane5):
    P = PointSet.from_indices(range(10))
    g = build_collinearity_graph(PointSet.empty(), P, plane5)
    assert g.n == 10 and g.edge_count == 0


def test_single_point_f_edge_count(plane5):
    F = PointSet.from_indices([0])
    P = PointSet.full(25) - F
    g = build_collinearity_graph(F, P, plane5)
    assert g.edge_count == 36


def test_two_point_f_edge_count_and_histogram(plane5):
    F = PointSet.from_indices([0, 1])
    P = PointSet.full(25) - F
    g = build_collinearity_graph(F, P, plane5)
    assert g.edge_count == 63
    hist = edge_multiplicity_histogram(F, P, plane5)
    assert hist == {1: 60, 2: 3}


def test_build_matches_bruteforce(plane5):
    F = PointSet.from_indices([0, 7, 13])
    assert is_arc(F, plane5)
    P = PointSet.from_indices([i for i in range(25) if i not in F][:12])
    g = build_collinearity_graph(F, P, plane5)
    labels = g.labels
    expected = set()
    for a, b in combinations(range(len(labels)), 2):
        line = plane5.line_of_pair(labels[a], labels[b])
        if plane5.points_on_line[line] & F.bits:
            expected.add((a, b))
    assert set(g.edges()) == expected


def test_build_rejects_bad_inputs(plane3):
    overlap = PointSet.from_indices([0, 1])
    with pytest.raises(ValueError):
        build_collinearity_graph(overlap, overlap, plane3)
    not_arc = PointSet.from_indices([0, 1, 2])
    assert not is_arc(not_arc, plane3)
    with pytest.raises(ValueError):
        build_collinearity_graph(not_arc, PointSet.from_indices([3, 4]), plane3)


def test_density_required_examples():
    assert density_required(7, Fraction(1, 2), 4, 14) == Fraction(13, 4)
    assert density_required(5, Fraction(1, 4), 2, 8) == Fraction(7, 20)
    assert density_required(7, Fraction(1, 2), 0, 14) == 0
    with pytest.raises(ValueError):
        density_required(7, Fraction(1, 2), 4, 10)


def test_multiplicity_capped_at_two_exhaustive_q3(plane3):
    arcs = []
    for size in (1, 2, 3):
        for combo in combinations(range(9), size):
            cand = PointSet.from_indices(combo)
            if is_arc(cand, plane3):
                arcs.append(cand)
    assert len(arcs) == 9 + 36 + 72
    for F in arcs:
        P = PointSet.full(9) - F
        hist = edge_multiplicity_histogram(F, P, plane3)
        assert all(mult <= 2 for mult in hist)


@pytest.mark.parametrize("q", [5, 7, 9, 11])
def test_multiplicity_capped_randomized(q):
    plane = plane_for_order(q)
    for trial in range(50):
        rng = CounterRng(2024, q, trial)
        F, P = sample_density_pair(plane, Fraction(1, 2), rng)
        hist = edge_multiplicity_histogram(F, P, plane)
        assert all(mult <= 2 for mult in hist)


def test_single_point_f_multiplicity_all_one(plane5):
    F = PointSet.from_indices([12])
    P = PointSet.full(25) - F
    hist = edge_multiplicity_histogram(F, P, plane5)
    assert set(hist) == {1}


def test_double_counting_identity(plane7):
    rng = CounterRng(5, 7, 0)
    F, P = sample_density_pair(plane7, Fraction(1, 2), rng)
    hist = edge_multiplicity_histogram(F, P, plane7)
    per_z_pairs = 0
    for z in F.indices():
        for lid in plane7.lines_through_point[z]:
            lam = (plane7.points_on_line[lid] & P.bits).bit_count()
            per_z_pairs += comb(lam, 2)
    assert per_z_pairs == sum(mult * count for mult, count in hist.items())


def test_random_arc_is_arc(plane7):
    for trial in range(20):
        rng = CounterRng(31, trial)
        arc = random_arc(plane7, 1 + trial % 7, rng)
        assert arc.size >= 1
        assert is_arc(arc, plane7)


@given(st.integers(min_value=0, max_value=2**32))
@settings(max_examples=50, deadline=None)
def test_sample_density_pair_contract(seed):
    plane = plane_for_order(7)
    rng = CounterRng(seed)
    F, P = sample_density_pair(plane, Fraction(1, 2), rng)
    assert F.isdisjoint(P)
    assert is_arc(F, plane)
    assert 1 <= F.size <= 7
    assert P.size >= 11  # ceil(1.5 * 7)


@pytest.mark.parametrize("q,eps", [(7, Fraction(1, 4)), (7, Fraction(1, 2)), (9, Fraction(1, 2))])
def test_density_sweep_clean(q, eps):
    violations, min_ratio = density_sweep(q, eps, trials=100, seed=17)
    assert violations == 0
    assert min_ratio is not None and min_ratio >= 1


def test_density_fails_at_q2():
    violations, _ = density_sweep(2, Fraction(1, 2), trials=50, seed=17)
    assert violations > 0


def test_density_check_reports_clean_suffix():
    result = density_check(7, Fraction(1, 2), trials=60, seed=17)
    assert set(result) == {"violations", "min_ratio", "min_q_clean"}
    assert result["violations"] == 0
    assert result["min_q_clean"] is not None
    assert result["min_q_clean"] <= 7


def test_density_trial_deterministic():
    a = density_trial(7, Fraction(1, 2), seed=9, trial=4)
    b = density_trial(7, Fraction(1, 2), seed=9, trial=4)
    assert a == b
    assert a.ok
