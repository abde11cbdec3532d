"""Kleitman-Winston runs: fingerprints, containers, counting, soundness."""

from fractions import Fraction
from itertools import product
from math import comb

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from arccount.collinearity_graph import Graph
from arccount.container_engine import (
    Container,
    ContainerParams,
    Fingerprint,
    check_local_density,
    count_independent_sets_bruteforce,
    derive_params,
    enumerate_independent_sets,
    kw_container,
    kw_fingerprint,
    kw_verify_batch,
    max_degree_vertex,
    measure_local_density,
    random_graph,
    verify_container_bound,
)
from arccount.rng import CounterRng


def cycle5() -> Graph:
    return Graph.from_edges(5, [(0, 1), (1, 2), (2, 3), (3, 4), (4, 0)])


def complete(n: int) -> Graph:
    return Graph.from_edges(n, [(u, v) for u in range(n) for v in range(u + 1, n)])


def edgeless(n: int) -> Graph:
    return Graph([0] * n)


def disjoint_cliques(count: int, size: int) -> Graph:
    edges = []
    for block in range(count):
        base = block * size
        edges.extend(
            (base + u, base + v) for u in range(size) for v in range(u + 1, size)
        )
    return Graph.from_edges(count * size, edges)


def test_params_validation():
    ContainerParams(n_vertices=5, beta=Fraction(1, 2), f=2, r=1, R=2)
    ContainerParams(n_vertices=5, beta=Fraction(0), f=0, r=0, R=1)
    with pytest.raises(ValueError):
        ContainerParams(n_vertices=5, beta=Fraction(3, 2), f=2, r=1, R=2)
    with pytest.raises(ValueError):
        ContainerParams(n_vertices=5, beta=Fraction(-1, 2), f=2, r=1, R=2)
    with pytest.raises(ValueError):
        ContainerParams(n_vertices=5, beta=Fraction(1, 2), f=-1, r=1, R=2)
    with pytest.raises(ValueError):
        ContainerParams(n_vertices=5, beta=Fraction(1, 2), f=2, r=1, R=0)


def test_admissibility_rational_vs_analytic():
    # (1-beta)^f * N is a lower bound for e^(-beta*f) * N, so the rational
    # check can accept where the analytic one refuses; never the other way.
    edge_case = ContainerParams(n_vertices=4, beta=Fraction(1), f=1, r=0, R=1)
    assert edge_case.admissible_rational()
    assert not edge_case.admissible_analytic()
    both = ContainerParams(n_vertices=8, beta=Fraction(1, 2), f=3, r=0, R=2)
    assert both.admissible_rational()
    assert both.admissible_analytic()
    neither = ContainerParams(n_vertices=8, beta=Fraction(1, 100), f=1, r=0, R=2)
    assert not neither.admissible_rational()
    assert not neither.admissible_analytic()


def test_max_degree_vertex_anchors():
    star = Graph.from_edges(4, [(0, 1), (0, 2), (0, 3)])
    assert max_degree_vertex(star, 0b1111) == 0
    assert max_degree_vertex(star, 0b1110) == 1  # leaves tie, smallest index
    triangle = Graph.from_edges(4, [(0, 1), (1, 2), (0, 2)])
    assert max_degree_vertex(triangle, 0b1111) == 0
    assert max_degree_vertex(edgeless(4), 0b1111) == 0
    with pytest.raises(ValueError):
        max_degree_vertex(star, 0)


def test_cycle_run_trace():
    g = cycle5()
    params = ContainerParams(n_vertices=5, beta=Fraction(1, 2), f=2, r=1, R=2)
    fp = kw_fingerprint(g, [0], params)
    assert fp == Fingerprint(vertices=(0,), steps_taken=1)
    cont = kw_container(g, fp, params)
    assert cont == Container(vertices=(0, 2, 3), mask=0b01101)


def test_empty_independent_set_trace():
    g = cycle5()
    params = ContainerParams(n_vertices=5, beta=Fraction(1, 2), f=2, r=1, R=2)
    fp = kw_fingerprint(g, [], params)
    assert fp.vertices == ()
    assert fp.steps_taken == 3  # deletions 0, 2, 3 shrink A to {1, 4}
    cont = kw_container(g, fp, params)
    assert cont.vertices == (1, 4)


def test_edgeless_run_never_steps():
    g = edgeless(6)
    params = ContainerParams(n_vertices=6, beta=Fraction(0), f=3, r=0, R=6)
    fp = kw_fingerprint(g, [1, 2], params)
    assert fp == Fingerprint(vertices=(), steps_taken=0)
    assert kw_container(g, fp, params).vertices == tuple(range(6))


def test_fingerprint_rejects_dependent_input():
    g = cycle5()
    params = ContainerParams(n_vertices=5, beta=Fraction(1, 2), f=2, r=1, R=2)
    with pytest.raises(ValueError):
        kw_fingerprint(g, [0, 1], params)
    with pytest.raises(ValueError):
        kw_container(g, (0, 1), params)


def test_check_local_density_anchors():
    assert check_local_density(complete(6), 3, Fraction(1)) == (True, None)
    ok, witness = check_local_density(edgeless(6), 3, Fraction(1, 100))
    assert not ok and witness is not None and witness.bit_count() >= 3
    assert check_local_density(cycle5(), 5, Fraction(1, 2))[0]
    assert not check_local_density(cycle5(), 5, Fraction(51, 100))[0]


def test_check_local_density_randomized_path_finds_violation():
    ok, witness = check_local_density(
        edgeless(24), 2, Fraction(1, 2), subset_budget=1000, rng=CounterRng(7)
    )
    assert not ok
    assert witness is not None and witness.bit_count() >= 2


def test_measure_local_density_anchors():
    assert measure_local_density(cycle5(), 5) == Fraction(1, 2)
    assert measure_local_density(cycle5(), 2) == 0
    assert measure_local_density(complete(4), 2) == 1
    with pytest.raises(ValueError):
        measure_local_density(cycle5(), 6)
    with pytest.raises(ValueError):
        measure_local_density(edgeless(30), 2, subset_budget=1000)


def test_count_independent_sets_anchors():
    assert count_independent_sets_bruteforce(cycle5(), 2) == 5
    assert count_independent_sets_bruteforce(complete(4), 2) == 0
    assert count_independent_sets_bruteforce(complete(4), 1) == 4
    assert count_independent_sets_bruteforce(edgeless(6), 3) == 20
    path = Graph.from_edges(4, [(0, 1), (1, 2), (2, 3)])
    assert count_independent_sets_bruteforce(path, 2) == 3
    assert count_independent_sets_bruteforce(path, 0) == 1
    with pytest.raises(ValueError):
        count_independent_sets_bruteforce(edgeless(27), 2)


def test_enumerate_matches_count():
    g = cycle5()
    masks = list(enumerate_independent_sets(g))
    assert len(masks) == 11  # empty + 5 singletons + 5 non-adjacent pairs
    assert len(set(masks)) == 11
    for s in range(4):
        sized = list(enumerate_independent_sets(g, s))
        assert len(sized) == count_independent_sets_bruteforce(g, s)
        assert all(g.is_independent(m) and m.bit_count() == s for m in sized)


@given(st.integers(min_value=0, max_value=2**32), st.integers(min_value=2, max_value=10))
@settings(max_examples=40, deadline=None)
def test_count_agrees_with_enumeration_randomized(seed, n):
    g = random_graph(n, Fraction(1, 3), CounterRng(seed, n))
    for s in range(n + 1):
        assert count_independent_sets_bruteforce(g, s) == len(
            list(enumerate_independent_sets(g, s))
        )


@given(st.integers(min_value=0, max_value=2**32))
@settings(max_examples=60, deadline=None)
def test_soundness_unconditional(seed):
    rng = CounterRng(seed)
    n = 6 + rng.below(5)
    g = random_graph(n, Fraction(1, 3), rng)
    params = ContainerParams(n_vertices=n, beta=Fraction(0), f=3, r=1, R=4)
    order = list(range(n))
    rng.shuffle(order)
    I_mask = 0
    for v in order:
        if not g.rows[v] & I_mask:
            I_mask |= 1 << v
    fp = kw_fingerprint(g, I_mask, params)
    assert len(fp.vertices) <= params.f
    cont = kw_container(g, fp, params)
    assert I_mask & ~cont.mask == 0


def test_verify_container_bound_met_path():
    g = cycle5()
    assert measure_local_density(g, 3) == Fraction(1, 3)
    params = ContainerParams(n_vertices=5, beta=Fraction(1, 3), f=2, r=1, R=3)
    report = verify_container_bound(g, params)
    assert report["assumptions_met"]
    assert report["violations"] == 0
    assert report["bound_lhs"] <= report["bound_rhs"]
    assert report["fingerprint_ok"] and report["soundness_ok"]
    assert report["a_final_ok"] and report["replay_ok"]


def test_verify_container_bound_unmet_path():
    report = verify_container_bound(
        edgeless(6),
        ContainerParams(n_vertices=6, beta=Fraction(1, 10), f=7, r=1, R=3),
    )
    assert not report["assumptions_met"]
    assert not report["density_ok"]
    assert report["violations"] == 0
    assert "bound_lhs" not in report


def test_combined_container_can_exceed_R():
    # Five disjoint 4-cliques: selecting one vertex per clique strips 4
    # vertices a step, so A stops at R = 8 with three selections already
    # banked; S u A has 11 vertices.  Only |A| <= R is guaranteed, and the
    # assumptions genuinely hold here, so 11 > R is not a defect.
    g = disjoint_cliques(5, 4)
    beta = Fraction(1, 10)
    params = ContainerParams(n_vertices=20, beta=beta, f=10, r=2, R=8)
    assert params.admissible_rational()
    # Exact local density via block profiles: a k-subset meeting the
    # cliques in sizes (a_1..a_5) spans sum C(a_i, 2) edges, and every
    # profile is realizable, so scanning profiles covers all subsets.
    for profile in product(range(5), repeat=5):
        k = sum(profile)
        if k >= params.R:
            edges = sum(comb(a, 2) for a in profile)
            assert Fraction(edges) >= beta * comb(k, 2)
    transversal = [0, 4, 8, 12, 16]
    fp = kw_fingerprint(g, transversal, params)
    assert fp == Fingerprint(vertices=(0, 4, 8), steps_taken=3)
    cont = kw_container(g, fp, params)
    assert len(cont.vertices) == 11 > params.R
    a_final = set(cont.vertices) - set(fp.vertices)
    assert len(a_final) == 8 <= params.R
    assert set(transversal) <= set(cont.vertices)


def test_derive_params_produces_verified_instances():
    hits = 0
    for index in range(30):
        rng = CounterRng(99, index)
        n = 8 + rng.below(5)
        g = random_graph(n, Fraction(1, 2), rng)
        params = derive_params(g, rng)
        if params is None:
            continue
        hits += 1
        report = verify_container_bound(g, params)
        assert report["assumptions_met"]
        assert report["violations"] == 0
    assert hits >= 10


def test_batch_thread_invariance():
    serial = kw_verify_batch(12, 6, seed=3, threads=1)
    parallel = kw_verify_batch(12, 6, seed=3, threads=2)
    assert serial == parallel
    assert [row["instance"] for row in serial] == list(range(6))


def test_batch_explicit_params():
    rows = kw_verify_batch(10, 4, seed=1, beta=Fraction(1, 10), f=5, r=2, R=6)
    assert len(rows) == 4
    for row in rows:
        assert row["beta"] == "1/10"
        assert row["violations"] == 0 or not row["assumptions_met"]
    with pytest.raises(ValueError):
        kw_verify_batch(10, 4, seed=1, beta=Fraction(1, 10))
