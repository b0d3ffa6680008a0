import random

import networkx as nx
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from epobs.constructions import build_condensed_wall, build_grid_instance
from epobs.disjoint_paths import disjoint_set_paths
from epobs.graph import Graph, GraphError, path_edges
from epobs.linkage import (
    Linkage,
    find_linkage,
    find_two_linkages,
    iter_linkages,
    validate_linkage,
    verify_hitting_robustness,
    verify_vertex_robustness,
)
from epobs.reports import EXHAUSTED, FAILS, HOLDS, TIMEOUT, Budget, SearchTimeout

from oracles import has_k_disjoint_pairs, has_linkage, set_paths, to_nx


@st.composite
def instances(draw, max_n=8, sets=4):
    """A small random graph with ``sets`` pairwise disjoint nonempty terminal sets."""
    n = draw(st.integers(sets, max_n))
    pairs = [(u, v) for u in range(n) for v in range(u + 1, n)]
    edges = draw(st.lists(st.sampled_from(pairs), unique=True))
    labels = draw(st.lists(st.integers(-1, sets - 1), min_size=n, max_size=n))
    # make sure every terminal set is nonempty
    for i in range(sets):
        labels[i] = i
    out = [{v for v in range(n) if labels[v] == i} for i in range(sets)]
    return Graph(n, edges), out


def edge_mode_oracle(G, A, B, C, D):
    cds = set_paths(G, set(C), set(D))
    for p in set_paths(G, set(A), set(B)):
        pe = {frozenset(e) for e in zip(p, p[1:])}
        for q in cds:
            if not pe & {frozenset(e) for e in zip(q, q[1:])}:
                return True
    return False


# -- single linkages ---------------------------------------------------------


def test_wall_linkage_r2():
    w = build_condensed_wall(2)
    link = find_linkage(w.graph, [w.a], [w.b], [w.c], [w.d])
    assert link is not None
    assert validate_linkage(w.graph, [w.a], [w.b], [w.c], [w.d], link) == []


def test_grid_linkage_r1():
    inst = build_grid_instance(1)
    link = find_linkage(inst.graph, inst.A, inst.B, inst.C, inst.D)
    assert link is not None
    assert validate_linkage(inst.graph, inst.A, inst.B, inst.C, inst.D, link) == []


def test_two_disjoint_edges():
    g = Graph(4, [(0, 1), (2, 3)])
    link = find_linkage(g, [0], [1], [2], [3])
    assert (link.path_ab, link.path_cd) == ((0, 1), (2, 3))


def test_vertex_mode_rejects_shared_terminals():
    g = Graph(3, [(0, 1), (1, 2)])
    with pytest.raises(GraphError):
        find_linkage(g, [0], [1], [1], [2])
    with pytest.raises(GraphError):
        find_linkage(g, [], [1], [0], [2])
    # edge mode allows it
    assert find_linkage(g, [0], [1], [1], [2], mode="edge") is not None


@settings(max_examples=150, deadline=None)
@given(instances())
def test_find_linkage_matches_enumeration(inst):
    g, (A, B, C, D) = inst
    expected = has_linkage(to_nx(g), A, B, C, D)
    for method in ("auto", "backtrack", "frontier"):
        link = find_linkage(g, A, B, C, D, method=method)
        assert (link is not None) == expected, method
        if link is not None:
            assert validate_linkage(g, A, B, C, D, link) == []


@settings(max_examples=100, deadline=None)
@given(instances(max_n=7))
def test_edge_mode_matches_enumeration(inst):
    g, (A, B, C, D) = inst
    link = find_linkage(g, A, B, C, D, mode="edge")
    assert (link is not None) == edge_mode_oracle(to_nx(g), A, B, C, D)
    if link is not None:
        assert validate_linkage(g, A, B, C, D, link) == []


@settings(max_examples=60, deadline=None)
@given(instances(max_n=7))
def test_iter_linkages_counts(inst):
    g, (A, B, C, D) = inst
    G = to_nx(g)
    expected = sum(
        1
        for p in set_paths(G, A, B)
        for q in set_paths(G, C, D)
        if not set(p) & set(q)
    )
    found = list(iter_linkages(g, A, B, C, D))
    assert len(found) == expected == len({(l.path_ab, l.path_cd) for l in found})


def test_validate_linkage_reports_problems():
    g = Graph(4, [(0, 1), (1, 2), (2, 3)])
    bad = Linkage((0, 1, 2), (1, 2, 3))
    problems = validate_linkage(g, [0], [2], [1], [3], bad)
    assert "paths share a vertex" in problems
    assert validate_linkage(g, [0], [3], [1], [2], Linkage((0, 2), (1, 2))) != []


# -- disjoint set paths ------------------------------------------------------


@settings(max_examples=150, deadline=None)
@given(instances(max_n=8, sets=6))
def test_three_pairs_match_enumeration(inst):
    g, (X1, Y1, X2, Y2, X3, Y3) = inst
    pairs = [(X1, Y1), (X2, Y2), (X3, Y3)]
    paths = disjoint_set_paths(g, pairs)
    assert (paths is not None) == has_k_disjoint_pairs(to_nx(g), pairs)
    if paths is not None:
        seen = set()
        for (X, Y), p in zip(pairs, paths):
            assert g.is_path(p) and p[0] in X and p[-1] in Y
            assert not seen & set(p)
            seen |= set(p)


@settings(max_examples=100, deadline=None)
@given(instances(max_n=8))
def test_repeated_pairs_match_enumeration(inst):
    g, (A, B, C, D) = inst
    pairs = [(A, B), (C, D), (A, B), (C, D)]
    paths = disjoint_set_paths(g, pairs)
    assert (paths is not None) == has_k_disjoint_pairs(to_nx(g), pairs)


def test_disjoint_paths_budget():
    inst = build_grid_instance(2)
    with pytest.raises(SearchTimeout):
        disjoint_set_paths(inst.graph, [(inst.A, inst.B), (inst.C, inst.D)] * 2, budget=Budget(10))


# -- two linkages ------------------------------------------------------------


def test_no_two_edge_disjoint_linkages_r2():
    w = build_condensed_wall(2)
    rep = find_two_linkages(w.graph, [w.a], [w.b], [w.c], [w.d], mode="edge")
    assert rep.verdict == EXHAUSTED and rep.certificate is None


def test_grid_r1_no_two_vertex_disjoint_linkages():
    inst = build_grid_instance(1)
    rep = find_two_linkages(inst.graph, inst.A, inst.B, inst.C, inst.D, mode="vertex")
    assert rep.verdict == EXHAUSTED
    assert not has_k_disjoint_pairs(to_nx(inst.graph), [(inst.A, inst.B), (inst.C, inst.D)] * 2)


@pytest.mark.parametrize("mode", ["vertex", "edge"])
def test_two_copies_give_witness(mode):
    g = Graph(8, [(0, 1), (2, 3), (4, 5), (6, 7)])
    A, B, C, D = [0, 4], [1, 5], [2, 6], [3, 7]
    rep = find_two_linkages(g, A, B, C, D, mode=mode)
    assert rep.verdict == HOLDS
    first = Linkage(tuple(rep.certificate["first"]["path_ab"]), tuple(rep.certificate["first"]["path_cd"]))
    second = Linkage(tuple(rep.certificate["second"]["path_ab"]), tuple(rep.certificate["second"]["path_cd"]))
    assert validate_linkage(g, A, B, C, D, first) == []
    assert validate_linkage(g, A, B, C, D, second) == []
    assert not first.edges() & second.edges()


def test_two_linkages_timeout_is_not_a_verdict():
    w = build_condensed_wall(3)
    rep = find_two_linkages(w.graph, [w.a], [w.b], [w.c], [w.d], mode="edge", budget=50)
    assert rep.verdict == TIMEOUT and rep.certificate is None


def test_two_linkages_rejects_mode():
    g = Graph(4, [(0, 1), (2, 3)])
    with pytest.raises(GraphError):
        find_two_linkages(g, [0], [1], [2], [3], mode="both")


# -- robustness --------------------------------------------------------------


def test_hitting_robustness_r2():
    w = build_condensed_wall(2)
    rep = verify_hitting_robustness(w, 1)
    assert rep.verdict == HOLDS and rep.stats["cases"] == 21
    link = Linkage(tuple(rep.certificate["path_ab"]), tuple(rep.certificate["path_cd"]))
    assert validate_linkage(w.graph, [w.a], [w.b], [w.c], [w.d], link) == []


def test_hitting_robustness_fails_beyond_budget():
    w = build_condensed_wall(2)
    rep = verify_hitting_robustness(w, w.graph.m)
    assert rep.verdict == FAILS
    X = [tuple(e) for e in rep.certificate["hitting_set"]]
    G = to_nx(w.graph)
    G.remove_edges_from(X)
    assert not has_linkage(G, [w.a], [w.b], [w.c], [w.d])
    # first failure in the enumeration order has two edges
    assert len(X) == 2


def test_hitting_robustness_sample_is_seeded():
    w = build_condensed_wall(3)
    a = verify_hitting_robustness(w, 2, "sample", samples=30, seed=7)
    b = verify_hitting_robustness(w, 2, "sample", samples=30, seed=7)
    assert a.verdict == b.verdict == HOLDS
    assert a.to_json() == b.to_json()


def test_grid_r1_single_vertex_failures():
    inst = build_grid_instance(1)
    rep = verify_vertex_robustness(inst, 1, collect=True)
    assert rep.verdict == FAILS
    assert rep.detail["failing_sets"] == [["(2,4)"], ["(3,4)"]]
    G = to_nx(inst.graph)
    for v in inst.graph.vertices():
        H = G.copy()
        H.remove_node(v)
        A, B, C, D = (s - {v} for s in (inst.A, inst.B, inst.C, inst.D))
        ok = all((A, B, C, D)) and has_linkage(H, A, B, C, D)
        assert ok == (inst.graph.label(v) not in ("(2,4)", "(3,4)"))


@pytest.mark.parametrize("r", [1, 2, 3])
def test_random_two_linkage_graph_agrees(r):
    # vertex-disjoint pair packing on random sparse graphs
    rng = random.Random(r)
    for _ in range(20):
        G = nx.gnm_random_graph(9, 12, seed=rng.randrange(10**6))
        g = Graph(9, list(G.edges()))
        pairs = [({0}, {1}), ({2}, {3})]
        got = disjoint_set_paths(g, pairs)
        assert (got is not None) == has_k_disjoint_pairs(G, pairs)
        if got is not None:
            assert not set(got[0]) & set(got[1])
            assert all(g.has_edge(*e) for p in got for e in path_edges(p))
