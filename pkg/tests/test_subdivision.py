import random

import networkx as nx
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from epobs.constructions import (
    SubdivisionModel,
    build_binary_tree,
    build_condensed_wall,
    build_ladder,
    build_ladder_counterexample,
    reference_subdivision,
    subdivided_binary_tree,
)
from epobs.graph import Graph, GraphError
from epobs.reports import EXHAUSTED, HOLDS, TIMEOUT
from epobs.subdivision import (
    _blocks,
    find_subdivision,
    find_two_edge_disjoint_subdivisions,
    iter_subdivisions,
    linked_star_pattern,
    max_Bh_in_graph,
    model_from_json,
    spot_check_lambda_invariance,
    validate_subdivision,
)
from epobs.trees import max_Bh

from oracles import longest_cycle, to_nx


def cycle(k):
    return Graph(k, [(i, (i + 1) % k) for i in range(k)])


def path(k):
    return Graph(k, [(i, i + 1) for i in range(k - 1)])


CLAW = Graph(4, [(0, 1), (0, 2), (0, 3)])


@st.composite
def small_graphs(draw, max_n=8):
    n = draw(st.integers(1, max_n))
    pairs = [(u, v) for u in range(n) for v in range(u + 1, n)]
    edges = draw(st.lists(st.sampled_from(pairs), unique=True)) if pairs else []
    return Graph(n, edges)


def identity_model(g):
    return SubdivisionModel({v: v for v in g.vertices()}, {e: e for e in g.edges()})


def longest_path_vertices(G):
    best = 1 if G.number_of_nodes() else 0
    for s in G:
        for t in G:
            if s < t:
                for p in nx.all_simple_paths(G, s, t):
                    best = max(best, len(p))
    return best


# -- validator ---------------------------------------------------------------


def test_identity_model_valid():
    g = build_ladder(4).graph
    assert validate_subdivision(g, g, identity_model(g)) == []


def test_corrupt_model_shares_internal_vertex():
    inst = build_ladder_counterexample(2)
    m = reference_subdivision(inst)
    items = sorted(m.edge_paths.items(), key=lambda kv: -len(kv[1]))
    (e1, p1), (e2, p2) = items[0], items[1]
    paths = dict(m.edge_paths)
    # splice an internal vertex of p1 into p2's interior
    paths[e2] = p2[:1] + (p1[1],) + p2[1:]
    problems = validate_subdivision(inst.graph, inst.pattern, SubdivisionModel(m.branch_map, paths))
    assert any(p.startswith("paths share internal vertex") for p in problems)


def test_validator_other_messages():
    g = cycle(4)
    h = cycle(3)
    bad = SubdivisionModel({0: 0, 1: 1, 2: 1}, {(0, 1): (0, 1), (1, 2): (1, 2), (0, 2): (0, 3, 2)})
    problems = validate_subdivision(g, h, bad)
    assert any("not injective" in p for p in problems)
    missing = SubdivisionModel({0: 0, 1: 1, 2: 2}, {(0, 1): (0, 1), (1, 2): (1, 2)})
    assert "pattern edge (0, 2) has no path" in validate_subdivision(g, h, missing)
    nonedge = SubdivisionModel({0: 0, 1: 1, 2: 2}, {(0, 1): (0, 1), (1, 2): (1, 2), (0, 2): (0, 2)})
    assert any("uses a non-edge" in p for p in validate_subdivision(g, h, nonedge))


# -- single subdivisions -----------------------------------------------------


def test_claw_identity():
    rep = find_subdivision(CLAW, CLAW)
    assert rep.verdict == HOLDS
    m = model_from_json(rep.certificate)
    assert dict(m.branch_map) == {0: 0, 1: 1, 2: 2, 3: 3}


def test_wall_r2_contains_c4():
    w = build_condensed_wall(2)
    rep = find_subdivision(w.graph, build_ladder(2).graph)
    assert rep.verdict == HOLDS
    assert validate_subdivision(w.graph, build_ladder(2).graph, model_from_json(rep.certificate)) == []


@pytest.mark.parametrize("r", [1, 2])
def test_small_walls_exclude_ladder6(r):
    w = build_condensed_wall(r)
    g = w.graph.without_vertices([w.a, w.b])
    assert find_subdivision(g, build_ladder(6).graph).verdict == EXHAUSTED


def test_pattern_checks():
    g = cycle(5)
    with pytest.raises(GraphError):
        find_subdivision(g, Graph(5, [(0, i) for i in range(1, 5)]))
    with pytest.raises(GraphError):
        find_subdivision(g, Graph(4, [(0, 1), (2, 3)]))


def test_budget_gives_timeout():
    w = build_condensed_wall(3)
    g = w.graph.without_vertices([w.a, w.b])
    rep = find_subdivision(g, build_ladder(6).graph, budget=5, use_blocks=False)
    assert rep.verdict == TIMEOUT and rep.certificate is None


@settings(max_examples=80, deadline=None)
@given(small_graphs(), st.integers(3, 6))
def test_cycles_match_longest_cycle(g, k):
    rep = find_subdivision(g, cycle(k))
    assert (rep.verdict == HOLDS) == (longest_cycle(to_nx(g)) >= k)
    if rep.verdict == HOLDS:
        assert validate_subdivision(g, cycle(k), model_from_json(rep.certificate)) == []


@settings(max_examples=60, deadline=None)
@given(small_graphs(max_n=7), st.integers(2, 5))
def test_paths_match_longest_path(g, k):
    rep = find_subdivision(g, path(k))
    assert (rep.verdict == HOLDS) == (longest_path_vertices(to_nx(g)) >= k)


@settings(max_examples=60, deadline=None)
@given(small_graphs())
def test_claw_matches_degree(g):
    rep = find_subdivision(g, CLAW)
    assert (rep.verdict == HOLDS) == (g.n > 0 and g.max_degree() >= 3)


@settings(max_examples=60, deadline=None)
@given(small_graphs(max_n=8), st.sampled_from(["c4", "k4", "ladder3"]))
def test_block_pruning_does_not_change_answers(g, name):
    h = {"c4": cycle(4), "k4": Graph(4, [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]), "ladder3": build_ladder(3).graph}[name]
    a = find_subdivision(g, h).verdict
    b = find_subdivision(g, h, use_blocks=False).verdict
    assert a == b


@settings(max_examples=40, deadline=None)
@given(small_graphs(max_n=7))
def test_enumeration_yields_valid_distinct_models(g):
    h = cycle(3)
    seen = set()
    for m in iter_subdivisions(g, h):
        assert validate_subdivision(g, h, m) == []
        key = (tuple(sorted(m.branch_map.items())), tuple(sorted(m.edge_paths.items())))
        assert key not in seen
        seen.add(key)
    # each triangle appears once per labelled placement: 6 per triangle
    triangles = sum(nx.triangles(to_nx(g)).values()) // 3
    assert sum(1 for m in seen if all(len(p) == 2 for _, p in m[1])) == 6 * triangles


def test_pinned_vertex_respected():
    g = cycle(6)
    rep = find_subdivision(g, cycle(3), pinned={0: 4})
    assert rep.verdict == HOLDS
    assert model_from_json(rep.certificate).branch_map[0] == 4
    with pytest.raises(GraphError):
        find_subdivision(g, cycle(3), pinned={0: 1, 1: 1})


# -- blocks ------------------------------------------------------------------


@settings(max_examples=80)
@given(small_graphs(max_n=10))
def test_blocks_match_networkx(g):
    ours = sorted(sorted(b) for b in _blocks(g, frozenset(g.vertices())))
    G = to_nx(g)
    theirs = [sorted(b) for b in nx.biconnected_components(G)]
    theirs += [[v] for v in G if G.degree(v) == 0]
    assert ours == sorted(theirs)


# -- pairs -------------------------------------------------------------------


def test_two_c4_copies():
    g = Graph(8, [(0, 1), (1, 2), (2, 3), (3, 0), (4, 5), (5, 6), (6, 7), (7, 4)])
    rep = find_two_edge_disjoint_subdivisions(g, cycle(4))
    assert rep.verdict == HOLDS
    m1 = model_from_json(rep.certificate["first"])
    m2 = model_from_json(rep.certificate["second"])
    assert validate_subdivision(g, cycle(4), m1) == []
    assert validate_subdivision(g, cycle(4), m2) == []
    assert not m1.edges() & m2.edges()


def test_single_c4_has_no_pair():
    assert find_two_edge_disjoint_subdivisions(cycle(4), cycle(4)).verdict == EXHAUSTED


def test_h_tree_pair_in_small_wall():
    w = build_condensed_wall(2)
    h = Graph(6, [(0, 1), (0, 2), (0, 3), (3, 4), (3, 5)])
    rep = find_two_edge_disjoint_subdivisions(w.graph, h)
    assert rep.verdict == HOLDS
    m1 = model_from_json(rep.certificate["first"])
    m2 = model_from_json(rep.certificate["second"])
    assert validate_subdivision(w.graph, h, m1) == [] and validate_subdivision(w.graph, h, m2) == []
    assert not m1.edges() & m2.edges()


@settings(max_examples=30, deadline=None)
@given(small_graphs(max_n=7))
def test_pair_search_against_enumeration(g):
    h = cycle(3)
    models = list(iter_subdivisions(g, h))
    expected = any(not a.edges() & b.edges() for a in models for b in models)
    assert (find_two_edge_disjoint_subdivisions(g, h).verdict == HOLDS) == expected


# -- B_h trees ---------------------------------------------------------------


def test_max_bh_in_small_graphs():
    assert max_Bh_in_graph(path(2), 3).detail["max_h"] == 0
    assert max_Bh_in_graph(path(5), 3).detail["max_h"] == 1
    assert max_Bh_in_graph(build_binary_tree(4).graph, 5).detail["max_h"] == 4
    capped = max_Bh_in_graph(build_binary_tree(4).graph, 2)
    assert capped.detail == {"max_h": 2, "capped": True, "levels": capped.detail["levels"]}


def test_max_bh_small_wall():
    from epobs.pathwidth import pathwidth_exact

    w = build_condensed_wall(2)
    rep = max_Bh_in_graph(w.graph, 5)
    v = rep.detail["max_h"]
    assert rep.verdict == HOLDS and v == 2
    assert -(-(v + 1) // 2) <= pathwidth_exact(w.graph)[0]


@pytest.mark.parametrize("seed", range(8))
def test_max_bh_in_graph_agrees_on_trees(seed):
    rng = random.Random(seed)
    n = rng.randint(2, 22)
    edges, deg = [], [0] * n
    for v in range(1, n):
        u = rng.choice([x for x in range(v) if deg[x] < 3])
        edges.append((u, v))
        deg[u] += 1
        deg[v] += 1
    g = Graph(n, edges)
    assert max_Bh_in_graph(g, 6).detail["max_h"] == max_Bh(g)[0]


def test_max_bh_subdivided_tree():
    t = subdivided_binary_tree(3, 1)
    assert max_Bh_in_graph(t.graph, 4).detail["max_h"] == 3


def test_linked_star_pattern_shape():
    g, centre = linked_star_pattern(1)
    assert g.n == 10 and g.degree(centre) == 3
    assert sorted(g.degree(v) for v in g.vertices()).count(3) == 4


@pytest.fixture(scope="module")
def tree_instance():
    from epobs.claims import build_instance

    return build_instance({"kind": "tree", "w": 0})


def test_lambda_spot_rejects_ladder_and_degree_two(tree_instance):
    with pytest.raises(GraphError):
        spot_check_lambda_invariance(build_ladder_counterexample(2), 1)
    T = tree_instance.pattern
    low = next(v for v in T.vertices() if T.degree(v) == 2)
    with pytest.raises(GraphError):
        spot_check_lambda_invariance(tree_instance, low)


def test_lambda_spot_deepest_branch_vertex(tree_instance):
    from epobs.trees import compute_levels

    levels = compute_levels(tree_instance.pattern)
    v = min(s for s in tree_instance.eps.vertex_map if levels.level(s) == 0)
    rep = spot_check_lambda_invariance(tree_instance, v)
    assert rep.verdict == HOLDS
    assert rep.detail["certified_h"] == 0 and rep.detail["upper_bound_certified"]


def test_lambda_spot_level_one(tree_instance):
    from epobs.trees import compute_levels

    levels = compute_levels(tree_instance.pattern)
    v = min(s for s in tree_instance.eps.vertex_map if levels.level(s) == 1)
    rep = spot_check_lambda_invariance(tree_instance, v, budget=200_000)
    assert rep.verdict == HOLDS
    assert rep.detail["certified_h"] >= 1
