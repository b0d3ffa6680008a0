import dataclasses
import math
import random

import networkx as nx
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from epobs.constructions import build_binary_tree, subdivided_binary_tree
from epobs.graph import Graph, GraphError
from epobs.trees import (
    RootedTree,
    TreeTooShallow,
    compute_levels,
    compute_signature,
    compute_weight,
    decompose_tree,
    is_bh_subtree,
    max_Bh,
    tree_pathwidth,
    validate_tree_parts,
)

from oracles import brute_levels, linked_heights, subcubic_trees, vertex_separation


def random_subcubic_tree(n, rng):
    edges = []
    deg = [0] * n
    for v in range(1, n):
        u = rng.choice([x for x in range(v) if deg[x] < 3])
        edges.append((u, v))
        deg[u] += 1
        deg[v] += 1
    return Graph(n, edges)


@st.composite
def subcubic(draw, max_n=40):
    n = draw(st.integers(1, max_n))
    seed = draw(st.integers(0, 2**32 - 1))
    return random_subcubic_tree(n, random.Random(seed))


def brute_max_bh(g):
    best = 0
    for v in g.vertices():
        hs = sorted((max(linked_heights(g, v, x)) for x in g.neighbors(v)), reverse=True)
        if len(hs) >= 2:
            best = max(best, hs[1] + 1)
    return best


def joined(t1, t2):
    """A new root joined to the roots of two binary trees."""
    g1, g2 = t1.graph, t2.graph
    n1 = g1.n
    edges = list(g1.edges()) + [(u + n1, v + n1) for u, v in g2.edges()]
    root = n1 + g2.n
    edges += [(root, t1.root), (root, n1 + t2.root)]
    return Graph(root + 1, edges), root, t1.root, n1 + t2.root


# -- levels ------------------------------------------------------------------


def test_star_centre_level_zero():
    g = Graph(4, [(0, 1), (0, 2), (0, 3)])
    levels = compute_levels(g)
    assert levels.level(0) == 0
    assert levels.level(1) is None


def test_binary_tree_height3_levels():
    t = build_binary_tree(3)
    levels = compute_levels(RootedTree(t.graph, t.root))
    assert levels.level(1) == 1 and levels.level(2) == 1
    assert all(levels.level(v) == 0 for v in range(3, 7))
    assert levels.level(t.root) is None
    assert list(levels.levels) == brute_levels(t.graph)


def test_levels_agree_with_enumeration_catalog():
    count = 0
    for g in subcubic_trees(12):
        assert list(compute_levels(g).levels) == brute_levels(g)
        count += 1
    assert count == 284  # subcubic trees on 1..12 vertices, summed from OEIS A000672


@settings(max_examples=60)
@given(subcubic())
def test_level_sets_nested(g):
    levels = compute_levels(g)
    top = max((x for x in levels.levels if x is not None), default=-1)
    for h in range(top + 2):
        assert levels.members(h + 1) <= levels.members(h)
    for v in g.vertices():
        lam = levels.level(v)
        if lam is not None:
            assert lam == max(h for h in range(top + 1) if v in levels.members(h))


# -- weights and signatures --------------------------------------------------


def test_leaf_weight_zero():
    t = build_binary_tree(4)
    levels = compute_levels(t.graph)
    assert compute_weight(t.graph, levels, [t.graph.n - 1], 0) == 0


@pytest.mark.parametrize("h", range(2, 13))
@pytest.mark.parametrize("w", [0, 1, 2])
def test_binary_tree_weight_formula(h, w):
    t = build_binary_tree(h)
    levels = compute_levels(t.graph)
    expected = sum(2**i for i in range(1, h - w)) if h >= w + 2 else 0
    assert compute_weight(t.graph, levels, t.graph.vertices(), w) == expected


def test_weight_height13():
    t = build_binary_tree(13)
    levels = compute_levels(t.graph)
    assert compute_weight(t.graph, levels, t.graph.vertices(), 10) >= 2 ** 3 - 2


def test_signature_leaf_children():
    t = build_binary_tree(1)
    rt = RootedTree(t.graph, t.root)
    assert compute_signature(rt, compute_levels(rt), t.root, 0) == (0, 0)


def test_signature_symmetric():
    t = build_binary_tree(13)
    rt = RootedTree(t.graph, t.root)
    a, b = compute_signature(rt, compute_levels(rt), 1, 10)
    assert a == b


def test_signature_asymmetric():
    g, root, big, small = joined(build_binary_tree(13), build_binary_tree(12))
    rt = RootedTree(g, root)
    levels = compute_levels(rt)
    sig = compute_signature(rt, levels, root, 10)
    assert sig[0] == compute_weight(rt, levels, rt.subtree(big), 10)
    assert sig[1] == compute_weight(rt, levels, rt.subtree(small), 10)
    assert sig[0] > sig[1]


def test_signature_needs_two_children():
    t = build_binary_tree(2)
    rt = RootedTree(t.graph, t.root)
    with pytest.raises(GraphError):
        compute_signature(rt, compute_levels(rt), 6, 0)


# -- pathwidth ---------------------------------------------------------------


@pytest.mark.parametrize("n", [2, 3, 7, 20])
def test_path_pathwidth_one(n):
    assert tree_pathwidth(Graph(n, [(i, i + 1) for i in range(n - 1)])) == 1


def test_binary_tree_pathwidths_against_subset_recursion():
    oracle = {h: vertex_separation(build_binary_tree(h).graph) for h in range(4)}
    assert oracle == {0: 0, 1: 1, 2: 1, 3: 2}
    for h, value in oracle.items():
        assert tree_pathwidth(build_binary_tree(h).graph) == value


def test_binary_tree_pathwidths_larger():
    # critical-vertex recursion: B_h has pathwidth ceil(h/2)
    assert [tree_pathwidth(build_binary_tree(h).graph) for h in range(7)] == [0, 1, 1, 2, 2, 3, 3]


def test_tree_pathwidth_catalog():
    for g in subcubic_trees(11):
        assert tree_pathwidth(g) == vertex_separation(g)


@settings(max_examples=40, deadline=None)
@given(subcubic(max_n=13))
def test_tree_pathwidth_matches_subset_recursion(g):
    assert tree_pathwidth(g) == vertex_separation(g)


@settings(max_examples=40, deadline=None)
@given(subcubic(max_n=13), st.data())
def test_tree_pathwidth_root_independent(g, data):
    root = data.draw(st.integers(0, g.n - 1))
    assert tree_pathwidth(RootedTree(g, root)) == tree_pathwidth(g)


# -- B_h extraction ----------------------------------------------------------


def test_max_bh_paths():
    assert max_Bh(Graph(2, [(0, 1)]))[0] == 0
    # a path on three or more vertices already contains B_1 (a root with two leaves)
    assert max_Bh(Graph(5, [(i, i + 1) for i in range(4)]))[0] == 1


def test_max_bh_single_vertex_rejected():
    with pytest.raises(GraphError):
        max_Bh(Graph(1))


@pytest.mark.parametrize("h", range(1, 7))
def test_max_bh_binary(h):
    t = build_binary_tree(h)
    value, emb = max_Bh(t.graph)
    assert value == h
    assert is_bh_subtree(t.graph, emb.root, emb.edges, h)


def test_max_bh_subdivided():
    t = subdivided_binary_tree(4, 1)
    value, emb = max_Bh(t.graph)
    assert value == 4 and is_bh_subtree(t.graph, emb.root, emb.edges, 4)


def test_max_bh_catalog():
    for g in subcubic_trees(11):
        if g.n >= 2:
            assert max_Bh(g)[0] == brute_max_bh(g)


@settings(max_examples=60, deadline=None)
@given(subcubic(max_n=60))
def test_max_bh_witness_and_pathwidth_bound(g):
    if g.n < 2:
        return
    h, emb = max_Bh(g)
    assert is_bh_subtree(g, emb.root, emb.edges, h)
    pw = tree_pathwidth(g)
    assert h >= pw - 1
    # a subtree never has larger pathwidth than its host
    assert pw >= math.ceil(h / 2)


def test_is_bh_rejects_wrong_height():
    t = build_binary_tree(3)
    assert not is_bh_subtree(t.graph, t.root, t.graph.edges(), 2)
    assert not is_bh_subtree(t.graph, t.root, t.graph.edges()[:-1], 3)


# -- decomposition -----------------------------------------------------------


@pytest.mark.parametrize("w", [0, 1])
def test_decomposition_validates(w):
    parts = decompose_tree(build_binary_tree(w + 9).graph, w)
    assert validate_tree_parts(parts) == []
    levels = parts.levels
    for h, u in zip(range(w + 5, w + 1, -1), parts.u_chain):
        assert levels.contains(u, h)
    assert levels.contains(parts.root, w + 7)
    assert parts.u_chain[1] in parts.main_path and parts.u_chain[2] in parts.main_path


def test_decomposition_deterministic():
    g = build_binary_tree(9).graph
    assert decompose_tree(g, 0).summary() == decompose_tree(g, 0).summary()


def test_caterpillar_too_shallow():
    spine = 12
    edges = [(i, i + 1) for i in range(spine - 1)] + [(i, spine + i) for i in range(spine)]
    with pytest.raises(TreeTooShallow, match="L_2"):
        decompose_tree(Graph(2 * spine, edges), 0)


def test_validator_catches_corruption():
    parts = decompose_tree(build_binary_tree(9).graph, 0)
    bad = dataclasses.replace(parts, omega_min=parts.omega_min + 1)
    assert validate_tree_parts(bad)
    bad = dataclasses.replace(parts, u_chain=(parts.u_chain[1],) + parts.u_chain[1:])
    assert validate_tree_parts(bad)


def test_random_tree_agrees_with_networkx_tree_check():
    rng = random.Random(5)
    for _ in range(20):
        g = random_subcubic_tree(rng.randint(1, 40), rng)
        G = nx.Graph(list(g.edges()))
        G.add_nodes_from(g.vertices())
        assert nx.is_tree(G) and max(d for _, d in G.degree()) <= 3
