import random
from itertools import islice

import networkx as nx
import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from carpet.addressing import apply_isometry, isometry_matrix, word_to_coord
from carpet.balls import ball_at_level, limit_ball
from carpet.errors import InvalidArgument, ResourceLimitError
from carpet.graph import boundary, build_cells, carpet_graph, d_sequence, internal_boundary
from carpet.iso import (
    IsoVerdict, automorphisms, classify, find_isomorphisms, find_witness_radius,
    graph_iso_bruteforce, isometry_permutation, orbit_agreement, rooted_iso_finite,
    transform_infinite, unrooted_iso,
)
from carpet.words import InfiniteWord, R, S, dihedral_group, parse_word, prefix

from .conftest import to_networkx

G = dihedral_group()


def W(text):
    return parse_word(text)


infinite_words = st.builds(
    InfiniteWord,
    st.sampled_from("abcd"),
    st.lists(st.integers(0, 7), max_size=3).map(tuple),
    st.lists(st.integers(0, 7), min_size=1, max_size=3).map(tuple),
)


# -- the oracle itself -----------------------------------------------------------

def _adj(h):
    return {v: list(h[v]) for v in h}


@pytest.mark.parametrize("seed", range(30))
def test_oracle_agrees_with_networkx(seed):
    rng = random.Random(seed)
    n = rng.randint(3, 9)
    p = rng.uniform(0.2, 0.6)
    g1 = nx.gnp_random_graph(n, p, seed=seed)
    # half the time compare against a relabelled copy
    if seed % 2:
        perm = list(range(n))
        rng.shuffle(perm)
        g2 = nx.relabel_nodes(g1, dict(enumerate(perm)))
    else:
        g2 = nx.gnp_random_graph(n, p, seed=seed + 1000)
    assert graph_iso_bruteforce(_adj(g1), _adj(g2)) == nx.is_isomorphic(g1, g2)


@pytest.mark.parametrize("seed", range(20))
def test_rooted_oracle_agrees_with_networkx(seed):
    rng = random.Random(seed)
    g = nx.random_labeled_tree(8, seed=seed) if hasattr(nx, "random_labeled_tree") \
        else nx.random_tree(8, seed=seed)
    a, b = rng.randrange(8), rng.randrange(8)
    ga, gb = g.copy(), g.copy()
    nx.set_node_attributes(ga, {v: v == a for v in ga}, "root")
    nx.set_node_attributes(gb, {v: v == b for v in gb}, "root")
    want = nx.is_isomorphic(ga, gb, node_match=lambda x, y: x["root"] == y["root"])
    assert graph_iso_bruteforce(_adj(g), _adj(g), a, b) == want


def test_oracle_examples():
    g2 = build_cells(2)
    assert graph_iso_bruteforce(g2, g2)
    assert not graph_iso_bruteforce(g2, build_cells(1))
    assert graph_iso_bruteforce(limit_ball(W("a:(0)"), 3), limit_ball(W("b:(2)"), 3))
    assert not graph_iso_bruteforce(limit_ball(W("a:(0)"), 1), limit_ball(W("a:(7)"), 1))
    with pytest.raises(InvalidArgument):
        graph_iso_bruteforce(g2, g2, root1=0)


def test_oracle_vertex_guard():
    big = {i: [] for i in range(10_001)}
    with pytest.raises(ResourceLimitError):
        graph_iso_bruteforce(big, big)


def test_find_isomorphisms_enumerates_c4():
    c4 = {0: [1, 3], 1: [0, 2], 2: [1, 3], 3: [2, 0]}
    assert len(list(find_isomorphisms(c4, c4))) == 8
    assert len(list(find_isomorphisms(c4, c4, roots=(0, 2)))) == 2


# -- automorphisms and the square symmetries ---------------------------------------

@pytest.mark.parametrize("n", [2, 3, 4])
def test_automorphisms_are_the_eight_isometries(n):
    g = carpet_graph(n)
    auts = automorphisms(g)
    assert len(auts) == 8
    isos = sorted((isometry_permutation(g, s) for s in G), key=lambda p: p.tolist())
    assert all(np.array_equal(a, b) for a, b in zip(auts, isos))


def test_automorphism_level_guard():
    with pytest.raises(ResourceLimitError):
        automorphisms(carpet_graph(5))


@pytest.mark.parametrize("n", [2, 3, 4, 5])
@pytest.mark.parametrize("k", range(8))
def test_isometries_preserve_boundaries(n, k):
    g = carpet_graph(n)
    perm = isometry_permutation(g, G[k])
    assert set(perm[internal_boundary(g)].tolist()) == set(internal_boundary(g).tolist())
    assert set(perm[boundary(g)].tolist()) == set(boundary(g).tolist())
    h = to_networkx(g)
    coords = [g.coord_of(i) for i in range(g.n_vertices)]
    for u, v in g.edges()[:: max(1, g.n_edges // 300)].tolist():
        assert h.has_edge(coords[perm[u]], coords[perm[v]])


@pytest.mark.parametrize("k", range(8))
def test_isometry_matrices_form_the_group(k):
    m = np.array(isometry_matrix(G[k]))
    assert abs(round(np.linalg.det(m))) == 1
    for j in range(8):
        prod = np.array(isometry_matrix(G[k] @ G[j]))
        assert np.array_equal(prod, m @ np.array(isometry_matrix(G[j])))


# -- distance sequences versus automorphism orbits --------------------------------

def test_level_two_dseq_classes_are_orbits():
    rep = orbit_agreement(2)
    assert rep.ok
    assert rep.pairs == rep.agree == 256


def test_level_three_automorphic_vertices_share_dseq():
    rep = orbit_agreement(3)
    assert rep.pairs == 96 * 96
    assert rep.aut_but_dseq_differs == []
    assert rep.ambiguous_vertices == []


def test_level_three_has_unrelated_vertices_with_equal_dseq():
    # (1,0) and (4,0) both sit one step from a hole at levels 2 and 3, yet no
    # automorphism of the level-3 graph moves one onto the other
    rep = orbit_agreement(3)
    assert ((1, 0), (4, 0)) in rep.equal_dseq_no_aut
    g = carpet_graph(3)
    i, j = g.index_of((1, 0)), g.index_of((4, 0))
    assert all(int(p[i]) != j for p in automorphisms(g))


# -- rooted decisions --------------------------------------------------------------

@pytest.mark.parametrize("left, right, depth, expected", [
    ("a:(0)", "c:(4)", 5, True),
    ("a:(0)", "b:(2)", 5, True),
    ("a:(0)", "a:(7)", 3, False),
    ("a:(7)", "d:(5)", 4, True),
    ("a:(7)", "a:(1)", 4, True),
])
def test_rooted_iso_finite(left, right, depth, expected):
    assert rooted_iso_finite(W(left), W(right), depth) is expected


def test_rooted_iso_finite_depth_guard():
    with pytest.raises(InvalidArgument):
        rooted_iso_finite(W("a:(0)"), W("a:(0)"), 1)


@pytest.mark.parametrize("n", [2, 3, 4])
@pytest.mark.parametrize("left, right", [("a:(0)", "c:(4)"), ("a:(7)", "b:(1)"),
                                          ("a:(7)", "a:(0)"), ("d:13(2)", "d:(6)")])
def test_rooted_iso_finite_against_oracle(n, left, right):
    # rooted finite graphs compared directly with the backtracking matcher
    u, v = W(left), W(right)
    g = carpet_graph(n)
    cu, cv = word_to_coord(prefix(u, n)), word_to_coord(prefix(v, n))
    oracle = graph_iso_bruteforce(g.adjacency(), g.adjacency(), g.index_of(cu), g.index_of(cv))
    if n == 2:
        assert oracle == rooted_iso_finite(u, v, n)
    else:
        # automorphic roots always have equal sequences
        assert not oracle or rooted_iso_finite(u, v, n)


@pytest.mark.parametrize("left, right", [("a:(0)", "a:(7)"), ("a:(0)", "b:(1)"),
                                          ("b:(7)", "d:(0)"), ("c:(4)", "d:(56)")])
def test_find_witness_radius_is_confirmed_by_oracle(left, right):
    u, v = W(left), W(right)
    r = find_witness_radius(u, v, 6)
    assert r is not None
    assert not graph_iso_bruteforce(limit_ball(u, r), limit_ball(v, r))
    for smaller in range(r):
        assert graph_iso_bruteforce(limit_ball(u, smaller), limit_ball(v, smaller))


def test_find_witness_radius_examples():
    assert find_witness_radius(W("a:(0)"), W("a:(7)"), 6) == 1
    assert find_witness_radius(W("a:(0)"), W("c:(4)"), 6) is None
    assert find_witness_radius(W("b:13(25)"), W("b:13(25)"), 5) is None


# -- unrooted decisions ------------------------------------------------------------

@pytest.mark.parametrize("left, right, expected", [
    ("a:(0)", "c:(4)", True),
    ("a:(0)", "b:77(2)", True),
    ("a:(0)", "a:(7)", False),
    ("a:(01)", "c:45(01)", True),
    ("a:(01)", "a:(10)", False),
    ("a:(01)", "a:(0011)", False),
    ("d:3(15)", "a:(37)", True),
])
def test_unrooted_iso_examples(left, right, expected):
    v = unrooted_iso(W(left), W(right))
    assert v.isomorphic is expected
    assert (v.witness is not None) is expected


def test_unrooted_witness_text():
    v = unrooted_iso(W("a:(0)"), W("c:(4)"))
    assert v.witness == R @ R
    assert str(v) == "isomorphic witness=(04)(15)(26)(37)"
    assert str(unrooted_iso(W("a:(0)"), W("a:(7)"))) == "not isomorphic"
    assert v.to_json() == {"schema": 1, "isomorphic": True, "witness": "(04)(15)(26)(37)"}
    with pytest.raises(InvalidArgument):
        IsoVerdict(False, R)


@settings(max_examples=80, deadline=None)
@given(infinite_words, st.sampled_from(G), st.lists(st.integers(0, 7), max_size=4))
def test_unrooted_iso_sees_through_symmetry_and_prefix(w, sigma, junk):
    # overwrite the first few letters of the image; the tail is unchanged
    img = transform_infinite(sigma, w)
    k = len(junk) + len(img.preperiod)
    letters = list(islice(img.tail.letters(), k + len(img.period)))
    moved = InfiniteWord(w.root, tuple(junk) + tuple(letters[len(junk):k]), tuple(letters[k:]))
    v = unrooted_iso(w, moved)
    assert v.isomorphic


@settings(max_examples=60, deadline=None)
@given(infinite_words, infinite_words, infinite_words)
def test_unrooted_iso_is_an_equivalence(u, v, w):
    assert unrooted_iso(u, u).isomorphic
    assert unrooted_iso(u, v).isomorphic == unrooted_iso(v, u).isomorphic
    a, b = unrooted_iso(u, v), unrooted_iso(v, w)
    if a.isomorphic and b.isomorphic:
        c = unrooted_iso(u, w)
        assert c.isomorphic
        composed = b.witness @ a.witness
        assert unrooted_iso(transform_infinite(composed, u), w).isomorphic


def test_classify_examples():
    words = [W(t) for t in ("a:(0)", "a:(7)", "c:(4)", "a:(01)", "b:(2)", "a:(0011)", "d:5(10)")]
    classes = classify(words)
    assert [[str(m) for m in c.members] for c in classes] == [
        ["a:(0)", "c:(4)", "b:(2)"], ["a:(7)"], ["a:(01)", "d:5(10)"], ["a:(0011)"],
    ]
    first = classes[0]
    sigma = first.witness(words[2], words[4])
    assert unrooted_iso(transform_infinite(sigma, words[2]), words[4]).isomorphic
    with pytest.raises(InvalidArgument):
        classify([])


# -- symmetry consistency ------------------------------------------------------------

@settings(max_examples=40, deadline=None)
@given(infinite_words, st.sampled_from(G))
def test_dseq_invariant_under_symmetry(w, sigma):
    assert d_sequence(w, 5) == d_sequence(transform_infinite(sigma, w), 5)


@pytest.mark.parametrize("word", ["a:(0)", "a:(7)", "b:13(25)", "d:(57)"])
@pytest.mark.parametrize("k", range(8))
def test_limit_balls_move_with_the_symmetry(word, k):
    w = W(word)
    m = np.array(isometry_matrix(G[k]))
    img = limit_ball(transform_infinite(G[k], w), 4)
    moved = {tuple(int(t) for t in m @ np.array(c)) for c in limit_ball(w, 4).vertices}
    assert set(img.vertices) == moved


def test_generators():
    assert str(R) == "(0246)(1357)"
    assert str(S) == "(04)(13)(57)"
    assert apply_isometry(R, (0, 0), 2) == (3, 0)
    assert ball_at_level(W("a:(0)"), 0, 2).vertices == ((0, 0),)
