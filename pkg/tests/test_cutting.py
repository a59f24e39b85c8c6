import random

import pytest

from conftest import (CHAIN13, CLASS8_ONE, CLASS8_PLAIN, CLASS8_R1, CLASS12_ONE, CLASS12_R1,
                      CLASS12_TWO, THETA)
from hardmap.cutting import (NotAcceptable, acceptable, cut_map, roundtrip_map, roundtrip_tree,
                             verify_prop_c1, verify_prop_c3)
from hardmap.maps import PlanarMap, close_tree, close_tree_labeled, nhp_edges, random_relabel
from hardmap.trees import parse_tree, rooted_admissible_trees


def test_theta_cuts_to_single_vertex_tree():
    trace = []
    res = cut_map(close_tree(parse_tree(THETA)), trace=trace)
    assert res.tree.serialized == THETA
    assert res.cut_edge_log == [] and trace == []
    assert res.n_nonregular == 0


def test_trace_records_each_decision():
    m = close_tree(parse_tree(CHAIN13))
    trace = []
    res = cut_map(m, trace=trace)
    assert res.tree.serialized == CHAIN13
    assert res.cut_edge_log == [4, 10, 16, 22, 28, 34]
    assert trace[:2] == ["2 2->3 bridge-skip", "4 4->7 cut"]
    trace = []
    res = cut_map(close_tree(parse_tree(CLASS8_PLAIN)), trace=trace)
    verdicts = [line.split()[-1] for line in trace]
    assert res.cut_edge_log == [4, 14, 10]
    assert verdicts.count("cut") == 3 and "wrong-direction-skip" in verdicts


def test_special_edge_is_never_cut():
    m = close_tree(parse_tree(CLASS8_PLAIN))
    for e in nhp_edges(m):
        trace = []
        res = cut_map(m, [e], trace=trace)
        assert e not in res.cut_edge_log
        assert any(line.startswith(f"{e} ") and line.endswith("special-skip") for line in trace)


def test_twelve_vertex_class_markings():
    m = close_tree(parse_tree(CLASS12_R1))
    a, b = nhp_edges(m)
    got = {sp: cut_map(m, sp) for sp in [(), (a,), (b,), (a, b)]}
    assert got[()].tree.serialized == CLASS12_R1
    assert got[(a,)].tree.serialized == CLASS12_ONE
    assert got[(a, b)].tree.serialized == CLASS12_TWO
    assert [got[sp].n_nonregular for sp in [(a,), (a, b)]] == [1, 2]
    # marking b alone keeps it regular in the tree and changes nothing
    assert got[(b,)].tree == got[()].tree
    assert (got[(b,)].n_nonregular, got[(b,)].r_regular_special) == (0, 1)


def test_marking_that_blocks_the_cutting():
    m = close_tree(parse_tree(CLASS12_R1))
    assert not acceptable(m, [20])
    with pytest.raises(NotAcceptable) as info:
        cut_map(m, [20])
    assert info.value.n_cut == 4
    assert not roundtrip_map(m, [20])


def test_preconditions():
    m = close_tree(parse_tree(CLASS8_ONE))
    with pytest.raises(ValueError):
        cut_map(m, [m.root])
    with pytest.raises(ValueError):
        cut_map(m, [10 ** 6])
    occ = list(m.occupied)
    occ[m.vertex[m.root]] = True
    with pytest.raises(ValueError):
        cut_map(PlanarMap(m.alpha, m.sigma, m.vertex, m.color, tuple(occ), m.root))
    with pytest.raises(ValueError):
        cut_map(m, strategy="random")


def test_cut_is_independent_of_dart_labels():
    m = close_tree_labeled(parse_tree(CLASS12_TWO), [2, 8]).map
    rng = random.Random(3)
    for _ in range(5):
        assert cut_map(random_relabel(m, rng)).tree.serialized == CLASS12_TWO


def test_unmarked_cut_is_all_regular():
    for t in rooted_admissible_trees(7):
        res = cut_map(close_tree(t))
        assert res.n_nonregular == 0 and verify_prop_c1(res)


@pytest.mark.parametrize("n_inner", [1, 3, 5, 7])
def test_layered_cutting_inverts_closing(n_inner):
    for t in rooted_admissible_trees(n_inner):
        assert roundtrip_tree(t), t.serialized


def test_greedy_cutting_does_not_invert_closing():
    t = parse_tree("+w(k(-w(+k(w(++)-)))+)")
    assert roundtrip_tree(t, "layered")
    assert not roundtrip_tree(t, "greedy")
    assert all(roundtrip_tree(t, "greedy") for t in rooted_admissible_trees(3))


def test_unmarking_regular_special_edges():
    m = close_tree(parse_tree(CLASS8_PLAIN))
    a, b = nhp_edges(m)
    res = cut_map(m, [a, b])
    assert res.tree.serialized == CLASS8_R1
    assert (res.n_nonregular, res.r_regular_special) == (1, 1)
    assert verify_prop_c1(res)
    assert verify_prop_c3(m, [a, b])
    assert roundtrip_map(m, [a, b])
