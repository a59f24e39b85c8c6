import json
import random

import pytest

from conftest import (CHAIN13, CLASS8_ONE, CLASS8_PLAIN, CLASS8_R1, GOLDEN, NOT_GOOD6, THETA)
from hardmap.maps import (PlanarMap, canonical_code, check_map, close_tree, close_tree_labeled,
                          map_from_text, map_to_dot, map_to_text, nhp_edges, random_relabel,
                          trace_faces)
from hardmap.trees import BLACK, StructureError, blossom_shapes, edge_charges, parse_tree


def test_theta_map():
    m = close_tree(parse_tree(THETA))
    assert (m.n_vertices, m.n_edges, len(m.faces), m.genus) == (2, 3, 3, 0)
    assert all(len(f) == 2 for f in trace_faces(m))
    assert m.root in trace_faces(m)[0]
    assert m.color[m.vertex[m.root]] == BLACK
    assert not check_map(m)


def test_theta_golden():
    m = close_tree(parse_tree(THETA))
    assert map_to_text(m) == (GOLDEN / "theta_map.txt").read_text()
    ref = json.loads((GOLDEN / "theta_code.json").read_text())
    assert list(canonical_code(m)) == ref["canonical_code"]


def test_fourteen_vertex_map_euler():
    m = close_tree(parse_tree(CHAIN13))
    assert (m.n_vertices, m.n_edges, len(m.faces)) == (14, 21, 9)
    assert not check_map(m)


def test_closing_rejects_bad_charge():
    with pytest.raises(StructureError):
        close_tree(parse_tree("+w(+k(+w(++)))"))


def test_closing_requires_rooted_tree():
    t = next(s for s in blossom_shapes(5) if not s.is_rooted())
    with pytest.raises(StructureError):
        close_tree(t)


@pytest.mark.parametrize("n_inner", [1, 3, 5, 7])
def test_closing_gives_planar_bicubic_maps(n_inner):
    for t in blossom_shapes(n_inner):
        if not t.is_rooted():
            continue
        m = close_tree(t)
        assert not check_map(m), (t.serialized, check_map(m))
        rv = m.vertex[m.root]
        assert m.color[rv] == BLACK and not m.occupied[rv]


def test_particle_free_map_counts():
    for n, want in zip((1, 3, 5, 7), (1, 3, 12, 56)):
        codes = set()
        for t in blossom_shapes(n):
            if t.is_rooted() and all(x.regular for x in edge_charges(t).values()):
                codes.add(canonical_code(close_tree(t)))
        assert len(codes) == want


def test_closing_can_create_nhp_edges():
    t = parse_tree(CLASS8_ONE)
    m = close_tree(t)
    assert len(t.nhp_edges()) == 1
    assert len(nhp_edges(m)) == 2
    t6 = parse_tree(NOT_GOOD6)
    assert not t6.nhp_edges() and len(nhp_edges(close_tree(t6))) == 1
    assert not nhp_edges(close_tree(parse_tree(THETA)))


def test_distinct_trees_close_to_same_map():
    codes = {canonical_code(close_tree(parse_tree(s))) for s in (CLASS8_PLAIN, CLASS8_ONE, CLASS8_R1)}
    assert len(codes) == 1


def test_tree_edges_are_tracked():
    t = parse_tree(CLASS8_ONE)
    closing = close_tree_labeled(t)
    m = closing.map
    lay = t.layout
    for e, me in closing.edge_of_tree_edge.items():
        assert {m.vertex[me], m.vertex[m.alpha[me]]} == {e, lay.parent[e]}
        assert m.occupied[e] == lay.occupied[e]
    assert len(closing.arcs) + len(closing.edge_of_tree_edge) + 3 == m.n_edges


def test_canonical_code_relabel_invariance():
    rng = random.Random(7)
    for s in (THETA, CLASS8_ONE, CHAIN13):
        m = close_tree(parse_tree(s))
        for _ in range(5):
            assert canonical_code(random_relabel(m, rng)) == canonical_code(m)


def test_canonical_code_sensitivity():
    m = close_tree(parse_tree(CLASS8_ONE))
    base = canonical_code(m)
    # occupation
    occ = list(m.occupied)
    v = next(i for i, o in enumerate(occ) if not o)
    occ[v] = True
    flipped = PlanarMap(m.alpha, m.sigma, m.vertex, m.color, tuple(occ), m.root)
    assert canonical_code(flipped) != base
    # colour
    col = list(m.color)
    col[0] = "white" if col[0] == "black" else "black"
    assert canonical_code(PlanarMap(m.alpha, m.sigma, m.vertex, tuple(col), m.occupied, m.root)) != base
    # rooting: another dart of the root vertex
    other = m.sigma[m.root]
    assert canonical_code(PlanarMap(m.alpha, m.sigma, m.vertex, m.color, m.occupied, other)) != base
    # special flags only count when asked
    marked = m.with_special([nhp_edges(m)[0]])
    assert canonical_code(marked) == base
    assert canonical_code(marked, with_special=True) != canonical_code(m, with_special=True)


def test_text_export_roundtrip_and_dot():
    m = close_tree(parse_tree(CLASS8_ONE)).with_special([4])
    back = map_from_text(map_to_text(m))
    assert canonical_code(back, with_special=True) == canonical_code(m, with_special=True)
    dot = map_to_dot(m)
    assert dot.startswith("graph map {") and dot.count("--") == m.n_edges
    assert "label=root" in dot and "penwidth=3" in dot


def test_check_map_reports_problems():
    m = close_tree(parse_tree(THETA))
    broken = PlanarMap((1, 0, 2, 5, 4, 3), m.sigma, m.vertex, m.color, m.occupied, m.root)
    assert check_map(broken)
