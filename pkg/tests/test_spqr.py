import json

import pytest

from graphrec import (
    SparseBinaryMatrix,
    SpqrForest,
    StructureError,
    check_minimal,
    is_graphic,
    merge_adjacent,
    realize,
    representation_matrix,
    validate,
)
from graphrec.spqr import GraphTreePair, assert_valid
from helpers import fig1_matrix, fig1_pair, fig4_matrix


def make_q_forest():
    f = SpqrForest()
    node = f.new_node("Q")
    f.add_edge(node, ("r", 0), True)
    f.add_edge(node, ("c", 0), False)
    return f, node


def test_realize_single_q():
    f, node = make_q_forest()
    pair = realize(f, node)
    assert len(pair.vertices) == 2
    assert len(pair.edges) == 2
    assert sum(pair.tree_flags) == 1
    assert representation_matrix(pair).rows == ((0,),)


def test_realize_p_node():
    f = SpqrForest()
    node = f.new_node("P")
    f.add_edge(node, ("r", 0), True)
    f.add_edge(node, ("c", 0), False)
    f.add_edge(node, ("c", 1), False)
    pair = realize(f, node)
    assert len(pair.vertices) == 2 and len(pair.edges) == 3
    assert representation_matrix(pair).rows == ((0, 1),)


def test_realize_fig4_tree_matches_matrix():
    res = is_graphic(fig4_matrix())
    root = res.forest.tree_roots()[0]
    pair = realize(res.forest, res.forest.nodes_of_tree(root)[0])
    assert len(pair.vertices) == 7
    assert len(pair.edges) == 15
    assert representation_matrix(pair).rows == fig4_matrix().rows


def test_representation_matrix_fig1_pair_exact():
    rep = representation_matrix(fig1_pair())
    assert rep.rows == fig1_matrix().rows


def test_representation_matrix_star_k5():
    # tree = 4 spokes of K5; column {i,j} hits exactly rows t_i, t_j
    tree = [(0, i, ("r", i - 1)) for i in range(1, 5)]
    cotree = [(i, j, ("c", k)) for k, (i, j) in enumerate(
        [(i, j) for i in range(1, 5) for j in range(i + 1, 5)])]
    pair = GraphTreePair((0, 1, 2, 3, 4), tuple(tree + cotree),
                         (True,) * 4 + (False,) * 6)
    rep = representation_matrix(pair)
    assert (rep.num_rows, rep.num_cols) == (4, 6)
    pairs = [(i, j) for i in range(1, 5) for j in range(i + 1, 5)]
    for k, (i, j) in enumerate(pairs):
        assert set(rep.col_supports()[k]) == {i - 1, j - 1}


def test_representation_matrix_path_no_columns():
    tree = [(i, i + 1, ("r", i)) for i in range(4)]
    pair = GraphTreePair((0, 1, 2, 3, 4), tuple(tree), (True,) * 4)
    rep = representation_matrix(pair)
    assert (rep.num_rows, rep.num_cols) == (4, 0)


def test_validate_pipeline_forest_ok():
    res = is_graphic(fig4_matrix())
    assert validate(res.forest) is None


def test_validate_short_cycle():
    f = SpqrForest()
    node = f.new_node("S")
    f.add_edge(node, ("r", 0), True)
    f.add_edge(node, ("c", 0), False)
    assert "S cycle length < 3" in validate(f)


def test_validate_double_tree_pair():
    f = SpqrForest()
    a = f.new_node("S")
    b = f.new_node("P")
    e = f.add_edge(a, None, True)
    g = f.add_edge(b, None, False)
    f.pair_virtual(e, g)
    f.edges[g].in_tree = True  # corrupt: both partners tree-flagged
    assert "exactly one tree edge" in validate(f)


def test_pair_virtual_rejects_double_tree():
    f = SpqrForest()
    a = f.new_node("S")
    b = f.new_node("P")
    e = f.add_edge(a, None, True)
    g = f.add_edge(b, None, True)
    with pytest.raises(StructureError):
        f.pair_virtual(e, g)


def test_check_minimal():
    res = is_graphic(fig4_matrix())
    assert check_minimal(res.forest)

    f = SpqrForest()
    a = f.new_node("P")
    b = f.new_node("P")
    for k in range(2):
        f.add_edge(a, ("c", k), False)
        f.add_edge(b, ("c", 2 + k), False)
    f.add_edge(a, ("r", 0), True)
    e = f.add_edge(a, None, False)
    g = f.add_edge(b, None, True)
    f.pair_virtual(e, g)
    assert not check_minimal(f)

    # a single rigid node (K4, star spanning tree) is trivially minimal
    single = SpqrForest()
    node = single.new_node("R")
    vs = [single.new_vertex() for _ in range(4)]
    for i in range(1, 4):
        single.add_edge(node, ("r", i - 1), True, ends=(vs[0], vs[i]))
    for k, (i, j) in enumerate([(1, 2), (1, 3), (2, 3)]):
        single.add_edge(node, ("c", k), False, ends=(vs[i], vs[j]))
    assert validate(single) is None
    assert check_minimal(single)


def test_merge_adjacent_parallel():
    f = SpqrForest()
    a = f.new_node("P")
    b = f.new_node("P")
    f.add_edge(a, ("r", 0), True)
    f.add_edge(a, ("c", 0), False)
    f.add_edge(b, ("c", 1), False)
    f.add_edge(b, ("c", 2), False)
    e = f.add_edge(a, None, False)
    g = f.add_edge(b, None, True)
    f.pair_virtual(e, g)
    merged = merge_adjacent(f, a, b)
    skel = f.skeletons[merged]
    assert skel.kind == "P" and len(skel.edge_ids) == 4
    assert validate(f) is None


def test_merge_adjacent_series():
    f = SpqrForest()
    a = f.new_node("S")
    b = f.new_node("S")
    f.add_edge(a, ("r", 0), True)
    f.add_edge(a, ("c", 0), False)
    f.add_edge(b, ("r", 1), True)
    f.add_edge(b, ("r", 2), True)
    e = f.add_edge(a, None, True)
    g = f.add_edge(b, None, False)
    f.pair_virtual(e, g)
    merged = merge_adjacent(f, a, b)
    skel = f.skeletons[merged]
    assert skel.kind == "S" and len(skel.edge_ids) == 4
    assert validate(f) is None
    rep = representation_matrix(realize(f, merged))
    assert rep.rows == ((0,), (0,), (0,))  # one cycle: single all-ones column


def test_merge_adjacent_requires_adjacency():
    f = SpqrForest()
    a = f.new_node("P")
    b = f.new_node("P")
    with pytest.raises(StructureError):
        merge_adjacent(f, a, b)


def test_json_dump_schema():
    res = is_graphic(fig1_matrix())
    data = json.loads(res.forest.to_json())
    assert set(data) == {"nodes"}
    for node in data["nodes"]:
        assert {"id", "kind", "edges"} <= set(node)
        for edge in node["edges"]:
            assert {"id", "origin", "in_tree"} <= set(edge)


def test_dot_export_styles():
    res = is_graphic(fig1_matrix())
    dot = res.forest.to_dot()
    assert dot.startswith("graph spqr {")
    assert "style=bold" in dot and "style=dashed" in dot


def test_snapshot_restore_roundtrip():
    res = is_graphic(fig1_matrix())
    forest = res.forest
    before = forest.to_json()
    snap = forest.snapshot()
    node = forest.new_node("P")
    forest.add_edge(node, ("c", 99), False)
    assert forest.to_json() != before
    forest.restore(snap)
    assert forest.to_json() == before


def test_size_bound_fields():
    res = is_graphic(fig4_matrix())
    stats = res.forest.stats()
    assert stats["nodes_by_kind"] == {"P": 4, "R": 1, "S": 2}
    assert stats["trees"] == 1
