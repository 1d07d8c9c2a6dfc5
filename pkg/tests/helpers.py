"""Shared fixtures and independent brute-force oracles for the test suite.

The brute forces here are written straight from the definitions and share no
code with the library paths they check.
"""
from __future__ import annotations

import itertools
import random
from collections import deque

from graphrec import GraphTreePair, SparseBinaryMatrix, SpqrForest

# -- paper fixtures -------------------------------------------------------------


def fig1_matrix() -> SparseBinaryMatrix:
    """5x5, rows a..e over columns f..j, 13 nonzeros."""
    return SparseBinaryMatrix.from_rows(
        [[1, 2, 3], [0, 1], [0, 2, 3], [2, 3, 4], [3, 4]],
        5,
        row_labels="abcde",
        col_labels="fghij",
    )


def fig1_pair() -> GraphTreePair:
    """The realization drawn next to the fig1 matrix (vertices 1..6)."""
    tree = [(2, 4, ("r", 0)), (1, 2, ("r", 1)), (3, 2, ("r", 2)), (6, 3, ("r", 3)), (5, 6, ("r", 4))]
    cotree = [(1, 3, ("c", 0)), (1, 4, ("c", 1)), (4, 6, ("c", 2)), (5, 4, ("c", 3)), (3, 5, ("c", 4))]
    return GraphTreePair(
        tuple(range(1, 7)), tuple(tree + cotree), (True,) * 5 + (False,) * 5
    )


def fig1_pair_reversed() -> GraphTreePair:
    """A 2-isomorphic realization: the {d,e,h,i,j} side reversed at its separator."""
    tree = [(2, 4, ("r", 0)), (1, 2, ("r", 1)), (3, 2, ("r", 2)), (6, 4, ("r", 3)), (5, 6, ("r", 4))]
    cotree = [(1, 3, ("c", 0)), (1, 4, ("c", 1)), (3, 6, ("c", 2)), (5, 3, ("c", 3)), (4, 5, ("c", 4))]
    return GraphTreePair(
        tuple(range(1, 7)), tuple(tree + cotree), (True,) * 5 + (False,) * 5
    )


def fig4_matrix() -> SparseBinaryMatrix:
    """6x9, rows a..f over columns g..o, 22 nonzeros."""
    return SparseBinaryMatrix.from_rows(
        [
            [0, 1, 3],
            [0, 1, 2, 3],
            [0, 1, 2, 4],
            [0, 1, 2, 5],
            [0, 1, 2, 6, 7, 8],
            [3],
        ],
        9,
        row_labels="abcdef",
        col_labels="ghijklmno",
    )


FIG6_Y_COLUMNS = (0, 1, 2, 5, 7, 8)  # columns g, h, i, l, n, o


def bm_matrix(m: int) -> SparseBinaryMatrix:
    """The B_m family: r1 = {a,b}, r2 = {a,c}, r3..rm = {a}."""
    rows = [[0, 1], [0, 2]] + [[0]] * (m - 2)
    return SparseBinaryMatrix.from_rows(rows[:m], 3)


# fig5: 3-connected graph whose Y has four candidates, two splittable
FIG5_VERTICES = "abcdefgh"
FIG5_TREE = [("a", "b"), ("b", "c"), ("c", "d"), ("d", "e"), ("e", "f"), ("e", "g"), ("b", "h")]
FIG5_COTREE = [("a", "c"), ("d", "f"), ("a", "f"), ("a", "g"), ("h", "f"), ("h", "g")]
FIG5_Y = ("a-f", "a-g", "h-f", "h-g")


def fig5_skeleton() -> tuple[SpqrForest, int, dict, list[int]]:
    """Forest with one rigid node holding the fig5 graph; returns (forest, node, vmap, y_eids)."""
    forest = SpqrForest()
    node = forest.new_node("R")
    vmap = {name: forest.new_vertex() for name in FIG5_VERTICES}
    eids = {}
    for i, (u, w) in enumerate(FIG5_TREE):
        eids[f"{u}-{w}"] = forest.add_edge(node, ("r", i), True, ends=(vmap[u], vmap[w]))
    for j, (u, w) in enumerate(FIG5_COTREE):
        eids[f"{u}-{w}"] = forest.add_edge(node, ("c", j), False, ends=(vmap[u], vmap[w]))
    return forest, node, vmap, [eids[k] for k in FIG5_Y]


# -- independent brute forces ------------------------------------------------


def brute_splittable(vertices, ends, y, v) -> bool:
    """H^v_Y bipartiteness straight from the definition."""
    comp: dict = {}
    adj = {u: [] for u in vertices if u != v}
    for e, (a, b) in ends.items():
        if e in y or v in (a, b):
            continue
        adj[a].append(b)
        adj[b].append(a)
    cid = 0
    for s in adj:
        if s in comp:
            continue
        comp[s] = cid
        queue = deque([s])
        while queue:
            x = queue.popleft()
            for w in adj[x]:
                if w not in comp:
                    comp[w] = cid
                    queue.append(w)
        cid += 1
    h_adj: dict[int, list[int]] = {i: [] for i in range(cid)}
    for e in y:
        a, b = ends[e]
        if v in (a, b):
            continue
        if comp[a] == comp[b]:
            return False
        h_adj[comp[a]].append(comp[b])
        h_adj[comp[b]].append(comp[a])
    color: dict[int, int] = {}
    for s in range(cid):
        if s in color:
            continue
        color[s] = 0
        queue = deque([s])
        while queue:
            x = queue.popleft()
            for w in h_adj[x]:
                if w not in color:
                    color[w] = 1 - color[x]
                    queue.append(w)
                elif color[w] == color[x]:
                    return False
    return True


def connected_after_removal(vertices, ends, skip=()) -> bool:
    skip = set(skip)
    vs = [u for u in vertices if u not in skip]
    if not vs:
        return True
    adj = {u: [] for u in vs}
    for a, b in ends.values():
        if a in skip or b in skip or a == b:
            continue
        adj[a].append(b)
        adj[b].append(a)
    seen = {vs[0]}
    queue = deque([vs[0]])
    while queue:
        x = queue.popleft()
        for w in adj[x]:
            if w not in seen:
                seen.add(w)
                queue.append(w)
    return len(seen) == len(vs)


def is_biconnected(vertices, ends) -> bool:
    if not connected_after_removal(vertices, ends):
        return False
    return all(connected_after_removal(vertices, ends, (v,)) for v in vertices)


def is_triconnected_simple(vertices, ends) -> bool:
    pairs = set()
    for a, b in ends.values():
        if a == b:
            return False
        key = (min(a, b, key=repr), max(a, b, key=repr))
        if key in pairs:
            return False
        pairs.add(key)
    if len(vertices) < 4:
        return False
    deg = {u: 0 for u in vertices}
    for a, b in ends.values():
        deg[a] += 1
        deg[b] += 1
    if min(deg.values()) < 3:
        return False
    for v in vertices:
        if not connected_after_removal(vertices, ends, (v,)):
            return False
    for v, w in itertools.combinations(vertices, 2):
        if not connected_after_removal(vertices, ends, (v, w)):
            return False
    return True


def brute_tree_path(pair: GraphTreePair, a, b) -> set:
    """Vertex set of the tree path between a and b, by BFS over tree edges."""
    adj: dict = {}
    for (u, w, _), flag in zip(pair.edges, pair.tree_flags):
        if flag:
            adj.setdefault(u, []).append(w)
            adj.setdefault(w, []).append(u)
    par = {a: None}
    queue = deque([a])
    while queue:
        v = queue.popleft()
        for w in adj.get(v, ()):
            if w not in par:
                par[w] = v
                queue.append(w)
    path = {b}
    v = b
    while v != a:
        v = par[v]
        path.add(v)
    return path


# -- generators ------------------------------------------------------------------


def random_support_matrix(rng: random.Random, max_m=6, max_n=6, densities=(0.15, 0.3, 0.5, 0.7)):
    m = rng.randint(1, max_m)
    n = rng.randint(1, max_n)
    density = rng.choice(densities)
    rows = [[j for j in range(n) if rng.random() < density] for _ in range(m)]
    return SparseBinaryMatrix.from_rows(rows, n)


def spanning_tree_indices(nv: int, edge_list) -> set[int]:
    parent = list(range(nv))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    idx = set()
    for i, (u, w) in enumerate(edge_list):
        a, b = find(u), find(w)
        if a != b:
            parent[a] = b
            idx.add(i)
    return idx


def build_skeleton(forest: SpqrForest, kind: str, nv: int, edge_list, tree_idx):
    """One standalone skeleton node; rows for tree edges, columns otherwise."""
    node = forest.new_node(kind)
    vmap = [forest.new_vertex() for _ in range(nv)]
    eids = []
    for i, (u, w) in enumerate(edge_list):
        origin = ("r", i) if i in tree_idx else ("c", i)
        ends = (vmap[u], vmap[w]) if kind == "R" else None
        eids.append(forest.add_edge(node, origin, i in tree_idx, ends=ends))
    return node, vmap, eids


def random_r_skeleton(rng: random.Random, max_edges=12):
    """Rejection-sample a simple 3-connected skeleton with <= max_edges edges."""
    while True:
        nv = rng.randint(4, 6)
        all_pairs = list(itertools.combinations(range(nv), 2))
        ne = rng.randint(max(6, nv + 2), min(max_edges, len(all_pairs)))
        edge_list = rng.sample(all_pairs, ne)
        if is_triconnected_simple(list(range(nv)), dict(enumerate(edge_list))):
            return nv, edge_list, spanning_tree_indices(nv, edge_list)


def random_skeleton(rng: random.Random, max_edges=12):
    """A legal skeleton of random kind: S cycle, P bond, or rigid."""
    roll = rng.random()
    forest = SpqrForest()
    if roll < 0.3:
        k = rng.randint(3, max_edges)
        edge_list = [(i, (i + 1) % k) for i in range(k)]
        node, vmap, eids = build_skeleton(forest, "S", k, edge_list, set(range(k - 1)))
        nontree = [eids[k - 1]]
    elif roll < 0.5:
        k = rng.randint(3, max_edges)
        edge_list = [(0, 1)] * k
        node, vmap, eids = build_skeleton(forest, "P", 2, edge_list, {0})
        nontree = eids[1:]
    else:
        nv, edge_list, tree_idx = random_r_skeleton(rng, max_edges)
        node, vmap, eids = build_skeleton(forest, "R", nv, edge_list, tree_idx)
        nontree = [eids[i] for i in range(len(eids)) if i not in tree_idx]
    return forest, node, nontree
