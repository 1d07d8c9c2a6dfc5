"""Splittability machinery on a single skeleton.

A vertex v is Y-splittable when the auxiliary graph over the components of
G minus v minus Y, with one edge per Y-edge, is bipartite.  Splittable
vertices of rigid skeletons are found by filtering: star centers first, then
articulation vertices of G \\ Y lying on the common fundamental path of all
Y-edges (located with LCA queries), each confirmed by an explicit
bipartiteness test.
"""
from __future__ import annotations

import dataclasses
from collections import deque
from typing import Any, Iterable, Sequence

from .spqr import SkeletonView, SpqrForest, StructureError


@dataclasses.dataclass
class AuxiliaryGraph:
    """Components of G minus v minus Y, joined by the Y-edges."""

    components: list[frozenset]
    comp_of: dict[Any, int]
    edges: list[tuple[int, int, int]]  # (component, component, y-edge id)
    loops: list[int]  # y-edges with both ends in one component

    @property
    def has_loop(self) -> bool:
        return bool(self.loops)


def auxiliary_graph(view: SkeletonView, v, y_edges: Iterable[int]) -> AuxiliaryGraph:
    y = set(y_edges)
    adj: dict[Any, list[Any]] = {u: [] for u in view.vertices if u != v}
    for e, (a, b) in view.ends.items():
        if e in y or a == v or b == v:
            continue
        adj[a].append(b)
        adj[b].append(a)
    comp_of: dict[Any, int] = {}
    components: list[frozenset] = []
    for start in adj:
        if start in comp_of:
            continue
        group = []
        queue = deque([start])
        comp_of[start] = len(components)
        while queue:
            x = queue.popleft()
            group.append(x)
            for w in adj[x]:
                if w not in comp_of:
                    comp_of[w] = len(components)
                    queue.append(w)
        components.append(frozenset(group))
    edges = []
    loops = []
    for e in sorted(y):
        a, b = view.ends[e]
        if a == v or b == v:
            continue
        ca, cb = comp_of[a], comp_of[b]
        if ca == cb:
            loops.append(e)
        else:
            edges.append((ca, cb, e))
    return AuxiliaryGraph(components, comp_of, edges, loops)


def bipartition(aux: AuxiliaryGraph) -> dict[int, int] | None:
    """Two-color the auxiliary graph; None when not bipartite."""
    if aux.has_loop:
        return None
    color: dict[int, int] = {}
    adj: dict[int, list[int]] = {i: [] for i in range(len(aux.components))}
    for a, b, _ in aux.edges:
        adj[a].append(b)
        adj[b].append(a)
    for start in range(len(aux.components)):
        if start in color:
            continue
        color[start] = 0
        queue = deque([start])
        while queue:
            x = queue.popleft()
            for w in adj[x]:
                if w not in color:
                    color[w] = 1 - color[x]
                    queue.append(w)
                elif color[w] == color[x]:
                    return None
    return color


def is_splittable(view: SkeletonView, v, y_edges: Iterable[int]) -> bool:
    return bipartition(auxiliary_graph(view, v, y_edges)) is not None


# -- fundamental-path intersection via LCA ------------------------------------


class EulerTourLCA:
    """Static O(1) LCA over one tree: Euler tour plus sparse table."""

    def __init__(self, adj: dict[Any, list[Any]], root):
        self.first: dict[Any, int] = {}
        self.depth: dict[Any, int] = {}
        euler: list[Any] = []
        depths: list[int] = []
        stack: list[tuple[Any, Any, int, bool]] = [(root, None, 0, False)]
        while stack:
            v, parent, d, back = stack.pop()
            if back:
                euler.append(v)
                depths.append(d)
                continue
            self.depth[v] = d
            self.first[v] = len(euler)
            euler.append(v)
            depths.append(d)
            for w in reversed(adj.get(v, ())):
                if w != parent and w not in self.depth:
                    stack.append((v, parent, d, True))
                    stack.append((w, v, d + 1, False))
        self.euler = euler
        n = len(euler)
        table = [list(range(n))]
        k = 1
        while (1 << k) <= n:
            prev = table[-1]
            row = []
            for i in range(n - (1 << k) + 1):
                a, b = prev[i], prev[i + (1 << (k - 1))]
                row.append(a if depths[a] <= depths[b] else b)
            table.append(row)
            k += 1
        self._depths = depths
        self._table = table
        self._log = [0] * (n + 1)
        for i in range(2, n + 1):
            self._log[i] = self._log[i // 2] + 1

    def lca(self, a, b):
        i, j = self.first[a], self.first[b]
        if i > j:
            i, j = j, i
        k = self._log[j - i + 1]
        x = self._table[k][i]
        y = self._table[k][j - (1 << k) + 1]
        idx = x if self._depths[x] <= self._depths[y] else y
        return self.euler[idx]

    def dist(self, a, b) -> int:
        return self.depth[a] + self.depth[b] - 2 * self.depth[self.lca(a, b)]

    def on_path(self, x, a, b) -> bool:
        return self.dist(a, x) + self.dist(x, b) == self.dist(a, b)

    def project(self, x, a, b):
        """Vertex of the a-b path closest to x."""
        cands = (self.lca(x, a), self.lca(x, b), self.lca(a, b))
        return max(cands, key=lambda c: self.depth[c])


def path_intersection(
    tree_adj: dict[Any, list[Any]], y_pairs: Sequence[tuple[Any, Any]]
) -> tuple[tuple[Any, Any] | None, EulerTourLCA]:
    """Endpoints of the intersection of all fundamental paths, or None.

    Returns the LCA helper as well so callers can answer `is v on the
    intersection` in O(1) afterwards.
    """
    if not y_pairs:
        raise ValueError("path_intersection requires at least one path")
    root = next(iter(tree_adj))
    lca = EulerTourLCA(tree_adj, root)
    a, b = y_pairs[0]
    for c, d in y_pairs[1:]:
        u = lca.project(c, a, b)
        w = lca.project(d, a, b)
        if not (lca.on_path(u, c, d) and lca.on_path(w, c, d)):
            return None, lca
        a, b = u, w
    return (a, b), lca


# -- articulation vertices -----------------------------------------------------


def articulation_vertices(vertices: Sequence, ends: dict[int, tuple]) -> set:
    """DFS lowpoint computation on a multigraph given as edge id -> (u, w).

    Only the entering edge is skipped on retreat, so parallel edges count as
    back edges, as they must for multigraphs.
    """
    adj: dict[Any, list[tuple[Any, int]]] = {v: [] for v in vertices}
    for e, (u, w) in ends.items():
        if u == w:
            continue
        adj[u].append((w, e))
        adj[w].append((u, e))
    disc: dict[Any, int] = {}
    low: dict[Any, int] = {}
    result = set()
    time = 0
    for start in vertices:
        if start in disc:
            continue
        disc[start] = low[start] = time
        time += 1
        root_children = 0
        stack = [[start, -1, 0]]
        while stack:
            frame = stack[-1]
            v, via, i = frame
            if i < len(adj[v]):
                frame[2] += 1
                w, e = adj[v][i]
                if e == via:
                    continue
                if w not in disc:
                    disc[w] = low[w] = time
                    time += 1
                    if v == start:
                        root_children += 1
                    stack.append([w, e, 0])
                else:
                    low[v] = min(low[v], disc[w])
            else:
                stack.pop()
                if stack:
                    pv = stack[-1][0]
                    low[pv] = min(low[pv], low[v])
                    if pv != start and low[v] >= disc[pv]:
                        result.add(pv)
        if root_children > 1:
            result.add(start)
    return result


# -- the splittable-vertex search ----------------------------------------------


def find_splittable_vertices(forest: SpqrForest, node: int, y_edges: Iterable[int]) -> set:
    """All Y-splittable vertices of a skeleton.

    Series, parallel and trivial skeletons are splittable everywhere, as is
    any skeleton for empty Y.  For rigid skeletons the candidates are the star
    centers 'plus the articulation vertices of G \\ Y on the common
    fundamental path; each articulation candidate is confirmed by building its
    auxiliary graph.
    """
    view = forest.skeleton_view(node)
    return find_splittable_in_view(forest, view, y_edges)


def find_splittable_in_view(forest: SpqrForest, view: SkeletonView, y_edges: Iterable[int]) -> set:
    y = {e for e in y_edges if e in view.ends}
    if not y or view.kind in ("S", "P", "Q"):
        return set(view.vertices)
    if any(e in view.tree_edges for e in y):
        raise StructureError("Y must avoid the spanning tree")

    star = None
    for e in sorted(y):
        pair = set(view.ends[e])
        star = pair if star is None else star & pair
    star = star or set()
    if len(star) == 2:
        return star

    tree_adj: dict[Any, list[Any]] = {v: [] for v in view.vertices}
    for e in view.tree_edges:
        u, w = view.ends[e]
        tree_adj[u].append(w)
        tree_adj[w].append(u)
    span, lca = path_intersection(tree_adj, [view.ends[e] for e in sorted(y)])
    if span is None:
        if star:
            raise StructureError("star center off the common path")
        return set()
    non_y_ends = {e: uw for e, uw in view.ends.items() if e not in y}
    arts = articulation_vertices(view.vertices, non_y_ends)
    candidates = sorted(
        (a for a in arts if lca.on_path(a, span[0], span[1]) and a not in star), key=repr
    )
    found = set(star)
    for a in candidates:
        if bipartition(auxiliary_graph(view, a, y)) is not None:
            found.add(a)
    return found


def find_tree_splittable_vertices(forest: SpqrForest, node: int, y_edges: Iterable[int]) -> set:
    """Y-splittable vertices that are incident to every virtual edge.

    Cycle edges permute freely, so a series skeleton is viewed with its first
    two virtual edges adjacent; with three or more virtual edges no vertex can
    touch them all and the result is empty either way.
    """
    virtuals = forest.virtual_edges(node)
    first = virtuals[:2] if forest.skeleton(node).kind == "S" else ()
    view = forest.skeleton_view(node, first=first)
    found = find_splittable_in_view(forest, view, y_edges)
    for e in virtuals:
        found &= set(view.ends[e])
    return found


# -- mutating split primitives ---------------------------------------------------


def bipartite_split(
    forest: SpqrForest, node: int, y_edges: Iterable[int], v, anchor=None
) -> tuple[int, int]:
    """Split vertex v of an explicit skeleton per its neighborhood split.

    Side I receives each edge at v that is in Y xor leads into an I-side
    component.  The component holding `anchor` is put on side I; without an
    anchor the component holding the smallest vertex label is.  Raises when
    the auxiliary graph is not bipartite.
    """
    root = forest.nodes.find(node)
    skel = forest.skeletons[root]
    view = forest.explicit_view(root)
    y = {e for e in y_edges if e in skel.edge_ids}
    aux = auxiliary_graph(view, v, y)
    color = bipartition(aux)
    if color is None:
        raise StructureError(f"vertex {v} is not splittable in node {root}")
    if aux.components:
        if anchor is not None:
            i_color = color[aux.comp_of[forest.verts.find(anchor)]]
        else:
            lowest = min(u for u in view.vertices if u != v)
            i_color = color[aux.comp_of[lowest]]
    else:
        i_color = 0
    if not any(v in forest.ends_of(e) for e in skel.edge_ids):
        raise StructureError(f"vertex {v} has no incident edges in node {root}")
    v1, v2 = forest.new_vertex(), forest.new_vertex()
    for e in sorted(skel.edge_ids):
        a, b = forest.ends_of(e)
        if v not in (a, b):
            continue
        other = b if a == v else a
        in_y = e in y
        on_i = color[aux.comp_of[other]] == i_color
        target = v1 if (in_y != on_i) else v2
        forest.set_ends(e, (target, other) if a == v else (other, target))
    return v1, v2


def extend_series(forest: SpqrForest, node: int) -> tuple[int, int]:
    """Prepare a series or trivial skeleton for one more cycle edge.

    Implicit cycles need no structural change: the caller inserts the new
    edge, and any cycle position is equivalent.  Fresh vertex labels are
    returned for the caller to attach that edge to.
    """
    skel = forest.skeleton(node)
    if skel.kind not in ("S", "Q"):
        raise StructureError(f"extend_series on kind {skel.kind}")
    return forest.new_vertex(), forest.new_vertex()
