"""SPQR forests over skeleton multigraphs.

The forest keeps three disjoint-set structures (SPQR node labels, skeleton
vertex labels, and tree membership over nodes) plus one record per edge.
Edges store their creation-time home node and endpoints; the current values
are always resolved through find().  Skeletons of kind S, P and Q are stored
implicitly (edge set only): a cycle's edges may be permuted arbitrarily and a
bond's two vertices carry no information, so endpoints are materialized only
when a split needs them.  R skeletons are always explicit.

The forest is single-writer.  realize() and validate() read a frozen forest
and never mutate it.
"""
from __future__ import annotations

import copy
import dataclasses
import json
from collections import deque
from typing import Any, Iterable, Sequence

from .binmatrix import SparseBinaryMatrix


class StructureError(RuntimeError):
    """An SPQR structural invariant does not hold."""


@dataclasses.dataclass
class OpCounter:
    """Tally of disjoint-set and edge-list operations, for complexity tests."""

    finds: int = 0
    unions: int = 0
    list_ops: int = 0

    @property
    def total(self) -> int:
        return self.finds + self.unions + self.list_ops


class DisjointSets:
    """Union-find with path halving and union by size over int labels."""

    def __init__(self, counter: OpCounter):
        self.parent: dict[int, int] = {}
        self.size: dict[int, int] = {}
        self.counter = counter

    def make(self, x: int) -> int:
        self.parent[x] = x
        self.size[x] = 1
        return x

    def find(self, x: int) -> int:
        self.counter.finds += 1
        p = self.parent
        while p[x] != x:
            p[x] = p[p[x]]
            x = p[x]
        return x

    def union(self, a: int, b: int) -> int:
        """Union the groups of a and b; returns the surviving root."""
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return ra
        self.counter.unions += 1
        if self.size[ra] < self.size[rb]:
            ra, rb = rb, ra
        self.parent[rb] = ra
        self.size[ra] += self.size[rb]
        return ra

    def same(self, a: int, b: int) -> bool:
        return self.find(a) == self.find(b)


@dataclasses.dataclass
class EdgeRecord:
    """One skeleton edge.

    origin is ('r', i) / ('c', j) for matrix edges and None for virtual or
    synthetic edges; partner is the other half of a virtual pair.  home and
    ends hold creation-time labels and must be resolved through find().
    """

    id: int
    origin: tuple[str, int] | None
    home: int
    ends: tuple[int, int] | None
    in_tree: bool
    partner: int | None = None


@dataclasses.dataclass
class Skeleton:
    """One SPQR node: kind in {S, P, Q, R} plus its edge set.

    marked holds the Y-edges of the row currently being processed; it is
    transient and empty between add_row calls.
    """

    kind: str
    edge_ids: set[int] = dataclasses.field(default_factory=set)
    marked: set[int] = dataclasses.field(default_factory=set)


IMPLICIT_KINDS = ("S", "P", "Q")


@dataclasses.dataclass(frozen=True)
class GraphTreePair:
    """An explicit realization certificate: graph plus spanning tree flags."""

    vertices: tuple
    edges: tuple[tuple[Any, Any, tuple[str, int]], ...]
    tree_flags: tuple[bool, ...]


@dataclasses.dataclass
class SkeletonView:
    """Read-only explicit picture of one skeleton (implicit kinds laid out)."""

    node: int
    kind: str
    vertices: list
    ends: dict[int, tuple]
    tree_edges: set[int]


class SpqrForest:
    def __init__(self):
        self.counter = OpCounter()
        self.nodes = DisjointSets(self.counter)
        self.verts = DisjointSets(self.counter)
        self.trees = DisjointSets(self.counter)
        self.skeletons: dict[int, Skeleton] = {}
        self.edges: dict[int, EdgeRecord] = {}
        self.edge_of_origin: dict[tuple[str, int], int] = {}
        self._next_node = 0
        self._next_vertex = 0
        self._next_edge = 0

    # -- construction ------------------------------------------------------

    def new_node(self, kind: str) -> int:
        label = self._next_node
        self._next_node += 1
        self.nodes.make(label)
        self.trees.make(label)
        self.skeletons[label] = Skeleton(kind)
        return label

    def new_vertex(self) -> int:
        label = self._next_vertex
        self._next_vertex += 1
        self.verts.make(label)
        return label

    def add_edge(
        self,
        node: int,
        origin: tuple[str, int] | None,
        in_tree: bool,
        ends: tuple[int, int] | None = None,
    ) -> int:
        eid = self._next_edge
        self._next_edge += 1
        root = self.nodes.find(node)
        self.edges[eid] = EdgeRecord(eid, origin, root, ends, in_tree)
        self.skeletons[root].edge_ids.add(eid)
        self.counter.list_ops += 1
        if origin is not None:
            self.edge_of_origin[origin] = eid
        return eid

    def pair_virtual(self, e: int, f: int) -> None:
        """Link two edges as a virtual pair; exactly one must be a tree edge."""
        if self.edges[e].in_tree == self.edges[f].in_tree:
            raise StructureError("virtual pair must have exactly one tree edge")
        self.edges[e].partner = f
        self.edges[f].partner = e

    def delete_edge(self, eid: int) -> None:
        rec = self.edges.pop(eid)
        self.skeletons[self.nodes.find(rec.home)].edge_ids.discard(eid)
        self.counter.list_ops += 1
        if rec.origin is not None:
            self.edge_of_origin.pop(rec.origin, None)

    def move_edge(self, eid: int, node: int) -> None:
        rec = self.edges[eid]
        self.skeletons[self.nodes.find(rec.home)].edge_ids.discard(eid)
        rec.home = self.nodes.find(node)
        self.skeletons[rec.home].edge_ids.add(eid)
        self.counter.list_ops += 2

    def set_ends(self, eid: int, ends: tuple[int, int] | None) -> None:
        self.edges[eid].ends = ends
        self.counter.list_ops += 1

    # -- queries -----------------------------------------------------------

    def skeleton(self, node: int) -> Skeleton:
        return self.skeletons[self.nodes.find(node)]

    def node_of_edge(self, eid: int) -> int:
        return self.nodes.find(self.edges[eid].home)

    def ends_of(self, eid: int) -> tuple[int, int] | None:
        ends = self.edges[eid].ends
        if ends is None:
            return None
        return (self.verts.find(ends[0]), self.verts.find(ends[1]))

    def virtual_edges(self, node: int) -> list[int]:
        return sorted(e for e in self.skeleton(node).edge_ids if self.edges[e].partner is not None)

    def regular_edges(self, node: int) -> list[int]:
        return sorted(e for e in self.skeleton(node).edge_ids if self.edges[e].partner is None)

    def neighbor_via(self, eid: int) -> int:
        partner = self.edges[eid].partner
        if partner is None:
            raise StructureError("edge has no partner")
        return self.node_of_edge(partner)

    def tree_nodes(self, node: int) -> list[int]:
        """All node roots of the SPQR tree containing `node` (BFS over pairs)."""
        start = self.nodes.find(node)
        seen = {start}
        queue = deque([start])
        while queue:
            cur = queue.popleft()
            for e in self.virtual_edges(cur):
                nxt = self.neighbor_via(e)
                if nxt not in seen:
                    seen.add(nxt)
                    queue.append(nxt)
        return sorted(seen)

    def tree_roots(self) -> list[int]:
        roots = {self.trees.find(n) for n in self.skeletons}
        return sorted(roots)

    def nodes_of_tree(self, tree_root: int) -> list[int]:
        root = self.trees.find(tree_root)
        return sorted(n for n in self.skeletons if self.trees.find(n) == root)

    # -- explicit views ----------------------------------------------------

    def skeleton_view(self, node: int, first: Sequence[int] = ()) -> SkeletonView:
        """Explicit endpoints for one skeleton, materializing implicit kinds.

        S cycles are laid out in sorted edge order with the edges in `first`
        placed consecutively (any permutation represents the same matrix);
        the view never mutates the forest.
        """
        root = self.nodes.find(node)
        skel = self.skeletons[root]
        tree_edges = {e for e in skel.edge_ids if self.edges[e].in_tree}
        if skel.kind == "R":
            ends = {}
            verts = set()
            for e in skel.edge_ids:
                uv = self.ends_of(e)
                if uv is None:
                    raise StructureError(f"R skeleton {root} has edge {e} without endpoints")
                ends[e] = uv
                verts.update(uv)
            return SkeletonView(root, skel.kind, sorted(verts), ends, tree_edges)
        order = list(first) + [e for e in sorted(skel.edge_ids) if e not in first]
        if skel.kind in ("P", "Q"):
            u, w = ("v", root, 0), ("v", root, 1)
            return SkeletonView(root, skel.kind, [u, w], {e: (u, w) for e in order}, tree_edges)
        k = len(order)
        verts = [("v", root, i) for i in range(k)]
        ends = {e: (verts[i - 1], verts[i]) for i, e in enumerate(order)}
        return SkeletonView(root, skel.kind, verts, ends, tree_edges)

    def explicit_view(self, node: int) -> SkeletonView:
        """View built from stored endpoints; every edge must be materialized."""
        root = self.nodes.find(node)
        skel = self.skeletons[root]
        ends = {}
        verts = set()
        for e in skel.edge_ids:
            uv = self.ends_of(e)
            if uv is None:
                raise StructureError(f"edge {e} of node {root} has no endpoints")
            ends[e] = uv
            verts.update(uv)
        tree_edges = {e for e in skel.edge_ids if self.edges[e].in_tree}
        return SkeletonView(root, skel.kind, sorted(verts), ends, tree_edges)

    def materialize(self, node: int, first: Sequence[int] = ()) -> None:
        """Assign persistent endpoint labels to an implicit skeleton.

        For S kinds the cycle is laid out with the edges in `first` placed
        consecutively (legal for any pair: cycle edges permute freely).
        """
        root = self.nodes.find(node)
        skel = self.skeletons[root]
        if skel.kind == "R":
            return
        order = list(first) + [e for e in sorted(skel.edge_ids) if e not in first]
        if skel.kind in ("P", "Q"):
            u, w = self.new_vertex(), self.new_vertex()
            for e in order:
                self.set_ends(e, (u, w))
            return
        verts = [self.new_vertex() for _ in order]
        for i, e in enumerate(order):
            self.set_ends(e, (verts[i - 1], verts[i]))

    # -- snapshot / restore --------------------------------------------------

    def snapshot(self):
        state = (
            dict(self.nodes.parent),
            dict(self.nodes.size),
            dict(self.verts.parent),
            dict(self.verts.size),
            dict(self.trees.parent),
            dict(self.trees.size),
            self.skeletons,
            self.edges,
            dict(self.edge_of_origin),
            (self._next_node, self._next_vertex, self._next_edge),
        )
        return copy.deepcopy(state)

    def restore(self, state) -> None:
        state = copy.deepcopy(state)
        (
            self.nodes.parent,
            self.nodes.size,
            self.verts.parent,
            self.verts.size,
            self.trees.parent,
            self.trees.size,
            self.skeletons,
            self.edges,
            self.edge_of_origin,
            (self._next_node, self._next_vertex, self._next_edge),
        ) = state

    # -- statistics ----------------------------------------------------------

    def stats(self) -> dict:
        by_kind: dict[str, int] = {}
        total_edges = 0
        for skel in self.skeletons.values():
            by_kind[skel.kind] = by_kind.get(skel.kind, 0) + 1
            total_edges += len(skel.edge_ids)
        return {
            "trees": len(self.tree_roots()),
            "nodes": len(self.skeletons),
            "nodes_by_kind": dict(sorted(by_kind.items())),
            "skeleton_edge_total": total_edges,
        }

    # -- serialization -------------------------------------------------------

    def to_json(self) -> str:
        nodes = []
        for root in sorted(self.skeletons):
            skel = self.skeletons[root]
            edges = []
            for e in sorted(skel.edge_ids):
                rec = self.edges[e]
                entry: dict[str, Any] = {
                    "id": e,
                    "origin": list(rec.origin) if rec.origin else None,
                    "in_tree": rec.in_tree,
                }
                if rec.partner is not None:
                    entry["partner"] = rec.partner
                uv = self.ends_of(e)
                if uv is not None:
                    entry["ends"] = list(uv)
                edges.append(entry)
            nodes.append({"id": root, "kind": skel.kind, "edges": edges})
        return json.dumps({"nodes": nodes}, indent=2, sort_keys=True)

    def to_dot(self) -> str:
        lines = ["graph spqr {", "  compound=true;"]
        name = {}
        for root in sorted(self.skeletons):
            view = self.skeleton_view(root)
            lines.append(f"  subgraph cluster_{root} {{")
            lines.append(f'    label="{root} ({view.kind})";')
            for v in view.vertices:
                name[v] = f"n{root}_{len(name)}"
                lines.append(f'    {name[v]} [label="", shape=point];')
            for e in sorted(view.ends):
                rec = self.edges[e]
                u, w = view.ends[e]
                style = []
                if rec.in_tree:
                    style.append("style=bold")
                if rec.partner is not None:
                    style.append("style=dashed")
                label = rec.origin[0] + str(rec.origin[1]) if rec.origin else f"e{e}"
                lines.append(
                    f'    {name[u]} -- {name[w]} [label="{label}"{"," if style else ""}{",".join(style)}];'
                )
            lines.append("  }")
        drawn = set()
        for e, rec in sorted(self.edges.items()):
            if rec.partner is not None and e not in drawn:
                drawn.add(rec.partner)
                a = self.node_of_edge(e)
                b = self.node_of_edge(rec.partner)
                va = self.skeleton_view(a).vertices[0]
                vb = self.skeleton_view(b).vertices[0]
                lines.append(
                    f'  {name[va]} -- {name[vb]} [style=dotted, label="pair {e}/{rec.partner}", '
                    f"ltail=cluster_{a}, lhead=cluster_{b}];"
                )
        lines.append("}")
        return "\n".join(lines) + "\n"


# -- realization -------------------------------------------------------------


def realize(forest: SpqrForest, tree_node: int) -> GraphTreePair:
    """One represented (G, T) of the SPQR tree containing `tree_node`.

    Skeleton views are merged along every virtual pair, identifying endpoints
    first-with-first in stored order; the pair edges are deleted.  All
    endpoint-identification choices give 2-isomorphic graphs with the same
    representation matrix, so the fixed choice is safe.
    """
    members = forest.tree_nodes(tree_node)
    views = {n: forest.skeleton_view(n) for n in members}
    parent: dict[Any, Any] = {}

    def find(x):
        while parent.get(x, x) != x:
            parent[x] = parent.get(parent[x], parent[x])
            x = parent[x]
        return x

    def union(a, b):
        ra, rb = find(a), find(b)
        if ra != rb:
            parent[ra] = rb

    pair_edges = set()
    for n in members:
        for e in views[n].ends:
            rec = forest.edges[e]
            if rec.partner is not None and e not in pair_edges:
                f = rec.partner
                nf = forest.node_of_edge(f)
                if nf not in views:
                    raise StructureError(f"partner of edge {e} outside the tree")
                ue, we = views[n].ends[e]
                uf, wf = views[nf].ends[f]
                union(ue, uf)
                union(we, wf)
                pair_edges.update((e, f))

    out_edges = []
    flags = []
    vertices = set()
    for n in members:
        view = views[n]
        for e in sorted(view.ends):
            if e in pair_edges:
                continue
            rec = forest.edges[e]
            if rec.origin is None:
                raise StructureError(f"edge {e} has no matrix origin")
            u, w = find(view.ends[e][0]), find(view.ends[e][1])
            out_edges.append((u, w, rec.origin))
            flags.append(rec.in_tree)
            vertices.update((u, w))
    order = sorted(range(len(out_edges)), key=lambda i: out_edges[i][2])
    return GraphTreePair(
        tuple(sorted(vertices, key=repr)),
        tuple(out_edges[i] for i in order),
        tuple(flags[i] for i in order),
    )


def representation_matrix(
    g: GraphTreePair,
    row_labels: Sequence[str] | None = None,
    col_labels: Sequence[str] | None = None,
) -> SparseBinaryMatrix:
    """M[e, f] = 1 iff tree edge e lies on the fundamental path of f.

    Rows are ordered by tree-edge origin, columns by non-tree-edge origin.
    """
    tree = [(u, w, o) for (u, w, o), t in zip(g.edges, g.tree_flags) if t]
    cotree = [(u, w, o) for (u, w, o), t in zip(g.edges, g.tree_flags) if not t]
    tree.sort(key=lambda e: e[2])
    cotree.sort(key=lambda e: e[2])

    adj: dict[Any, list[tuple[Any, int]]] = {}
    for idx, (u, w, _) in enumerate(tree):
        adj.setdefault(u, []).append((w, idx))
        adj.setdefault(w, []).append((u, idx))

    # parent pointers per tree component, for fundamental-path walks
    parent_edge: dict[Any, tuple[Any, int] | None] = {}
    depth: dict[Any, int] = {}
    for root in adj:
        if root in depth:
            continue
        depth[root] = 0
        parent_edge[root] = None
        queue = deque([root])
        while queue:
            v = queue.popleft()
            for w, idx in adj[v]:
                if w not in depth:
                    depth[w] = depth[v] + 1
                    parent_edge[w] = (v, idx)
                    queue.append(w)

    rows: list[set[int]] = [set() for _ in tree]
    for jdx, (u, w, _) in enumerate(cotree):
        if u == w:
            continue  # loop column: empty fundamental path
        a, b = u, w
        while a != b:
            if depth.get(a, 0) < depth.get(b, 0):
                a, b = b, a
            pv, idx = parent_edge[a]
            rows[idx].add(jdx)
            a = pv
    return SparseBinaryMatrix.from_rows(
        [sorted(r) for r in rows],
        len(cotree),
        row_labels or tuple(f"{o[0]}{o[1] + 1}" for _, _, o in tree),
        col_labels or tuple(f"{o[0]}{o[1] + 1}" for _, _, o in cotree),
    )


# -- validation ---------------------------------------------------------------


def _is_connected(vertices: set, adj: dict) -> bool:
    if not vertices:
        return True
    seen = set()
    queue = deque([next(iter(vertices))])
    while queue:
        v = queue.popleft()
        if v in seen:
            continue
        seen.add(v)
        queue.extend(w for w in adj.get(v, ()) if w not in seen)
    return seen == vertices


def _explicit_adj(view: SkeletonView, skip_vertices: Iterable = ()) -> tuple[set, dict]:
    skip = set(skip_vertices)
    vertices = {v for v in view.vertices if v not in skip}
    adj: dict[Any, list] = {v: [] for v in vertices}
    for u, w in view.ends.values():
        if u in skip or w in skip:
            continue
        adj[u].append(w)
        adj[w].append(u)
    return vertices, adj


def _is_triconnected_simple(view: SkeletonView) -> str | None:
    pairs = set()
    for e, (u, w) in view.ends.items():
        if u == w:
            return "loop edge"
        key = (u, w) if repr(u) <= repr(w) else (w, u)
        if key in pairs:
            return "parallel edges"
        pairs.add(key)
    nv = len(view.vertices)
    if nv < 4:
        return "fewer than 4 vertices"
    verts, adj = _explicit_adj(view)
    if any(len(adj[v]) < 3 for v in verts):
        return "vertex of degree < 3"
    for v in view.vertices:
        vs, a = _explicit_adj(view, [v])
        if not _is_connected(vs, a):
            return f"articulation vertex"
    for i, v in enumerate(view.vertices):
        for w in view.vertices[i + 1 :]:
            vs, a = _explicit_adj(view, [v, w])
            if not _is_connected(vs, a):
                return "2-vertex cut"
    return None


def validate(forest: SpqrForest) -> str | None:
    """Check every structural invariant; returns None or the first violation."""
    for e, rec in forest.edges.items():
        if rec.partner is not None:
            partner = forest.edges.get(rec.partner)
            if partner is None or partner.partner != e:
                return f"edge {e}: partner map is not an involution"
            if rec.partner == e:
                return f"edge {e}: edge paired with itself"
            if rec.in_tree == partner.in_tree:
                return f"edge {e}: virtual pair without exactly one tree edge"
            if rec.origin is not None:
                return f"edge {e}: virtual edge with a matrix origin"
        elif rec.origin is None:
            return f"edge {e}: regular edge without a matrix origin"
        root = forest.nodes.find(rec.home)
        if e not in forest.skeletons.get(root, Skeleton("?")).edge_ids:
            return f"edge {e}: not registered in its home skeleton"

    for root in sorted(forest.skeletons):
        if forest.nodes.find(root) != root:
            return f"node {root}: stale skeleton entry"
        skel = forest.skeletons[root]
        n_edges = len(skel.edge_ids)
        n_tree = sum(1 for e in skel.edge_ids if forest.edges[e].in_tree)
        if skel.kind == "S":
            if n_edges < 3:
                return f"node {root}: S cycle length < 3"
            if n_tree != n_edges - 1:
                return f"node {root}: S skeleton needs exactly one non-tree edge"
        elif skel.kind == "P":
            if n_edges < 3:
                return f"node {root}: P skeleton with fewer than 3 edges"
            if n_tree != 1:
                return f"node {root}: P skeleton needs exactly one tree edge"
        elif skel.kind == "Q":
            if not (1 <= n_edges <= 2):
                return f"node {root}: Q skeleton must have 1 or 2 edges"
            if n_tree != 1:
                return f"node {root}: Q skeleton needs exactly one tree edge"
            if len(forest.tree_nodes(root)) != 1:
                return f"node {root}: Q skeleton must be alone in its tree"
            if any(forest.edges[e].partner is not None for e in skel.edge_ids):
                return f"node {root}: Q skeleton cannot carry virtual edges"
        elif skel.kind == "R":
            if n_edges < 4:
                return f"node {root}: R skeleton with fewer than 4 edges"
            view = forest.skeleton_view(root)
            problem = _is_triconnected_simple(view)
            if problem:
                return f"node {root}: R skeleton not simple 3-connected ({problem})"
            tree_adj: dict[Any, list] = {v: [] for v in view.vertices}
            for e in view.tree_edges:
                u, w = view.ends[e]
                tree_adj[u].append(w)
                tree_adj[w].append(u)
            if n_tree != len(view.vertices) - 1 or not _is_connected(set(view.vertices), tree_adj):
                return f"node {root}: tree edges are not a spanning tree"
        else:
            return f"node {root}: unknown kind {skel.kind!r}"

    # each SPQR tree must be a tree: nodes = pair-edges + 1 per component
    for root in forest.tree_roots():
        members = forest.nodes_of_tree(root)
        if not members:
            continue
        reachable = forest.tree_nodes(members[0])
        if set(reachable) != set(members):
            return f"tree {root}: virtual pairs do not connect all members"
        n_pairs = sum(len(forest.virtual_edges(n)) for n in members) // 2
        if n_pairs != len(members) - 1:
            return f"tree {root}: virtual pairs form a cycle"
    return None


def assert_valid(forest: SpqrForest) -> None:
    problem = validate(forest)
    if problem:
        raise StructureError(problem)


def check_minimal(forest: SpqrForest) -> bool:
    """No two adjacent S nodes and no two adjacent P nodes."""
    for e, rec in forest.edges.items():
        if rec.partner is None or rec.partner < e:
            continue
        a = forest.skeleton(forest.node_of_edge(e)).kind
        b = forest.skeleton(forest.node_of_edge(rec.partner)).kind
        if a == b and a in ("S", "P"):
            return False
    return True


def merge_adjacent(forest: SpqrForest, mu: int, nu: int) -> int:
    """Contract the SPQR tree edge between mu and nu into one node.

    For same-kind implicit skeletons (the S-S / P-P minimality repair) the
    edge sets are united and the pair removed; cycles splice at the pair and
    bonds share their two vertices, so no endpoint work is needed.
    """
    mu, nu = forest.nodes.find(mu), forest.nodes.find(nu)
    pair = None
    for e in forest.virtual_edges(mu):
        if forest.neighbor_via(e) == nu:
            pair = (e, forest.edges[e].partner)
            break
    if pair is None:
        raise StructureError(f"nodes {mu} and {nu} are not adjacent")
    a, b = forest.skeletons[mu], forest.skeletons[nu]
    if not (a.kind == b.kind and a.kind in ("S", "P")):
        raise StructureError("merge_adjacent only merges same-kind S or P nodes")
    e, f = pair
    forest.delete_edge(e)
    forest.delete_edge(f)
    winner = forest.nodes.union(mu, nu)
    loser = nu if winner == mu else mu
    merged = forest.skeletons[winner]
    merged.edge_ids |= forest.skeletons[loser].edge_ids
    merged.marked |= forest.skeletons[loser].marked
    forest.counter.list_ops += len(forest.skeletons[loser].edge_ids) + 1
    del forest.skeletons[loser]
    return winner
