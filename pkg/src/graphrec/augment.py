"""Row augmentation over an SPQR forest, plus whole-matrix drivers.

A row is processed per tree: reduce, then split one skeleton or merge the
reduced tree into one rigid node, then reverse the reductions and repair at
most one same-kind adjacency.  Rejection restores the forest from a snapshot
taken on entry, so a failed row leaves no trace.
"""
from __future__ import annotations

import dataclasses
from collections import deque
from typing import Any, Iterable, Sequence

from .binmatrix import SparseBinaryMatrix, zero_cols as matrix_zero_cols
from .reduce import reduce_tree, undo_journal
from .splittable import bipartite_split, extend_series, find_tree_splittable_vertices
from .spqr import (
    GraphTreePair,
    SpqrForest,
    StructureError,
    check_minimal,
    merge_adjacent,
    realize,
)


@dataclasses.dataclass
class ProcessOutcome:
    """Result of processing one tree: the split pair is present iff accepted."""

    accepted: bool
    split_pair: tuple[int, int] | None = None
    node: int | None = None


def split_skeleton(
    forest: SpqrForest, node: int, anchor_edge: int | None = None
) -> tuple[int, tuple[int, int] | None]:
    """Split one skeleton of a Y-reduced tree at a splittable vertex.

    Returns (node holding the pair, pair) or (node, None) when no vertex
    incident to all virtual edges is splittable.  The marked set of the
    skeleton is the Y restriction.  `anchor_edge` names the virtual edge whose
    far side fixes the orientation of the bipartition, so that merging can
    identify pairs consistently.
    """
    root = forest.nodes.find(node)
    skel = forest.skeletons[root]
    y_mu = set(skel.marked)

    if skel.kind == "Q":
        if len(skel.edge_ids) != 2:
            raise StructureError("only a two-edge trivial skeleton can be split")
        skel.kind = "S"
        return root, extend_series(forest, root)

    if skel.kind == "S":
        virts = forest.virtual_edges(root)
        if not virts:
            return root, extend_series(forest, root)
        if len(virts) != 2:
            return root, None
        forest.materialize(root, first=virts)
        shared = set(forest.ends_of(virts[0])) & set(forest.ends_of(virts[1]))
        if len(shared) != 1:
            raise StructureError("adjacent cycle edges must share one vertex")
        (v,) = shared
        anchor = _far_end(forest, anchor_edge, v) if anchor_edge is not None else None
        return root, bipartite_split(forest, root, y_mu, v, anchor)

    if skel.kind == "P":
        forest.materialize(root)
        u, w = forest.ends_of(min(skel.edge_ids))
        return root, bipartite_split(forest, root, y_mu, u, anchor=w)

    # rigid skeleton
    found = find_tree_splittable_vertices(forest, root, y_mu)
    if not found:
        return root, None
    if len(found) == 1:
        (v,) = found
        anchor = _far_end(forest, anchor_edge, v) if anchor_edge is not None else None
        return root, bipartite_split(forest, root, y_mu, v, anchor)
    # two adjacent splittable vertices: move their edge into a new series node
    if forest.virtual_edges(root):
        raise StructureError("two tree-splittable vertices inside a multi-node tree")
    a1, a2 = sorted(found)
    between = [
        e for e in skel.edge_ids if set(forest.ends_of(e)) == {a1, a2}
    ]
    if len(between) != 1:
        raise StructureError("adjacent splittable vertices must share one edge")
    e = between[0]
    omega = forest.new_node("S")
    forest.move_edge(e, omega)
    f = forest.add_edge(root, None, forest.edges[e].in_tree, ends=(a1, a2))
    g = forest.add_edge(omega, None, not forest.edges[f].in_tree)
    forest.pair_virtual(f, g)
    forest.set_ends(e, None)
    forest.trees.union(omega, root)
    return omega, extend_series(forest, omega)


def _far_end(forest: SpqrForest, edge: int, near: int) -> int:
    u, w = forest.ends_of(edge)
    near = forest.verts.find(near)
    if near not in (u, w):
        raise StructureError("anchor edge not incident to the split vertex")
    return w if u == near else u


def merge_tree(
    forest: SpqrForest, live: Iterable[int]
) -> tuple[int, tuple[int, int]] | None:
    """Merge a Y-reduced tree with >= 2 nodes into a single rigid node.

    Nodes are split in a connected order (BFS from the lowest-labeled leaf);
    each virtual pair is removed while identifying the pair-incident split
    vertices with each other and the remaining split vertices with each other.
    Returns None as soon as any skeleton has no suitable splittable vertex.
    """
    nodes = sorted(forest.nodes.find(n) for n in live)
    if len(nodes) < 2:
        raise StructureError("merge_tree requires at least two nodes")
    start = min(n for n in nodes if len(forest.virtual_edges(n)) == 1)
    order = [start]
    seen = {start}
    queue = deque([start])
    while queue:
        cur = queue.popleft()
        for e in forest.virtual_edges(cur):
            nxt = forest.neighbor_via(e)
            if nxt in seen:
                continue
            seen.add(nxt)
            order.append(nxt)
            queue.append(nxt)

    acc, pair = split_skeleton(forest, start)
    if pair is None:
        return None
    for mu in order[1:]:
        e_i = None
        for e in forest.virtual_edges(mu):
            if forest.neighbor_via(e) == acc:
                e_i = e
                break
        if e_i is None:
            raise StructureError("merge order lost connectivity")
        f_i = forest.edges[e_i].partner
        _, mu_pair = split_skeleton(forest, mu, anchor_edge=e_i)
        if mu_pair is None:
            return None

        pair = (forest.verts.find(pair[0]), forest.verts.find(pair[1]))
        mu_pair = (forest.verts.find(mu_pair[0]), forest.verts.find(mu_pair[1]))
        fa, fb = forest.ends_of(f_i)
        if fa not in pair:
            fa, fb = fb, fa
        ea, eb = forest.ends_of(e_i)
        if ea not in mu_pair:
            ea, eb = eb, ea
        if fa not in pair or ea not in mu_pair:
            raise StructureError("virtual pair misses the split vertices")
        far = pair[0] if pair[1] == fa else pair[1]
        mu_far = mu_pair[0] if mu_pair[1] == ea else mu_pair[1]

        forest.delete_edge(e_i)
        forest.delete_edge(f_i)
        r_near = forest.verts.union(fa, ea)
        forest.verts.union(fb, eb)
        r_far = forest.verts.union(far, mu_far)

        winner = forest.nodes.union(acc, mu)
        loser = acc if winner == mu else mu
        merged = forest.skeletons[winner]
        other = forest.skeletons[loser]
        merged.edge_ids |= other.edge_ids
        merged.marked |= other.marked
        forest.counter.list_ops += len(other.edge_ids) + 1
        del forest.skeletons[loser]
        acc = winner
        pair = (r_near, r_far)
    forest.skeletons[acc].kind = "R"
    return acc, (forest.verts.find(pair[0]), forest.verts.find(pair[1]))


def _repair_minimality(forest: SpqrForest, node: int) -> int:
    """Merge same-kind S-S / P-P adjacencies exposed by reversing reductions."""
    node = forest.nodes.find(node)
    while True:
        offending = None
        for n in forest.tree_nodes(node):
            kind = forest.skeletons[n].kind
            if kind not in ("S", "P"):
                continue
            for e in forest.virtual_edges(n):
                m = forest.neighbor_via(e)
                if forest.skeletons[m].kind == kind:
                    offending = (n, m)
                    break
            if offending:
                break
        if not offending:
            return forest.nodes.find(node)
        merge_adjacent(forest, *offending)
        node = forest.nodes.find(node)


def process_tree(forest: SpqrForest, tree_node: int, y_edges: Iterable[int]) -> ProcessOutcome:
    """Reduce, split or merge, then reverse the reductions (Y-processed tree).

    On rejection the forest is restored bit-exactly from a snapshot.  The
    returned pair is where the caller inserts the new row edge (or a virtual
    edge leading to it).
    """
    snap = forest.snapshot()
    state, journal = reduce_tree(forest, tree_node, y_edges)
    if len(state.nodes) == 1:
        (mu,) = state.nodes
        place, pair = split_skeleton(forest, mu)
    else:
        result = merge_tree(forest, state.nodes)
        place, pair = result if result is not None else (None, None)
    if pair is None:
        forest.restore(snap)
        return ProcessOutcome(False)
    undo_journal(forest, journal)
    place = _repair_minimality(forest, place)
    for n in forest.tree_nodes(place):
        forest.skeletons[n].marked.clear()
    return ProcessOutcome(True, (forest.verts.find(pair[0]), forest.verts.find(pair[1])), place)


def _place_edge(
    forest: SpqrForest,
    node: int,
    origin: tuple[str, int] | None,
    in_tree: bool,
    pair: tuple[int, int],
) -> int:
    """Insert an edge between the split pair; implicit cycles just append."""
    explicit = forest.skeletons[forest.nodes.find(node)].kind == "R"
    return forest.add_edge(node, origin, in_tree, ends=pair if explicit else None)


def add_row(
    forest: SpqrForest,
    row: int,
    support: Sequence[int],
    fresh: Iterable[int],
) -> ProcessOutcome:
    """Add one matrix row to the forest; support lists column indices.

    Columns in `fresh` get brand-new edges; the rest must already be column
    edges of the forest.  On rejection the forest is left untouched.
    """
    fresh = set(fresh)
    if not support:
        raise ValueError("all-zero rows bypass the forest")
    y_eids = []
    for j in support:
        if j in fresh:
            continue
        eid = forest.edge_of_origin.get(("c", j))
        if eid is None:
            raise ValueError(f"column {j} is neither known nor declared fresh")
        y_eids.append(eid)

    snap = forest.snapshot()
    by_tree: dict[int, list[int]] = {}
    for eid in y_eids:
        root = forest.trees.find(forest.node_of_edge(eid))
        by_tree.setdefault(root, []).append(eid)

    row_origin = ("r", row)
    if len(by_tree) == 1:
        (eids,) = by_tree.values()
        outcome = process_tree(forest, forest.node_of_edge(eids[0]), eids)
        if not outcome.accepted:
            return outcome
        if not fresh:
            _place_edge(forest, outcome.node, row_origin, True, outcome.split_pair)
            return outcome
        pnode = forest.new_node("P")
        forest.add_edge(pnode, row_origin, True)
        for j in sorted(fresh):
            forest.add_edge(pnode, ("c", j), False)
        f = _place_edge(forest, outcome.node, None, True, outcome.split_pair)
        g = forest.add_edge(pnode, None, False)
        forest.pair_virtual(f, g)
        forest.trees.union(pnode, outcome.node)
        return ProcessOutcome(True, outcome.split_pair, pnode)

    if len(by_tree) > 1:
        pnode = forest.new_node("P")
        forest.add_edge(pnode, row_origin, True)
        for j in sorted(fresh):
            forest.add_edge(pnode, ("c", j), False)
        last_pair = None
        for root in sorted(by_tree):
            eids = by_tree[root]
            outcome = process_tree(forest, forest.node_of_edge(eids[0]), eids)
            if not outcome.accepted:
                forest.restore(snap)
                return ProcessOutcome(False)
            f = _place_edge(forest, outcome.node, None, True, outcome.split_pair)
            g = forest.add_edge(pnode, None, False)
            forest.pair_virtual(f, g)
            forest.trees.union(pnode, outcome.node)
            last_pair = outcome.split_pair
        return ProcessOutcome(True, last_pair, pnode)

    # no marked trees: the row starts a tree of its own
    kind = "Q" if len(fresh) == 1 else "P"
    node = forest.new_node(kind)
    forest.add_edge(node, row_origin, True)
    for j in sorted(fresh):
        forest.add_edge(node, ("c", j), False)
    return ProcessOutcome(True, None, node)


# -- whole-matrix drivers -------------------------------------------------------


@dataclasses.dataclass
class RowTrace:
    index: int
    accepted: bool
    ops: int


@dataclasses.dataclass
class CheckResult:
    graphic: bool
    certificate: GraphTreePair | None
    trace: list[RowTrace]
    forest: SpqrForest


@dataclasses.dataclass
class MaximalResult:
    kept: tuple[int, ...]
    certificate: GraphTreePair
    trace: list[RowTrace]
    forest: SpqrForest


class RowwiseBuilder:
    """Feeds matrix rows to the forest in order, tracking zero rows and ops."""

    def __init__(self):
        self.forest = SpqrForest()
        self.zero_rows: list[int] = []
        self.accepted: list[int] = []
        self.trace: list[RowTrace] = []

    def feed(self, index: int, support: Sequence[int]) -> bool:
        before = self.forest.counter.total
        if not support:
            self.zero_rows.append(index)
            ok = True
        else:
            fresh = [j for j in support if ("c", j) not in self.forest.edge_of_origin]
            ok = add_row(self.forest, index, support, fresh).accepted
        self.trace.append(RowTrace(index, ok, self.forest.counter.total - before))
        if ok:
            self.accepted.append(index)
        return ok


def assemble_certificate(
    forest: SpqrForest, zero_rows: Sequence[int], zero_columns: Sequence[int]
) -> GraphTreePair:
    """One realization covering every tree, plus pendant zero rows and loop columns.

    Components are glued at a single shared vertex, which changes no
    fundamental path.
    """
    join: Any = ("join",)
    vertices: set = {join}
    edges: list[tuple[Any, Any, tuple[str, int]]] = []
    flags: list[bool] = []
    for k, root in enumerate(forest.tree_roots()):
        members = forest.nodes_of_tree(root)
        part = realize(forest, members[0])
        hub = part.vertices[0]

        def local(v, k=k, hub=hub):
            return join if v == hub else ("t", k, v)

        for (u, w, origin), flag in zip(part.edges, part.tree_flags):
            vertices.update((local(u), local(w)))
            edges.append((local(u), local(w), origin))
            flags.append(flag)
    for i in zero_rows:
        leaf = ("z", i)
        vertices.add(leaf)
        edges.append((join, leaf, ("r", i)))
        flags.append(True)
    for j in zero_columns:
        edges.append((join, join, ("c", j)))
        flags.append(False)
    order = sorted(range(len(edges)), key=lambda i: edges[i][2])
    return GraphTreePair(
        tuple(sorted(vertices, key=repr)),
        tuple(edges[i] for i in order),
        tuple(flags[i] for i in order),
    )


def is_graphic(m: SparseBinaryMatrix) -> CheckResult:
    """Row-wise graphicness check; certificate only when graphic."""
    builder = RowwiseBuilder()
    for i, support in enumerate(m.rows):
        if not builder.feed(i, support):
            return CheckResult(False, None, builder.trace, builder.forest)
    cert = assemble_certificate(builder.forest, builder.zero_rows, matrix_zero_cols(m))
    return CheckResult(True, cert, builder.trace, builder.forest)


def maximal_graphic_rows(m: SparseBinaryMatrix) -> MaximalResult:
    """Greedy inclusion-wise maximal graphic row subset, scanning in order."""
    builder = RowwiseBuilder()
    for i, support in enumerate(m.rows):
        builder.feed(i, support)
    kept = tuple(builder.accepted)
    sub = m.submatrix_rows(kept)
    zero_in_sub = matrix_zero_cols(sub)
    cert = assemble_certificate(builder.forest, builder.zero_rows, zero_in_sub)
    # certificate row origins refer to positions in the kept submatrix
    remap = {orig: pos for pos, orig in enumerate(kept)}
    edges = []
    for u, w, origin in cert.edges:
        if origin[0] == "r":
            origin = ("r", remap[origin[1]])
        edges.append((u, w, origin))
    order = sorted(range(len(edges)), key=lambda i: edges[i][2])
    cert = GraphTreePair(
        cert.vertices,
        tuple(edges[i] for i in order),
        tuple(cert.tree_flags[i] for i in order),
    )
    return MaximalResult(kept, cert, builder.trace, builder.forest)
