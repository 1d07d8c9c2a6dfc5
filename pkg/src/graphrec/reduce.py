"""Shrinking an SPQR tree to its Y-reduced core, with an exactly reversible journal.

Three passes: strip leaves carrying no marked edge (the Steiner subtree of the
marked nodes survives), strip leaves whose marked edges are exactly the
non-tree edges crossing their virtual tree edge (re-marking the partner), then
collapse local 2-separations inside surviving series and parallel skeletons.
Every step appends one journal entry; replaying the journal in reverse on the
processed tree restores a valid SPQR tree over the original edge set.
"""
from __future__ import annotations

import dataclasses
from collections import deque
from typing import Iterable

from .splittable import is_splittable
from .spqr import SpqrForest, StructureError


@dataclasses.dataclass
class LeafDrop:
    node: int
    leaf_edge: int  # virtual edge inside the dropped leaf
    exposed: int  # its partner, made regular in the surviving neighbor
    kind: str  # 'empty' or 'full'


@dataclasses.dataclass
class SeriesLocal:
    node: int
    replaced: tuple[int, ...]
    new_edge: int
    y_flag: bool
    tree_flag: bool


@dataclasses.dataclass
class ParallelLocal:
    node: int
    replaced: tuple[int, ...]
    new_edge: int
    y_flag: bool
    tree_flag: bool


@dataclasses.dataclass
class KindChange:
    node: int
    old_kind: str
    new_kind: str


JournalEntry = LeafDrop | SeriesLocal | ParallelLocal | KindChange


def journal_to_json(journal: list[JournalEntry]) -> list[dict]:
    out = []
    for entry in journal:
        d = dataclasses.asdict(entry)
        d["op"] = type(entry).__name__
        out.append(d)
    return out


@dataclasses.dataclass
class ReducedTree:
    """Surviving node roots and the current marked-edge set."""

    nodes: set[int]
    y: set[int]


def _degree(forest: SpqrForest, node: int) -> int:
    return len(forest.virtual_edges(node))


def full_propagation_test(
    forest: SpqrForest, node: int, e: int, y_edges: Iterable[int] | None = None
) -> bool:
    """Whether the marked edges of a rigid leaf are exactly P^{-1} of tree edge e.

    Decided via splittability of e's endpoints; requires a nonempty marked set.
    """
    root = forest.nodes.find(node)
    skel = forest.skeletons[root]
    if skel.kind != "R":
        raise StructureError("full_propagation_test requires a rigid skeleton")
    rec = forest.edges[e]
    if not rec.in_tree:
        raise StructureError("full_propagation_test requires a tree edge")
    y = set(skel.marked) if y_edges is None else {x for x in y_edges if x in skel.edge_ids}
    if not y:
        return False
    view = forest.skeleton_view(root)
    u, w = forest.ends_of(e)
    return is_splittable(view, u, y) and is_splittable(view, w, y)


def _full_condition(forest: SpqrForest, node: int, e: int) -> bool:
    skel = forest.skeletons[node]
    if skel.kind == "S":
        non_tree = [x for x in skel.edge_ids if not forest.edges[x].in_tree]
        return len(non_tree) == 1 and set(skel.marked) == set(non_tree)
    if skel.kind == "P":
        non_tree = {x for x in skel.edge_ids if not forest.edges[x].in_tree}
        return bool(non_tree) and set(skel.marked) == non_tree
    if skel.kind == "R":
        return full_propagation_test(forest, node, e)
    raise StructureError(f"unexpected leaf kind {skel.kind}")


def _drop_leaf(
    forest: SpqrForest, state: ReducedTree, mu: int, kind: str, journal: list[JournalEntry]
) -> int:
    """Detach leaf mu; its partner edge becomes regular in the neighbor."""
    virts = forest.virtual_edges(mu)
    if len(virts) != 1:
        raise StructureError(f"node {mu} is not a leaf")
    e = virts[0]
    f = forest.edges[e].partner
    nu = forest.node_of_edge(f)
    forest.edges[f].partner = None  # e keeps its partner link for the undo
    state.nodes.discard(mu)
    skel_mu = forest.skeletons[mu]
    if kind == "full":
        state.y -= skel_mu.marked
        state.y.add(f)
        forest.skeletons[nu].marked.add(f)
    skel_mu.marked.clear()
    journal.append(LeafDrop(mu, e, f, kind))
    return nu


def _collapse(
    forest: SpqrForest,
    state: ReducedTree,
    node: int,
    replaced: set[int],
    in_tree: bool,
    y_flag: bool,
    entry_type,
    journal: list[JournalEntry],
) -> int:
    skel = forest.skeletons[node]
    for e in sorted(replaced):
        skel.edge_ids.discard(e)
        skel.marked.discard(e)
        state.y.discard(e)
        forest.counter.list_ops += 1
    z = forest.add_edge(node, None, in_tree)
    if y_flag:
        skel.marked.add(z)
        state.y.add(z)
    journal.append(entry_type(node, tuple(sorted(replaced)), z, y_flag, in_tree))
    return z


def reduce_parallel(
    forest: SpqrForest, node: int, state: ReducedTree, journal: list[JournalEntry]
) -> None:
    """Collapse the marked class and the unmarked regular class of a P node."""
    node = forest.nodes.find(node)
    skel = forest.skeletons[node]
    if skel.kind != "P":
        raise StructureError("reduce_parallel requires a parallel skeleton")
    y_mu = set(skel.marked)
    if len(y_mu) > 1:
        _collapse(forest, state, node, y_mu, False, True, ParallelLocal, journal)
    z_set = {
        e
        for e in skel.edge_ids
        if forest.edges[e].partner is None and e not in skel.marked
    }
    if len(z_set) > 1:
        tree_flag = any(forest.edges[e].in_tree for e in z_set)
        _collapse(forest, state, node, z_set, tree_flag, False, ParallelLocal, journal)
    if not forest.virtual_edges(node):
        journal.append(KindChange(node, "P", "Q"))
        skel.kind = "Q"


def reduce_series(
    forest: SpqrForest, node: int, state: ReducedTree, journal: list[JournalEntry]
) -> None:
    """Collapse the regular-edge run of an S node when virtual edges remain."""
    node = forest.nodes.find(node)
    skel = forest.skeletons[node]
    if skel.kind != "S":
        raise StructureError("reduce_series requires a series skeleton")
    z_set = {e for e in skel.edge_ids if forest.edges[e].partner is None}
    if len(z_set) == len(skel.edge_ids) or len(z_set) <= 1:
        return
    y_mu = z_set & skel.marked
    tree_flag = all(forest.edges[e].in_tree for e in z_set)
    _collapse(forest, state, node, z_set, tree_flag, bool(y_mu), SeriesLocal, journal)


def reduce_tree(
    forest: SpqrForest, tree_node: int, y_edges: Iterable[int]
) -> tuple[ReducedTree, list[JournalEntry]]:
    """Algorithm: strip unmarked leaves, strip fully-marked leaves, collapse locals."""
    y = set(y_edges)
    if not y:
        raise ValueError("reduce_tree requires a nonempty marked set")
    for e in y:
        rec = forest.edges[e]
        if rec.partner is not None or rec.in_tree:
            raise StructureError("marked edges must be regular non-tree edges")
        forest.skeleton(forest.node_of_edge(e)).marked.add(e)

    state = ReducedTree(set(forest.tree_nodes(tree_node)), y)
    journal: list[JournalEntry] = []

    # pass 1: keep exactly the Steiner subtree of the marked nodes
    queue = deque(sorted(n for n in state.nodes if _degree(forest, n) == 1))
    survivors: list[int] = []
    while queue and len(state.nodes) > 1:
        mu = queue.popleft()
        if mu not in state.nodes or _degree(forest, mu) != 1:
            continue
        if forest.skeletons[mu].marked:
            survivors.append(mu)
            continue
        nu = _drop_leaf(forest, state, mu, "empty", journal)
        if _degree(forest, nu) == 1:
            queue.append(nu)

    # pass 2: full propagation over leaves whose virtual edge is a tree edge
    queue = deque(s for s in survivors if s in state.nodes)
    while queue and len(state.nodes) > 1:
        mu = queue.popleft()
        if mu not in state.nodes or _degree(forest, mu) != 1:
            continue
        e = forest.virtual_edges(mu)[0]
        if forest.edges[e].in_tree and _full_condition(forest, mu, e):
            nu = _drop_leaf(forest, state, mu, "full", journal)
            if _degree(forest, nu) == 1:
                queue.append(nu)

    # pass 3: local 2-separations inside surviving S and P skeletons
    for node in sorted(state.nodes):
        kind = forest.skeletons[node].kind
        if kind == "S":
            reduce_series(forest, node, state, journal)
        elif kind == "P":
            reduce_parallel(forest, node, state, journal)
    return state, journal


def undo_journal(forest: SpqrForest, journal: list[JournalEntry]) -> None:
    """Replay the journal in reverse on the (possibly split) tree.

    Local collapses are undone in place when the collapsed edge still lives in
    a skeleton of the original kind, and otherwise expand into a fresh node
    attached by a new virtual pair.  A kind change is only undone when nothing
    re-changed the kind afterwards (splitting a trivial node makes it series).
    """
    for entry in reversed(journal):
        if isinstance(entry, KindChange):
            skel = forest.skeleton(entry.node)
            if skel.kind == entry.new_kind:
                skel.kind = entry.old_kind
        elif isinstance(entry, (SeriesLocal, ParallelLocal)):
            target = "S" if isinstance(entry, SeriesLocal) else "P"
            z = entry.new_edge
            cur = forest.node_of_edge(z)
            skel = forest.skeletons[cur]
            if skel.kind == target:
                forest.delete_edge(z)
                for e in entry.replaced:
                    skel.edge_ids.add(e)
                    forest.counter.list_ops += 1
            else:
                xi = forest.new_node(target)
                for e in entry.replaced:
                    forest.edges[e].home = xi
                    forest.skeletons[xi].edge_ids.add(e)
                    forest.counter.list_ops += 1
                zv = forest.add_edge(xi, None, not forest.edges[z].in_tree)
                forest.pair_virtual(z, zv)
                forest.trees.union(xi, cur)
        else:
            forest.edges[entry.exposed].partner = entry.leaf_edge
            cur = forest.node_of_edge(entry.exposed)
            forest.skeletons[cur].marked.discard(entry.exposed)
