"""Independent brute-force graphicness oracle and instance generators.

A connected block with m rows is graphic iff some labeled tree on m+1
vertices realizes it.  Rooting each tree at vertex 0 identifies row k with
the parent edge of vertex k+1, so enumerating the (m+1)^(m-1) Prufer
sequences covers every edge-labeled tree at least once.  A column is realized
iff its row edges leave exactly two vertices with odd degree, which for a
subforest of a tree forces a single path.
"""
from __future__ import annotations

import dataclasses
import itertools
import random
from collections import deque
from typing import Any, Sequence

from .binmatrix import Block, SparseBinaryMatrix, connected_blocks, zero_cols, zero_rows
from .spqr import GraphTreePair, representation_matrix

ORACLE_MAX_ROWS = 8


class OracleScaleError(ValueError):
    """A connected block exceeds the tree-enumeration budget."""


@dataclasses.dataclass
class OracleVerdict:
    graphic: bool
    witness: GraphTreePair | None = None


def prufer_edges(seq: Sequence[int], n: int) -> list[tuple[int, int]]:
    """Decode a Prufer sequence over {0..n-1} into the n-1 tree edges."""
    if n == 1:
        return []
    degree = [1] * n
    for x in seq:
        degree[x] += 1
    edges = []
    ptr = 0
    while degree[ptr] != 1:
        ptr += 1
    leaf = ptr
    for x in seq:
        edges.append((leaf, x))
        degree[x] -= 1
        if degree[x] == 1 and x < ptr:
            leaf = x
        else:
            ptr += 1
            while degree[ptr] != 1:
                ptr += 1
            leaf = ptr
    edges.append((leaf, n - 1))
    return edges


def _parents(edges: list[tuple[int, int]], n: int) -> list[int]:
    adj: list[list[int]] = [[] for _ in range(n)]
    for u, w in edges:
        adj[u].append(w)
        adj[w].append(u)
    par = [-1] * n
    seen = [False] * n
    seen[0] = True
    queue = deque([0])
    while queue:
        v = queue.popleft()
        for w in adj[v]:
            if not seen[w]:
                seen[w] = True
                par[w] = v
                queue.append(w)
    return par


def _search_block(col_supports: list[list[int]], m: int):
    """Find a tree on m+1 vertices making every column's row set a path.

    Returns (parent array, per-column endpoint pairs) or None.  Row k is the
    edge between vertex k+1 and its parent.
    """
    n = m + 1
    big = sorted((c for c in col_supports if len(c) > 1), key=len, reverse=True)
    parity = [0] * n
    for seq in itertools.product(range(n), repeat=max(0, n - 2)):
        par = _parents(prufer_edges(seq, n), n)
        ok = True
        for support in big:
            touched = []
            odd = 0
            for k in support:
                for v in (k + 1, par[k + 1]):
                    if not parity[v]:
                        touched.append(v)
                    parity[v] ^= 1
                    odd += 1 if parity[v] else -1
            for v in touched:
                parity[v] = 0
            if odd != 2:
                ok = False
                break
        if ok:
            endpoints = []
            for support in col_supports:
                deg: dict[int, int] = {}
                for k in support:
                    deg[k + 1] = deg.get(k + 1, 0) + 1
                    deg[par[k + 1]] = deg.get(par[k + 1], 0) + 1
                ends = sorted(v for v, d in deg.items() if d % 2)
                endpoints.append((ends[0], ends[1]))
            return par, endpoints
    return None


def oracle_is_graphic(m: SparseBinaryMatrix) -> OracleVerdict:
    """Brute-force verdict by labeled-tree enumeration per connected block."""
    blocks = connected_blocks(m)
    for blk in blocks:
        if len(blk.row_indices) > ORACLE_MAX_ROWS:
            raise OracleScaleError(
                f"oracle scale exceeded: block with {len(blk.row_indices)} rows > {ORACLE_MAX_ROWS}"
            )
    col_sup = m.col_supports()
    join: Any = ("join",)
    vertices: set = {join}
    edges: list[tuple[Any, Any, tuple[str, int]]] = []
    flags: list[bool] = []
    for bi, blk in enumerate(blocks):
        row_pos = {r: k for k, r in enumerate(blk.row_indices)}
        local_cols = [[row_pos[r] for r in col_sup[j]] for j in blk.col_indices]
        found = _search_block(local_cols, len(blk.row_indices))
        if found is None:
            return OracleVerdict(False)
        par, endpoints = found

        def local(v, bi=bi):
            return join if v == 0 else ("b", bi, v)

        for k, r in enumerate(blk.row_indices):
            edges.append((local(k + 1), local(par[k + 1]), ("r", r)))
            flags.append(True)
        for (u, w), j in zip(endpoints, blk.col_indices):
            edges.append((local(u), local(w), ("c", j)))
            flags.append(False)
        vertices.update(local(v) for v in range(len(blk.row_indices) + 1))
    for i in zero_rows(m):
        leaf = ("z", i)
        vertices.add(leaf)
        edges.append((join, leaf, ("r", i)))
        flags.append(True)
    for j in zero_cols(m):
        edges.append((join, join, ("c", j)))
        flags.append(False)
    order = sorted(range(len(edges)), key=lambda i: edges[i][2])
    witness = GraphTreePair(
        tuple(sorted(vertices, key=repr)),
        tuple(edges[i] for i in order),
        tuple(flags[i] for i in order),
    )
    return OracleVerdict(True, witness)


def verify_realization(m: SparseBinaryMatrix, cert: GraphTreePair) -> bool:
    """True iff the certificate's representation matrix equals m, index for index."""
    row_origins = sorted(o for (_, _, o), t in zip(cert.edges, cert.tree_flags) if t)
    col_origins = sorted(o for (_, _, o), t in zip(cert.edges, cert.tree_flags) if not t)
    if row_origins != [("r", i) for i in range(m.num_rows)]:
        return False
    if col_origins != [("c", j) for j in range(m.num_cols)]:
        return False
    rep = representation_matrix(cert)
    return rep.rows == m.rows


def random_graphic_instance(
    seed: int, num_vertices: int, num_edges: int, simple: bool = False
) -> tuple[GraphTreePair, SparseBinaryMatrix]:
    """Deterministic random (G, T): uniform labeled tree plus random extra edges."""
    if num_vertices < 1 or num_edges < num_vertices - 1:
        raise ValueError("need num_vertices >= 1 and num_edges >= num_vertices - 1")
    rng = random.Random(seed)
    n = num_vertices
    seq = [rng.randrange(n) for _ in range(max(0, n - 2))] if n >= 2 else []
    tree = sorted(tuple(sorted(e)) for e in prufer_edges(seq, n)) if n >= 2 else []
    extra_count = num_edges - (n - 1)
    extras: list[tuple[int, int]] = []
    if simple:
        candidates = [
            (u, w) for u in range(n) for w in range(u + 1, n) if (u, w) not in set(tree)
        ]
        if extra_count > len(candidates):
            raise ValueError("not enough simple edges available")
        extras = sorted(rng.sample(candidates, extra_count))
    else:
        if n < 2 and extra_count:
            raise ValueError("extra edges need at least two vertices")
        for _ in range(extra_count):
            u = rng.randrange(n)
            w = rng.randrange(n - 1)
            if w >= u:
                w += 1
            extras.append((min(u, w), max(u, w)))
        extras.sort()
    edges = [(u, w, ("r", i)) for i, (u, w) in enumerate(tree)]
    edges += [(u, w, ("c", j)) for j, (u, w) in enumerate(extras)]
    flags = [True] * len(tree) + [False] * len(extras)
    pair = GraphTreePair(tuple(range(n)), tuple(edges), tuple(flags))
    return pair, representation_matrix(pair)


def _dual_from_pair(
    vertices: Sequence[Any],
    tree: Sequence[tuple[Any, Any, str]],
    cotree: Sequence[tuple[Any, Any, str]],
) -> SparseBinaryMatrix:
    edges = [(u, w, ("r", i)) for i, (u, w, _) in enumerate(tree)]
    edges += [(u, w, ("c", j)) for j, (u, w, _) in enumerate(cotree)]
    flags = [True] * len(tree) + [False] * len(cotree)
    pair = GraphTreePair(tuple(vertices), tuple(edges), tuple(flags))
    m = representation_matrix(
        pair, [name for _, _, name in tree], [name for _, _, name in cotree]
    )
    return m.transpose()


def derive_k33_dual() -> SparseBinaryMatrix:
    """Transpose of M(K3,3, T) for T = {ax, bx, cx, ay, az}: 4x5, non-graphic."""
    tree = [("a", "x", "ax"), ("b", "x", "bx"), ("c", "x", "cx"),
            ("a", "y", "ay"), ("a", "z", "az")]
    cotree = [("b", "y", "by"), ("b", "z", "bz"), ("c", "y", "cy"), ("c", "z", "cz")]
    return _dual_from_pair(["a", "b", "c", "x", "y", "z"], tree, cotree)


def derive_k5_dual() -> SparseBinaryMatrix:
    """Transpose of M(K5, star tree at vertex 0): 6x4, non-graphic."""
    tree = [(0, i, f"t{i}") for i in range(1, 5)]
    cotree = [(i, j, f"c{i}{j}") for i in range(1, 5) for j in range(i + 1, 5)]
    return _dual_from_pair(range(5), tree, cotree)
